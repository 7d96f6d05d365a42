#include "slcpopt/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "slcpopt/formats.hpp"

namespace slcpopt {

namespace {

// Round to a fixed number of significant digits so reports do not depend on
// last-bit solver noise when regenerated.
double rounded(double v, int digits = 9) {
  if (!std::isfinite(v) || v == 0.0) return v;
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return std::stod(os.str());
}

nlohmann::ordered_json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return rounded(v);
}

}  // namespace

std::string report_json(const GlobalResult& res, const std::string& command,
                        bool stable) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["status"] = to_string(res.status);
  j["value"] = json_number(res.value);
  j["lower_bound"] = json_number(res.lower_bound);
  j["gap"] = json_number(res.gap);
  j["nodes"] = res.nodes;
  j["hyperplanes"] = res.hyperplanes;
  j["seconds"] = stable ? 0.0 : rounded(res.seconds, 3);
  nlohmann::ordered_json pt = nlohmann::ordered_json::array();
  for (int i = 0; i < res.point.size(); ++i) pt.push_back(json_number(res.point(i)));
  j["point"] = pt;
  return j.dump(2) + "\n";
}

std::string report_table(const GlobalResult& res, bool stable) {
  char buf[256];
  std::ostringstream os;
  os << "status       " << to_string(res.status) << "\n";
  std::snprintf(buf, sizeof(buf), "value        %.9g\n", rounded(res.value));
  os << buf;
  std::snprintf(buf, sizeof(buf), "lower bound  %.9g\n", rounded(res.lower_bound));
  os << buf;
  std::snprintf(buf, sizeof(buf), "gap          %.3g\n", rounded(res.gap, 3));
  os << buf;
  os << "nodes        " << res.nodes << "\n";
  os << "hyperplanes  " << res.hyperplanes << "\n";
  std::snprintf(buf, sizeof(buf), "seconds      %.3f\n",
                stable ? 0.0 : res.seconds);
  os << buf;
  os << "point       ";
  for (int i = 0; i < res.point.size(); ++i) {
    std::snprintf(buf, sizeof(buf), " %.9g", rounded(res.point(i)));
    os << buf;
  }
  os << "\n";
  return os.str();
}

std::string bench_csv_header() {
  return "seed,n,degree,best_lb,construction_lb,random_lb,ub,seconds\n";
}

std::string bench_csv_row(unsigned seed, int n, int degree, double best_lb,
                          double construction_lb, double random_lb, double ub,
                          double seconds, bool stable) {
  std::ostringstream os;
  os << seed << ',' << n << ',' << degree << ',' << format_double(rounded(best_lb))
     << ',' << format_double(rounded(construction_lb)) << ','
     << format_double(rounded(random_lb)) << ',' << format_double(rounded(ub))
     << ',' << format_double(stable ? 0.0 : rounded(seconds, 3)) << '\n';
  return os.str();
}

}  // namespace slcpopt
