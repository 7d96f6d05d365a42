#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "slcpopt/formats.hpp"

namespace slcpopt {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

namespace {

const char* scalar_cone_keyword(ConeType t) {
  switch (t) {
    case ConeType::Zero:
      return "L=";
    case ConeType::NonNeg:
      return "L+";
    case ConeType::Exp:
      return "EXP";
    case ConeType::Psd:
      break;
  }
  throw std::logic_error("PSD blocks have no scalar cone keyword");
}

// coefficient of one PSD-variable entry inside a scalar row
struct HEntry {
  int psdvar;
  int row;
  int col;
  double val;
};

int triangle_size(int k) { return k * (k + 1) / 2; }

}  // namespace

// PSD blocks are emitted as matrix variables coupled entry-wise to the
// affine expressions through L= rows; everything else maps directly.
std::string export_cbf(const ConicProgram& prog) {
  const auto& rows = prog.rows();

  std::vector<int> psd_dims;
  struct Group {
    const char* cone;
    int count;
  };
  std::vector<Group> groups;
  std::vector<LinExpr> out_rows;
  std::vector<std::vector<HEntry>> out_h;

  for (const auto& blk : prog.blocks()) {
    if (blk.type == ConeType::Psd) {
      const int pv = static_cast<int>(psd_dims.size());
      psd_dims.push_back(blk.dim);
      int idx = 0;
      for (int i = 0; i < blk.dim; ++i) {
        for (int j = i; j < blk.dim; ++j, ++idx) {
          // X_ij - entry(z) = 0; lower-triangular coordinate with symmetric
          // completion, so an off-diagonal value of 1/2 contributes X_ij.
          const LinExpr& e = rows[blk.row_start + idx];
          LinExpr neg;
          neg.c0 = -e.c0;
          for (const auto& [var, coef] : e.terms) neg.add(var, -coef);
          out_rows.push_back(std::move(neg));
          out_h.push_back({HEntry{pv, j, i, i == j ? 1.0 : 0.5}});
        }
      }
      groups.push_back({"L=", triangle_size(blk.dim)});
    } else if (blk.type == ConeType::Exp) {
      for (int t = 0; t < blk.dim; ++t) {
        for (int k = 0; k < 3; ++k) {
          out_rows.push_back(rows[blk.row_start + 3 * t + k]);
          out_h.emplace_back();
        }
        groups.push_back({"EXP", 3});
      }
    } else {
      for (int r = 0; r < blk.row_count; ++r) {
        out_rows.push_back(rows[blk.row_start + r]);
        out_h.emplace_back();
      }
      groups.push_back({scalar_cone_keyword(blk.type), blk.row_count});
    }
  }

  int n_a = 0, n_b = 0, n_h = 0;
  for (const auto& r : out_rows) {
    if (r.c0 != 0.0) ++n_b;
    for (const auto& [var, coef] : r.terms) {
      (void)var;
      if (coef != 0.0) ++n_a;
    }
  }
  for (const auto& h : out_h) n_h += static_cast<int>(h.size());

  int n_obj = 0;
  for (double c : prog.objective())
    if (c != 0.0) ++n_obj;

  std::ostringstream os;
  os << "VER\n3\n\n";
  os << "OBJSENSE\nMIN\n\n";

  if (!psd_dims.empty()) {
    os << "PSDVAR\n" << psd_dims.size() << "\n";
    for (int d : psd_dims) os << d << "\n";
    os << "\n";
  }

  os << "VAR\n" << prog.num_vars() << " 1\nF " << prog.num_vars() << "\n\n";

  int total_rows = static_cast<int>(out_rows.size());
  os << "CON\n" << total_rows << " " << groups.size() << "\n";
  for (const auto& g : groups) os << g.cone << " " << g.count << "\n";
  os << "\n";

  if (n_obj > 0) {
    os << "OBJACOORD\n" << n_obj << "\n";
    const auto& c = prog.objective();
    for (int v = 0; v < prog.num_vars(); ++v)
      if (c[v] != 0.0) os << v << " " << format_double(c[v]) << "\n";
    os << "\n";
  }
  if (prog.objective_offset() != 0.0) {
    os << "OBJBCOORD\n" << format_double(prog.objective_offset()) << "\n\n";
  }

  if (n_a > 0) {
    os << "ACOORD\n" << n_a << "\n";
    for (int r = 0; r < total_rows; ++r)
      for (const auto& [var, coef] : out_rows[r].terms)
        if (coef != 0.0) os << r << " " << var << " " << format_double(coef) << "\n";
    os << "\n";
  }
  if (n_b > 0) {
    os << "BCOORD\n" << n_b << "\n";
    for (int r = 0; r < total_rows; ++r)
      if (out_rows[r].c0 != 0.0) os << r << " " << format_double(out_rows[r].c0) << "\n";
    os << "\n";
  }
  if (n_h > 0) {
    os << "HCOORD\n" << n_h << "\n";
    for (int r = 0; r < total_rows; ++r)
      for (const auto& h : out_h[r])
        os << r << " " << h.psdvar << " " << h.row << " " << h.col << " "
           << format_double(h.val) << "\n";
    os << "\n";
  }

  return os.str();
}

namespace {

struct RawCoord {
  int a = 0, b = 0, c = 0, d = 0;
  double val = 0.0;
};

class LineReader {
 public:
  explicit LineReader(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      size_t last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      if (line[0] == '#') continue;
      lines_.push_back(line);
    }
  }

  bool done() const { return pos_ >= lines_.size(); }
  const std::string& peek() const { return lines_[pos_]; }
  std::string next() {
    if (done()) throw std::runtime_error("cbf: unexpected end of file");
    return lines_[pos_++];
  }

 private:
  std::vector<std::string> lines_;
  size_t pos_ = 0;
};

int parse_int(const std::string& tok) {
  size_t used = 0;
  int v = std::stoi(tok, &used);
  if (used != tok.size()) throw std::runtime_error("cbf: bad integer '" + tok + "'");
  return v;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

}  // namespace

ConicProgram parse_cbf(const std::string& text) {
  LineReader rd(text);

  int version = 0;
  bool saw_ver = false;
  bool minimize = true;
  std::vector<int> psdvar_dims;
  std::vector<int> psdcon_dims;
  int n_scalar = 0;
  std::vector<std::pair<std::string, int>> con_groups;
  std::vector<RawCoord> obja, acoord, bcoord, hcoord, fcoord, dcoord;
  double obj_offset = 0.0;

  auto read_coords = [&](int fields, std::vector<RawCoord>& dst) {
    int count = parse_int(rd.next());
    for (int i = 0; i < count; ++i) {
      auto toks = split_tokens(rd.next());
      if (static_cast<int>(toks.size()) != fields)
        throw std::runtime_error("cbf: expected " + std::to_string(fields) +
                                 " fields, got '" + toks.front() + "...'");
      RawCoord rc;
      int* slots[4] = {&rc.a, &rc.b, &rc.c, &rc.d};
      for (int f = 0; f < fields - 1; ++f) *slots[f] = parse_int(toks[f]);
      rc.val = std::stod(toks[fields - 1]);
      dst.push_back(rc);
    }
  };

  while (!rd.done()) {
    std::string section = rd.next();
    if (section == "VER") {
      version = parse_int(rd.next());
      saw_ver = true;
      if (version < 1 || version > 4)
        throw std::runtime_error("cbf: unsupported version " + std::to_string(version));
    } else if (section == "OBJSENSE") {
      std::string sense = rd.next();
      if (sense == "MIN")
        minimize = true;
      else if (sense == "MAX")
        throw std::runtime_error("cbf: OBJSENSE MAX is not supported");
      else
        throw std::runtime_error("cbf: bad OBJSENSE '" + sense + "'");
    } else if (section == "PSDVAR") {
      int k = parse_int(rd.next());
      for (int i = 0; i < k; ++i) psdvar_dims.push_back(parse_int(rd.next()));
    } else if (section == "PSDCON") {
      int k = parse_int(rd.next());
      for (int i = 0; i < k; ++i) psdcon_dims.push_back(parse_int(rd.next()));
    } else if (section == "VAR") {
      auto head = split_tokens(rd.next());
      if (head.size() != 2) throw std::runtime_error("cbf: bad VAR header");
      n_scalar = parse_int(head[0]);
      int groups = parse_int(head[1]);
      int seen = 0;
      for (int g = 0; g < groups; ++g) {
        auto toks = split_tokens(rd.next());
        if (toks.size() != 2) throw std::runtime_error("cbf: bad VAR group");
        if (toks[0] != "F")
          throw std::runtime_error("cbf: only free variables supported, got " + toks[0]);
        seen += parse_int(toks[1]);
      }
      if (seen != n_scalar) throw std::runtime_error("cbf: VAR group sizes disagree");
    } else if (section == "CON") {
      auto head = split_tokens(rd.next());
      if (head.size() != 2) throw std::runtime_error("cbf: bad CON header");
      int total = parse_int(head[0]);
      int groups = parse_int(head[1]);
      int seen = 0;
      for (int g = 0; g < groups; ++g) {
        auto toks = split_tokens(rd.next());
        if (toks.size() != 2) throw std::runtime_error("cbf: bad CON group");
        int cnt = parse_int(toks[1]);
        con_groups.emplace_back(toks[0], cnt);
        seen += cnt;
      }
      if (seen != total) throw std::runtime_error("cbf: CON group sizes disagree");
    } else if (section == "OBJACOORD") {
      read_coords(2, obja);
    } else if (section == "OBJBCOORD") {
      obj_offset = std::stod(rd.next());
    } else if (section == "ACOORD") {
      read_coords(3, acoord);
    } else if (section == "BCOORD") {
      read_coords(2, bcoord);
    } else if (section == "HCOORD") {
      read_coords(5, hcoord);
    } else if (section == "FCOORD") {
      read_coords(5, fcoord);
    } else if (section == "DCOORD") {
      read_coords(4, dcoord);
    } else {
      throw std::runtime_error("cbf: unsupported section '" + section + "'");
    }
  }
  if (!saw_ver) throw std::runtime_error("cbf: missing VER section");
  (void)minimize;

  // PSD matrix variables become explicit upper-triangle scalar variables
  // constrained PSD; HCOORD references resolve onto those entries.
  std::vector<int> psdvar_base(psdvar_dims.size(), 0);
  int total_vars = n_scalar;
  for (size_t j = 0; j < psdvar_dims.size(); ++j) {
    psdvar_base[j] = total_vars;
    total_vars += triangle_size(psdvar_dims[j]);
  }

  ConicProgram prog;
  prog.add_vars(total_vars);
  for (const auto& rc : obja) {
    if (rc.a < 0 || rc.a >= total_vars) throw std::runtime_error("cbf: OBJACOORD var out of range");
    prog.set_objective_term(rc.a, rc.val);
  }
  prog.set_objective_offset(obj_offset);

  auto entry_var = [&](int j, int r, int c) {
    if (j < 0 || j >= static_cast<int>(psdvar_dims.size()))
      throw std::runtime_error("cbf: HCOORD matrix variable out of range");
    int k = psdvar_dims[j];
    int i0 = std::min(r, c), i1 = std::max(r, c);
    if (i0 < 0 || i1 >= k) throw std::runtime_error("cbf: HCOORD entry out of range");
    // upper triangle, row-major
    return psdvar_base[j] + i0 * k - i0 * (i0 - 1) / 2 + (i1 - i0);
  };

  for (size_t j = 0; j < psdvar_dims.size(); ++j) {
    int k = psdvar_dims[j];
    std::vector<LinExpr> entries(triangle_size(k));
    int idx = 0;
    for (int r = 0; r < k; ++r)
      for (int c = r; c < k; ++c, ++idx) entries[idx].add(psdvar_base[j] + idx, 1.0);
    prog.add_psd(k, entries);
  }

  int n_rows = 0;
  for (const auto& g : con_groups) n_rows += g.second;
  std::vector<LinExpr> row_exprs(n_rows);
  for (const auto& rc : acoord) {
    if (rc.a < 0 || rc.a >= n_rows || rc.b < 0 || rc.b >= total_vars)
      throw std::runtime_error("cbf: ACOORD out of range");
    row_exprs[rc.a].add(rc.b, rc.val);
  }
  for (const auto& rc : bcoord) {
    if (rc.a < 0 || rc.a >= n_rows) throw std::runtime_error("cbf: BCOORD out of range");
    row_exprs[rc.a].c0 += rc.val;
  }
  for (const auto& rc : hcoord) {
    if (rc.a < 0 || rc.a >= n_rows) throw std::runtime_error("cbf: HCOORD row out of range");
    // symmetric completion: off-diagonal coordinates count twice
    double w = (rc.c == rc.d) ? rc.val : 2.0 * rc.val;
    row_exprs[rc.a].add(entry_var(rc.b, rc.c, rc.d), w);
  }

  int at = 0;
  for (const auto& [cone, count] : con_groups) {
    if (cone == "L=") {
      for (int i = 0; i < count; ++i) prog.add_zero(row_exprs[at + i]);
    } else if (cone == "L+") {
      for (int i = 0; i < count; ++i) prog.add_nonneg(row_exprs[at + i]);
    } else if (cone == "L-") {
      for (int i = 0; i < count; ++i) {
        LinExpr neg;
        neg.c0 = -row_exprs[at + i].c0;
        for (const auto& [var, coef] : row_exprs[at + i].terms) neg.add(var, -coef);
        prog.add_nonneg(neg);
      }
    } else if (cone == "EXP") {
      if (count != 3) throw std::runtime_error("cbf: EXP group must have 3 rows");
      prog.add_exp(row_exprs[at], row_exprs[at + 1], row_exprs[at + 2]);
    } else {
      throw std::runtime_error("cbf: unsupported constraint cone '" + cone + "'");
    }
    at += count;
  }

  if (!psdcon_dims.empty()) {
    std::vector<std::vector<LinExpr>> mats;
    mats.reserve(psdcon_dims.size());
    for (int k : psdcon_dims) mats.emplace_back(triangle_size(k));
    auto tri = [&](int pc, int r, int c) {
      int k = psdcon_dims[pc];
      int i0 = std::min(r, c), i1 = std::max(r, c);
      if (i0 < 0 || i1 >= k) throw std::runtime_error("cbf: PSDCON entry out of range");
      return i0 * k - i0 * (i0 - 1) / 2 + (i1 - i0);
    };
    for (const auto& rc : fcoord) {
      if (rc.a < 0 || rc.a >= static_cast<int>(mats.size()))
        throw std::runtime_error("cbf: FCOORD block out of range");
      if (rc.b < 0 || rc.b >= total_vars) throw std::runtime_error("cbf: FCOORD var out of range");
      mats[rc.a][tri(rc.a, rc.c, rc.d)].add(rc.b, rc.val);
    }
    for (const auto& rc : dcoord) {
      if (rc.a < 0 || rc.a >= static_cast<int>(mats.size()))
        throw std::runtime_error("cbf: DCOORD block out of range");
      mats[rc.a][tri(rc.a, rc.b, rc.c)].c0 += rc.val;
    }
    for (size_t pc = 0; pc < mats.size(); ++pc) prog.add_psd(psdcon_dims[pc], mats[pc]);
  }

  return prog;
}

}  // namespace slcpopt
