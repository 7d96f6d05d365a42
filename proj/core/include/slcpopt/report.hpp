#pragma once

#include <string>

#include "slcpopt/bnb.hpp"

namespace slcpopt {

// Machine-readable run report with a fixed key order. When `stable` is set,
// wall-clock fields are zeroed so output is byte-reproducible.
std::string report_json(const GlobalResult& res, const std::string& command,
                        bool stable);

// Short human-readable summary of the same result.
std::string report_table(const GlobalResult& res, bool stable);

std::string bench_csv_header();
std::string bench_csv_row(unsigned seed, int n, int degree, double best_lb,
                          double construction_lb, double random_lb, double ub,
                          double seconds, bool stable);

}  // namespace slcpopt
