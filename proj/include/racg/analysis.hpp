#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "racg/explorer.hpp"

namespace racg {

// Least-squares line through (ln r, ln value) over stabilized Found samples.
struct FitReport {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  int r_min = 0, r_max = 0;
  std::size_t sample_count = 0;
  std::size_t excluded = 0;  // samples in range dropped as unusable
  std::vector<std::string> warnings;
};

FitReport loglog_fit(const std::vector<DivergenceSample>& samples, int r_min, int r_max);

// Empirical check of f(x) <= g(A x) + B x over sampled x > C, with g
// evaluated at the nearest sampled radius >= A x.
struct DominationVerdict {
  bool holds = false;
  double a = 1, b = 0, c = 0;
  std::optional<double> counterexample_x;
};

using Series = std::vector<std::pair<double, double>>;  // (x, value)

DominationVerdict dominates_check(const Series& f, const Series& g,
                                  double A, double B, double C);

struct ExponentVerdict {
  bool pass = false;
  double slope = 0;
  double expected = 0;
  double tol = 0;
};

ExponentVerdict compare_exponent(const FitReport& report, double expected, double tol);

// CSV columns, in order:
//   graph,geodesic,m,t,r,status,value,cap_radius,cap_nodes,nodes_explored,stabilized,min_t
// Header row, LF line endings, empty fields for values that do not apply.
std::string samples_to_csv(const std::vector<DivergenceSample>& samples);
void write_csv(const std::vector<DivergenceSample>& samples, const std::string& path);
std::vector<DivergenceSample> parse_csv(std::istream& in);
std::vector<DivergenceSample> read_csv(const std::string& path);

}  // namespace racg
