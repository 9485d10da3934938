#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfpr/graph.hpp"

namespace cfpr {

/// Rows of equal-length observation vectors (census vectors, (t_e, t_m), ...).
struct CensusSample {
  std::string label;
  std::vector<std::vector<double>> rows;

  void add(const TriadCensus& c);
  void add(const DyadCensus& c);
  void add(std::vector<double> row);
  std::size_t dim() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
};

struct HotellingResult {
  double t2 = 0.0;
  double p = 1.0;
  std::size_t dim = 0;  // components surviving the degeneracy filters
  double f = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
};

/// Relative eigenvalue cut for the pseudo-inverse of the pooled correlation matrix.
inline constexpr double kPinvTolerance = 1e-10;

/// Two-sample Hotelling T^2 with pooled covariance.
///
/// Components whose pooled variance is zero are dropped; if any of them has
/// unequal means the samples are perfectly separated and T^2 = inf, p = 0.
/// The remaining components are standardized and the pooled correlation
/// matrix is inverted by eigen-decomposition, discarding eigenvalues below
/// kPinvTolerance times the largest; its rank is the dimension of the
/// F reference. Throws std::invalid_argument if either sample has fewer than
/// two rows, rows differ in length, or every component is degenerate.
HotellingResult hotelling_t2(const CensusSample& a, const CensusSample& b);

/// T^2 value at which a test of dimension p with sizes n1, n2 rejects at level alpha.
double hotelling_critical_value(double alpha, std::size_t p, std::size_t n1, std::size_t n2);

struct MeanCI {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

/// Normal-approximation interval mean +- z s / sqrt(n). Needs n >= 2 finite values.
MeanCI mean_ci(std::span<const double> samples, double level = 0.95);

/// Type-7 (linear interpolation) sample quantile, q in [0, 1].
double quantile(std::vector<double> samples, double q);

struct PowerLawFit {
  double exponent = 0.0;
  double intercept = 0.0;  // natural-log scale
  double ci_low = 0.0;
  double ci_high = 0.0;
  double std_error = 0.0;
};

/// OLS of log y on log x; 95% interval from the slope's t(n - 2) distribution.
/// Needs at least 3 points, all coordinates positive, and two distinct x.
PowerLawFit powerlaw_fit(std::span<const std::pair<double, double>> points, double level = 0.95);

}  // namespace cfpr
