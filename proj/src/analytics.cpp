#include "cfpr/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace cfpr {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(fmt::format("{} must be positive and finite, got {}", what, x));
  }
}

double log_sum_exp(std::initializer_list<double> xs) {
  const double hi = std::max(xs);
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

double total_dyads(const ProcessParams& p) {
  const double n = p.n_vertices;
  return n * (n - 1.0) / 2.0;
}

}  // namespace

RateRatio RateRatio::of(double r_f, double r_l) {
  require_positive(r_f, "r_f");
  require_positive(r_l, "r_l");
  return RateRatio{r_l / r_f};
}

ExpectedDyadCensus expected_dyad_census(const ProcessParams& params) {
  params.validate();
  const double rho = RateRatio::of(params.r_f, params.r_l).rho;
  const double m = params.n_foci;
  const double mutual = total_dyads(params) / (1.0 + 2.0 * rho + m * rho * rho);
  return {mutual, 2.0 * rho * mutual, m * rho * rho * mutual};
}

LogDyadCensus log_expected_dyad_census(const ProcessParams& params) {
  params.validate();
  const double log_rho = std::log(RateRatio::of(params.r_f, params.r_l).rho);
  const double log_m = std::log(static_cast<double>(params.n_foci));
  const double log_denominator = log_sum_exp({0.0, std::log(2.0) + log_rho, log_m + 2.0 * log_rho});
  const double log_mutual = std::log(total_dyads(params)) - log_denominator;
  return {log_mutual, log_mutual + std::log(2.0) + log_rho, log_mutual + log_m + 2.0 * log_rho};
}

std::vector<double> ctmc_stationary(std::vector<std::vector<double>> p) {
  const std::size_t n = p.size();
  if (n == 0) throw std::invalid_argument("empty rate matrix");
  for (const auto& row : p) {
    if (row.size() != n) throw std::invalid_argument("rate matrix must be square");
  }
  // GTH: censor states from the last one down; only sums of non-negative
  // terms appear, so each component keeps full relative accuracy.
  for (std::size_t k = n - 1; k > 0; --k) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += p[k][j];
    if (!(s > 0.0)) throw std::domain_error("singular dyad chain: state cannot be left");
    for (std::size_t i = 0; i < k; ++i) p[i][k] /= s;
    for (std::size_t i = 0; i < k; ++i) {
      if (p[i][k] == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j) p[i][j] += p[i][k] * p[k][j];
      }
    }
  }
  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) pi[j] += pi[i] * p[i][j];
  }
  double total = 0.0;
  for (double x : pi) total += x;
  for (double& x : pi) x /= total;
  return pi;
}

DyadStateProbabilities dyad_chain_stationary(const ProcessParams& params, Variant variant) {
  params.validate();
  require_positive(params.r_f, "r_f");
  require_positive(params.r_l, "r_l");
  const double m = params.n_foci;
  const double open = params.r_f / m;
  const double reciprocate = variant == Variant::cfpr ? params.r_f : params.r_f / m;
  const double loss = params.r_l;
  // states: 0 null, 1 (i->j), 2 (j->i), 3 mutual
  std::vector<std::vector<double>> q(4, std::vector<double>(4, 0.0));
  q[0][1] = open;
  q[0][2] = open;
  q[1][3] = reciprocate;
  q[2][3] = reciprocate;
  q[1][0] = loss;
  q[2][0] = loss;
  q[3][1] = loss;
  q[3][2] = loss;
  const auto pi = ctmc_stationary(std::move(q));
  return {pi[0], pi[1] + pi[2], pi[3]};
}

double limiting_mean_degree(double persons_per_focus, double r_f, double r_l) {
  require_positive(persons_per_focus, "P");
  const double ratio = 1.0 / RateRatio::of(r_f, r_l).rho;
  return persons_per_focus * ratio * (ratio + 1.0);
}

double limiting_reciprocity(double r_f, double r_l) {
  return 1.0 / (1.0 + RateRatio::of(r_f, r_l).rho);
}

double limiting_density(const ProcessParams& params) {
  params.validate();
  if (params.r_f == 0.0) return 0.0;
  if (params.r_l == 0.0) return 1.0;
  const double rho = params.r_l / params.r_f;
  const double m = params.n_foci;
  if (params.variant == Variant::cfp_directed) return 1.0 / (1.0 + m * rho);
  // (2 D_m + D_a) / (2 D) with D_a = 2 rho D_m
  return (1.0 + rho) / (1.0 + 2.0 * rho + m * rho * rho);
}

double fast_mixing_mean_degree(const ProcessParams& params) {
  return limiting_density(params) * (params.n_vertices - 1.0);
}

double slow_mixing_density(const ProcessParams& params) {
  params.validate();
  if (params.r_f == 0.0) return 0.0;
  const double pair_edge = params.r_l == 0.0 ? 1.0 : 1.0 / (1.0 + params.r_l / params.r_f);
  return pair_edge / static_cast<double>(params.n_foci);
}

double slow_mixing_mean_degree(const ProcessParams& params) {
  return slow_mixing_density(params) * (params.n_vertices - 1.0);
}

double stationary_reciprocity(const ProcessParams& params) {
  const auto p = dyad_chain_stationary(params, params.variant);
  return p.mutual / (p.mutual + p.asym / 2.0);
}

std::uint64_t foci_from_gamma(std::uint64_t n, double gamma, bool allow_super_sparse) {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (!std::isfinite(gamma) || gamma > 1.0 || (gamma < 0.0 && !allow_super_sparse)) {
    throw std::invalid_argument(fmt::format("gamma must lie in [0, 1], got {}", gamma));
  }
  const double m = std::floor(std::pow(static_cast<double>(n), 1.0 - gamma) + 0.5);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

namespace {
std::uint64_t floor_count(double x) {
  // guard against (L/l)^d landing a hair under an integer
  const double f = std::floor(x * (1.0 + 1e-12));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(f));
}
}  // namespace

std::uint64_t foci_spatial(double volume, double element) {
  require_positive(volume, "V");
  require_positive(element, "v");
  if (volume < element) throw std::invalid_argument("V must be at least v");
  return floor_count(volume / element);
}

std::uint64_t foci_hypercube(double length, double element_length, int dimension) {
  require_positive(length, "L");
  require_positive(element_length, "l");
  if (dimension < 1) throw std::invalid_argument("dimension must be at least 1");
  if (length < element_length) throw std::invalid_argument("L must be at least l");
  return floor_count(std::pow(length / element_length, dimension));
}

double log_hypercube_measure(std::uint64_t t_e, std::uint64_t t_m, double length,
                             double element_length, int dimension) {
  require_positive(length, "L");
  require_positive(element_length, "l");
  if (t_e < 2 * t_m) throw std::invalid_argument("t_e < 2 t_m is impossible");
  const double exponent = static_cast<double>(t_m) - static_cast<double>(t_e);
  return dimension * exponent * std::log(length / element_length);
}

}  // namespace cfpr
