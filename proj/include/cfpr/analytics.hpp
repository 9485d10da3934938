#pragma once

#include <cstdint>

#include "cfpr/process.hpp"

namespace cfpr {

/// Dissolution-to-formation ratio r_l / r_f, the one dimensionless rate that
/// the equilibrium dyad census depends on.
struct RateRatio {
  double rho;

  /// Throws unless both rates are positive and finite.
  static RateRatio of(double r_f, double r_l);
};

struct ExpectedDyadCensus {
  double mutual = 0.0;
  double asym = 0.0;
  double null = 0.0;
  double total() const noexcept { return mutual + asym + null; }
};

/// Natural logs of the three expected counts; finite for extreme ratios where
/// the plain values under- or overflow.
struct LogDyadCensus {
  double mutual;
  double asym;
  double null;
};

/// Per-dyad state probabilities; `asym` aggregates both orientations.
struct DyadStateProbabilities {
  double null = 0.0;
  double asym = 0.0;
  double mutual = 0.0;
};

/// Fast-mixing equilibrium dyad census of the CFPR:
/// D_m = D / (1 + 2 rho + M rho^2), D_a = 2 rho D_m, D_n = M rho^2 D_m.
ExpectedDyadCensus expected_dyad_census(const ProcessParams& params);
LogDyadCensus log_expected_dyad_census(const ProcessParams& params);

/// Stationary law of the four-state dyad chain with fast-mixing effective
/// rates, solved numerically (GTH state reduction) rather than from the
/// closed form. CFPR: null -> each asym at r_f / M, asym -> mutual at r_f;
/// directed CFP: asym -> mutual at r_f / M. Every edge is lost at r_l.
DyadStateProbabilities dyad_chain_stationary(const ProcessParams& params, Variant variant);

/// Stationary distribution of a finite CTMC from its off-diagonal rates
/// (row = from, column = to), by GTH state reduction. All rates >= 0 and the
/// chain irreducible; throws std::domain_error on a zero pivot.
std::vector<double> ctmc_stationary(std::vector<std::vector<double>> rates);

/// Large-N mean degree P (r_f / r_l)(r_f / r_l + 1).
double limiting_mean_degree(double persons_per_focus, double r_f, double r_l);

/// Large-N edgewise reciprocity 1 / (1 + r_l / r_f).
double limiting_reciprocity(double r_f, double r_l);

/// Expected density at fast-mixing equilibrium for the params' variant.
/// CFPR: (2 D_m + D_a) / (N (N - 1)); directed CFP: 1 / (1 + M rho).
/// r_f = 0 gives 0 and r_l = 0 (with r_f > 0) gives 1.
double limiting_density(const ProcessParams& params);

/// Finite-N fast-mixing mean degree, (2 D_m + D_a) / N for CFPR.
double fast_mixing_mean_degree(const ProcessParams& params);

/// Frozen-foci (slow-mixing) reference: pairs share a focus with probability
/// 1 / M under uniform assignment, and co-located pairs follow the M = 1
/// chain whose per-pair edge probability is 1 / (1 + rho). Identical for both
/// variants.
double slow_mixing_density(const ProcessParams& params);
double slow_mixing_mean_degree(const ProcessParams& params);

/// Edgewise reciprocity of the stationary dyad chain for the variant,
/// p_m / (p_m + p_a / 2). CFPR gives 1 / (1 + rho); directed CFP 1 / (1 + M rho).
double stationary_reciprocity(const ProcessParams& params);

/// M = round_half_up(N^(1 - gamma)), at least 1. gamma must lie in [0, 1]
/// unless `allow_super_sparse` admits gamma < 0.
std::uint64_t foci_from_gamma(std::uint64_t n, double gamma, bool allow_super_sparse = false);

/// M = floor(V / v), at least 1.
std::uint64_t foci_spatial(double volume, double element);
/// M = floor((L / l)^d), at least 1.
std::uint64_t foci_hypercube(double length, double element_length, int dimension);

/// log h(y) = d (t_m - t_e) log(L / l) for the hypercube reference measure.
double log_hypercube_measure(std::uint64_t t_e, std::uint64_t t_m, double length,
                             double element_length, int dimension);

}  // namespace cfpr
