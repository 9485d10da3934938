#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "cfpr/graph.hpp"
#include "cfpr/rng.hpp"

namespace cfpr {

/// Large-N free parameters of the ERGM form of the CFPR equilibrium.
struct ThetaParams {
  double theta_e;  // log(P r_f / r_l) - log N
  double theta_m;  // -log P + log N
};

/// Requires positive rates and N > P >= 1.
ThetaParams theta_params(double persons_per_focus, double n, double r_f, double r_l);

enum class ReferenceMeasure { counting, n_power, m_power };
std::string_view to_string(ReferenceMeasure m) noexcept;

/// Reference parameters plus the base of the reference measure
/// h(y) = base^(t_m - t_e). `base` is ignored for the counting measure.
struct ReferenceModel {
  double psi_e = 0.0;
  double psi_m = 0.0;
  ReferenceMeasure measure = ReferenceMeasure::counting;
  double base = 1.0;
};

/// N form: psi_e = log(P r_f / r_l), psi_m = -log P, h = N^(t_m - t_e).
/// M form: psi_e = log(r_f / r_l), psi_m = 0,        h = M^(t_m - t_e).
enum class Parameterization { n_form, m_form };

ReferenceModel reference_model(double persons_per_focus, double r_f, double r_l,
                               Parameterization form, double base);

/// (t_m - t_e) log(base), or 0 for the counting measure.
/// Throws std::invalid_argument if t_e < 2 t_m.
double log_reference_measure(std::uint64_t t_e, std::uint64_t t_m, const ReferenceModel& model);

struct ExtraTheta {
  double theta_e = 0.0;
  double theta_m = 0.0;
};

/// psi . t(g) + theta' . t(g) + log h(g), with t = (t_e, t_m).
double log_unnormalized_pmf(const DiGraph& g, const ReferenceModel& model,
                            const std::optional<ExtraTheta>& extra = std::nullopt);

/// Per-dyad law under a dyad-independent model. `asym_each` is the probability
/// of one particular orientation, so null + 2 asym_each + mutual = 1.
struct DyadDistribution {
  double null = 0.0;
  double asym_each = 0.0;
  double mutual = 0.0;
};

/// Exact finite-N dyad law of the reference model: weights 1, e^psi_e / b
/// (each asymmetric orientation) and e^(2 psi_e + psi_m) / b (mutual), with
/// b = base for the power measures. Requires base == N for the N form and
/// base == M for the M form.
DyadDistribution dyad_marginals(const ReferenceModel& model, std::uint64_t n, std::uint64_t m);

/// Independent draw of every dyad from `dist`.
DiGraph sample_dyads(const DyadDistribution& dist, std::uint32_t n, Rng& rng);

/// Exact sampler for the reference ERGM (dyads are independent).
DiGraph sample_ergm(const ReferenceModel& model, std::uint32_t n, std::uint32_t m,
                    std::uint64_t seed);

/// Uniform draw among labelled digraphs with exactly the given dyad census.
/// Throws std::invalid_argument if the census does not sum to N(N-1)/2.
DiGraph sample_uman(const DyadCensus& census, std::uint32_t n, Rng& rng);
DiGraph sample_uman(const DyadCensus& census, std::uint32_t n, std::uint64_t seed);

/// Integer census closest to a real-valued one with the same total
/// (largest-remainder rounding). Used to condition u|man on a mean census.
DyadCensus round_census(double mutual, double asym, double null);

}  // namespace cfpr
