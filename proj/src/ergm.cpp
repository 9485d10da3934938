#include "cfpr/ergm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

namespace cfpr {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(fmt::format("{} must be positive and finite, got {}", what, x));
  }
}

double log_base(const ReferenceModel& model) {
  if (model.measure == ReferenceMeasure::counting) return 0.0;
  require_positive(model.base, "reference measure base");
  return std::log(model.base);
}

}  // namespace

ThetaParams theta_params(double persons_per_focus, double n, double r_f, double r_l) {
  require_positive(r_f, "r_f");
  require_positive(r_l, "r_l");
  if (!(persons_per_focus >= 1.0) || !(n > persons_per_focus) || !std::isfinite(n)) {
    throw std::invalid_argument(fmt::format("need N > P >= 1, got N={} P={}", n, persons_per_focus));
  }
  const double log_p = std::log(persons_per_focus);
  const double log_n = std::log(n);
  return {log_p + std::log(r_f / r_l) - log_n, -log_p + log_n};
}

std::string_view to_string(ReferenceMeasure m) noexcept {
  switch (m) {
    case ReferenceMeasure::counting: return "counting";
    case ReferenceMeasure::n_power: return "N_power";
    case ReferenceMeasure::m_power: return "M_power";
  }
  return "?";
}

ReferenceModel reference_model(double persons_per_focus, double r_f, double r_l,
                               Parameterization form, double base) {
  require_positive(r_f, "r_f");
  require_positive(r_l, "r_l");
  require_positive(base, "base");
  if (form == Parameterization::m_form) {
    return {std::log(r_f / r_l), 0.0, ReferenceMeasure::m_power, base};
  }
  require_positive(persons_per_focus, "P");
  const double log_p = std::log(persons_per_focus);
  return {log_p + std::log(r_f / r_l), -log_p, ReferenceMeasure::n_power, base};
}

double log_reference_measure(std::uint64_t t_e, std::uint64_t t_m, const ReferenceModel& model) {
  if (t_e < 2 * t_m) {
    throw std::invalid_argument(fmt::format("t_e = {} < 2 t_m = {} is impossible", t_e, 2 * t_m));
  }
  if (model.measure == ReferenceMeasure::counting) return 0.0;
  return (static_cast<double>(t_m) - static_cast<double>(t_e)) * log_base(model);
}

double log_unnormalized_pmf(const DiGraph& g, const ReferenceModel& model,
                            const std::optional<ExtraTheta>& extra) {
  const SuffStats t = suff_stats(g);
  const double te = static_cast<double>(t.edges), tm = static_cast<double>(t.mutuals);
  double value = model.psi_e * te + model.psi_m * tm + log_reference_measure(t.edges, t.mutuals, model);
  if (extra) value += extra->theta_e * te + extra->theta_m * tm;
  return value;
}

DyadDistribution dyad_marginals(const ReferenceModel& model, std::uint64_t n, std::uint64_t m) {
  if (n < 2 || m < 1) throw std::invalid_argument("need N >= 2 and M >= 1");
  if (model.measure == ReferenceMeasure::n_power && model.base != static_cast<double>(n)) {
    throw std::invalid_argument(fmt::format("N-form model has base {} but N = {}", model.base, n));
  }
  if (model.measure == ReferenceMeasure::m_power && model.base != static_cast<double>(m)) {
    throw std::invalid_argument(fmt::format("M-form model has base {} but M = {}", model.base, m));
  }
  // Each asymmetric dyad adds t_m - t_e = -1 to the measure exponent, a
  // mutual dyad 1 - 2 = -1.
  const double lb = log_base(model);
  const std::array<double, 3> logw = {0.0, model.psi_e - lb, 2.0 * model.psi_e + model.psi_m - lb};
  const double hi = std::max({logw[0], logw[1], logw[2]});
  const double w0 = std::exp(logw[0] - hi), wa = std::exp(logw[1] - hi), wm = std::exp(logw[2] - hi);
  const double z = w0 + 2.0 * wa + wm;
  return {w0 / z, wa / z, wm / z};
}

DiGraph sample_dyads(const DyadDistribution& dist, std::uint32_t n, Rng& rng) {
  const double total = dist.null + 2.0 * dist.asym_each + dist.mutual;
  if (!(dist.null >= 0.0 && dist.asym_each >= 0.0 && dist.mutual >= 0.0) ||
      std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("dyad distribution must be non-negative and sum to 1");
  }
  DiGraph g(n);
  const double c1 = dist.asym_each, c2 = 2.0 * dist.asym_each, c3 = c2 + dist.mutual;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      const double u = rng.uniform();
      if (u < c1) {
        g.add_edge(i, j);
      } else if (u < c2) {
        g.add_edge(j, i);
      } else if (u < c3) {
        g.add_edge(i, j);
        g.add_edge(j, i);
      }
    }
  }
  return g;
}

DiGraph sample_ergm(const ReferenceModel& model, std::uint32_t n, std::uint32_t m,
                    std::uint64_t seed) {
  Rng rng(seed);
  return sample_dyads(dyad_marginals(model, n, m), n, rng);
}

DiGraph sample_uman(const DyadCensus& census, std::uint32_t n, Rng& rng) {
  const std::uint64_t d = dyad_count(n);
  if (census.total() != d) {
    throw std::invalid_argument(
        fmt::format("census ({}, {}, {}) does not sum to {} dyads", census.mutual, census.asym, census.null, d));
  }
  // Dyad k enumerates pairs i < j row by row; row_start[i] is the first k of row i.
  std::vector<std::uint64_t> row_start(n, 0);
  for (std::uint32_t i = 1; i < n; ++i) row_start[i] = row_start[i - 1] + (n - i);
  auto decode = [&](std::uint64_t k) {
    const auto it = std::upper_bound(row_start.begin(), row_start.end(), k);
    const auto i = static_cast<Vertex>(it - row_start.begin() - 1);
    return Edge{i, static_cast<Vertex>(i + 1 + (k - row_start[i]))};
  };

  // Partial Fisher-Yates over the dyad slots; displaced entries live in a map.
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  auto at = [&](std::uint64_t k) {
    const auto it = swapped.find(k);
    return it == swapped.end() ? k : it->second;
  };
  DiGraph g(n);
  const std::uint64_t chosen = census.mutual + census.asym;
  for (std::uint64_t t = 0; t < chosen; ++t) {
    const std::uint64_t r = t + rng.below(d - t);
    const std::uint64_t pick = at(r);
    swapped[r] = at(t);
    const Edge e = decode(pick);
    if (t < census.mutual) {
      g.add_edge(e.from, e.to);
      g.add_edge(e.to, e.from);
    } else if (rng.below(2) == 0) {
      g.add_edge(e.from, e.to);
    } else {
      g.add_edge(e.to, e.from);
    }
  }
  return g;
}

DiGraph sample_uman(const DyadCensus& census, std::uint32_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_uman(census, n, rng);
}

DyadCensus round_census(double mutual, double asym, double null) {
  const std::array<double, 3> x = {mutual, asym, null};
  for (double v : x) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("census entries must be non-negative");
  }
  const double total = std::round(mutual + asym + null);
  std::array<std::uint64_t, 3> c{};
  std::array<double, 3> rem{};
  std::uint64_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    c[k] = static_cast<std::uint64_t>(std::floor(x[k]));
    rem[k] = x[k] - std::floor(x[k]);
    assigned += c[k];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rem[a] > rem[b]; });
  for (int k = 0; assigned < static_cast<std::uint64_t>(total) && k < 3; ++k, ++assigned) ++c[order[k]];
  return {c[0], c[1], c[2]};
}

}  // namespace cfpr
