#include "cfpr/process.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "cfpr/analytics.hpp"
#include "gillespie_engine.hpp"

namespace cfpr {

std::string_view to_string(Variant v) noexcept {
  return v == Variant::cfpr ? "CFPR" : "CFP_DIRECTED";
}

Variant parse_variant(std::string_view text) {
  if (text == "CFPR" || text == "cfpr") return Variant::cfpr;
  if (text == "CFP_DIRECTED" || text == "cfp_directed" || text == "CFP" || text == "cfp") {
    return Variant::cfp_directed;
  }
  throw std::invalid_argument(fmt::format("unknown process variant '{}'", text));
}

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::formation: return "formation";
    case EventKind::dissolution: return "dissolution";
    case EventKind::migration: return "migration";
  }
  return "?";
}

void ProcessParams::validate() const {
  if (n_vertices < 2) throw std::invalid_argument(fmt::format("N must be >= 2, got {}", n_vertices));
  if (n_foci < 1) throw std::invalid_argument("M must be >= 1");
  auto check = [](double r, const char* name) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw std::invalid_argument(fmt::format("{} must be finite and non-negative, got {}", name, r));
    }
  };
  check(r_f, "r_f");
  check(r_l, "r_l");
  check(r_m, "r_m");
}

ProcessParams ProcessParams::from_density(std::uint32_t n, double persons_per_focus, double r_f,
                                          double r_l, double r_m, Variant variant) {
  if (!(persons_per_focus > 0.0)) throw std::invalid_argument("P must be positive");
  const double m = std::floor(n / persons_per_focus + 0.5);
  ProcessParams p{n, static_cast<std::uint32_t>(std::max(1.0, m)), r_f, r_l, r_m, variant};
  p.validate();
  return p;
}

void write_event(std::ostream& os, const EventRecord& e) {
  os << fmt::format("{} {} {} {}\n", e.time, to_string(e.kind), e.a, e.b);
}

SystemState init_state(const ProcessParams& params, Rng& rng) {
  params.validate();
  const double p = limiting_density(params);
  SystemState s{DiGraph(params.n_vertices), std::vector<std::uint32_t>(params.n_vertices), 0.0};
  for (Vertex i = 0; i < params.n_vertices; ++i) {
    for (Vertex j = 0; j < params.n_vertices; ++j) {
      if (i != j && rng.bernoulli(p)) s.graph.add_edge(i, j);
    }
  }
  for (auto& f : s.foci) f = static_cast<std::uint32_t>(rng.below(params.n_foci));
  return s;
}

SystemState init_state(const ProcessParams& params, std::uint64_t seed) {
  Rng rng(seed);
  return init_state(params, rng);
}

namespace {
void check_state(const SystemState& state, const ProcessParams& params) {
  params.validate();
  if (state.graph.size() != params.n_vertices || state.foci.size() != params.n_vertices) {
    throw std::invalid_argument("state size does not match N");
  }
  for (auto f : state.foci) {
    if (f >= params.n_foci) throw std::invalid_argument(fmt::format("focus {} out of range", f));
  }
}
}  // namespace

std::vector<Edge> formation_risk_set(const SystemState& state, const ProcessParams& params) {
  check_state(state, params);
  std::vector<Edge> risk;
  const auto& g = state.graph;
  for (Vertex i = 0; i < params.n_vertices; ++i) {
    for (Vertex j = 0; j < params.n_vertices; ++j) {
      if (i == j || g.has_edge(i, j)) continue;
      const bool colocated = state.foci[i] == state.foci[j];
      const bool reciprocating = params.variant == Variant::cfpr && g.has_edge(j, i);
      if (colocated || reciprocating) risk.push_back({i, j});
    }
  }
  return risk;
}

Rates total_rates(const SystemState& state, const ProcessParams& params) {
  check_state(state, params);
  std::vector<std::uint64_t> occupancy(params.n_foci, 0);
  for (auto f : state.foci) ++occupancy[f];
  std::uint64_t colocated_pairs = 0;
  for (auto n : occupancy) colocated_pairs += n * (n == 0 ? 0 : n - 1);
  std::uint64_t colocated_edges = 0, reciprocable = 0;
  for (const Edge& e : state.graph.edges()) {
    if (state.foci[e.from] == state.foci[e.to]) {
      ++colocated_edges;
    } else if (!state.graph.has_edge(e.to, e.from)) {
      ++reciprocable;
    }
  }
  std::uint64_t risk = colocated_pairs - colocated_edges;
  if (params.variant == Variant::cfpr) risk += reciprocable;
  Rates r;
  r.formation = params.r_f * static_cast<double>(risk);
  r.dissolution = params.r_l * static_cast<double>(state.graph.edge_count());
  r.migration = params.n_foci > 1 ? params.r_m * params.n_vertices : 0.0;
  return r;
}

EventRecord step(SystemState& state, const ProcessParams& params, Rng& rng) {
  check_state(state, params);
  detail::GillespieEngine engine(params, state);
  const EventRecord e = engine.step(rng);
  state = engine.state();
  return e;
}

SystemState simulate_from(const ProcessParams& params, SystemState state, double t_end, Rng& rng,
                          const SimulationOptions& options) {
  check_state(state, params);
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  detail::GillespieEngine engine(params, state);
  engine.set_audit(options.audit);
  while (auto event = engine.advance(rng, t_end)) {
    if (options.observer) options.observer(*event);
  }
  return engine.state();
}

SystemState simulate(const ProcessParams& params, double t_end, std::uint64_t seed,
                     const SimulationOptions& options) {
  Rng rng(seed);
  SystemState initial = init_state(params, rng);
  return simulate_from(params, std::move(initial), t_end, rng, options);
}

double event_engine_equivalent_rm(const ProcessParams& params) noexcept {
  if (params.n_foci < 2) return params.r_m;
  const double m = params.n_foci;
  return params.r_m * m / (m - 1.0);
}

std::vector<double> coresidence_time(const ProcessParams& params, double window,
                                     std::size_t n_runs, std::uint64_t seed) {
  if (params.n_foci < 2) throw std::invalid_argument("co-residence needs M >= 2");
  if (!(params.r_m > 0.0) || !std::isfinite(params.r_m)) {
    throw std::invalid_argument("co-residence needs r_m > 0");
  }
  if (!(window > 0.0)) throw std::invalid_argument("window must be positive");
  const std::uint32_t m = params.n_foci;
  std::vector<double> samples;
  samples.reserve(n_runs);
  for (std::size_t run = 0; run < n_runs; ++run) {
    Rng rng(derive_seed(seed, "coresidence", run));
    std::uint32_t fi = static_cast<std::uint32_t>(rng.below(m));
    std::uint32_t fj = static_cast<std::uint32_t>(rng.below(m));
    double t = 0.0, shared = 0.0;
    // superposed migration events of both vertices at total rate 2 r_m
    while (true) {
      const double next = t + rng.exponential(2.0 * params.r_m);
      const double until = std::min(next, window);
      if (fi == fj) shared += until - t;
      if (next >= window) break;
      t = next;
      const auto dest = static_cast<std::uint32_t>(rng.below(m));
      if (rng.below(2) == 0)
        fi = dest;
      else
        fj = dest;
    }
    samples.push_back(shared);
  }
  return samples;
}

void write_state(std::ostream& os, const SystemState& state) {
  write_edge_list(os, state.graph);
  for (std::size_t i = 0; i < state.foci.size(); ++i) {
    os << "focus " << i << ' ' << state.foci[i] << '\n';
  }
}

SystemState read_state(std::istream& is) {
  std::stringstream buffer;
  buffer << is.rdbuf();
  const std::string text = buffer.str();
  std::istringstream graph_stream(text);
  SystemState s{read_edge_list(graph_stream), {}, 0.0};
  s.foci.assign(s.graph.size(), 0);
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag) || tag != "focus") continue;
    long long i = -1, f = -1;
    if (!(fields >> i >> f) || i < 0 || f < 0 || static_cast<std::size_t>(i) >= s.foci.size()) {
      throw std::runtime_error(fmt::format("line {}: expected `focus <vertex> <focus>`", line_no));
    }
    s.foci[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(f);
  }
  return s;
}

}  // namespace cfpr
