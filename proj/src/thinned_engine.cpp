// Thinned simulator with lazily propagated foci.
//
// Migration never depends on the graph, so the focus process is an
// autonomous chain: migrating at hazard r_m to one of the other M - 1 foci is
// the same as resampling uniformly over all M at hazard
// lambda = r_m M / (M - 1). Over an interval dt a vertex therefore keeps its
// focus with probability exp(-lambda dt) and is otherwise uniform. Foci are
// only sampled when a formation proposal needs them, and sequential sampling
// from that kernel reproduces their joint law at the query times.

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

#include "cfpr/process.hpp"

namespace cfpr {

namespace {

constexpr int kRejectionAttempts = 64;

class ThinnedEngine {
 public:
  ThinnedEngine(const ProcessParams& params, const SystemState& state)
      : params_(params),
        n_(params.n_vertices),
        focus_(state.foci),
        seen_(params.n_vertices, state.time),
        adjacency_((static_cast<std::size_t>(n_) * n_ + 63) / 64, 0),
        time_(state.time) {
    if (params.n_foci > 1) resample_rate_ = params.r_m * params.n_foci / (params.n_foci - 1.0);
    for (const Edge& e : state.graph.edges()) add(e.from, e.to);
  }

  SystemState run(Rng& rng, double t_end, const SimulationOptions& options) {
    const double ordered_pairs = static_cast<double>(n_) * (n_ - 1.0);
    while (true) {
      const double te = static_cast<double>(edges_.size());
      const double proposal = params_.r_f * (ordered_pairs - te);
      const double dissolution = params_.r_l * te;
      const double total = proposal + dissolution;
      if (!(total > 0.0)) break;
      const double next = time_ + rng.exponential(total);
      if (next > t_end) break;
      time_ = next;
      if (rng.uniform() * total < proposal) {
        const Edge e = sample_absent(rng);
        if (at_risk(e.from, e.to, rng)) {
          add(e.from, e.to);
          if (options.observer) options.observer({time_, EventKind::formation, e.from, e.to});
        }
      } else {
        const Edge e = edges_[rng.below(edges_.size())];
        remove(e.from, e.to);
        if (options.observer) options.observer({time_, EventKind::dissolution, e.from, e.to});
      }
    }
    SystemState out{DiGraph(n_), {}, t_end};
    for (Vertex v = 0; v < n_; ++v) focus_at(v, t_end, rng);
    out.foci = focus_;
    for (const Edge& e : edges_) out.graph.add_edge(e.from, e.to);
    return out;
  }

 private:
  std::size_t bit(Vertex i, Vertex j) const { return static_cast<std::size_t>(i) * n_ + j; }
  bool has(Vertex i, Vertex j) const {
    const std::size_t b = bit(i, j);
    return (adjacency_[b >> 6] >> (b & 63)) & 1u;
  }

  void add(Vertex i, Vertex j) {
    const std::size_t b = bit(i, j);
    adjacency_[b >> 6] |= std::uint64_t{1} << (b & 63);
    position_[b] = edges_.size();
    edges_.push_back({i, j});
  }

  void remove(Vertex i, Vertex j) {
    const std::size_t b = bit(i, j);
    adjacency_[b >> 6] &= ~(std::uint64_t{1} << (b & 63));
    const auto it = position_.find(b);
    const std::size_t k = it->second;
    position_.erase(it);
    if (k + 1 != edges_.size()) {
      edges_[k] = edges_.back();
      position_[bit(edges_[k].from, edges_[k].to)] = k;
    }
    edges_.pop_back();
  }

  std::uint32_t focus_at(Vertex v, double t, Rng& rng) {
    if (resample_rate_ > 0.0 && t > seen_[v]) {
      if (!rng.bernoulli(std::exp(-resample_rate_ * (t - seen_[v])))) {
        focus_[v] = static_cast<std::uint32_t>(rng.below(params_.n_foci));
      }
      seen_[v] = t;
    }
    return focus_[v];
  }

  bool at_risk(Vertex i, Vertex j, Rng& rng) {
    if (params_.variant == Variant::cfpr && has(j, i)) return true;
    const std::uint32_t fi = focus_at(i, time_, rng);
    return fi == focus_at(j, time_, rng);
  }

  Edge sample_absent(Rng& rng) {
    for (int attempt = 0; attempt < kRejectionAttempts; ++attempt) {
      const auto i = static_cast<Vertex>(rng.below(n_));
      auto j = static_cast<Vertex>(rng.below(n_ - 1));
      if (j >= i) ++j;
      if (!has(i, j)) return {i, j};
    }
    const std::uint64_t absent = static_cast<std::uint64_t>(n_) * (n_ - 1) - edges_.size();
    std::uint64_t pick = rng.below(absent);
    for (Vertex i = 0; i < n_; ++i)
      for (Vertex j = 0; j < n_; ++j) {
        if (i == j || has(i, j)) continue;
        if (pick-- == 0) return {i, j};
      }
    throw std::logic_error("absent pair count out of sync");
  }

  ProcessParams params_;
  std::uint32_t n_;
  std::vector<std::uint32_t> focus_;
  std::vector<double> seen_;  // time at which focus_ was last brought up to date
  std::vector<std::uint64_t> adjacency_;
  std::vector<Edge> edges_;
  std::unordered_map<std::size_t, std::size_t> position_;
  double resample_rate_ = 0.0;
  double time_;
};

}  // namespace

SystemState simulate_thinned(const ProcessParams& params, double t_end, std::uint64_t seed,
                             const SimulationOptions& options) {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (params.n_vertices > 60000) throw std::invalid_argument("thinned engine supports N <= 60000");
  Rng rng(seed);
  const SystemState initial = init_state(params, rng);
  ThinnedEngine engine(params, initial);
  return engine.run(rng, t_end, options);
}

std::string_view to_string(Engine e) noexcept {
  switch (e) {
    case Engine::direct: return "direct";
    case Engine::events: return "events";
    case Engine::thinned: return "thinned";
  }
  return "?";
}

Engine parse_engine(std::string_view text) {
  if (text == "direct") return Engine::direct;
  if (text == "events") return Engine::events;
  if (text == "thinned") return Engine::thinned;
  throw std::invalid_argument(fmt::format("unknown engine '{}'", text));
}

SystemState run_engine(Engine engine, const ProcessParams& params, double t_end, std::uint64_t seed,
                       const SimulationOptions& options) {
  switch (engine) {
    case Engine::direct: return simulate(params, t_end, seed, options);
    case Engine::thinned: return simulate_thinned(params, t_end, seed, options);
    case Engine::events: {
      ProcessParams converted = params;
      converted.r_m = event_engine_equivalent_rm(params);
      return simulate_events(converted, t_end, seed, options);
    }
  }
  throw std::invalid_argument("unknown engine");
}

Engine auto_engine(const ProcessParams& params) noexcept {
  const double n = params.n_vertices;
  const double migrations = params.n_foci > 1 ? params.r_m * n : 0.0;
  const double proposals = params.r_f * n * (n - 1.0);
  return migrations > proposals ? Engine::thinned : Engine::direct;
}

}  // namespace cfpr
