// Event-representation simulator.
//
// Every ordered pair carries a formation clock (hazard r_f while the pair is
// at risk) and a dissolution clock (hazard r_l), every vertex a migration
// clock whose events pick one of the M foci uniformly. Only clocks that can
// change the state are materialised: formation clocks for at-risk pairs,
// dissolution clocks for existing edges. Memorylessness lets a clock be drawn
// fresh whenever its pair (re)enters the risk set.

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cfpr/process.hpp"

namespace cfpr {

namespace {

struct PendingEvent {
  double time;
  std::uint64_t token;  // formation clocks only; 0 otherwise
  EventKind kind;
  Vertex a;
  Vertex b;

  bool operator>(const PendingEvent& o) const {
    if (time != o.time) return time > o.time;
    if (kind != o.kind) return kind > o.kind;
    if (a != o.a) return a > o.a;
    if (b != o.b) return b > o.b;
    return token > o.token;
  }
};

class EventEngine {
 public:
  EventEngine(const ProcessParams& params, SystemState state, Rng& rng)
      : params_(params), state_(std::move(state)), rng_(rng), members_(params.n_foci) {
    for (Vertex v = 0; v < params_.n_vertices; ++v) members_[state_.foci[v]].push_back(v);
    for (Vertex v = 0; v < params_.n_vertices; ++v) schedule_migration(v);
    for (const Edge& e : state_.graph.edges()) schedule_dissolution(e.from, e.to);
    for (Vertex i = 0; i < params_.n_vertices; ++i)
      for (Vertex j = 0; j < params_.n_vertices; ++j)
        if (i != j) refresh(i, j);
  }

  SystemState run(double t_end, const SimulationOptions& options) {
    while (!queue_.empty() && queue_.top().time <= t_end) {
      const PendingEvent ev = queue_.top();
      queue_.pop();
      state_.time = ev.time;
      if (auto applied = fire(ev)) {
        if (options.observer) options.observer(*applied);
        if (options.audit) audit();
      }
    }
    state_.time = t_end;
    return std::move(state_);
  }

 private:
  static std::uint64_t key(Vertex i, Vertex j) { return (static_cast<std::uint64_t>(i) << 32) | j; }

  bool at_risk(Vertex i, Vertex j) const {
    if (state_.graph.has_edge(i, j)) return false;
    if (state_.foci[i] == state_.foci[j]) return true;
    return params_.variant == Variant::cfpr && state_.graph.has_edge(j, i);
  }

  // Bring the formation clock of (i, j) in line with the current risk set.
  void refresh(Vertex i, Vertex j) {
    const bool want = params_.r_f > 0.0 && at_risk(i, j);
    const auto it = active_.find(key(i, j));
    const bool have = it != active_.end();
    if (want && !have) {
      const std::uint64_t token = ++next_token_;
      active_.emplace(key(i, j), token);
      queue_.push({state_.time + rng_.exponential(params_.r_f), token, EventKind::formation, i, j});
    } else if (!want && have) {
      active_.erase(it);
    }
  }

  void schedule_migration(Vertex v) {
    if (params_.n_foci < 2 || !(params_.r_m > 0.0)) return;
    const auto dest = static_cast<Vertex>(rng_.below(params_.n_foci));
    queue_.push({state_.time + rng_.exponential(params_.r_m), 0, EventKind::migration, v, dest});
  }

  void schedule_dissolution(Vertex i, Vertex j) {
    if (!(params_.r_l > 0.0)) return;
    queue_.push({state_.time + rng_.exponential(params_.r_l), 0, EventKind::dissolution, i, j});
  }

  std::optional<EventRecord> fire(const PendingEvent& ev) {
    const Vertex i = ev.a, j = ev.b;
    switch (ev.kind) {
      case EventKind::formation: {
        const auto it = active_.find(key(i, j));
        if (it == active_.end() || it->second != ev.token) return std::nullopt;  // superseded
        active_.erase(it);
        state_.graph.add_edge(i, j);
        schedule_dissolution(i, j);
        refresh(j, i);
        return EventRecord{ev.time, EventKind::formation, i, j};
      }
      case EventKind::dissolution: {
        state_.graph.remove_edge(i, j);
        refresh(i, j);
        refresh(j, i);
        return EventRecord{ev.time, EventKind::dissolution, i, j};
      }
      case EventKind::migration: {
        schedule_migration(i);
        const std::uint32_t src = state_.foci[i];
        if (j == src) return std::nullopt;  // a draw of the current focus changes nothing
        auto& old_members = members_[src];
        old_members.erase(std::find(old_members.begin(), old_members.end(), i));
        state_.foci[i] = j;
        members_[j].push_back(i);
        for (Vertex u : old_members) {
          refresh(i, u);
          refresh(u, i);
        }
        for (Vertex u : members_[j]) {
          if (u == i) continue;
          refresh(i, u);
          refresh(u, i);
        }
        return EventRecord{ev.time, EventKind::migration, i, j};
      }
    }
    return std::nullopt;
  }

  void audit() const {
    const auto risk = formation_risk_set(state_, params_);
    if (params_.r_f > 0.0 && risk.size() != active_.size()) {
      throw std::logic_error("event engine: active formation clocks differ from the risk set");
    }
    for (const Edge& e : risk) {
      if (params_.r_f > 0.0 && !active_.contains(key(e.from, e.to))) {
        throw std::logic_error("event engine: at-risk pair without a formation clock");
      }
    }
  }

  ProcessParams params_;
  SystemState state_;
  Rng& rng_;
  std::vector<std::vector<Vertex>> members_;
  std::unordered_map<std::uint64_t, std::uint64_t> active_;
  std::uint64_t next_token_ = 0;
  std::priority_queue<PendingEvent, std::vector<PendingEvent>, std::greater<>> queue_;
};

}  // namespace

SystemState simulate_events(const ProcessParams& params, double t_end, std::uint64_t seed,
                            const SimulationOptions& options) {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  Rng rng(seed);
  SystemState initial = init_state(params, rng);
  EventEngine engine(params, std::move(initial), rng);
  return engine.run(t_end, options);
}

}  // namespace cfpr
