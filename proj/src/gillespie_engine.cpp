#include "gillespie_engine.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace cfpr::detail {

namespace {
constexpr int kRejectionAttempts = 64;
}

GillespieEngine::GillespieEngine(const ProcessParams& params, const SystemState& state)
    : params_(params),
      time_(state.time),
      focus_(state.foci),
      members_(params.n_foci),
      slot_(params.n_vertices),
      out_(params.n_vertices),
      in_(params.n_vertices) {
  for (Vertex v = 0; v < params_.n_vertices; ++v) {
    auto& m = members_[focus_[v]];
    slot_[v] = static_cast<std::uint32_t>(m.size());
    m.push_back(v);
  }
  for (const auto& m : members_) colocated_pairs_ += m.size() * (m.empty() ? 0 : m.size() - 1);
  for (const Edge& e : state.graph.edges()) {
    const bool mutual = state.graph.has_edge(e.to, e.from);
    const auto idx = static_cast<std::uint32_t>(edges_.size());
    edges_.push_back({e.from, e.to, mutual});
    out_[e.from].push_back({e.to, idx, mutual});
    in_[e.to].push_back({e.from, 0, mutual});
    if (focus_[e.from] == focus_[e.to])
      ++colocated_edges_;
    else if (!mutual)
      ++reciprocable_;
  }
}

Rates GillespieEngine::rates() const noexcept {
  Rates r;
  std::uint64_t risk = colocated_risk();
  if (params_.variant == Variant::cfpr) risk += reciprocable_;
  r.formation = params_.r_f * static_cast<double>(risk);
  r.dissolution = params_.r_l * static_cast<double>(edges_.size());
  r.migration = params_.n_foci > 1 ? params_.r_m * params_.n_vertices : 0.0;
  return r;
}

std::optional<EventRecord> GillespieEngine::advance(Rng& rng, double t_end) {
  const Rates r = rates();
  const double total = r.total();
  if (!(total > 0.0)) {
    time_ = t_end;
    return std::nullopt;
  }
  const double next = time_ + rng.exponential(total);
  if (next > t_end) {
    time_ = t_end;
    return std::nullopt;
  }
  time_ = next;
  return apply(r, rng);
}

EventRecord GillespieEngine::step(Rng& rng) {
  const Rates r = rates();
  const double total = r.total();
  if (!(total > 0.0)) throw NoEventsError("all transition hazards are zero");
  time_ += rng.exponential(total);
  return apply(r, rng);
}

EventRecord GillespieEngine::apply(const Rates& r, Rng& rng) {
  const double u = rng.uniform() * r.total();
  EventKind kind;
  if (u < r.formation)
    kind = EventKind::formation;
  else if (u < r.formation + r.dissolution || r.migration == 0.0)
    kind = r.dissolution > 0.0 ? EventKind::dissolution : EventKind::formation;
  else
    kind = EventKind::migration;

  EventRecord record{time_, kind, 0, 0};
  switch (kind) {
    case EventKind::formation: {
      const Edge e = sample_formation(rng);
      if (audit_) {
        const auto risk = formation_risk_set(state(), params_);
        if (std::find(risk.begin(), risk.end(), e) == risk.end()) {
          throw std::logic_error(fmt::format("formation ({}, {}) outside the risk set", e.from, e.to));
        }
      }
      form(e.from, e.to);
      record.a = e.from;
      record.b = e.to;
      break;
    }
    case EventKind::dissolution: {
      const auto k = static_cast<std::size_t>(rng.below(edges_.size()));
      record.a = edges_[k].from;
      record.b = edges_[k].to;
      dissolve(k);
      break;
    }
    case EventKind::migration: {
      const auto v = static_cast<Vertex>(rng.below(params_.n_vertices));
      auto dest = static_cast<std::uint32_t>(rng.below(params_.n_foci - 1));
      if (dest >= focus_[v]) ++dest;
      migrate(v, dest);
      record.a = v;
      record.b = dest;
      break;
    }
  }
  if (audit_) audit();
  return record;
}

GillespieEngine::Arc* GillespieEngine::find_arc(std::vector<Arc>& arcs, Vertex other) {
  for (auto& a : arcs)
    if (a.other == other) return &a;
  return nullptr;
}

bool GillespieEngine::has_edge(Vertex from, Vertex to) const {
  const auto& arcs = out_[from];
  return std::any_of(arcs.begin(), arcs.end(), [to](const Arc& a) { return a.other == to; });
}

Edge GillespieEngine::sample_formation(Rng& rng) {
  const std::uint64_t colocated = colocated_risk();
  const std::uint64_t reciprocal = params_.variant == Variant::cfpr ? reciprocable_ : 0;
  if (rng.below(colocated + reciprocal) < colocated) return sample_colocated_pair(rng);
  return sample_reciprocation(rng);
}

Edge GillespieEngine::sample_colocated_pair(Rng& rng) {
  // Uniform ordered co-located pair, rejected while adjacent; the fallback
  // enumerates so that nearly saturated foci still terminate.
  for (int attempt = 0; attempt < kRejectionAttempts; ++attempt) {
    std::uint64_t target = rng.below(colocated_pairs_);
    std::size_t f = 0;
    for (;; ++f) {
      const std::uint64_t n = members_[f].size();
      const std::uint64_t w = n < 2 ? 0 : n * (n - 1);
      if (target < w) break;
      target -= w;
    }
    const auto& m = members_[f];
    const auto a = rng.below(m.size());
    auto b = rng.below(m.size() - 1);
    if (b >= a) ++b;
    if (!has_edge(m[a], m[b])) return {m[a], m[b]};
  }
  std::uint64_t pick = rng.below(colocated_risk());
  for (const auto& m : members_) {
    for (Vertex i : m)
      for (Vertex j : m) {
        if (i == j || has_edge(i, j)) continue;
        if (pick-- == 0) return {i, j};
      }
  }
  throw std::logic_error("co-located risk count out of sync");
}

Edge GillespieEngine::sample_reciprocation(Rng& rng) {
  auto eligible = [&](const EdgeRecord& e) { return !e.mutual && focus_[e.from] != focus_[e.to]; };
  for (int attempt = 0; attempt < kRejectionAttempts; ++attempt) {
    const auto& e = edges_[rng.below(edges_.size())];
    if (eligible(e)) return {e.to, e.from};
  }
  std::uint64_t pick = rng.below(reciprocable_);
  for (const auto& e : edges_) {
    if (eligible(e) && pick-- == 0) return {e.to, e.from};
  }
  throw std::logic_error("reciprocable count out of sync");
}

void GillespieEngine::form(Vertex from, Vertex to) {
  Arc* back = find_arc(out_[to], from);
  const bool mutual = back != nullptr;
  const auto idx = static_cast<std::uint32_t>(edges_.size());
  edges_.push_back({from, to, mutual});
  out_[from].push_back({to, idx, mutual});
  in_[to].push_back({from, 0, mutual});
  const bool colocated = focus_[from] == focus_[to];
  if (colocated) ++colocated_edges_;
  if (mutual) {
    back->mutual = true;
    edges_[back->edge].mutual = true;
    find_arc(in_[from], to)->mutual = true;
    if (!colocated) --reciprocable_;
  } else if (!colocated) {
    ++reciprocable_;
  }
}

void GillespieEngine::dissolve(std::size_t k) {
  const EdgeRecord e = edges_[k];
  auto drop = [](std::vector<Arc>& arcs, Vertex other) {
    auto it = std::find_if(arcs.begin(), arcs.end(), [other](const Arc& a) { return a.other == other; });
    *it = arcs.back();
    arcs.pop_back();
  };
  drop(out_[e.from], e.to);
  drop(in_[e.to], e.from);
  if (k + 1 != edges_.size()) {
    edges_[k] = edges_.back();
    find_arc(out_[edges_[k].from], edges_[k].to)->edge = static_cast<std::uint32_t>(k);
  }
  edges_.pop_back();

  const bool colocated = focus_[e.from] == focus_[e.to];
  if (colocated) --colocated_edges_;
  if (e.mutual) {
    Arc* back = find_arc(out_[e.to], e.from);
    back->mutual = false;
    edges_[back->edge].mutual = false;
    find_arc(in_[e.from], e.to)->mutual = false;
    if (!colocated) ++reciprocable_;
  } else if (!colocated) {
    --reciprocable_;
  }
}

void GillespieEngine::migrate(Vertex v, std::uint32_t dest) {
  const std::uint32_t src = focus_[v];
  auto& from = members_[src];
  colocated_pairs_ -= 2 * (from.size() - 1);
  const Vertex last = from.back();
  from[slot_[v]] = last;
  slot_[last] = slot_[v];
  from.pop_back();

  auto update = [&](const std::vector<Arc>& arcs) {
    for (const Arc& a : arcs) {
      const std::uint32_t fu = focus_[a.other];
      if (fu == src) {
        --colocated_edges_;
        if (!a.mutual) ++reciprocable_;
      } else if (fu == dest) {
        ++colocated_edges_;
        if (!a.mutual) --reciprocable_;
      }
    }
  };
  update(out_[v]);
  update(in_[v]);

  auto& to = members_[dest];
  colocated_pairs_ += 2 * to.size();
  slot_[v] = static_cast<std::uint32_t>(to.size());
  to.push_back(v);
  focus_[v] = dest;
}

SystemState GillespieEngine::state() const {
  SystemState s{DiGraph(params_.n_vertices), focus_, time_};
  for (const auto& e : edges_) s.graph.add_edge(e.from, e.to);
  return s;
}

void GillespieEngine::audit() const {
  const SystemState s = state();
  const Rates expected = total_rates(s, params_);
  const Rates actual = rates();
  if (expected.formation != actual.formation || expected.dissolution != actual.dissolution ||
      expected.migration != actual.migration) {
    throw std::logic_error(fmt::format("rate bookkeeping drifted: formation {} vs {}, dissolution {} vs {}",
                                       actual.formation, expected.formation, actual.dissolution,
                                       expected.dissolution));
  }
  const double risk_size = static_cast<double>(formation_risk_set(s, params_).size());
  if (params_.r_f * risk_size != actual.formation) {
    throw std::logic_error("formation hazard disagrees with the enumerated risk set");
  }
  for (const auto& e : edges_) {
    if (e.mutual != s.graph.has_edge(e.to, e.from)) throw std::logic_error("stale mutual flag");
  }
  for (Vertex v = 0; v < params_.n_vertices; ++v) {
    if (members_[focus_[v]][slot_[v]] != v) throw std::logic_error("focus membership out of sync");
  }
}

}  // namespace cfpr::detail
