#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfpr/process.hpp"

namespace cfpr::detail {

/// Direct-method simulator for the CFPR / directed CFP.
///
/// Keeps incremental counts so that every hazard is O(1) to evaluate:
///   colocated_pairs  = sum over foci of n_f (n_f - 1)
///   colocated_edges  = edges whose endpoints share a focus
///   reciprocable     = unreciprocated edges whose endpoints are apart
/// The formation risk set has size colocated_pairs - colocated_edges, plus
/// reciprocable under CFPR. A migration touches only the moving vertex's arcs.
class GillespieEngine {
 public:
  GillespieEngine(const ProcessParams& params, const SystemState& state);

  /// Draws the next event; applies it and returns it if it happens no later
  /// than t_end, otherwise parks the clock at t_end and returns nullopt.
  std::optional<EventRecord> advance(Rng& rng, double t_end);

  /// Applies the next event unconditionally. Throws NoEventsError when every
  /// hazard is zero.
  EventRecord step(Rng& rng);

  Rates rates() const noexcept;
  SystemState state() const;
  double time() const noexcept { return time_; }

  void set_audit(bool on) noexcept { audit_ = on; }
  /// Recomputes all bookkeeping from scratch; throws std::logic_error on mismatch.
  void audit() const;

 private:
  struct Arc {
    Vertex other;
    std::uint32_t edge;  // index into edges_ (out-arcs only)
    bool mutual;
  };
  struct EdgeRecord {
    Vertex from;
    Vertex to;
    bool mutual;
  };

  EventRecord apply(const Rates& r, Rng& rng);
  Arc* find_arc(std::vector<Arc>& arcs, Vertex other);
  bool has_edge(Vertex from, Vertex to) const;

  Edge sample_formation(Rng& rng);
  Edge sample_colocated_pair(Rng& rng);
  Edge sample_reciprocation(Rng& rng);

  void form(Vertex from, Vertex to);
  void dissolve(std::size_t edge_index);
  void migrate(Vertex v, std::uint32_t destination);

  std::uint64_t colocated_risk() const noexcept { return colocated_pairs_ - colocated_edges_; }

  ProcessParams params_;
  double time_ = 0.0;
  std::vector<std::uint32_t> focus_;
  std::vector<std::vector<Vertex>> members_;
  std::vector<std::uint32_t> slot_;  // position of each vertex in members_[focus]
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  std::vector<EdgeRecord> edges_;
  std::uint64_t colocated_pairs_ = 0;
  std::uint64_t colocated_edges_ = 0;
  std::uint64_t reciprocable_ = 0;
  bool audit_ = false;
};

}  // namespace cfpr::detail
