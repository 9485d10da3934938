#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cfpr/graph.hpp"
#include "cfpr/rng.hpp"

namespace cfpr {

/// CFPR allows reciprocating edges regardless of location; the directed CFP
/// requires co-location for every formation.
enum class Variant { cfpr, cfp_directed };

std::string_view to_string(Variant v) noexcept;
Variant parse_variant(std::string_view text);

struct ProcessParams {
  std::uint32_t n_vertices = 2;  // N
  std::uint32_t n_foci = 1;      // M
  double r_f = 1.0;              // formation hazard per at-risk ordered pair
  double r_l = 5.0;              // dissolution hazard per edge
  double r_m = 0.0;              // total per-vertex migration hazard
  Variant variant = Variant::cfpr;

  /// Mean persons per focus, N / M.
  double persons_per_focus() const noexcept {
    return static_cast<double>(n_vertices) / static_cast<double>(n_foci);
  }
  /// Throws std::invalid_argument unless N >= 2, M >= 1 and all rates are
  /// finite and non-negative.
  void validate() const;

  /// Parameters with M = round(N / P), at least 1.
  static ProcessParams from_density(std::uint32_t n, double persons_per_focus, double r_f,
                                    double r_l, double r_m, Variant variant);
};

struct SystemState {
  DiGraph graph;
  std::vector<std::uint32_t> foci;  // focus of each vertex, in [0, M)
  double time = 0.0;
};

enum class EventKind : std::uint8_t { formation, dissolution, migration };
std::string_view to_string(EventKind k) noexcept;

/// One state transition. Formation/dissolution carry the ordered pair (a, b);
/// migration carries (vertex, destination focus).
struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::formation;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

/// `time kind a b` on one line.
void write_event(std::ostream& os, const EventRecord& e);

struct Rates {
  double formation = 0.0;
  double dissolution = 0.0;
  double migration = 0.0;
  double total() const noexcept { return formation + dissolution + migration; }
};

/// Raised by step() when no transition has positive hazard.
class NoEventsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bernoulli graph at the variant's fast-mixing limiting density plus
/// uniform focus assignment; time 0.
SystemState init_state(const ProcessParams& params, Rng& rng);
SystemState init_state(const ProcessParams& params, std::uint64_t seed);

/// Ordered pairs currently at risk of formation, by direct enumeration (O(N^2)).
std::vector<Edge> formation_risk_set(const SystemState& state, const ProcessParams& params);

/// Aggregate hazards of the three event categories, computed from scratch.
Rates total_rates(const SystemState& state, const ProcessParams& params);

/// Performs one transition of the competing-clocks chain in place.
EventRecord step(SystemState& state, const ProcessParams& params, Rng& rng);

struct SimulationOptions {
  /// Re-derive the risk set by enumeration after every event and check that
  /// each formation hit a member of it. Intended for N <= 20.
  bool audit = false;
  /// Called for every applied transition.
  std::function<void(const EventRecord&)> observer;
};

/// Competing-clocks (direct method) simulation from init_state to t_end.
/// The returned state is the process observed at exactly t_end.
SystemState simulate(const ProcessParams& params, double t_end, std::uint64_t seed,
                     const SimulationOptions& options = {});
SystemState simulate_from(const ProcessParams& params, SystemState state, double t_end, Rng& rng,
                          const SimulationOptions& options = {});

/// Event-representation simulation: per-dyad formation and dissolution
/// clocks and per-vertex migration clocks, with migration events to each of
/// the M foci (own focus included) at hazard r_m / M.
SystemState simulate_events(const ProcessParams& params, double t_end, std::uint64_t seed,
                            const SimulationOptions& options = {});

/// Thinned simulation with lazily sampled foci. Formation is proposed at
/// hazard r_f on every non-adjacent ordered pair and kept only if the pair is
/// at risk at that instant. Foci evolve independently of the graph, so a
/// vertex's focus is drawn from the exact migration transition law over the
/// time since it was last inspected. Equal in law to simulate(); the cost no
/// longer grows with r_m. The observer sees formation and dissolution events
/// only, since migrations are never materialised.
SystemState simulate_thinned(const ProcessParams& params, double t_end, std::uint64_t seed,
                             const SimulationOptions& options = {});

enum class Engine { direct, events, thinned };
std::string_view to_string(Engine e) noexcept;
Engine parse_engine(std::string_view text);

/// Runs the chosen engine on the process defined by `params` (per-vertex
/// migration hazard r_m to the other foci). For Engine::events the hazard is
/// converted with event_engine_equivalent_rm first.
SystemState run_engine(Engine engine, const ProcessParams& params, double t_end, std::uint64_t seed,
                       const SimulationOptions& options = {});

/// Cheaper engine for the parameters by expected event count: thinned when
/// migrations outnumber formation proposals, direct otherwise.
Engine auto_engine(const ProcessParams& params) noexcept;

/// Migration hazard for simulate_events that makes it equal in law to
/// simulate() run with `params.r_m`: r_m * M / (M - 1). Unchanged for M = 1.
double event_engine_equivalent_rm(const ProcessParams& params) noexcept;

/// Samples of the total time two fixed vertices share a focus over [0, window]
/// under migration alone, started from independent uniform foci. Each vertex
/// has migration events at total hazard r_m, each picking a focus uniformly
/// from all M. Requires M >= 2 and r_m > 0.
std::vector<double> coresidence_time(const ProcessParams& params, double window,
                                     std::size_t n_runs, std::uint64_t seed);

/// Final state as edge list plus `focus i f` lines.
void write_state(std::ostream& os, const SystemState& state);
SystemState read_state(std::istream& is);

}  // namespace cfpr
