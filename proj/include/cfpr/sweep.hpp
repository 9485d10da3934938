#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfpr/graph.hpp"
#include "cfpr/process.hpp"
#include "cfpr/stats.hpp"

namespace cfpr {

/// How the dyad-independent comparison sample is drawn.
///   expected:      every dyad independent with the condition's mean census
///                  frequencies, so the expected census equals the mean census
///   exact:         uniform over graphs with the mean census rounded to integers
///   per_replicate: draw k is uniform given replicate (k mod R)'s own census
enum class UmanMode { expected, exact, per_replicate };
std::string_view to_string(UmanMode m) noexcept;
UmanMode parse_uman_mode(std::string_view text);

struct SweepConfig {
  std::vector<std::uint32_t> n_list{50, 100, 200, 400};
  std::vector<double> p_list{5, 10, 25};
  std::vector<int> log5_rm_list{-4, -3, -2, -1, 0, 1, 2, 3, 4};
  std::size_t replicates = 500;
  double r_f = 1.0;
  double r_l = 5.0;
  double t_end = 100.0;
  std::vector<Variant> variants{Variant::cfpr, Variant::cfp_directed};
  std::uint64_t master_seed = 1;
  std::size_t uman_draws = 5000;
  UmanMode uman_mode = UmanMode::expected;
  std::optional<Engine> engine;  // nullopt: auto_engine per condition
  std::string output_dir = "sweep_out";

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// "paper": the full factorial grid. "desk": N {50, 100}, P {5, 10},
/// log5 r_m {-2, 0, 2, 4}, 100 replicates.
SweepConfig preset(std::string_view name);

/// Applies `key = value` lines on top of `base`. Lists are comma separated;
/// integer lists also accept `a..b`. `#` starts a comment. Keys: N, P,
/// log5_rm, replicates, r_f, r_l, t_end, variants, seed, uman_draws,
/// uman_mode, engine, output_dir, preset (must come first).
SweepConfig parse_config(std::istream& is, SweepConfig base = {});
SweepConfig load_config(const std::filesystem::path& path, SweepConfig base = {});
std::string to_text(const SweepConfig& config);

struct Condition {
  Variant variant = Variant::cfpr;
  std::uint32_t n = 0;
  double p = 0.0;
  int log5_rm = 0;
  double r_f = 1.0;
  double r_l = 5.0;

  double r_m() const;
  ProcessParams params() const;
  /// e.g. CFPR_N50_P5_rm-2; unique within a sweep and safe as a file name.
  std::string label() const;
};

/// Full factorial in the order variant, N, P, log5 r_m.
std::vector<Condition> conditions(const SweepConfig& config);

struct ReplicateRow {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::uint64_t t_e = 0;
  std::uint64_t t_m = 0;
  DyadCensus dyads;
  TriadCensus triads;
  double mean_degree = 0.0;
  double density = 0.0;
  std::optional<double> reciprocity;
};

struct Summary {
  MeanCI ci;
  double q025 = 0.0;
  double q975 = 0.0;
};

struct AnalyticReference {
  double limiting_mean_degree = 0.0;     // P (r_f/r_l)(r_f/r_l + 1)
  double fast_mixing_mean_degree = 0.0;  // finite N
  double slow_mixing_mean_degree = 0.0;
  double limiting_reciprocity = 0.0;
  double stationary_reciprocity = 0.0;  // variant aware
  double limiting_density = 0.0;
};

struct ConditionResult {
  Condition condition;
  std::uint32_t n_foci = 0;
  std::string engine;
  std::string status = "ok";  // "ok" or "failed"
  std::string error;
  std::vector<ReplicateRow> rows;

  std::optional<Summary> mean_degree;
  std::optional<Summary> reciprocity;
  std::size_t reciprocity_defined = 0;
  std::optional<Summary> density;
  double mean_t_e = 0.0;
  double mean_t_m = 0.0;
  std::vector<double> mean_dyad_census;   // mutual, asym, null
  std::vector<double> mean_triad_census;  // 16 classes
  std::optional<HotellingResult> hotelling;
  std::optional<double> critical_value_05;
  std::size_t uman_draws = 0;
  AnalyticReference analytic;
};

/// Simulates every replicate of one condition (in parallel over `jobs`
/// threads), draws the u|man comparison sample and aggregates. Replicate k
/// uses derive_seed(master_seed, label, k); results do not depend on jobs.
ConditionResult run_condition(const SweepConfig& config, const Condition& condition, unsigned jobs = 1);

/// Recomputes the aggregate fields of `result` from its rows.
void aggregate(ConditionResult& result);

struct SweepOutcome {
  std::vector<ConditionResult> results;
  std::size_t completed = 0;
  std::size_t resumed = 0;
  std::size_t failed = 0;
};

/// Runs all conditions, writing cond_<label>.csv / .json per condition, a
/// manifest of completed labels and summary.json into config.output_dir.
/// Conditions already listed in the manifest are loaded rather than rerun.
/// A failing condition is recorded and the sweep carries on.
SweepOutcome run_sweep(const SweepConfig& config, unsigned jobs = 1, std::ostream* log = nullptr);

void write_condition_csv(std::ostream& os, const ConditionResult& result);
void write_condition_json(std::ostream& os, const ConditionResult& result);
/// Reads a result back from the files written for it.
ConditionResult load_condition(const std::filesystem::path& dir, const std::string& label);
/// Loads every condition listed in dir/manifest.txt.
std::vector<ConditionResult> load_results(const std::filesystem::path& dir);

/// One CSV row per condition. figure: "meandeg", "recip" or "triad".
/// Throws on an unknown figure or an empty result list.
void emit_figure_data(const std::vector<ConditionResult>& results, std::string_view figure, std::ostream& os);

}  // namespace cfpr
