#include "cfpr/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "cfpr/analytics.hpp"
#include "cfpr/ergm.hpp"
#include "cfpr/parallel.hpp"
#include "json.hpp"

namespace cfpr {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(UmanMode m) noexcept {
  switch (m) {
    case UmanMode::expected: return "expected";
    case UmanMode::exact: return "exact";
    case UmanMode::per_replicate: return "per_replicate";
  }
  return "?";
}

UmanMode parse_uman_mode(std::string_view text) {
  if (text == "expected") return UmanMode::expected;
  if (text == "exact") return UmanMode::exact;
  if (text == "per_replicate") return UmanMode::per_replicate;
  throw std::invalid_argument(fmt::format("unknown uman_mode '{}'", text));
}

void SweepConfig::validate() const {
  if (n_list.empty() || p_list.empty() || log5_rm_list.empty() || variants.empty()) {
    throw std::invalid_argument("N, P, log5_rm and variants must all be non-empty");
  }
  for (auto n : n_list) {
    if (n < 3) throw std::invalid_argument(fmt::format("N = {} is too small for a triad census", n));
  }
  for (double p : p_list) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument(fmt::format("P = {} must be positive", p));
  }
  if (replicates < 2) throw std::invalid_argument("replicates must be at least 2");
  if (uman_draws < 2) throw std::invalid_argument("uman_draws must be at least 2");
  if (!(r_f > 0.0) || !(r_l > 0.0) || !std::isfinite(r_f) || !std::isfinite(r_l)) {
    throw std::invalid_argument("r_f and r_l must be positive");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  if (output_dir.empty()) throw std::invalid_argument("output_dir must be set");
}

SweepConfig preset(std::string_view name) {
  SweepConfig c;
  if (name == "paper") return c;
  if (name == "desk") {
    c.n_list = {50, 100};
    c.p_list = {5, 10};
    c.log5_rm_list = {-2, 0, 2, 4};
    c.replicates = 100;
    return c;
  }
  throw std::invalid_argument(fmt::format("unknown preset '{}' (expected paper or desk)", name));
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

template <typename T>
T parse_number(const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument(fmt::format("'{}' is not a valid number", text));
  return value;
}

std::vector<int> parse_int_list(const std::string& value) {
  std::vector<int> out;
  for (const auto& item : split_list(value)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number<int>(item));
      continue;
    }
    const int a = parse_number<int>(trim(item.substr(0, dots)));
    const int b = parse_number<int>(trim(item.substr(dots + 2)));
    if (b < a) throw std::invalid_argument(fmt::format("empty range '{}'", item));
    for (int k = a; k <= b; ++k) out.push_back(k);
  }
  return out;
}

}  // namespace

SweepConfig parse_config(std::istream& is, SweepConfig base) {
  SweepConfig c = std::move(base);
  std::string line;
  std::size_t line_no = 0;
  bool any_key = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(fmt::format("line {}: expected key = value", line_no));
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    try {
      if (key == "preset") {
        if (any_key) throw std::invalid_argument("preset must precede every other key");
        c = preset(value);
      } else if (key == "N") {
        c.n_list.clear();
        for (int n : parse_int_list(value)) {
          if (n < 0) throw std::invalid_argument("N must be positive");
          c.n_list.push_back(static_cast<std::uint32_t>(n));
        }
      } else if (key == "P") {
        c.p_list.clear();
        for (const auto& item : split_list(value)) c.p_list.push_back(parse_number<double>(item));
      } else if (key == "log5_rm") {
        c.log5_rm_list = parse_int_list(value);
      } else if (key == "replicates") {
        c.replicates = parse_number<std::size_t>(value);
      } else if (key == "r_f") {
        c.r_f = parse_number<double>(value);
      } else if (key == "r_l") {
        c.r_l = parse_number<double>(value);
      } else if (key == "t_end") {
        c.t_end = parse_number<double>(value);
      } else if (key == "variants") {
        c.variants.clear();
        for (const auto& item : split_list(value)) c.variants.push_back(parse_variant(item));
      } else if (key == "seed") {
        c.master_seed = parse_number<std::uint64_t>(value);
      } else if (key == "uman_draws") {
        c.uman_draws = parse_number<std::size_t>(value);
      } else if (key == "uman_mode") {
        c.uman_mode = parse_uman_mode(value);
      } else if (key == "engine") {
        c.engine = value == "auto" ? std::nullopt : std::optional(parse_engine(value));
      } else if (key == "output_dir") {
        c.output_dir = value;
      } else {
        throw std::invalid_argument(fmt::format("unknown key '{}'", key));
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(fmt::format("line {}: {}", line_no, e.what()));
    }
    any_key = true;
  }
  c.validate();
  return c;
}

SweepConfig load_config(const fs::path& path, SweepConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open config '{}'", path.string()));
  return parse_config(in, std::move(base));
}

std::string to_text(const SweepConfig& c) {
  std::vector<std::string> variants;
  for (auto v : c.variants) variants.emplace_back(to_string(v));
  return fmt::format(
      "N = {}\nP = {}\nlog5_rm = {}\nreplicates = {}\nr_f = {}\nr_l = {}\nt_end = {}\nvariants = {}\n"
      "seed = {}\numan_draws = {}\numan_mode = {}\nengine = {}\noutput_dir = {}\n",
      fmt::join(c.n_list, ", "), fmt::join(c.p_list, ", "), fmt::join(c.log5_rm_list, ", "), c.replicates,
      c.r_f, c.r_l, c.t_end, fmt::join(variants, ", "), c.master_seed, c.uman_draws, to_string(c.uman_mode),
      c.engine ? to_string(*c.engine) : "auto", c.output_dir);
}

double Condition::r_m() const { return std::pow(5.0, log5_rm); }

ProcessParams Condition::params() const {
  return ProcessParams::from_density(n, p, r_f, r_l, r_m(), variant);
}

std::string Condition::label() const {
  return fmt::format("{}_N{}_P{}_rm{}", to_string(variant), n, p, log5_rm);
}

std::vector<Condition> conditions(const SweepConfig& config) {
  std::vector<Condition> out;
  std::set<std::string> seen;
  for (auto v : config.variants)
    for (auto n : config.n_list)
      for (double p : config.p_list)
        for (int k : config.log5_rm_list) {
          Condition c{v, n, p, k, config.r_f, config.r_l};
          if (seen.insert(c.label()).second) out.push_back(c);
        }
  return out;
}

namespace {

ReplicateRow describe(const DiGraph& g, std::size_t replicate, std::uint64_t seed) {
  ReplicateRow row;
  row.replicate = replicate;
  row.seed = seed;
  const SuffStats t = suff_stats(g);
  row.t_e = t.edges;
  row.t_m = t.mutuals;
  row.dyads = dyad_census(g);
  row.triads = triad_census(g);
  row.mean_degree = mean_degree(g);
  row.density = density(g);
  row.reciprocity = edgewise_reciprocity(g);
  return row;
}

Summary summarize(const std::vector<double>& xs) {
  return {mean_ci(xs), quantile(xs, 0.025), quantile(xs, 0.975)};
}

AnalyticReference analytic_reference(const Condition& c) {
  const ProcessParams params = c.params();
  AnalyticReference a;
  a.limiting_mean_degree = limiting_mean_degree(c.p, c.r_f, c.r_l);
  a.fast_mixing_mean_degree = fast_mixing_mean_degree(params);
  a.slow_mixing_mean_degree = slow_mixing_mean_degree(params);
  a.limiting_reciprocity = limiting_reciprocity(c.r_f, c.r_l);
  a.stationary_reciprocity = stationary_reciprocity(params);
  a.limiting_density = limiting_density(params);
  return a;
}

}  // namespace

void aggregate(ConditionResult& r) {
  if (r.rows.empty()) throw std::invalid_argument("no replicate rows to aggregate");
  const double n = static_cast<double>(r.rows.size());
  std::vector<double> degree, recip, dens;
  r.mean_t_e = r.mean_t_m = 0.0;
  r.mean_dyad_census.assign(3, 0.0);
  r.mean_triad_census.assign(16, 0.0);
  for (const auto& row : r.rows) {
    degree.push_back(row.mean_degree);
    dens.push_back(row.density);
    if (row.reciprocity) recip.push_back(*row.reciprocity);
    r.mean_t_e += static_cast<double>(row.t_e) / n;
    r.mean_t_m += static_cast<double>(row.t_m) / n;
    r.mean_dyad_census[0] += static_cast<double>(row.dyads.mutual) / n;
    r.mean_dyad_census[1] += static_cast<double>(row.dyads.asym) / n;
    r.mean_dyad_census[2] += static_cast<double>(row.dyads.null) / n;
    for (std::size_t k = 0; k < 16; ++k) r.mean_triad_census[k] += static_cast<double>(row.triads[k]) / n;
  }
  r.mean_degree = degree.size() >= 2 ? std::optional(summarize(degree)) : std::nullopt;
  r.density = dens.size() >= 2 ? std::optional(summarize(dens)) : std::nullopt;
  r.reciprocity_defined = recip.size();
  r.reciprocity = recip.size() >= 2 ? std::optional(summarize(recip)) : std::nullopt;
}

ConditionResult run_condition(const SweepConfig& config, const Condition& condition, unsigned jobs) {
  const ProcessParams params = condition.params();
  const Engine engine = config.engine.value_or(auto_engine(params));
  const std::string label = condition.label();

  ConditionResult result;
  result.condition = condition;
  result.n_foci = params.n_foci;
  result.engine = std::string(to_string(engine));
  result.analytic = analytic_reference(condition);
  result.rows.resize(config.replicates);
  parallel_for(config.replicates, jobs, [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(config.master_seed, label, k);
    const SystemState s = run_engine(engine, params, config.t_end, seed);
    result.rows[k] = describe(s.graph, k, seed);
  });
  aggregate(result);

  // Dyad-independent comparison sample.
  const double d = static_cast<double>(dyad_count(params.n_vertices));
  const auto& mean = result.mean_dyad_census;
  const DyadDistribution expected{std::max(0.0, 1.0 - (mean[0] + mean[1]) / d), mean[1] / (2.0 * d), mean[0] / d};
  const DyadCensus rounded = round_census(mean[0], mean[1], mean[2]);
  std::vector<TriadCensus> reference(config.uman_draws);
  const std::string uman_stream = label + "/uman";
  parallel_for(config.uman_draws, jobs, [&](std::size_t k) {
    Rng rng(derive_seed(config.master_seed, uman_stream, k));
    DiGraph g;
    switch (config.uman_mode) {
      case UmanMode::expected: g = sample_dyads(expected, params.n_vertices, rng); break;
      case UmanMode::exact: g = sample_uman(rounded, params.n_vertices, rng); break;
      case UmanMode::per_replicate:
        g = sample_uman(result.rows[k % result.rows.size()].dyads, params.n_vertices, rng);
        break;
    }
    reference[k] = triad_census(g);
  });
  result.uman_draws = config.uman_draws;

  CensusSample sim{label, {}}, ref{uman_stream, {}};
  for (const auto& row : result.rows) sim.add(row.triads);
  for (const auto& c : reference) ref.add(c);
  try {
    result.hotelling = hotelling_t2(sim, ref);
    if (result.hotelling->dim > 0) {
      result.critical_value_05 = hotelling_critical_value(0.05, result.hotelling->dim, sim.rows.size(), ref.rows.size());
    }
  } catch (const std::invalid_argument& e) {
    result.error = fmt::format("hotelling: {}", e.what());
  }
  return result;
}

// ---- serialization ---------------------------------------------------------

namespace {

json summary_json(const std::optional<Summary>& s) {
  if (!s) return nullptr;
  return {{"mean", s->ci.mean}, {"ci_lo", s->ci.lo}, {"ci_hi", s->ci.hi}, {"sd", s->ci.sd},
          {"n", s->ci.n},       {"q025", s->q025},    {"q975", s->q975}};
}

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json condition_json(const ConditionResult& r) {
  const Condition& c = r.condition;
  json j;
  j["label"] = c.label();
  j["variant"] = std::string(to_string(c.variant));
  j["N"] = c.n;
  j["P"] = c.p;
  j["M"] = r.n_foci;
  j["log5_rm"] = c.log5_rm;
  j["r_m"] = c.r_m();
  j["r_f"] = c.r_f;
  j["r_l"] = c.r_l;
  j["engine"] = r.engine;
  j["status"] = r.status;
  j["error"] = r.error;
  j["replicates"] = r.rows.size();
  j["mean_degree"] = summary_json(r.mean_degree);
  j["reciprocity"] = summary_json(r.reciprocity);
  j["reciprocity_defined"] = r.reciprocity_defined;
  j["density"] = summary_json(r.density);
  j["mean_t_e"] = r.mean_t_e;
  j["mean_t_m"] = r.mean_t_m;
  j["mean_dyad_census"] = r.mean_dyad_census;
  j["mean_triad_census"] = r.mean_triad_census;
  j["uman_draws"] = r.uman_draws;
  if (r.hotelling) {
    const auto& h = *r.hotelling;
    j["hotelling"] = {{"t2", h.t2}, {"p", h.p}, {"dim", h.dim}, {"f", h.f}, {"df1", h.df1}, {"df2", h.df2}};
  } else {
    j["hotelling"] = nullptr;
  }
  j["critical_value_05"] = r.critical_value_05 ? json(*r.critical_value_05) : json(nullptr);
  const auto& a = r.analytic;
  j["analytic"] = {{"limiting_mean_degree", a.limiting_mean_degree},
                   {"fast_mixing_mean_degree", a.fast_mixing_mean_degree},
                   {"slow_mixing_mean_degree", a.slow_mixing_mean_degree},
                   {"limiting_reciprocity", a.limiting_reciprocity},
                   {"stationary_reciprocity", a.stationary_reciprocity},
                   {"limiting_density", a.limiting_density}};
  return j;
}

std::string fmt_opt(const std::optional<double>& x) { return x ? fmt::format("{}", *x) : std::string(); }

}  // namespace

void write_condition_json(std::ostream& os, const ConditionResult& result) {
  os << condition_json(result).dump(2) << '\n';
}

void write_condition_csv(std::ostream& os, const ConditionResult& result) {
  os << "replicate,seed,t_e,t_m,mutual,asym,null,mean_degree,density,reciprocity";
  for (auto name : kTriadNames) os << ",triad_" << name;
  os << '\n';
  for (const auto& r : result.rows) {
    os << fmt::format("{},{},{},{},{},{},{},{},{},{}", r.replicate, r.seed, r.t_e, r.t_m, r.dyads.mutual,
                      r.dyads.asym, r.dyads.null, r.mean_degree, r.density, fmt_opt(r.reciprocity));
    for (auto c : r.triads.counts) os << ',' << c;
    os << '\n';
  }
}

ConditionResult load_condition(const fs::path& dir, const std::string& label) {
  std::ifstream jin(dir / fmt::format("cond_{}.json", label));
  if (!jin) throw std::runtime_error(fmt::format("missing result file for {}", label));
  const json j = json::parse(jin);
  ConditionResult r;
  Condition& c = r.condition;
  c.variant = parse_variant(j.at("variant").get<std::string>());
  c.n = j.at("N").get<std::uint32_t>();
  c.p = j.at("P").get<double>();
  c.log5_rm = j.at("log5_rm").get<int>();
  c.r_f = j.at("r_f").get<double>();
  c.r_l = j.at("r_l").get<double>();
  r.n_foci = j.at("M").get<std::uint32_t>();
  r.engine = j.at("engine").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.error = j.at("error").get<std::string>();
  r.uman_draws = j.at("uman_draws").get<std::size_t>();
  if (!j.at("hotelling").is_null()) {
    const json& h = j.at("hotelling");
    r.hotelling = HotellingResult{number_or_inf(h.at("t2")), h.at("p").get<double>(), h.at("dim").get<std::size_t>(),
                                  number_or_inf(h.at("f")), h.at("df1").get<double>(), h.at("df2").get<double>()};
  }
  if (!j.at("critical_value_05").is_null()) r.critical_value_05 = j.at("critical_value_05").get<double>();
  const json& a = j.at("analytic");
  r.analytic = {a.at("limiting_mean_degree").get<double>(),   a.at("fast_mixing_mean_degree").get<double>(),
                a.at("slow_mixing_mean_degree").get<double>(), a.at("limiting_reciprocity").get<double>(),
                a.at("stationary_reciprocity").get<double>(),  a.at("limiting_density").get<double>()};

  std::ifstream cin(dir / fmt::format("cond_{}.csv", label));
  if (!cin) throw std::runtime_error(fmt::format("missing replicate file for {}", label));
  std::string line;
  std::getline(cin, line);  // header
  while (std::getline(cin, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 26) throw std::runtime_error(fmt::format("malformed replicate row for {}", label));
    ReplicateRow row;
    row.replicate = parse_number<std::size_t>(f[0]);
    row.seed = parse_number<std::uint64_t>(f[1]);
    row.t_e = parse_number<std::uint64_t>(f[2]);
    row.t_m = parse_number<std::uint64_t>(f[3]);
    row.dyads = {parse_number<std::uint64_t>(f[4]), parse_number<std::uint64_t>(f[5]),
                 parse_number<std::uint64_t>(f[6])};
    row.mean_degree = parse_number<double>(f[7]);
    row.density = parse_number<double>(f[8]);
    if (!f[9].empty()) row.reciprocity = parse_number<double>(f[9]);
    for (std::size_t k = 0; k < 16; ++k) row.triads.counts[k] = parse_number<std::uint64_t>(f[10 + k]);
    r.rows.push_back(row);
  }
  if (!r.rows.empty()) aggregate(r);
  return r;
}

namespace {

std::vector<std::string> read_manifest(const fs::path& dir) {
  std::vector<std::string> labels;
  std::ifstream in(dir / "manifest.txt");
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) labels.push_back(line);
  }
  return labels;
}

void write_file(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
    out << content;
  }
  fs::rename(tmp, path);
}

}  // namespace

std::vector<ConditionResult> load_results(const fs::path& dir) {
  std::vector<ConditionResult> out;
  for (const auto& label : read_manifest(dir)) out.push_back(load_condition(dir, label));
  return out;
}

SweepOutcome run_sweep(const SweepConfig& config, unsigned jobs, std::ostream* log) {
  config.validate();
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  write_file(dir / "config.txt", to_text(config));
  const auto done_list = read_manifest(dir);
  std::set<std::string> done(done_list.begin(), done_list.end());

  SweepOutcome outcome;
  const auto all = conditions(config);
  json summary_conditions = json::array();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Condition& c = all[i];
    const std::string label = c.label();
    ConditionResult result;
    if (done.contains(label)) {
      result = load_condition(dir, label);
      ++outcome.resumed;
      if (log) *log << fmt::format("[{}/{}] {} (from manifest)\n", i + 1, all.size(), label);
    } else {
      try {
        result = run_condition(config, c, jobs);
        std::ostringstream csv, js;
        write_condition_csv(csv, result);
        write_condition_json(js, result);
        write_file(dir / fmt::format("cond_{}.csv", label), csv.str());
        write_file(dir / fmt::format("cond_{}.json", label), js.str());
        std::ofstream(dir / "manifest.txt", std::ios::app) << label << '\n';
        ++outcome.completed;
        if (log) {
          *log << fmt::format("[{}/{}] {} mean degree {:.4f}", i + 1, all.size(), label,
                              result.mean_degree ? result.mean_degree->ci.mean : 0.0);
          if (result.hotelling) *log << fmt::format(" T2 {:.2f} p {:.3g}", result.hotelling->t2, result.hotelling->p);
          *log << '\n';
        }
      } catch (const std::exception& e) {
        result = ConditionResult{};
        result.condition = c;
        result.status = "failed";
        result.error = e.what();
        ++outcome.failed;
        if (log) *log << fmt::format("[{}/{}] {} FAILED: {}\n", i + 1, all.size(), label, e.what());
      }
    }
    json entry = {{"label", label}, {"status", result.status}};
    if (result.status == "ok") {
      entry["mean_degree"] = result.mean_degree ? json(result.mean_degree->ci.mean) : json(nullptr);
      entry["reciprocity"] = result.reciprocity ? json(result.reciprocity->ci.mean) : json(nullptr);
      entry["t2"] = result.hotelling ? json(result.hotelling->t2) : json(nullptr);
      entry["p"] = result.hotelling ? json(result.hotelling->p) : json(nullptr);
    } else {
      entry["error"] = result.error;
    }
    summary_conditions.push_back(entry);
    outcome.results.push_back(std::move(result));
  }
  const json summary = {{"config", to_text(config)},
                        {"conditions", summary_conditions},
                        {"total", all.size()},
                        {"failed", outcome.failed}};
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  return outcome;
}

void emit_figure_data(const std::vector<ConditionResult>& results, std::string_view figure, std::ostream& os) {
  if (figure != "meandeg" && figure != "recip" && figure != "triad") {
    throw std::invalid_argument(fmt::format("unknown figure '{}' (expected meandeg, recip or triad)", figure));
  }
  std::vector<const ConditionResult*> ok;
  for (const auto& r : results)
    if (r.status == "ok") ok.push_back(&r);
  if (ok.empty()) throw std::invalid_argument("no completed conditions to emit");

  auto key = [](const ConditionResult& r) {
    const Condition& c = r.condition;
    return fmt::format("{},{},{},{},{},{},{}", c.label(), to_string(c.variant), c.n, c.p, r.n_foci, c.log5_rm, c.r_m());
  };
  auto summary = [](const std::optional<Summary>& s) {
    if (!s) return std::string(",,,,");
    return fmt::format("{},{},{},{},{}", s->ci.mean, s->ci.lo, s->ci.hi, s->q025, s->q975);
  };
  const std::string head = "label,variant,N,P,M,log5_rm,r_m";
  if (figure == "meandeg") {
    os << head << ",mean,ci_lo,ci_hi,q025,q975,limiting,fast_finite_n,slow_mixing\n";
    for (const auto* r : ok) {
      os << fmt::format("{},{},{},{},{}\n", key(*r), summary(r->mean_degree), r->analytic.limiting_mean_degree,
                        r->analytic.fast_mixing_mean_degree, r->analytic.slow_mixing_mean_degree);
    }
  } else if (figure == "recip") {
    os << head << ",mean,ci_lo,ci_hi,q025,q975,limiting,stationary\n";
    for (const auto* r : ok) {
      os << fmt::format("{},{},{},{}\n", key(*r), summary(r->reciprocity), r->analytic.limiting_reciprocity,
                        r->analytic.stationary_reciprocity);
    }
  } else {
    os << head << ",t2,p,dim,critical_value_05\n";
    for (const auto* r : ok) {
      if (r->hotelling) {
        os << fmt::format("{},{},{},{},{}\n", key(*r), r->hotelling->t2, r->hotelling->p, r->hotelling->dim,
                          fmt_opt(r->critical_value_05));
      } else {
        os << key(*r) << ",,,,\n";
      }
    }
  }
}

}  // namespace cfpr
