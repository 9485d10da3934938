// Acceptance checks, one PASS/FAIL line per criterion.
//   cfpr_acceptance            run all
//   cfpr_acceptance --only 4   run one
// Exit status is 0 only if every selected criterion passed.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "cfpr/analytics.hpp"
#include "cfpr/ergm.hpp"
#include "cfpr/parallel.hpp"
#include "cfpr/process.hpp"
#include "cfpr/stats.hpp"
#include "cfpr/sweep.hpp"

#ifndef CFPR_CLI_PATH
#define CFPR_CLI_PATH "cfpr"
#endif

using namespace cfpr;
namespace fs = std::filesystem;

namespace {

const unsigned kJobs = std::max(1u, std::thread::hardware_concurrency());

void info(const std::string& text) { std::cout << "  info: " << text << '\n'; }

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

SweepConfig base_config() {
  SweepConfig c;
  c.uman_draws = 2;
  c.replicates = 200;
  return c;
}

ConditionResult run(const SweepConfig& config, Variant v, std::uint32_t n, double p, int log5_rm) {
  return run_condition(config, Condition{v, n, p, log5_rm, config.r_f, config.r_l}, kJobs);
}

// ---------------------------------------------------------------------------

bool census_oracle() {
  Rng rng(derive_seed(2024, "acceptance/1", 0));
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto n = static_cast<std::uint32_t>(2 + rng.below(1'000'000 - 1));
    const auto m = static_cast<std::uint32_t>(1 + rng.below(std::min<std::uint64_t>(n, 100'000)));
    const double rho = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
    const ProcessParams params{n, m, 1.0, rho, 0.0, Variant::cfpr};
    const auto c = expected_dyad_census(params);
    const auto s = dyad_chain_stationary(params, Variant::cfpr);
    const double d = static_cast<double>(dyad_count(n));
    worst = std::max({worst, rel_err(c.mutual, d * s.mutual), rel_err(c.asym, d * s.asym), rel_err(c.null, d * s.null)});
  }
  info(fmt::format("largest relative difference over 1000 parameter sets: {:.3g}", worst));
  return worst <= 1e-10;
}

bool mean_degree_convergence() {
  bool ok = true;
  const auto config = base_config();
  for (double p : {5.0, 10.0}) {
    const auto fast = run(config, Variant::cfpr, 100, p, 4);
    const auto& ci = fast.mean_degree->ci;
    const double target = p * 0.2 * 1.2;
    const bool hit = ci.lo <= target && target <= ci.hi;
    info(fmt::format("P={} r_m=625: mean degree {:.4f} CI ({:.4f}, {:.4f}); limit {:.4f} {}; finite-N fast-mixing value {:.4f}",
                     p, ci.mean, ci.lo, ci.hi, target, hit ? "inside" : "outside",
                     fast.analytic.fast_mixing_mean_degree));
    ok = ok && hit;

    const auto slow = run(config, Variant::cfpr, 100, p, -4);
    const double ref = slow.analytic.slow_mixing_mean_degree;
    const double dev = rel_err(slow.mean_degree->ci.mean, ref);
    info(fmt::format("P={} r_m=5^-4: mean degree {:.4f}, slow-mixing construction {:.4f}, deviation {:.2f}%", p,
                     slow.mean_degree->ci.mean, ref, 100 * dev));
    ok = ok && dev <= 0.05;
  }
  return ok;
}

bool reciprocity_constancy() {
  bool ok = true;
  const auto config = base_config();
  for (int k : {-2, 0, 2, 4}) {
    const auto r = run(config, Variant::cfpr, 100, 5, k);
    const auto& ci = r.reciprocity->ci;
    const bool hit = ci.lo <= 1.0 / 6 && 1.0 / 6 <= ci.hi;
    info(fmt::format("CFPR r_m=5^{}: reciprocity {:.4f} CI ({:.4f}, {:.4f}) over {} graphs with edges; {}", k, ci.mean,
                     ci.lo, ci.hi, r.reciprocity_defined, hit ? "contains 1/6" : "misses 1/6"));
    ok = ok && hit;
  }
  const auto d = run(config, Variant::cfp_directed, 100, 5, 4);
  info(fmt::format("CFP_DIRECTED r_m=625: reciprocity {:.4f} (stationary value {:.4f})", d.reciprocity->ci.mean,
                   d.analytic.stationary_reciprocity));
  return ok && d.reciprocity->ci.mean < 0.08;
}

bool dyadic_independence() {
  SweepConfig config;
  config.replicates = 500;
  config.uman_draws = 5000;
  int fast_ok = 0, slow_ok = 0;
  std::string fast_p, slow_p;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    config.master_seed = seed;
    const auto fast = run(config, Variant::cfpr, 50, 5, 4);
    const auto slow = run(config, Variant::cfpr, 50, 5, -2);
    const double pf = fast.hotelling ? fast.hotelling->p : 0.0;
    const double ps = slow.hotelling ? slow.hotelling->p : 1.0;
    fast_ok += pf > 0.05;
    slow_ok += ps < 0.001;
    fast_p += fmt::format(" {:.3g}", pf);
    slow_p += fmt::format(" {:.3g}", ps);
  }
  info("r_m=625 p-values:" + fast_p);
  info("r_m=5^-2 p-values:" + slow_p);
  info(fmt::format("seeds with p > 0.05 at r_m=625: {}/10; with p < 0.001 at r_m=5^-2: {}/10", fast_ok, slow_ok));
  return fast_ok >= 8 && slow_ok >= 8;
}

bool ergm_equivalence() {
  const std::uint32_t n = 50;
  const auto params = ProcessParams::from_density(n, 5, 1, 5, 625, Variant::cfpr);
  const std::size_t reps = 500, draws = 5000;
  std::vector<SuffStats> sim(reps), ergm(draws);
  parallel_for(reps, kJobs, [&](std::size_t k) {
    sim[k] = suff_stats(run_engine(auto_engine(params), params, 100, derive_seed(5, "acceptance/5/sim", k)).graph);
  });
  const auto model = reference_model(params.persons_per_focus(), 1, 5, Parameterization::n_form, n);
  parallel_for(draws, kJobs, [&](std::size_t k) {
    ergm[k] = suff_stats(sample_ergm(model, n, params.n_foci, derive_seed(5, "acceptance/5/ergm", k)));
  });
  CensusSample a, b;
  for (const auto& s : sim) a.add(std::vector<double>{double(s.edges), double(s.mutuals)});
  for (const auto& s : ergm) b.add(std::vector<double>{double(s.edges), double(s.mutuals)});
  const auto h = hotelling_t2(a, b);
  double te_sim = 0, te_ergm = 0;
  for (const auto& row : a.rows) te_sim += row[0] / reps;
  for (const auto& row : b.rows) te_ergm += row[0] / draws;
  info(fmt::format("mean t_e: simulation {:.3f}, ERGM {:.3f}; T2 {:.3f}, p {:.3g}", te_sim, te_ergm, h.t2, h.p));

  Rng rng(derive_seed(5, "acceptance/5/marginals", 0));
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto m = static_cast<std::uint32_t>(1 + rng.below(10'000));
    const auto nn = static_cast<std::uint32_t>(m + 1 + rng.below(1'000'000));
    const double r_l = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
    const ProcessParams pp{nn, m, 1.0, r_l, 0.0, Variant::cfpr};
    const auto c = expected_dyad_census(pp);
    const double d = static_cast<double>(dyad_count(nn));
    for (auto form : {Parameterization::n_form, Parameterization::m_form}) {
      const double base = form == Parameterization::n_form ? double(nn) : double(m);
      const auto dm = dyad_marginals(reference_model(pp.persons_per_focus(), 1.0, r_l, form, base), nn, m);
      worst = std::max({worst, rel_err(dm.mutual, c.mutual / d), rel_err(2 * dm.asym_each, c.asym / d),
                        rel_err(dm.null, c.null / d)});
    }
  }
  info(fmt::format("dyad_marginals vs census-derived dyad law, largest relative difference: {:.3g}", worst));
  return h.p > 0.01 && worst <= 1e-12;
}

bool scaling_fits() {
  auto config = base_config();
  config.replicates = 100;
  std::vector<std::pair<double, double>> dens, recip, dens_means, recip_means;
  for (std::uint32_t n : {50u, 100u, 200u, 400u}) {
    const auto r = run(config, Variant::cfpr, n, 5, 4);
    for (const auto& row : r.rows) {
      dens.emplace_back(n, row.density);
      if (row.reciprocity && *row.reciprocity > 0) recip.emplace_back(n, *row.reciprocity);
    }
    dens_means.emplace_back(n, r.density->ci.mean);
    recip_means.emplace_back(n, r.reciprocity->ci.mean);
    info(fmt::format("N={}: density {:.5g} (fast-mixing value {:.5g}), reciprocity {:.4f}", n, r.density->ci.mean,
                     r.analytic.limiting_density, r.reciprocity->ci.mean));
  }
  const auto fd = powerlaw_fit(dens), fr = powerlaw_fit(recip);
  info(fmt::format("per-network fit: density exponent {:.4f} CI ({:.4f}, {:.4f}); reciprocity exponent {:.4f} CI ({:.4f}, {:.4f})",
                   fd.exponent, fd.ci_low, fd.ci_high, fr.exponent, fr.ci_low, fr.ci_high));
  const auto md = powerlaw_fit(dens_means), mr = powerlaw_fit(recip_means);
  info(fmt::format("condition-mean fit: density exponent {:.4f} CI ({:.4f}, {:.4f}); reciprocity exponent {:.4f} CI ({:.4f}, {:.4f})",
                   md.exponent, md.ci_low, md.ci_high, mr.exponent, mr.ci_low, mr.ci_high));
  std::vector<std::pair<double, double>> exact;
  for (std::uint32_t n : {50u, 100u, 200u, 400u})
    exact.emplace_back(n, limiting_density(ProcessParams::from_density(n, 5, 1, 5, 625, Variant::cfpr)));
  info(fmt::format("exponent of the exact finite-N fast-mixing densities: {:.4f}", powerlaw_fit(exact).exponent));
  return fd.ci_low <= -1.0 && -1.0 <= fd.ci_high && fr.ci_low <= 0.0 && 0.0 <= fr.ci_high;
}

bool engine_cross_validation() {
  struct Case {
    Variant v;
    std::uint32_t n;
    double p;
    double r_m;
    std::size_t reps;
  };
  const std::vector<Case> grid = {{Variant::cfpr, 20, 5, 1, 300},          {Variant::cfpr, 50, 5, 25, 500},
                                  {Variant::cfpr, 50, 10, 0.2, 300},       {Variant::cfpr, 30, 3, 5, 300},
                                  {Variant::cfp_directed, 20, 5, 1, 300},  {Variant::cfp_directed, 50, 5, 25, 300}};
  const double t_end = 20.0;
  const double alpha = 0.01 / static_cast<double>(grid.size());
  bool ok = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& c = grid[i];
    const auto params = ProcessParams::from_density(c.n, c.p, 1, 5, c.r_m, c.v);
    std::vector<DiGraph> out[3];
    const Engine engines[3] = {Engine::direct, Engine::events, Engine::thinned};
    for (int e = 0; e < 3; ++e) {
      out[e].resize(c.reps);
      const std::string stream = fmt::format("acceptance/7/{}/{}", i, to_string(engines[e]));
      parallel_for(c.reps, kJobs, [&](std::size_t k) {
        out[e][k] = run_engine(engines[e], params, t_end, derive_seed(7, stream, k)).graph;
      });
    }
    CensusSample s[3], dyads[3];
    for (int e = 0; e < 3; ++e)
      for (const auto& g : out[e]) {
        const auto t = suff_stats(g);
        s[e].add(std::vector<double>{double(t.edges), double(t.mutuals)});
        dyads[e].add(dyad_census(g));
      }
    const auto direct_events = hotelling_t2(s[0], s[1]);
    const auto direct_thinned = hotelling_t2(s[0], s[2]);
    const bool pass = direct_events.p > alpha;
    ok = ok && pass;
    std::string extra;
    if (c.reps == 500) extra = fmt::format(", dyad census p {:.3g}", hotelling_t2(dyads[0], dyads[1]).p);
    info(fmt::format("{} N={} M={} r_m={}: direct vs events p {:.3g}{}{}; direct vs thinned p {:.3g}", to_string(c.v),
                     c.n, params.n_foci, c.r_m, direct_events.p, pass ? "" : " (below corrected alpha)", extra,
                     direct_thinned.p));
  }
  return ok;
}

bool coresidence_moments() {
  const ProcessParams params{2, 10, 1, 1, 100, Variant::cfpr};
  const auto c = coresidence_time(params, 1.0, 10000, derive_seed(8, "acceptance/8", 0));
  const auto ci = mean_ci(c);
  const double se = ci.sd / std::sqrt(static_cast<double>(c.size()));
  const double var = ci.sd * ci.sd;
  const bool mean_ok = std::abs(ci.mean - 0.1) <= 3 * se;
  const bool var_ok = std::abs(var - 1e-3) <= 0.2e-3;
  info(fmt::format("mean {:.5f} (target 0.1, 3 SE = {:.5f}); variance {:.4e} (target 1e-3, {:+.1f}%)", ci.mean,
                   3 * se, var, 100 * (var / 1e-3 - 1)));
  return mean_ok && var_ok;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return files;
}

bool cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "cfpr_acceptance_9";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "sweep.cfg");
    cfg << "preset = desk\nN = 20, 30\nP = 5\nlog5_rm = -1, 2\nreplicates = 12\numan_draws = 50\nt_end = 10\n";
  }
  const std::string cli = CFPR_CLI_PATH;
  const std::vector<std::string> commands = {
      "simulate -N 40 -P 5 --r_m 25 --seed 9 --engine direct --out {dir}/sim_direct.txt",
      "simulate -N 40 -P 5 --r_m 25 --seed 9 --engine events --out {dir}/sim_events.txt",
      "simulate -N 40 -P 5 --r_m 25 --seed 9 --engine thinned --out {dir}/sim_thinned.txt",
      "sample --model ergm -N 30 -P 5 --seed 4 --count 3 --out {dir}/ergm.txt",
      "sample --model uman -N 30 --census 10 40 385 --seed 4 --count 3 --out {dir}/uman.txt",
      "analytics -N 100 -P 5 --out {dir}/analytics.json",
      "sweep --config {root}/sweep.cfg --seed 3 --out {dir}/sweep --jobs {jobs} > {dir}/sweep.log 2>&1",
      "figure --from {dir}/sweep --figure triad --out {dir}/triad.csv",
  };
  auto run_all = [&](const fs::path& dir, unsigned jobs) {
    fs::create_directories(dir);
    for (const auto& c : commands) {
      std::string line = cli + " " + c;
      for (auto [key, value] : {std::pair<std::string, std::string>{"{dir}", dir.string()},
                                {"{root}", root.string()}, {"{jobs}", std::to_string(jobs)}}) {
        for (auto pos = line.find(key); pos != std::string::npos; pos = line.find(key)) line.replace(pos, key.size(), value);
      }
      if (std::system(line.c_str()) != 0) throw std::runtime_error("command failed: " + line);
    }
  };
  // Same output path for every run, so the recorded config text matches too.
  const fs::path work = root / "work";
  std::map<std::string, std::string> runs[3];
  const unsigned jobs[3] = {1, 1, 4};
  for (int i = 0; i < 3; ++i) {
    fs::remove_all(work);
    run_all(work, jobs[i]);
    runs[i] = snapshot(work);
  }
  const bool repeat = runs[0] == runs[1];
  const bool parallel = runs[0] == runs[2];
  info(fmt::format("{} files compared; serial repeat {}, serial vs 4 threads {}", runs[0].size(),
                   repeat ? "identical" : "DIFFERENT", parallel ? "identical" : "DIFFERENT"));
  fs::remove_all(root);
  return repeat && parallel && runs[0].size() >= 10;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: cfpr_acceptance [--only K]\n";
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<bool()>>> criteria = {
      {"census oracle equality", census_oracle},
      {"mean-degree convergence", mean_degree_convergence},
      {"reciprocity constancy", reciprocity_constancy},
      {"dyadic independence", dyadic_independence},
      {"ERGM/process equivalence", ergm_equivalence},
      {"scaling fits", scaling_fits},
      {"engine cross-validation", engine_cross_validation},
      {"co-residence moments", coresidence_moments},
      {"determinism", cli_determinism},
  };
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "no criterion " << only << '\n';
    return 2;
  }
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<int>(k + 1) != only) continue;
    bool pass = false;
    std::string error;
    try {
      pass = criteria[k].second();
    } catch (const std::exception& e) {
      error = e.what();
    }
    std::cout << fmt::format("criterion {} ({}): {}{}\n", k + 1, criteria[k].first, pass ? "PASS" : "FAIL",
                             error.empty() ? "" : " error: " + error)
              << std::flush;
    all = all && pass;
  }
  return all ? 0 : 1;
}
