// Command-line front end: single runs, the factorial sweep, closed-form
// quantities, ERGM diagnostics, samplers, censuses and power-law fits.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "cfpr/analytics.hpp"
#include "cfpr/ergm.hpp"
#include "cfpr/graph.hpp"
#include "cfpr/process.hpp"
#include "cfpr/stats.hpp"
#include "cfpr/sweep.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct ModelArgs {
  std::uint32_t n = 100;
  double p = 5.0;
  std::uint32_t m = 0;  // overrides P when set
  double r_f = 1.0;
  double r_l = 5.0;
  double r_m = 625.0;
  std::string variant = "CFPR";

  void attach(CLI::App* app) {
    app->add_option("-N,--vertices", n, "number of vertices")->capture_default_str();
    app->add_option("-P,--persons-per-focus", p, "mean persons per focus; M = round(N/P)")->capture_default_str();
    app->add_option("-M,--foci", m, "number of foci (overrides P)");
    app->add_option("--r_f", r_f, "formation hazard")->capture_default_str();
    app->add_option("--r_l", r_l, "dissolution hazard")->capture_default_str();
    app->add_option("--r_m", r_m, "per-vertex migration hazard")->capture_default_str();
    app->add_option("--variant", variant, "CFPR or CFP_DIRECTED")->capture_default_str();
  }

  cfpr::ProcessParams params() const {
    const auto v = cfpr::parse_variant(variant);
    if (m > 0) {
      cfpr::ProcessParams out{n, m, r_f, r_l, r_m, v};
      out.validate();
      return out;
    }
    return cfpr::ProcessParams::from_density(n, p, r_f, r_l, r_m, v);
  }
};

// Writes to `path`, or stdout when path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error(fmt::format("cannot write '{}'", path));
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

json census_json(const cfpr::DiGraph& g) {
  const auto d = cfpr::dyad_census(g);
  const auto t = cfpr::suff_stats(g);
  json j;
  j["N"] = g.size();
  j["t_e"] = t.edges;
  j["t_m"] = t.mutuals;
  j["dyad_census"] = {{"mutual", d.mutual}, {"asym", d.asym}, {"null", d.null}};
  if (g.size() >= 3) {
    const auto tc = cfpr::triad_census(g);
    json triads = json::object();
    for (std::size_t k = 0; k < 16; ++k) triads[std::string(cfpr::kTriadNames[k])] = tc[k];
    j["triad_census"] = triads;
  }
  j["mean_degree"] = cfpr::mean_degree(g);
  j["density"] = g.size() >= 2 ? json(cfpr::density(g)) : json(nullptr);
  const auto r = cfpr::edgewise_reciprocity(g);
  j["reciprocity"] = r ? json(*r) : json(nullptr);
  return j;
}

cfpr::DiGraph read_graph(const std::string& path) {
  if (path == "-") return cfpr::read_edge_list(std::cin);
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  return cfpr::read_edge_list(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and exact analytics for the contact formation process with reciprocity"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one simulation and print the final state");
  ModelArgs sim_model;
  sim_model.attach(sim);
  double t_end = 100.0;
  std::uint64_t sim_seed = 1;
  std::string sim_engine = "direct", sim_out, trajectory;
  bool audit = false;
  sim->add_option("--t-end", t_end, "observation time")->capture_default_str();
  sim->add_option("--seed", sim_seed, "random seed")->capture_default_str();
  sim->add_option("--engine", sim_engine, "direct, events or thinned")->capture_default_str();
  sim->add_option("--out", sim_out, "output file (default stdout)");
  sim->add_option("--trajectory", trajectory, "write every applied event to this file");
  sim->add_flag("--audit", audit, "recheck the risk set after every event (small N only)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run the factorial simulation study");
  std::string config_path, preset_name = "desk", sweep_out;
  std::optional<std::uint64_t> sweep_seed;
  unsigned jobs = 1;
  sweep->add_option("--config", config_path, "key = value configuration file");
  sweep->add_option("--preset", preset_name, "paper or desk")->capture_default_str();
  sweep->add_option("--seed", sweep_seed, "master seed (overrides the config)");
  sweep->add_option("--out", sweep_out, "output directory (overrides the config)");
  sweep->add_option("--jobs", jobs, "worker threads; 0 = all cores")->capture_default_str();

  // analytics
  auto* analytics = app.add_subcommand("analytics", "closed-form equilibrium quantities as JSON");
  ModelArgs an_model;
  an_model.attach(analytics);
  std::string an_out;
  analytics->add_option("--out", an_out, "output file (default stdout)");

  // ergm
  auto* ergm = app.add_subcommand("ergm", "ERGM parameters and reference-measure diagnostics as JSON");
  ModelArgs ergm_model;
  ergm_model.attach(ergm);
  std::string ergm_graph, ergm_out;
  ergm->add_option("--graph", ergm_graph, "edge-list file to evaluate");
  ergm->add_option("--out", ergm_out, "output file (default stdout)");

  // sample
  auto* sample = app.add_subcommand("sample", "draw graphs from the reference ERGM or u|man");
  ModelArgs sample_model;
  sample_model.attach(sample);
  std::string sample_kind = "ergm", sample_form = "N", sample_out;
  std::vector<std::uint64_t> census_arg;
  std::uint64_t sample_seed = 1;
  std::size_t sample_count = 1;
  sample->add_option("--model", sample_kind, "ergm or uman")->capture_default_str();
  sample->add_option("--form", sample_form, "ERGM parameterization, N or M")->capture_default_str();
  sample->add_option("--census", census_arg, "u|man dyad census: mutual asym null")->expected(3);
  sample->add_option("--seed", sample_seed, "random seed")->capture_default_str();
  sample->add_option("--count", sample_count, "number of graphs")->capture_default_str();
  sample->add_option("--out", sample_out, "output file (default stdout)");

  // census
  auto* census = app.add_subcommand("census", "dyad and triad censuses of an edge-list file");
  std::string census_in, census_out;
  census->add_option("graph", census_in, "edge-list file, or - for stdin")->required();
  census->add_option("--out", census_out, "output file (default stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "log-log power-law fit of a CSV of (N, value) rows");
  std::string fit_in, fit_out;
  fit->add_option("csv", fit_in, "CSV file; a non-numeric first line is taken as a header")->required();
  fit->add_option("--out", fit_out, "output file (default stdout)");

  // figure
  auto* figure = app.add_subcommand("figure", "emit figure data from a finished sweep directory");
  std::string fig_dir, fig_name, fig_out;
  figure->add_option("--from", fig_dir, "sweep output directory")->required();
  figure->add_option("--figure", fig_name, "meandeg, recip or triad")->required();
  figure->add_option("--out", fig_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const auto params = sim_model.params();
      cfpr::SimulationOptions options;
      options.audit = audit;
      std::unique_ptr<std::ofstream> traj;
      if (!trajectory.empty()) {
        traj = std::make_unique<std::ofstream>(trajectory, std::ios::binary);
        if (!*traj) throw std::runtime_error(fmt::format("cannot write '{}'", trajectory));
        options.observer = [&](const cfpr::EventRecord& e) { cfpr::write_event(*traj, e); };
      }
      const auto engine = cfpr::parse_engine(sim_engine);
      if (audit && engine == cfpr::Engine::thinned) throw std::invalid_argument("--audit needs the direct or events engine");
      const auto state = cfpr::run_engine(engine, params, t_end, sim_seed, options);
      Output out(sim_out);
      cfpr::write_state(out.stream(), state);
      return 0;
    }

    if (sweep->parsed()) {
      cfpr::SweepConfig config = cfpr::preset(preset_name);
      if (!config_path.empty()) config = cfpr::load_config(config_path, config);
      if (sweep_seed) config.master_seed = *sweep_seed;
      if (!sweep_out.empty()) config.output_dir = sweep_out;
      config.validate();
      const auto outcome = cfpr::run_sweep(config, jobs, &std::cerr);
      std::cerr << fmt::format("{} conditions: {} run, {} resumed, {} failed\n", outcome.results.size(),
                               outcome.completed, outcome.resumed, outcome.failed);
      return outcome.failed == 0 ? 0 : 1;
    }

    if (analytics->parsed()) {
      const auto params = an_model.params();
      json j;
      j["N"] = params.n_vertices;
      j["M"] = params.n_foci;
      j["P"] = params.persons_per_focus();
      j["variant"] = std::string(cfpr::to_string(params.variant));
      const auto c = cfpr::expected_dyad_census(params);
      const auto lc = cfpr::log_expected_dyad_census(params);
      j["rho"] = cfpr::RateRatio::of(params.r_f, params.r_l).rho;
      j["expected_dyad_census"] = {{"mutual", c.mutual}, {"asym", c.asym}, {"null", c.null}};
      j["log_expected_dyad_census"] = {{"mutual", lc.mutual}, {"asym", lc.asym}, {"null", lc.null}};
      const auto chain = cfpr::dyad_chain_stationary(params, params.variant);
      j["dyad_chain_stationary"] = {{"null", chain.null}, {"asym", chain.asym}, {"mutual", chain.mutual}};
      j["limiting_mean_degree"] = cfpr::limiting_mean_degree(params.persons_per_focus(), params.r_f, params.r_l);
      j["limiting_reciprocity"] = cfpr::limiting_reciprocity(params.r_f, params.r_l);
      j["limiting_density"] = cfpr::limiting_density(params);
      j["fast_mixing_mean_degree"] = cfpr::fast_mixing_mean_degree(params);
      j["slow_mixing_mean_degree"] = cfpr::slow_mixing_mean_degree(params);
      j["stationary_reciprocity"] = cfpr::stationary_reciprocity(params);
      Output out(an_out);
      out.stream() << j.dump(2) << '\n';
      return 0;
    }

    if (ergm->parsed()) {
      const auto params = ergm_model.params();
      const double p = params.persons_per_focus();
      const double n = params.n_vertices, m = params.n_foci;
      json j;
      j["N"] = params.n_vertices;
      j["M"] = params.n_foci;
      j["P"] = p;
      if (n > p && p >= 1.0) {
        const auto theta = cfpr::theta_params(p, n, params.r_f, params.r_l);
        j["theta"] = {{"theta_e", theta.theta_e}, {"theta_m", theta.theta_m}};
      } else {
        j["theta"] = nullptr;
      }
      const auto nform = cfpr::reference_model(p, params.r_f, params.r_l, cfpr::Parameterization::n_form, n);
      const auto mform = cfpr::reference_model(p, params.r_f, params.r_l, cfpr::Parameterization::m_form, m);
      for (const auto& [name, model] : {std::pair{"N_form", nform}, std::pair{"M_form", mform}}) {
        const auto d = cfpr::dyad_marginals(model, params.n_vertices, params.n_foci);
        json entry = {{"psi_e", model.psi_e},
                      {"psi_m", model.psi_m},
                      {"measure", std::string(cfpr::to_string(model.measure))},
                      {"base", model.base},
                      {"dyad_marginals", {{"null", d.null}, {"asym_each", d.asym_each}, {"mutual", d.mutual}}}};
        if (!ergm_graph.empty()) {
          const auto g = read_graph(ergm_graph);
          const auto t = cfpr::suff_stats(g);
          entry["graph"] = {{"t_e", t.edges},
                            {"t_m", t.mutuals},
                            {"log_reference_measure", cfpr::log_reference_measure(t.edges, t.mutuals, model)},
                            {"log_unnormalized_pmf", cfpr::log_unnormalized_pmf(g, model)}};
        }
        j[name] = entry;
      }
      Output out(ergm_out);
      out.stream() << j.dump(2) << '\n';
      return 0;
    }

    if (sample->parsed()) {
      Output out(sample_out);
      for (std::size_t k = 0; k < sample_count; ++k) {
        const std::uint64_t seed = cfpr::derive_seed(sample_seed, "sample", k);
        cfpr::DiGraph g;
        if (sample_kind == "ergm") {
          const auto params = sample_model.params();
          const bool nform = sample_form == "N";
          if (!nform && sample_form != "M") throw std::invalid_argument("--form must be N or M");
          const auto model = cfpr::reference_model(
              params.persons_per_focus(), params.r_f, params.r_l,
              nform ? cfpr::Parameterization::n_form : cfpr::Parameterization::m_form,
              nform ? params.n_vertices : params.n_foci);
          g = cfpr::sample_ergm(model, params.n_vertices, params.n_foci, seed);
        } else if (sample_kind == "uman") {
          if (census_arg.size() != 3) throw std::invalid_argument("--census mutual asym null is required for uman");
          g = cfpr::sample_uman({census_arg[0], census_arg[1], census_arg[2]}, sample_model.n, seed);
        } else {
          throw std::invalid_argument(fmt::format("unknown model '{}'", sample_kind));
        }
        if (sample_count > 1) out.stream() << "# graph " << k << '\n';
        cfpr::write_edge_list(out.stream(), g);
      }
      return 0;
    }

    if (census->parsed()) {
      Output out(census_out);
      out.stream() << census_json(read_graph(census_in)).dump(2) << '\n';
      return 0;
    }

    if (fit->parsed()) {
      std::ifstream in(fit_in);
      if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", fit_in));
      std::vector<std::pair<double, double>> points;
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double x = 0.0, y = 0.0;
        if (!(fields >> x >> y)) {
          if (line_no == 1) continue;  // header
          throw std::runtime_error(fmt::format("line {}: expected two numbers", line_no));
        }
        points.emplace_back(x, y);
      }
      const auto f = cfpr::powerlaw_fit(points);
      json j = {{"points", points.size()}, {"exponent", f.exponent}, {"intercept", f.intercept},
                {"ci_low", f.ci_low},      {"ci_high", f.ci_high},   {"std_error", f.std_error}};
      Output out(fit_out);
      out.stream() << j.dump(2) << '\n';
      return 0;
    }

    if (figure->parsed()) {
      const auto results = cfpr::load_results(fig_dir);
      std::ostringstream buffer;
      cfpr::emit_figure_data(results, fig_name, buffer);
      Output out(fig_out);
      out.stream() << buffer.str();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
