#include <filesystem>
#include <stdexcept>
#include <map>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "cfpr/analytics.hpp"
#include "cfpr/sweep.hpp"
#include "doctest.h"

using namespace cfpr;
namespace fs = std::filesystem;

namespace {

SweepConfig tiny(const std::string& dir) {
  SweepConfig c;
  c.n_list = {12};
  c.p_list = {3};
  c.log5_rm_list = {0, 2};
  c.variants = {Variant::cfpr};
  c.replicates = 6;
  c.uman_draws = 40;
  c.t_end = 5;
  c.master_seed = 17;
  c.output_dir = (fs::temp_directory_path() / dir).string();
  fs::remove_all(c.output_dir);
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  return files;
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("defaults follow the full factorial protocol") {
    const SweepConfig c;
    CHECK(c.n_list == std::vector<std::uint32_t>{50, 100, 200, 400});
    CHECK(c.p_list == std::vector<double>{5, 10, 25});
    CHECK(c.log5_rm_list.size() == 9);
    CHECK(c.replicates == 500);
    CHECK(c.r_f == 1.0);
    CHECK(c.r_l == 5.0);
    CHECK(c.t_end == 100.0);
    CHECK(c.uman_draws == 5000);
    CHECK(conditions(c).size() == 4 * 3 * 9 * 2);
    const auto desk = preset("desk");
    CHECK(conditions(desk).size() == 2 * 2 * 4 * 2);
    CHECK(desk.replicates == 100);
    CHECK_THROWS(preset("laptop"));
  }

  TEST_CASE("config parsing") {
    std::istringstream in(
        "preset = desk\n# comment\nN = 20, 30\nlog5_rm = -1..2\nreplicates = 7  # inline\n"
        "variants = CFPR\nengine = thinned\numan_mode = exact\noutput_dir = out_x\n");
    const auto c = parse_config(in);
    CHECK(c.n_list == std::vector<std::uint32_t>{20, 30});
    CHECK(c.log5_rm_list == std::vector<int>{-1, 0, 1, 2});
    CHECK(c.p_list == std::vector<double>{5, 10});
    CHECK(c.replicates == 7);
    CHECK(c.variants == std::vector<Variant>{Variant::cfpr});
    CHECK(c.engine == Engine::thinned);
    CHECK(c.uman_mode == UmanMode::exact);
    CHECK(c.output_dir == "out_x");

    std::istringstream round_trip(to_text(c));
    const auto again = parse_config(round_trip);
    CHECK(to_text(again) == to_text(c));

    std::istringstream unknown("colour = blue\n");
    CHECK_THROWS(parse_config(unknown));
    std::istringstream bad_number("replicates = many\n");
    CHECK_THROWS(parse_config(bad_number));
    std::istringstream late_preset("N = 20\npreset = desk\n");
    CHECK_THROWS(parse_config(late_preset));
    SweepConfig empty;
    empty.p_list.clear();
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  }

  TEST_CASE("condition labels") {
    const Condition c{Variant::cfp_directed, 50, 5, -2, 1, 5};
    CHECK(c.label() == "CFP_DIRECTED_N50_P5_rm-2");
    CHECK(c.r_m() == doctest::Approx(0.04));
    CHECK(c.params().n_foci == 10);
  }

  TEST_CASE("two-replicate condition aggregates equal row means") {
    auto config = tiny("cfpr_test_two");
    config.replicates = 2;
    const auto r = run_condition(config, conditions(config).front());
    REQUIRE(r.rows.size() == 2);
    CHECK(r.mean_degree->ci.mean == doctest::Approx((r.rows[0].mean_degree + r.rows[1].mean_degree) / 2));
    CHECK(r.mean_t_e == doctest::Approx((r.rows[0].t_e + r.rows[1].t_e) / 2.0));
    CHECK(r.mean_dyad_census[2] == doctest::Approx((r.rows[0].dyads.null + r.rows[1].dyads.null) / 2.0));
    CHECK(r.hotelling.has_value());
    CHECK(r.uman_draws == config.uman_draws);
  }

  TEST_CASE("analytic columns agree with the analytics module") {
    auto config = tiny("cfpr_test_analytic");
    for (const auto& c : conditions(config)) {
      const auto r = run_condition(config, c);
      const auto p = c.params();
      CHECK(r.analytic.limiting_mean_degree == limiting_mean_degree(c.p, c.r_f, c.r_l));
      CHECK(r.analytic.fast_mixing_mean_degree == fast_mixing_mean_degree(p));
      CHECK(r.analytic.slow_mixing_mean_degree == slow_mixing_mean_degree(p));
      CHECK(r.analytic.limiting_reciprocity == limiting_reciprocity(c.r_f, c.r_l));
      CHECK(r.analytic.stationary_reciprocity == stationary_reciprocity(p));
      CHECK(r.analytic.limiting_density == limiting_density(p));
    }
  }

  TEST_CASE("serial and parallel runs write identical files") {
    auto a = tiny("cfpr_test_serial"), b = tiny("cfpr_test_parallel");
    run_sweep(a, 1);
    run_sweep(b, 3);
    auto fa = snapshot(a.output_dir), fb = snapshot(b.output_dir);
    // config.txt and summary.json embed the output directory.
    fa.erase("config.txt");
    fb.erase("config.txt");
    fa.erase("summary.json");
    fb.erase("summary.json");
    CHECK(fa == fb);
    CHECK(fa.size() == 5);

    auto c = tiny("cfpr_test_serial");
    run_sweep(c, 1);
    auto fc = snapshot(c.output_dir);
    fc.erase("config.txt");
    fc.erase("summary.json");
    CHECK(fc == fa);
  }

  TEST_CASE("resume skips completed conditions") {
    auto config = tiny("cfpr_test_resume");
    const auto first = run_sweep(config, 1);
    CHECK(first.completed == 2);
    const auto before = snapshot(config.output_dir);
    const auto second = run_sweep(config, 1);
    CHECK(second.completed == 0);
    CHECK(second.resumed == 2);
    CHECK(snapshot(config.output_dir) == before);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(second.results[k].mean_degree->ci.mean == first.results[k].mean_degree->ci.mean);
      CHECK(second.results[k].hotelling->t2 == first.results[k].hotelling->t2);
    }
  }

  TEST_CASE("CSV and JSON round trip") {
    auto config = tiny("cfpr_test_roundtrip");
    const auto outcome = run_sweep(config, 1);
    for (const auto& r : outcome.results) {
      const auto back = load_condition(config.output_dir, r.condition.label());
      REQUIRE(back.rows.size() == r.rows.size());
      for (std::size_t k = 0; k < r.rows.size(); ++k) {
        CHECK(back.rows[k].seed == r.rows[k].seed);
        CHECK(back.rows[k].mean_degree == r.rows[k].mean_degree);
        CHECK(back.rows[k].density == r.rows[k].density);
        CHECK(back.rows[k].reciprocity == r.rows[k].reciprocity);
        CHECK(back.rows[k].triads == r.rows[k].triads);
      }
      CHECK(back.mean_degree->ci.mean == r.mean_degree->ci.mean);
      CHECK(back.mean_degree->ci.hi == r.mean_degree->ci.hi);
      CHECK(back.mean_triad_census == r.mean_triad_census);
      CHECK(back.hotelling->t2 == r.hotelling->t2);
      CHECK(back.hotelling->p == r.hotelling->p);
      CHECK(back.critical_value_05 == r.critical_value_05);
    }
    CHECK(load_results(config.output_dir).size() == 2);
  }

  TEST_CASE("degenerate comparison is noted without failing the condition") {
    auto config = tiny("cfpr_test_degenerate");
    config.log5_rm_list = {0};
    config.r_f = 1e-12;  // every graph empty, every triad census identical
    const auto outcome = run_sweep(config, 1);
    REQUIRE(outcome.results.size() == 1);
    CHECK(outcome.failed == 0);
    CHECK(outcome.results[0].status == "ok");
    CHECK_FALSE(outcome.results[0].error.empty());
    CHECK_FALSE(outcome.results[0].hotelling.has_value());
  }

  TEST_CASE("figure data") {
    auto config = tiny("cfpr_test_figure");
    const auto outcome = run_sweep(config, 1);
    std::ostringstream md, rc, tr;
    emit_figure_data(outcome.results, "meandeg", md);
    emit_figure_data(outcome.results, "recip", rc);
    emit_figure_data(outcome.results, "triad", tr);
    std::istringstream lines(md.str());
    std::string header, row;
    std::getline(lines, header);
    CHECK(header.find("limiting") != std::string::npos);
    int rows = 0;
    while (std::getline(lines, row)) {
      ++rows;
      CHECK(row.find(fmt::format(",{},", limiting_mean_degree(3, 1, 5))) != std::string::npos);
    }
    CHECK(rows == 2);
    CHECK_THROWS_AS(emit_figure_data(outcome.results, "fig9", md), std::invalid_argument);
    CHECK_THROWS_AS(emit_figure_data({}, "meandeg", md), std::invalid_argument);
    std::vector<ConditionResult> failed(1);
    failed[0].status = "failed";
    CHECK_THROWS_AS(emit_figure_data(failed, "recip", md), std::invalid_argument);
  }
}
