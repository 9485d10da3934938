#include <cmath>
#include <stdexcept>

#include "cfpr/analytics.hpp"
#include "cfpr/rng.hpp"
#include "doctest.h"

using namespace cfpr;

namespace {

ProcessParams make(std::uint32_t n, std::uint32_t m, double r_f, double r_l, Variant v = Variant::cfpr) {
  return ProcessParams{n, m, r_f, r_l, 0.0, v};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ProcessParams random_params(Rng& rng) {
  const auto n = static_cast<std::uint32_t>(2 + rng.below(1'000'000 - 1));
  const auto m = static_cast<std::uint32_t>(1 + rng.below(100'000));
  const double rho = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
  return make(n, m, 1.0, rho);
}

}  // namespace

TEST_SUITE("analytics") {
  TEST_CASE("rate ratio") {
    CHECK(RateRatio::of(2, 10).rho == doctest::Approx(5.0));
    CHECK_THROWS(RateRatio::of(0, 1));
    CHECK_THROWS(RateRatio::of(1, -1));
  }

  TEST_CASE("expected dyad census examples") {
    const auto sym = expected_dyad_census(make(9, 1, 2, 2));
    CHECK(sym.mutual == doctest::Approx(36.0 / 4));
    CHECK(sym.asym == doctest::Approx(36.0 / 2));
    CHECK(sym.null == doctest::Approx(36.0 / 4));

    const auto c = expected_dyad_census(make(400, 80, 1, 5));
    CHECK(rel(c.mutual, 79800.0 / 2011) < 1e-12);
    CHECK(c.mutual == doctest::Approx(39.682).epsilon(1e-4));
    CHECK(c.asym == doctest::Approx(396.82).epsilon(1e-4));
    CHECK(c.null == doctest::Approx(79363.5).epsilon(1e-5));
    const auto chain = dyad_chain_stationary(make(400, 80, 1, 5), Variant::cfpr);
    CHECK(rel(c.mutual, 79800 * chain.mutual) < 1e-10);
    CHECK(rel(c.asym, 79800 * chain.asym) < 1e-10);
    CHECK(rel(c.null, 79800 * chain.null) < 1e-10);
  }

  TEST_CASE("census normalisation and chain agreement on random parameters") {
    Rng rng(21);
    for (int k = 0; k < 100; ++k) {
      const auto p = random_params(rng);
      const auto c = expected_dyad_census(p);
      const double d = static_cast<double>(dyad_count(p.n_vertices));
      CHECK(rel(c.total(), d) < 1e-9);
      const auto s = dyad_chain_stationary(p, Variant::cfpr);
      CHECK(rel(c.mutual, d * s.mutual) < 1e-10);
      CHECK(rel(c.asym, d * s.asym) < 1e-10);
      CHECK(rel(c.null, d * s.null) < 1e-10);
    }
  }

  TEST_CASE("log census stays finite at extreme ratios") {
    const auto l = log_expected_dyad_census(make(1'000'000, 100'000, 1, 1e3));
    CHECK(std::isfinite(l.mutual));
    CHECK(std::isfinite(l.asym));
    CHECK(std::isfinite(l.null));
    const auto c = expected_dyad_census(make(1000, 10, 1, 3));
    const auto lc = log_expected_dyad_census(make(1000, 10, 1, 3));
    CHECK(std::exp(lc.mutual) == doctest::Approx(c.mutual));
    CHECK(std::exp(lc.null) == doctest::Approx(c.null));
  }

  TEST_CASE("dyad chain limits") {
    const auto s = dyad_chain_stationary(make(10, 2, 1, 1e6), Variant::cfpr);
    CHECK(s.null > 1 - 1e-5);
    const auto d = dyad_chain_stationary(make(400, 80, 1, 5, Variant::cfp_directed), Variant::cfp_directed);
    CHECK(rel(d.mutual / d.asym, 1.0 / (2 * 80 * 5)) < 1e-10);
    CHECK(stationary_reciprocity(make(400, 80, 1, 5, Variant::cfp_directed)) == doctest::Approx(1.0 / 401));
    CHECK(stationary_reciprocity(make(400, 80, 1, 5)) == doctest::Approx(1.0 / 6));
  }

  TEST_CASE("generic CTMC solver") {
    // Two-state chain a <-> b with rates 1 and 3: pi = (3/4, 1/4).
    const auto pi = ctmc_stationary({{0, 1}, {3, 0}});
    CHECK(pi[0] == doctest::Approx(0.75));
    CHECK(pi[1] == doctest::Approx(0.25));
    CHECK_THROWS_AS(ctmc_stationary({{0, 0}, {0, 0}}), std::domain_error);
  }

  TEST_CASE("limiting mean degree and reciprocity") {
    CHECK(limiting_mean_degree(5, 1, 5) == doctest::Approx(1.2));
    CHECK(limiting_mean_degree(7, 3, 3) == doctest::Approx(14.0));
    const auto big = ProcessParams::from_density(1'000'000, 5, 1, 5, 0, Variant::cfpr);
    CHECK(rel(fast_mixing_mean_degree(big), 1.2) < 1e-3);
    CHECK(limiting_reciprocity(2, 2) == doctest::Approx(0.5));
    CHECK(limiting_reciprocity(1, 5) == doctest::Approx(1.0 / 6));
    const auto c = expected_dyad_census(big);
    CHECK(rel(c.mutual / (c.mutual + c.asym / 2), 1.0 / 6) < 1e-3);
  }

  TEST_CASE("finite-N values approach the limits monotonically") {
    double last_md = 0.0, last_density = 1.0;
    for (std::uint32_t n : {50u, 100u, 200u, 400u, 1600u, 10000u, 100000u}) {
      const auto p = ProcessParams::from_density(n, 5, 1, 5, 0, Variant::cfpr);
      const auto c = expected_dyad_census(p);
      const double md = fast_mixing_mean_degree(p);
      const double gap = std::abs(c.mutual / (c.mutual + c.asym / 2) - 1.0 / 6);
      CHECK(md > last_md);
      CHECK(gap < 1e-12);  // the finite-N census already has reciprocity exactly 1 / (1 + rho)
      CHECK(limiting_density(p) < last_density);
      last_md = md;
      last_density = limiting_density(p);
    }
    const auto p = ProcessParams::from_density(1'000'000, 5, 1, 5, 0, Variant::cfpr);
    const auto c = expected_dyad_census(p);
    CHECK(rel(c.mutual / 1e6, 0.5 * 5 * 0.04) < 1e-3);
    CHECK(rel(c.asym / 1e6, 5 * 0.2) < 1e-3);
  }

  TEST_CASE("limiting density") {
    CHECK(limiting_density(make(400, 80, 1, 5)) == doctest::Approx(2.984e-3).epsilon(1e-3));
    CHECK(limiting_density(make(12, 1, 1, 1)) == doctest::Approx(0.5));
    CHECK(limiting_density(make(12, 3, 0.0, 1)) == 0.0);
    CHECK(limiting_density(make(12, 3, 1, 0.0)) == 1.0);
    CHECK(limiting_density(make(100, 20, 1, 5, Variant::cfp_directed)) == doctest::Approx(1.0 / 101));
  }

  TEST_CASE("slow mixing reference") {
    const auto p = ProcessParams::from_density(100, 5, 1, 5, 0, Variant::cfpr);
    CHECK(slow_mixing_density(p) == doctest::Approx(1.0 / 20 / 6));
    CHECK(slow_mixing_mean_degree(p) == doctest::Approx(99.0 / 20 / 6));
  }

  TEST_CASE("foci from gamma and geometry") {
    CHECK(foci_from_gamma(400, 0.0) == 400);
    CHECK(foci_from_gamma(400, 1.0) == 1);
    CHECK(foci_from_gamma(256, 0.5) == 16);
    CHECK_THROWS(foci_from_gamma(100, -0.5));
    CHECK(foci_from_gamma(100, -0.5, true) == 1000);
    CHECK_THROWS(foci_from_gamma(100, 1.5));
    CHECK(foci_spatial(3.0, 3.0) == 1);
    CHECK_THROWS(foci_spatial(1.0, 3.0));
    CHECK(foci_hypercube(10, 2, 2) == 25);
    CHECK(log_hypercube_measure(10, 2, 10, 2, 2) == doctest::Approx(-8 * 2 * std::log(5.0)));
  }
}
