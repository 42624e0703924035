#include "catch_amalgamated.hpp"

#include "twinfock/entropy.hpp"
#include "twinfock/state_factory.hpp"

using namespace twinfock;

TEST_CASE("auto cutoff follows the geometric tail bound", "[state-factory]") {
  REQUIRE(auto_cutoff(0.0) == 0);
  for (double lam : {0.3, 0.5, 0.7, 0.9}) {
    int c = auto_cutoff(lam);
    REQUIRE(std::pow(lam, 2 * (c + 1)) <= 1e-12);
    if (c > 0) REQUIRE(std::pow(lam, 2 * c) > 1e-12);
  }
  REQUIRE_THROWS_AS(auto_cutoff(1.0), std::invalid_argument);
}

TEST_CASE("closed-form squeezed pair", "[state-factory]") {
  SECTION("lambda = 0 is the two-mode vacuum") {
    StateVector psi = make_tmss(SqueezingParams::from_lambda(0.0), 2);
    REQUIRE(std::abs(psi.amplitude({0, 0}) - 1.0) < 1e-15);
  }

  SECTION("amplitudes follow sqrt(1 - lam^2) lam^n") {
    StateVector psi = make_tmss(SqueezingParams::from_lambda(0.5), 20);
    REQUIRE(std::abs(psi.amplitude({0, 0}) - std::sqrt(0.75)) < 1e-12);
    REQUIRE(std::abs(psi.amplitude({1, 1}) - std::sqrt(0.75) * 0.5) < 1e-12);
    REQUIRE(std::abs(psi.amplitude({1, 0})) == 0.0);
    REQUIRE(psi.is_normalized());
  }

  SECTION("mean occupation equals lam^2/(1 - lam^2)") {
    StateVector psi = make_tmss(SqueezingParams::from_lambda(0.5), 20);
    Complex n0 = expectation(psi, mode_operator(psi.space, 0, OperatorKind::number));
    REQUIRE(std::abs(n0.real() - 1.0 / 3.0) < 1e-10);
    // cross-check against sinh^2(artanh lam)
    double r = std::atanh(0.5);
    REQUIRE(std::abs(n0.real() - std::sinh(r) * std::sinh(r)) < 1e-10);
  }

  SECTION("invalid inputs") {
    REQUIRE_THROWS_AS(SqueezingParams::from_lambda(1.2), std::invalid_argument);
    REQUIRE_THROWS_AS(make_tmss(SqueezingParams::from_lambda(0.9), 5), truncation_error);
  }
}

TEST_CASE("four-mode pair of squeezed pairs", "[state-factory]") {
  SECTION("lambda = 0") {
    StateVector psi = make_psi1(SqueezingParams::from_lambda(0.0), 2);
    REQUIRE(std::abs(psi.amplitude({0, 0, 0, 0}) - 1.0) < 1e-15);
  }

  SECTION("total occupations per side") {
    StateVector psi = make_psi1(SqueezingParams::from_lambda(0.5), auto_cutoff(0.5));
    double n_bob = expectation(psi, mode_operator(psi.space, 0, OperatorKind::number)).real() +
                   expectation(psi, mode_operator(psi.space, 2, OperatorKind::number)).real();
    double n_alice = expectation(psi, mode_operator(psi.space, 1, OperatorKind::number)).real() +
                     expectation(psi, mode_operator(psi.space, 3, OperatorKind::number)).real();
    REQUIRE(std::abs(n_bob - 2.0 / 3.0) < 1e-10);
    REQUIRE(std::abs(n_alice - 2.0 / 3.0) < 1e-10);
  }

  SECTION("photon numbers agree exactly within each sector") {
    StateVector psi = make_psi1(SqueezingParams::from_lambda(0.6), auto_cutoff(0.6));
    const FockSpace& sp = psi.space;
    for (Index i = 0; i < sp.dimension(); ++i) {
      if (psi.amplitudes[i] == Complex(0.0)) continue;
      REQUIRE(sp.occupation(i, 0) == sp.occupation(i, 1));  // (b+, a+)
      REQUIRE(sp.occupation(i, 2) == sp.occupation(i, 3));  // (b-, a-)
    }
  }
}

TEST_CASE("four-sector state stays factorized", "[state-factory]") {
  SectoredState s = make_psi2(SqueezingParams::from_lambda(0.8), auto_cutoff(0.8));
  REQUIRE(s.sectors.size() == 4);
  StateVector reference = make_tmss(SqueezingParams::from_lambda(0.8), auto_cutoff(0.8));
  for (const auto& [label, sector] : s.sectors) {
    REQUIRE((sector.amplitudes - reference.amplitudes).norm() == 0.0);
    REQUIRE(std::abs(schmidt_entropy(sector, {0}) - 1.815050541094) < 1e-9);
  }
  REQUIRE(s.sectors[0].first == "+I");
  REQUIRE(s.sectors[3].first == "-II");

  SectoredState vac = make_psi2(SqueezingParams::from_lambda(0.0), 2);
  for (const auto& [label, sector] : vac.sectors)
    REQUIRE(std::abs(sector.amplitude({0, 0}) - 1.0) < 1e-15);
}

TEST_CASE("dynamically generated pair matches the closed form", "[state-factory]") {
  for (double r : {0.1, 0.3, 0.6}) {
    StateVector dyn = make_tmss_by_evolution(r, 20);
    StateVector closed = make_tmss(SqueezingParams::from_r(r), 20);
    REQUIRE(fidelity(dyn, closed) >= 1.0 - 1e-8);
    REQUIRE(std::abs(dyn.norm() - 1.0) < 1e-12);
  }
  REQUIRE_THROWS_AS(make_tmss_by_evolution(1.0, 5), truncation_error);
  REQUIRE_THROWS_AS(make_tmss_by_evolution(-0.5, 10), std::invalid_argument);
}

TEST_CASE("squeezing parameter conversions stay consistent", "[state-factory]") {
  for (double lam : {0.0, 0.2913126125, 0.5, 0.99}) {
    SqueezingParams p = SqueezingParams::from_lambda(lam);
    REQUIRE(std::abs(std::tanh(p.r) - p.lam) < 1e-12);
  }
  SqueezingParams q = SqueezingParams::from_r(0.3);
  REQUIRE(std::abs(q.lam - std::tanh(0.3)) < 1e-15);
  REQUIRE_THROWS_AS(SqueezingParams::from_lambda(-0.1), std::invalid_argument);
}
