#include "catch_amalgamated.hpp"

#include <random>

#include "twinfock/channels.hpp"
#include "twinfock/entropy.hpp"
#include "twinfock/evolve.hpp"
#include "twinfock/operators.hpp"
#include "twinfock/state_factory.hpp"

using namespace twinfock;

namespace {

StateVector random_state(const FockSpace& space, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector psi = StateVector::zero(space);
  for (Index i = 0; i < space.dimension(); ++i) psi.amplitudes[i] = Complex(g(rng), g(rng));
  psi.normalize();
  return psi;
}

DensityMatrix random_density(const FockSpace& space, std::mt19937_64& rng, int terms = 3) {
  Matrix rho = Matrix::Zero(space.dimension(), space.dimension());
  std::exponential_distribution<double> w(1.0);
  double sum = 0.0;
  std::vector<double> weights(terms);
  for (double& x : weights) sum += (x = w(rng) + 1e-3);
  for (int t = 0; t < terms; ++t) {
    StateVector psi = random_state(space, rng);
    rho += (weights[t] / sum) * (psi.amplitudes * psi.amplitudes.adjoint());
  }
  return DensityMatrix(space, std::move(rho));
}

}  // namespace

TEST_CASE("index <-> occupation mapping is a bijection", "[fock-core]") {
  std::mt19937_64 rng(7);
  std::vector<FockSpace> spaces = {FockSpace::uniform(1, 2), FockSpace::uniform(2, 5),
                                   FockSpace({3, 1, 4}), FockSpace::uniform(4, 7),
                                   FockSpace({0, 2, 0})};
  for (const FockSpace& space : spaces) {
    std::uniform_int_distribution<Index> pick(0, space.dimension() - 1);
    for (int trial = 0; trial < 10000; ++trial) {
      Index idx = pick(rng);
      REQUIRE(space.index_of(space.occupation_of(idx)) == idx);
    }
    REQUIRE(space.dimension() ==
            [&] {
              Index d = 1;
              for (int c : space.cutoffs()) d *= c + 1;
              return d;
            }());
  }
}

TEST_CASE("ladder operators act with exact matrix elements", "[fock-core]") {
  FockSpace space = FockSpace::uniform(1, 2);

  StateVector one = StateVector::basis(space, {1});
  StateVector lowered = mode_operator(space, 0, OperatorKind::annihilate).apply(one);
  REQUIRE(std::abs(lowered.amplitude({0}) - 1.0) < 1e-15);

  StateVector raised = mode_operator(space, 0, OperatorKind::create).apply(one);
  REQUIRE(std::abs(raised.amplitude({2}) - std::sqrt(2.0)) < 1e-15);

  StateVector top = StateVector::basis(space, {2});
  StateVector clipped = mode_operator(space, 0, OperatorKind::create).apply(top);
  REQUIRE(clipped.norm() == 0.0);

  REQUIRE_THROWS_AS(mode_operator(space, 1, OperatorKind::annihilate), std::invalid_argument);
}

TEST_CASE("commutator [a, a^dag] = 1 below the cutoff", "[fock-core]") {
  FockSpace space = FockSpace::uniform(2, 6);
  ModeOperator a = mode_operator(space, 1, OperatorKind::annihilate);
  ModeOperator ad = mode_operator(space, 1, OperatorKind::create);
  ModeOperator comm = a * ad - ad * a;
  for (int n = 0; n < 6; ++n) {  // n = cutoff excluded: hard truncation
    for (int m = 0; m <= 6; ++m) {
      StateVector basis = StateVector::basis(space, {m, n});
      StateVector image = comm.apply(basis);
      REQUIRE(std::abs(image.amplitude({m, n}) - 1.0) < 1e-14);
      REQUIRE(std::abs(image.norm() - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("expectation values on basis states and the squeezed pair", "[fock-core]") {
  FockSpace space = FockSpace::uniform(1, 3);
  ModeOperator n = mode_operator(space, 0, OperatorKind::number);
  REQUIRE(std::abs(expectation(StateVector::vacuum(space), n)) < 1e-15);
  REQUIRE(std::abs(expectation(StateVector::basis(space, {1}), n) - 1.0) < 1e-15);

  StateVector tmss = make_tmss(SqueezingParams::from_lambda(0.5), 20);
  for (int mode : {0, 1}) {
    Complex mean = expectation(tmss, mode_operator(tmss.space, mode, OperatorKind::number));
    REQUIRE(std::abs(mean.real() - 1.0 / 3.0) < 1e-10);
    REQUIRE(std::abs(mean.imag()) < 1e-12);
  }

  SECTION("preconditions") {
    StateVector unnorm = StateVector::basis(space, {1});
    unnorm.amplitudes *= 0.5;
    REQUIRE_THROWS_AS(expectation(unnorm, n), std::invalid_argument);
    FockSpace other = FockSpace::uniform(1, 5);
    REQUIRE_THROWS_AS(expectation(StateVector::vacuum(other), n), std::invalid_argument);
  }
}

TEST_CASE("partial trace reduces correctly", "[fock-core]") {
  SECTION("vacuum") {
    FockSpace space = FockSpace::uniform(2, 2);
    DensityMatrix red = partial_trace(StateVector::vacuum(space), {0});
    REQUIRE(std::abs(red.entries(0, 0).real() - 1.0) < 1e-14);
    REQUIRE(std::abs(red.trace() - 1.0) < 1e-12);
  }

  SECTION("squeezed pair reduces to the geometric thermal state") {
    StateVector tmss = make_tmss(SqueezingParams::from_lambda(0.5), 20);
    DensityMatrix red = partial_trace(tmss, {1});
    for (int n = 0; n <= 6; ++n) {
      double expected = 0.75 * std::pow(0.25, n);
      REQUIRE(std::abs(red.entries(n, n).real() - expected) < 1e-10);
    }
    REQUIRE(std::abs(red.trace() - 1.0) < 1e-12);
  }

  SECTION("product states reduce to pure factors") {
    std::mt19937_64 rng(11);
    FockSpace side = FockSpace::uniform(1, 4);
    StateVector left = random_state(side, rng), right = random_state(side, rng);
    DensityMatrix red = partial_trace(tensor(left, right), {0});
    REQUIRE(std::abs(red.purity() - 1.0) < 1e-12);
    Matrix expected = left.amplitudes * left.amplitudes.adjoint();
    REQUIRE((red.entries - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("keep set must be a proper nonempty subset") {
    FockSpace space = FockSpace::uniform(2, 2);
    StateVector psi = StateVector::vacuum(space);
    REQUIRE_THROWS_AS(partial_trace(psi, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(partial_trace(psi, {0, 1}), std::invalid_argument);
  }
}

TEST_CASE("photon loss channel", "[fock-core]") {
  FockSpace space = FockSpace::uniform(1, 4);

  SECTION("binomial populations") {
    DensityMatrix one = DensityMatrix::from_pure(StateVector::basis(space, {1}));
    DensityMatrix lossy = apply_channel(one, loss_channel(space, 0, 0.25));
    REQUIRE(std::abs(lossy.entries(0, 0).real() - 0.25) < 1e-12);
    REQUIRE(std::abs(lossy.entries(1, 1).real() - 0.75) < 1e-12);

    DensityMatrix two = DensityMatrix::from_pure(StateVector::basis(space, {2}));
    DensityMatrix half = apply_channel(two, loss_channel(space, 0, 0.5));
    REQUIRE(std::abs(half.entries(0, 0).real() - 0.25) < 1e-12);
    REQUIRE(std::abs(half.entries(1, 1).real() - 0.5) < 1e-12);
    REQUIRE(std::abs(half.entries(2, 2).real() - 0.25) < 1e-12);
  }

  SECTION("vacuum is a fixed point, full loss maps everything to vacuum") {
    DensityMatrix vac = DensityMatrix::from_pure(StateVector::vacuum(space));
    DensityMatrix out = apply_channel(vac, loss_channel(space, 0, 0.37));
    REQUIRE((out.entries - vac.entries).cwiseAbs().maxCoeff() < 1e-14);

    std::mt19937_64 rng(3);
    DensityMatrix rho = random_density(FockSpace::uniform(1, 3), rng);
    // boundary support is fine here: loss only moves probability downward
    DensityMatrix gone = apply_channel(rho, loss_channel(rho.space, 0, 1.0), 1.0);
    REQUIRE(std::abs(gone.entries(0, 0).real() - 1.0) < 1e-12);
  }

  SECTION("completeness and trace preservation") {
    REQUIRE(loss_channel(space, 0, 0.3).completeness_defect() < 1e-12);
    std::mt19937_64 rng(5);
    FockSpace small = FockSpace::uniform(2, 5);
    for (int trial = 0; trial < 20; ++trial) {
      // support kept away from the boundary
      DensityMatrix rho = random_density(FockSpace::uniform(2, 3), rng);
      Matrix padded = Matrix::Zero(small.dimension(), small.dimension());
      for (Index i = 0; i < rho.space.dimension(); ++i)
        for (Index j = 0; j < rho.space.dimension(); ++j) {
          auto oi = rho.space.occupation_of(i), oj = rho.space.occupation_of(j);
          padded(small.index_of(oi), small.index_of(oj)) = rho.entries(i, j);
        }
      DensityMatrix embedded(small, std::move(padded));
      DensityMatrix out = apply_channel(embedded, loss_channel(small, 1, 0.41));
      REQUIRE(std::abs(out.trace() - 1.0) < 1e-10);
      REQUIRE(out.hermiticity_defect() < 1e-12);
    }
  }

  SECTION("support at the cutoff is refused with the tail mass attached") {
    DensityMatrix top = DensityMatrix::from_pure(StateVector::basis(space, {4}));
    try {
      apply_channel(top, loss_channel(space, 0, 0.2));
      FAIL("expected truncation_error");
    } catch (const truncation_error& e) {
      REQUIRE(e.tail_mass() > 0.99);
    }
  }

  SECTION("reflectivity is validated") {
    REQUIRE_THROWS_AS(loss_channel(space, 0, -0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(loss_channel(space, 0, 1.1), std::invalid_argument);
  }
}

TEST_CASE("evolve applies exp(-i t G) accurately", "[fock-core]") {
  FockSpace space = FockSpace::uniform(2, 20);

  SECTION("t = 0 is the identity") {
    StateVector psi = make_tmss(SqueezingParams::from_lambda(0.3), 20);
    ModeOperator n = mode_operator(space, 0, OperatorKind::number);
    EvolveResult res = evolve(psi, n, 0.0);
    REQUIRE((res.state.amplitudes - psi.amplitudes).norm() < 1e-15);
  }

  SECTION("pair-creation generator produces the squeezed state") {
    StateVector by_evolution = make_tmss_by_evolution(0.3, 20);
    StateVector closed_form = make_tmss(SqueezingParams::from_r(0.3), 20);
    REQUIRE(fidelity(by_evolution, closed_form) >= 1.0 - 1e-8);
  }

  SECTION("zero squeezing stays vacuum") {
    StateVector psi = make_tmss_by_evolution(0.0, 5);
    REQUIRE(std::abs(psi.amplitude({0, 0}) - 1.0) < 1e-14);
  }

  SECTION("norm drift stays below 1e-10 when the tail is negligible") {
    StateVector psi = StateVector::basis(space, {1, 1});
    ModeOperator a0 = mode_operator(space, 0, OperatorKind::annihilate);
    ModeOperator a0d = mode_operator(space, 0, OperatorKind::create);
    ModeOperator a1 = mode_operator(space, 1, OperatorKind::annihilate);
    ModeOperator a1d = mode_operator(space, 1, OperatorKind::create);
    ModeOperator hopping = a0d * a1 + a1d * a0;
    EvolveResult res = evolve(psi, hopping, 0.8);
    REQUIRE(res.norm_drift < 1e-10);
    REQUIRE(res.tail_mass < 1e-12);
  }

  SECTION("non-Hermitian generators are rejected") {
    ModeOperator bad = mode_operator(space, 0, OperatorKind::annihilate);
    REQUIRE_THROWS_AS(evolve(StateVector::vacuum(space), bad, 0.1), std::invalid_argument);
  }

  SECTION("insufficient cutoff is reported as a truncation failure") {
    try {
      make_tmss_by_evolution(1.0, 5);
      FAIL("expected truncation_error");
    } catch (const truncation_error& e) {
      REQUIRE(e.tail_mass() > 1e-9);
    }
  }
}

TEST_CASE("entanglement entropy across a cut", "[fock-core]") {
  SECTION("product state has zero entropy") {
    std::mt19937_64 rng(23);
    FockSpace side = FockSpace::uniform(1, 3);
    StateVector prod = tensor(random_state(side, rng), random_state(side, rng));
    REQUIRE(schmidt_entropy(prod, {0}) < 1e-10);
  }

  SECTION("single-excitation Bell pair gives ln 2") {
    FockSpace space = FockSpace::uniform(2, 1);
    StateVector bell = StateVector::zero(space);
    bell.amplitudes[space.index_of({0, 1})] = 1.0 / std::sqrt(2.0);
    bell.amplitudes[space.index_of({1, 0})] = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(schmidt_entropy(bell, {0}) - std::log(2.0)) < 1e-12);
  }

  SECTION("squeezed pair matches the geometric-spectrum closed form") {
    StateVector tmss = make_tmss(SqueezingParams::from_lambda(0.8), auto_cutoff(0.8));
    double closed = -std::log(0.36) - (0.64 / 0.36) * std::log(0.64);
    REQUIRE(std::abs(schmidt_entropy(tmss, {0}) - closed) < 1e-9);
    REQUIRE(std::abs(closed - 1.815050541094) < 1e-9);
  }

  SECTION("unnormalized input is rejected") {
    FockSpace space = FockSpace::uniform(2, 1);
    StateVector bad = StateVector::basis(space, {0, 0});
    bad.amplitudes *= 0.7;
    REQUIRE_THROWS_AS(schmidt_entropy(bad, {0}), std::invalid_argument);
  }
}

TEST_CASE("state plumbing: tail mass, tensor, normalization", "[fock-core]") {
  FockSpace space = FockSpace::uniform(2, 2);
  StateVector edge = StateVector::basis(space, {2, 0});
  REQUIRE(std::abs(edge.tail_mass() - 1.0) < 1e-15);
  REQUIRE(StateVector::vacuum(space).tail_mass() == 0.0);

  std::mt19937_64 rng(31);
  StateVector a = random_state(FockSpace::uniform(1, 2), rng);
  StateVector b = random_state(FockSpace::uniform(2, 1), rng);
  StateVector ab = tensor(a, b);
  REQUIRE(ab.space.mode_count() == 3);
  REQUIRE(std::abs(ab.norm() - 1.0) < 1e-12);
  REQUIRE(std::abs(std::abs(inner(ab, ab)) - 1.0) < 1e-12);
}
