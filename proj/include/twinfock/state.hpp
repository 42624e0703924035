#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <utility>

#include "twinfock/fock_space.hpp"

namespace twinfock {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

constexpr double kNormTol = 1e-12;

/// Pure state over a truncated Fock basis.
struct StateVector {
  FockSpace space;
  Vector amplitudes;

  StateVector(FockSpace s, Vector a) : space(std::move(s)), amplitudes(std::move(a)) {
    if (amplitudes.size() != space.dimension())
      throw std::invalid_argument("StateVector: amplitude length != dimension");
  }

  static StateVector zero(const FockSpace& s) {
    return StateVector(s, Vector::Zero(s.dimension()));
  }

  static StateVector basis(const FockSpace& s, std::initializer_list<int> occ) {
    Vector v = Vector::Zero(s.dimension());
    v[s.index_of(occ)] = 1.0;
    return StateVector(s, std::move(v));
  }

  static StateVector vacuum(const FockSpace& s) {
    Vector v = Vector::Zero(s.dimension());
    v[0] = 1.0;
    return StateVector(s, std::move(v));
  }

  double norm() const { return amplitudes.norm(); }
  double norm_squared() const { return amplitudes.squaredNorm(); }
  bool is_normalized(double tol = kNormTol) const { return std::abs(norm_squared() - 1.0) <= tol; }

  void normalize() {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("StateVector: cannot normalize zero vector");
    amplitudes /= n;
  }

  Complex amplitude(std::initializer_list<int> occ) const {
    return amplitudes[space.index_of(occ)];
  }

  /// Probability mass carried by basis states where any mode sits at its
  /// cutoff level; the accuracy budget of every truncated computation.
  double tail_mass() const {
    double tail = 0.0;
    for (Index i = 0; i < space.dimension(); ++i) {
      double p = std::norm(amplitudes[i]);
      if (p == 0.0) continue;
      for (int m = 0; m < space.mode_count(); ++m) {
        if (space.occupation(i, m) == space.cutoff(m)) {
          tail += p;
          break;
        }
      }
    }
    return tail;
  }
};

inline Complex inner(const StateVector& a, const StateVector& b) {
  require_same_space(a.space, b.space, "inner");
  return a.amplitudes.dot(b.amplitudes);
}

inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a, b));
}

/// Tensor product; modes of `a` come first.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<int> cutoffs = a.space.cutoffs();
  cutoffs.insert(cutoffs.end(), b.space.cutoffs().begin(), b.space.cutoffs().end());
  FockSpace joint(std::move(cutoffs));
  Vector v(joint.dimension());
  const Index db = b.space.dimension();
  for (Index i = 0; i < a.space.dimension(); ++i)
    v.segment(i * db, db) = a.amplitudes[i] * b.amplitudes;
  return StateVector(joint, std::move(v));
}

/// Mixed state: Hermitian, positive, unit-trace matrix over the same basis.
struct DensityMatrix {
  FockSpace space;
  Matrix entries;

  DensityMatrix(FockSpace s, Matrix m) : space(std::move(s)), entries(std::move(m)) {
    if (entries.rows() != space.dimension() || entries.cols() != space.dimension())
      throw std::invalid_argument("DensityMatrix: shape != dimension");
  }

  static DensityMatrix from_pure(const StateVector& psi) {
    return DensityMatrix(psi.space, psi.amplitudes * psi.amplitudes.adjoint());
  }

  double trace() const { return entries.trace().real(); }
  double hermiticity_defect() const { return (entries - entries.adjoint()).cwiseAbs().maxCoeff(); }
  double purity() const { return (entries * entries).trace().real(); }

  double tail_mass() const {
    double tail = 0.0;
    for (Index i = 0; i < space.dimension(); ++i) {
      for (int m = 0; m < space.mode_count(); ++m) {
        if (space.occupation(i, m) == space.cutoff(m)) {
          tail += entries(i, i).real();
          break;
        }
      }
    }
    return tail;
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
};

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> cutoffs = a.space.cutoffs();
  cutoffs.insert(cutoffs.end(), b.space.cutoffs().begin(), b.space.cutoffs().end());
  FockSpace joint(std::move(cutoffs));
  const Index da = a.space.dimension(), db = b.space.dimension();
  Matrix m(da * db, da * db);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      m.block(i * db, j * db, db, db) = a.entries(i, j) * b.entries;
  return DensityMatrix(joint, std::move(m));
}

}  // namespace twinfock
