#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "twinfock/state.hpp"

namespace twinfock {

namespace detail {

struct Bipartition {
  FockSpace keep_space;
  std::vector<Index> keep_index;  // per full-space basis index
  std::vector<Index> env_index;
  Index env_dimension = 0;
};

inline Bipartition split(const FockSpace& space, const std::set<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  if (static_cast<int>(keep.size()) >= space.mode_count())
    throw std::invalid_argument("partial_trace: keep set must be a proper subset of modes");
  std::vector<int> keep_cut, env_cut;
  std::vector<int> keep_modes, env_modes;
  for (int m = 0; m < space.mode_count(); ++m) {
    if (keep.count(m)) {
      keep_modes.push_back(m);
      keep_cut.push_back(space.cutoff(m));
    } else {
      env_modes.push_back(m);
      env_cut.push_back(space.cutoff(m));
    }
  }
  Bipartition bp{FockSpace(keep_cut), {}, {}, 1};
  for (int c : env_cut) bp.env_dimension *= (c + 1);
  bp.keep_index.resize(space.dimension());
  bp.env_index.resize(space.dimension());
  for (Index i = 0; i < space.dimension(); ++i) {
    Index k = 0, e = 0;
    for (int m : keep_modes) k = k * (space.cutoff(m) + 1) + space.occupation(i, m);
    for (int m : env_modes) e = e * (space.cutoff(m) + 1) + space.occupation(i, m);
    bp.keep_index[i] = k;
    bp.env_index[i] = e;
  }
  return bp;
}

}  // namespace detail

/// Reduced density matrix on `keep` (original mode order preserved).
inline DensityMatrix partial_trace(const StateVector& psi, const std::set<int>& keep) {
  auto bp = detail::split(psi.space, keep);
  const Index dk = bp.keep_space.dimension();
  Matrix cols = Matrix::Zero(dk, bp.env_dimension);
  for (Index i = 0; i < psi.space.dimension(); ++i)
    cols(bp.keep_index[i], bp.env_index[i]) = psi.amplitudes[i];
  return DensityMatrix(bp.keep_space, cols * cols.adjoint());
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<int>& keep) {
  auto bp = detail::split(rho.space, keep);
  const Index dk = bp.keep_space.dimension();
  Matrix out = Matrix::Zero(dk, dk);
  for (Index i = 0; i < rho.space.dimension(); ++i)
    for (Index j = 0; j < rho.space.dimension(); ++j)
      if (bp.env_index[i] == bp.env_index[j])
        out(bp.keep_index[i], bp.keep_index[j]) += rho.entries(i, j);
  return DensityMatrix(bp.keep_space, std::move(out));
}

/// -sum lambda ln lambda over the spectrum, in nats.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()[i];
    if (lam > 1e-15) s -= lam * std::log(lam);
  }
  return s;
}

/// Entanglement entropy of a pure state across the cut (kept modes vs rest).
inline double schmidt_entropy(const StateVector& psi, const std::set<int>& cut) {
  if (std::abs(psi.norm_squared() - 1.0) > 1e-8)
    throw std::invalid_argument("schmidt_entropy: state is not normalized/pure");
  return von_neumann_entropy(partial_trace(psi, cut));
}

}  // namespace twinfock
