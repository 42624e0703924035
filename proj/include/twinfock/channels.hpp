#pragma once

#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "twinfock/errors.hpp"
#include "twinfock/operators.hpp"

namespace twinfock {

/// Completely positive map given by Kraus operators.
struct KrausChannel {
  std::vector<ModeOperator> kraus_ops;
  std::set<int> acts_on;

  const FockSpace& space() const { return kraus_ops.at(0).space(); }

  /// max |(sum K^dag K - 1)_{ij}|; zero for annihilation-only channels.
  double completeness_defect() const {
    SparseMatrix sum(space().dimension(), space().dimension());
    for (const ModeOperator& k : kraus_ops) {
      SparseMatrix m = k.sparse();
      sum += SparseMatrix(m.adjoint()) * m;
    }
    Matrix d = Matrix(sum) - Matrix::Identity(space().dimension(), space().dimension());
    return d.cwiseAbs().maxCoeff();
  }
};

/// Beamsplitter photon loss on one mode: reflectivity r is the loss
/// probability per photon, the vacuum ancilla is traced out. Kraus operator
/// K_k removes k photons, |n> -> sqrt(C(n,k)(1-r)^{n-k} r^k) |n-k>.
inline KrausChannel loss_channel(const FockSpace& space, int mode, double r) {
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("loss_channel: reflectivity outside [0,1]");
  if (mode < 0 || mode >= space.mode_count())
    throw std::invalid_argument("loss_channel: mode out of range");
  KrausChannel ch;
  ch.acts_on = {mode};
  const int levels = space.level_count(mode);
  const double survive = 1.0 - r;
  for (int k = 0; k < levels; ++k) {
    OpTerm t;
    for (int j = 0; j < k; ++j) t.factors.push_back({mode, LadderKind::annihilate, {}});
    // The k annihilations contribute sqrt(n!/(n-k)!); with m = n - k left in
    // the mode, the missing weight is sqrt((1-r)^m r^k / k!). pow(0,0) = 1
    // keeps the r = 1 and m = 0 corners exact.
    double rk_over_kfact = 1.0;
    for (int j = 1; j <= k; ++j) rk_over_kfact *= r / static_cast<double>(j);
    t.factors.push_back({mode, LadderKind::diagonal, [survive, rk_over_kfact](int m) {
                           return std::sqrt(std::pow(survive, m) * rk_over_kfact);
                         }});
    ch.kraus_ops.push_back(ModeOperator(space, {std::move(t)}, "loss_K" + std::to_string(k)));
    if (r == 0.0) break;  // only K_0 = 1 contributes
  }
  return ch;
}

/// rho -> sum_k K rho K^dag. Refuses states whose cutoff-boundary mass
/// exceeds `tail_tolerance`.
inline DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch,
                                   double tail_tolerance = 1e-3) {
  require_same_space(rho.space, ch.space(), "apply_channel");
  const double tail = rho.tail_mass();
  if (tail > tail_tolerance)
    throw truncation_error("apply_channel: state support touches the cutoff", tail);
  Matrix out = Matrix::Zero(rho.space.dimension(), rho.space.dimension());
  for (const ModeOperator& k : ch.kraus_ops) {
    SparseMatrix m = k.sparse();
    out += m * rho.entries * m.adjoint();
  }
  return DensityMatrix(rho.space, std::move(out));
}

}  // namespace twinfock
