#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "twinfock/fock_space.hpp"
#include "twinfock/state.hpp"

namespace twinfock {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

enum class LadderKind { annihilate, create, number, diagonal };

/// One elementary factor acting on a single mode. `diagonal` multiplies the
/// amplitude by weight(occupation) and is used for channel Kraus weights.
struct OpFactor {
  int mode = 0;
  LadderKind kind = LadderKind::number;
  std::function<double(int)> weight;  // only for LadderKind::diagonal
};

/// Product of factors with a scalar coefficient. Factors apply to a ket in
/// storage order: factors[0] acts first.
struct OpTerm {
  Complex coeff{1.0, 0.0};
  std::vector<OpFactor> factors;
};

/// Operator on the multimode space, kept as a sum of ladder-monomials so it
/// can be applied matrix-free on large spaces and materialized exactly on
/// small ones. Ladder matrix elements are the exact √n, √(n+1); creation out
/// of the top level truncates to zero.
class ModeOperator {
 public:
  ModeOperator(FockSpace space, std::vector<OpTerm> terms, std::string label = {})
      : space_(std::move(space)), terms_(std::move(terms)), label_(std::move(label)) {}

  static ModeOperator zero(const FockSpace& s) { return ModeOperator(s, {}, "0"); }

  static ModeOperator identity(const FockSpace& s) {
    return ModeOperator(s, {OpTerm{Complex(1.0), {}}}, "1");
  }

  const FockSpace& space() const { return space_; }
  const std::vector<OpTerm>& terms() const { return terms_; }
  const std::string& label() const { return label_; }
  ModeOperator& set_label(std::string l) { label_ = std::move(l); return *this; }

  /// Follow one basis index through a term. Returns false when the amplitude
  /// is annihilated (ladder hit the bottom or the truncation boundary).
  bool follow(const OpTerm& term, Index& idx, Complex& coeff) const {
    coeff *= term.coeff;
    for (const OpFactor& f : term.factors) {
      const int occ = space_.occupation(idx, f.mode);
      switch (f.kind) {
        case LadderKind::annihilate:
          if (occ == 0) return false;
          coeff *= std::sqrt(static_cast<double>(occ));
          idx -= space_.stride(f.mode);
          break;
        case LadderKind::create:
          if (occ == space_.cutoff(f.mode)) return false;  // hard truncation
          coeff *= std::sqrt(static_cast<double>(occ + 1));
          idx += space_.stride(f.mode);
          break;
        case LadderKind::number:
          if (occ == 0) return false;
          coeff *= static_cast<double>(occ);
          break;
        case LadderKind::diagonal:
          coeff *= f.weight(occ);
          break;
      }
    }
    return true;
  }

  Vector apply(const Vector& in) const {
    Vector out = Vector::Zero(space_.dimension());
    for (const OpTerm& term : terms_) {
      for (Index i = 0; i < in.size(); ++i) {
        if (in[i] == Complex(0.0)) continue;
        Index j = i;
        Complex c = in[i];
        if (follow(term, j, c)) out[j] += c;
      }
    }
    return out;
  }

  StateVector apply(const StateVector& psi) const {
    require_same_space(space_, psi.space, "ModeOperator::apply");
    return StateVector(space_, apply(psi.amplitudes));
  }

  SparseMatrix sparse() const {
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(terms_.size() * static_cast<std::size_t>(space_.dimension()));
    for (const OpTerm& term : terms_) {
      for (Index col = 0; col < space_.dimension(); ++col) {
        Index row = col;
        Complex c{1.0, 0.0};
        if (follow(term, row, c)) trips.emplace_back(row, col, c);
      }
    }
    SparseMatrix m(space_.dimension(), space_.dimension());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
  }

  Matrix dense() const { return Matrix(sparse()); }

  ModeOperator adjoint() const {
    std::vector<OpTerm> out;
    out.reserve(terms_.size());
    for (const OpTerm& term : terms_) {
      OpTerm t;
      t.coeff = std::conj(term.coeff);
      for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
        OpFactor f = *it;
        if (f.kind == LadderKind::annihilate)
          f.kind = LadderKind::create;
        else if (f.kind == LadderKind::create)
          f.kind = LadderKind::annihilate;
        t.factors.push_back(std::move(f));
      }
      out.push_back(std::move(t));
    }
    return ModeOperator(space_, std::move(out), label_.empty() ? "" : label_ + "^dag");
  }

 private:
  FockSpace space_;
  std::vector<OpTerm> terms_;
  std::string label_;
};

inline ModeOperator operator+(const ModeOperator& a, const ModeOperator& b) {
  require_same_space(a.space(), b.space(), "operator+");
  std::vector<OpTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return ModeOperator(a.space(), std::move(terms));
}

inline ModeOperator operator*(Complex s, const ModeOperator& a) {
  std::vector<OpTerm> terms = a.terms();
  for (OpTerm& t : terms) t.coeff *= s;
  return ModeOperator(a.space(), std::move(terms), a.label());
}

inline ModeOperator operator*(double s, const ModeOperator& a) { return Complex(s) * a; }

inline ModeOperator operator-(const ModeOperator& a, const ModeOperator& b) {
  return a + (-1.0) * b;
}

inline ModeOperator operator*(const ModeOperator& a, const ModeOperator& b) {
  require_same_space(a.space(), b.space(), "operator*");
  std::vector<OpTerm> terms;
  terms.reserve(a.terms().size() * b.terms().size());
  for (const OpTerm& ta : a.terms()) {
    for (const OpTerm& tb : b.terms()) {
      OpTerm t;
      t.coeff = ta.coeff * tb.coeff;
      t.factors = tb.factors;  // b acts first
      t.factors.insert(t.factors.end(), ta.factors.begin(), ta.factors.end());
      terms.push_back(std::move(t));
    }
  }
  return ModeOperator(a.space(), std::move(terms));
}

enum class OperatorKind { annihilate, create, number };

/// Single-mode ladder/number operator embedded in the multimode space.
inline ModeOperator mode_operator(const FockSpace& space, int mode, OperatorKind kind) {
  if (mode < 0 || mode >= space.mode_count())
    throw std::invalid_argument("mode_operator: mode out of range");
  OpTerm t;
  const char* names[] = {"a", "a_dagger", "n"};
  switch (kind) {
    case OperatorKind::annihilate: t.factors = {{mode, LadderKind::annihilate, {}}}; break;
    case OperatorKind::create: t.factors = {{mode, LadderKind::create, {}}}; break;
    case OperatorKind::number: t.factors = {{mode, LadderKind::number, {}}}; break;
  }
  return ModeOperator(space, {std::move(t)},
                      std::string(names[static_cast<int>(kind)]) + "[" + std::to_string(mode) + "]");
}

inline void require_normalized_for(const StateVector& psi, const char* where) {
  if (std::abs(psi.norm_squared() - 1.0) > 1e-8)
    throw std::invalid_argument(std::string(where) + ": state is not normalized");
}

inline Complex expectation(const StateVector& psi, const ModeOperator& op) {
  require_same_space(psi.space, op.space(), "expectation");
  require_normalized_for(psi, "expectation");
  return psi.amplitudes.dot(op.apply(psi.amplitudes));
}

inline Complex expectation(const DensityMatrix& rho, const ModeOperator& op) {
  require_same_space(rho.space, op.space(), "expectation");
  if (std::abs(rho.trace() - 1.0) > 1e-8)
    throw std::invalid_argument("expectation: density matrix trace != 1");
  // Tr(rho O) = sum_i sum_j rho(i,j) O(j,i); walk O column-wise.
  Complex tr{0.0, 0.0};
  for (const OpTerm& term : op.terms()) {
    for (Index i = 0; i < rho.space.dimension(); ++i) {
      Index j = i;
      Complex c{1.0, 0.0};
      if (op.follow(term, j, c)) tr += rho.entries(i, j) * c;
    }
  }
  return tr;
}

/// <psi|O^dag O|psi> without materializing O^dag O.
inline double squared_norm_of_applied(const StateVector& psi, const ModeOperator& op) {
  return op.apply(psi.amplitudes).squaredNorm();
}

}  // namespace twinfock
