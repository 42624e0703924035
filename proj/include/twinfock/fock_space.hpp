#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace twinfock {

using Index = std::int64_t;

/// A truncated multimode Fock space. Each mode m holds occupations
/// 0..cutoff(m); basis states are occupation tuples mapped to linear indices
/// in row-major order (mode 0 varies slowest).
class FockSpace {
 public:
  explicit FockSpace(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty()) throw std::invalid_argument("FockSpace: no modes");
    for (int c : cutoffs_)
      if (c < 0) throw std::invalid_argument("FockSpace: negative cutoff");
    strides_.assign(cutoffs_.size(), 1);
    for (int m = static_cast<int>(cutoffs_.size()) - 2; m >= 0; --m)
      strides_[m] = strides_[m + 1] * (cutoffs_[m + 1] + 1);
    dimension_ = strides_[0] * (cutoffs_[0] + 1);
  }

  static FockSpace uniform(int mode_count, int cutoff) {
    if (mode_count <= 0) throw std::invalid_argument("FockSpace: mode_count must be positive");
    return FockSpace(std::vector<int>(mode_count, cutoff));
  }

  int mode_count() const { return static_cast<int>(cutoffs_.size()); }
  int cutoff(int mode) const { return cutoffs_.at(mode); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  Index dimension() const { return dimension_; }
  Index stride(int mode) const { return strides_.at(mode); }

  int level_count(int mode) const { return cutoffs_.at(mode) + 1; }

  /// Occupation of one mode inside a basis index, without unpacking the rest.
  int occupation(Index index, int mode) const {
    return static_cast<int>((index / strides_[mode]) % (cutoffs_[mode] + 1));
  }

  std::vector<int> occupation_of(Index index) const {
    std::vector<int> occ(cutoffs_.size());
    for (int m = 0; m < mode_count(); ++m) occ[m] = occupation(index, m);
    return occ;
  }

  Index index_of(std::span<const int> occ) const {
    if (static_cast<int>(occ.size()) != mode_count())
      throw std::invalid_argument("index_of: occupation tuple has wrong length");
    Index idx = 0;
    for (int m = 0; m < mode_count(); ++m) {
      if (occ[m] < 0 || occ[m] > cutoffs_[m])
        throw std::out_of_range("index_of: occupation outside cutoff");
      idx += strides_[m] * occ[m];
    }
    return idx;
  }

  Index index_of(std::initializer_list<int> occ) const {
    return index_of(std::span<const int>(occ.begin(), occ.size()));
  }

  bool operator==(const FockSpace& other) const { return cutoffs_ == other.cutoffs_; }
  bool operator!=(const FockSpace& other) const { return !(*this == other); }

 private:
  std::vector<int> cutoffs_;
  std::vector<Index> strides_;
  Index dimension_ = 0;
};

inline void require_same_space(const FockSpace& a, const FockSpace& b, const char* where) {
  if (a != b) throw std::invalid_argument(std::string(where) + ": Fock spaces do not match");
}

}  // namespace twinfock
