#ifndef QFLQ_MULTI_INDEX_HPP
#define QFLQ_MULTI_INDEX_HPP

#include <cmath>
#include <compare>
#include <cstdlib>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "qflq/errors.hpp"

namespace qflq {

// Integer harmonic label n = (n_1, ..., n_d). Ordered lexicographically so
// that map iteration is deterministic.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw StructuralError("MultiIndex: needs at least one entry");
  }
  MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

  static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(static_cast<size_t>(d), 0)); }

  int dims() const { return static_cast<int>(entries_.size()); }
  int operator[](int i) const { return entries_[static_cast<size_t>(i)]; }
  const std::vector<int>& entries() const { return entries_; }

  bool is_zero() const {
    for (int e : entries_)
      if (e != 0) return false;
    return true;
  }

  int max_abs() const {
    int m = 0;
    for (int e : entries_) m = std::max(m, std::abs(e));
    return m;
  }

  MultiIndex operator+(const MultiIndex& other) const {
    require_same_dims(other);
    std::vector<int> sum(entries_);
    for (size_t i = 0; i < sum.size(); ++i) sum[i] += other.entries_[i];
    return MultiIndex(std::move(sum));
  }

  MultiIndex operator-() const {
    std::vector<int> neg(entries_);
    for (int& e : neg) e = -e;
    return MultiIndex(std::move(neg));
  }

  auto operator<=>(const MultiIndex&) const = default;

  std::string to_string() const {
    std::string s = "(";
    for (size_t i = 0; i < entries_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(entries_[i]);
    }
    return s + ")";
  }

 private:
  void require_same_dims(const MultiIndex& other) const {
    if (entries_.size() != other.entries_.size())
      throw StructuralError("MultiIndex: dimension mismatch " + to_string() + " vs " + other.to_string());
  }

  std::vector<int> entries_;
};

// Base frequencies omega = (omega_1, ..., omega_d), all strictly positive.
// Irrational independence cannot be expressed in floating point; degenerate
// choices surface through check_resonances instead of being rejected here.
class FrequencyVector {
 public:
  explicit FrequencyVector(std::vector<double> omega) : omega_(std::move(omega)) {
    if (omega_.empty()) throw StructuralError("FrequencyVector: needs at least one frequency");
    for (double w : omega_)
      if (!(w > 0.0) || !std::isfinite(w))
        throw StructuralError("FrequencyVector: frequencies must be strictly positive and finite");
  }
  FrequencyVector(std::initializer_list<double> omega) : FrequencyVector(std::vector<double>(omega)) {}

  int dims() const { return static_cast<int>(omega_.size()); }
  double operator[](int i) const { return omega_[static_cast<size_t>(i)]; }
  const std::vector<double>& entries() const { return omega_; }

  double max_entry() const {
    double m = 0.0;
    for (double w : omega_) m = std::max(m, w);
    return m;
  }

  // n . omega
  double dot(const MultiIndex& n) const {
    if (n.dims() != dims())
      throw StructuralError("FrequencyVector: index dimension " + std::to_string(n.dims()) +
                            " does not match d=" + std::to_string(dims()));
    double acc = 0.0;
    for (int i = 0; i < dims(); ++i) acc += n[i] * omega_[static_cast<size_t>(i)];
    return acc;
  }

  bool operator==(const FrequencyVector&) const = default;

 private:
  std::vector<double> omega_;
};

// Guarded divisions only ever see |n.omega| >= this scale.
inline double default_resonance_threshold(const FrequencyVector& omega) {
  return 1e-9 * omega.max_entry();
}

}  // namespace qflq

#endif
