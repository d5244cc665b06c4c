#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace kinsim {

/// Symmetric n x n matrix with a zero diagonal, stored as its strict upper
/// triangle in row-major pair order (0,1), (0,2), ..., (1,2), ...
template <class T>
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n < 2 ? 0 : n * (n - 1) / 2, T{}) {}

  std::size_t size() const { return n_; }
  std::size_t pair_count() const { return data_.size(); }

  /// Linear index of the unordered pair {i, j}, i != j.
  std::size_t pair_index(std::size_t i, std::size_t j) const {
    assert(i != j && i < n_ && j < n_);
    if (i > j) std::swap(i, j);
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

  T operator()(std::size_t i, std::size_t j) const {
    return i == j ? T{} : data_[pair_index(i, j)];
  }
  void set(std::size_t i, std::size_t j, T value) { data_[pair_index(i, j)] = value; }

  std::span<const T> pairs() const { return data_; }
  std::span<T> pairs() { return data_; }

  bool operator==(const SymmetricMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

}  // namespace kinsim
