#include "kinsim/graph.hpp"

#include <bit>
#include <stdexcept>

namespace kinsim {

Adjacency::Adjacency(std::size_t n)
    : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0), degree_(n, 0) {}

bool Adjacency::add_edge(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_) throw std::out_of_range("Adjacency::add_edge: vertex out of range");
  if (i == j) throw std::invalid_argument("Adjacency::add_edge: self loop");
  if (has_edge(i, j)) return false;
  row(i)[j / 64] |= std::uint64_t{1} << (j % 64);
  row(j)[i / 64] |= std::uint64_t{1} << (i % 64);
  ++degree_[i];
  ++degree_[j];
  ++edges_;
  return true;
}

bool Adjacency::has_edge(std::size_t i, std::size_t j) const {
  return (row(i)[j / 64] >> (j % 64)) & 1U;
}

std::vector<std::size_t> Adjacency::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  out.reserve(degree_[i]);
  const std::uint64_t* r = row(i);
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = r[w];
    while (bits != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

int Adjacency::common_neighbors(std::size_t i, std::size_t j) const {
  const std::uint64_t* a = row(i);
  const std::uint64_t* b = row(j);
  int count = 0;
  for (std::size_t w = 0; w < words_; ++w) count += std::popcount(a[w] & b[w]);
  return count;
}

}  // namespace kinsim
