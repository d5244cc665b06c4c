#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace kinsim {

/// Undirected simple graph on vertices 0..n-1 stored as bit rows. Self loops
/// are rejected, so the adjacency is symmetric with a zero diagonal.
class Adjacency {
 public:
  Adjacency() = default;
  explicit Adjacency(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t edge_count() const { return edges_; }

  /// Returns false if the edge already existed. Throws on i == j.
  bool add_edge(std::size_t i, std::size_t j);
  bool has_edge(std::size_t i, std::size_t j) const;
  std::size_t degree(std::size_t i) const { return degree_[i]; }
  std::vector<std::size_t> neighbors(std::size_t i) const;

  /// |N(i) & N(j)|.
  int common_neighbors(std::size_t i, std::size_t j) const;

  bool operator==(const Adjacency&) const = default;

 private:
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }
  std::uint64_t* row(std::size_t i) { return bits_.data() + i * words_; }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> degree_;
};

}  // namespace kinsim
