#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <utility>

namespace clawham {

/// Canonical vertex identifier: a short sequence of 64-bit coordinate words.
///
/// Generators fix the word layout (a tree vertex is one word, a line-graph
/// vertex concatenates its two endpoints, a blow-up copy appends its copy
/// index). Ordering is lexicographic over the words, which makes every
/// canonical choice in the library reproducible. The textual token is
/// produced by the owning oracle.
class VertexId {
 public:
  static constexpr std::size_t kMaxWords = 4;

  constexpr VertexId() = default;
  constexpr explicit VertexId(std::uint64_t word) : words_{word, 0, 0, 0}, size_(1) {}

  /// Throws InputError when the result would exceed kMaxWords.
  static VertexId concat(const VertexId& a, const VertexId& b);
  VertexId with_suffix(std::uint64_t word) const;
  VertexId prefix(std::size_t n) const;
  VertexId suffix_from(std::size_t start) const;

  std::span<const std::uint64_t> words() const { return {words_.data(), size_}; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::uint64_t word(std::size_t i) const { return words_[i]; }
  std::uint64_t last() const { return words_[size_ - 1]; }

  friend bool operator==(const VertexId& a, const VertexId& b) {
    if (a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i)
      if (a.words_[i] != b.words_[i]) return false;
    return true;
  }
  friend std::strong_ordering operator<=>(const VertexId& a, const VertexId& b) {
    const std::size_t n = a.size_ < b.size_ ? a.size_ : b.size_;
    for (std::size_t i = 0; i < n; ++i)
      if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
    return a.size_ <=> b.size_;
  }

  std::size_t hash() const;

 private:
  std::array<std::uint64_t, kMaxWords> words_{};
  std::uint8_t size_ = 0;
};

using VertexSet = std::set<VertexId>;

/// Unordered pair of distinct vertices, smaller endpoint first.
struct Edge {
  VertexId a;
  VertexId b;

  Edge() = default;
  Edge(const VertexId& x, const VertexId& y);  // throws InputError on a loop

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeSet = std::set<Edge>;

/// Renders a vertex as its textual token.
using Namer = std::function<std::string(const VertexId&)>;

/// Default namer: decimal words joined by '.'.
std::string plain_token(const VertexId& v);

std::uint64_t mix64(std::uint64_t x);

}  // namespace clawham

template <>
struct std::hash<clawham::VertexId> {
  std::size_t operator()(const clawham::VertexId& v) const noexcept { return v.hash(); }
};
