#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clawham/oracle.hpp"
#include "clawham/vertex.hpp"

namespace clawham {

/// Dense vertex handle inside a Workspace.
using Vid = std::uint32_t;
inline constexpr Vid kNoVid = 0xffffffffu;

/// Interning cache over an oracle: dense ids, memoized neighbour lists and
/// levels. Interning order is arbitrary; canonical order is VertexId order,
/// available through less().
class Workspace {
 public:
  explicit Workspace(OraclePtr oracle);

  const GraphOracle& oracle() const { return *oracle_; }
  const OraclePtr& oracle_ptr() const { return oracle_; }

  Vid intern(const VertexId& v);
  std::optional<Vid> find(const VertexId& v) const;
  /// Interns after checking validity; throws InputError otherwise.
  Vid intern_checked(const VertexId& v);
  Vid intern_token(std::string_view token);

  VertexId id(Vid v) const;
  std::string token(Vid v) const { return oracle_->token(id(v)); }
  std::uint32_t level(Vid v) const { return levels_[v]; }
  std::size_t size() const { return levels_.size(); }

  /// Neighbours in VertexId order. The span stays valid for the lifetime of
  /// the workspace.
  std::span<const Vid> neighbors(Vid v);
  bool adjacent(Vid a, Vid b);
  std::size_t degree(Vid v) { return neighbors(v).size(); }

  bool less(Vid a, Vid b) const;
  void sort(std::vector<Vid>& v) const;
  Vid min_of(std::span<const Vid> v) const;

 private:
  std::uint64_t hash_words(const std::uint64_t* w) const;
  bool equal_words(Vid v, const std::uint64_t* w) const;
  void grow_table();

  static constexpr std::size_t kChunk = std::size_t{1} << 20;

  OraclePtr oracle_;
  std::size_t stride_;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint32_t> levels_;
  std::vector<Vid> table_;
  std::size_t mask_ = 0;
  std::vector<std::uint64_t> nbr_pos_;
  std::vector<std::uint32_t> nbr_len_;
  std::vector<std::unique_ptr<Vid[]>> chunks_;
  std::size_t chunk_fill_ = kChunk;
  std::vector<VertexId> scratch_;
};

}  // namespace clawham
