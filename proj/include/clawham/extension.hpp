#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clawham/cycle.hpp"
#include "clawham/errors.hpp"
#include "clawham/oracle.hpp"
#include "clawham/workspace.hpp"

namespace clawham {

/// TYPE1: v goes between the base and a cycle neighbour of the base.
/// TYPE2_1: v and an off-cycle w go between them.
/// TYPE2_2: an on-cycle w is lifted out (w-w+ closes the gap) and re-inserted
/// next to v.
enum class ExtensionKind { Type1, Type2_1, Type2_2 };

std::string_view kind_name(ExtensionKind k);  // "1", "2.1", "2.2"
ExtensionKind parse_kind(std::string_view name);

struct ExtensionRecord {
  ExtensionKind kind = ExtensionKind::Type1;
  VertexId target;
  VertexId base;
  /// The removed base edge.
  Edge foundation;
  std::optional<VertexId> w;
  /// True when the far endpoint of the foundation is base+, false for base-.
  bool successor_side = true;

  const VertexId& far_end() const { return foundation.a == base ? foundation.b : foundation.a; }
  friend bool operator==(const ExtensionRecord&, const ExtensionRecord&) = default;
};

struct ExtensionFilters {
  /// Admissible bases; all cycle neighbours of the target when empty.
  std::function<bool(const VertexId&)> base_filter;
  /// Vertices never used as w.
  VertexSet forbidden_w;
};

class ExtensionError : public HypothesisViolation {
 public:
  enum class Reason { NotAdjacent, Claw, PhiAbsent, FiltersExhausted };
  ExtensionError(Reason r, const std::string& what) : HypothesisViolation(what), reason_(r) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

/// Preference TYPE1 > TYPE2_1 > TYPE2_2; inside a type the smallest base,
/// the successor side first, then the smallest w.
ExtensionRecord find_extension(const GraphOracle& o, const OrientedCycle& c, const VertexId& v,
                               const ExtensionFilters& filters = {});

/// Throws InputError when the record does not fit c.
OrientedCycle apply_extension(const OrientedCycle& c, const ExtensionRecord& rec);

/// Cycle over workspace ids with O(1) splices.
class CycleBuilder {
 public:
  CycleBuilder() = default;
  explicit CycleBuilder(std::span<const Vid> sequence) { assign(sequence); }

  void assign(std::span<const Vid> sequence);
  bool contains(Vid v) const { return v < succ_.size() && succ_[v] != kNoVid; }
  Vid succ(Vid v) const { return succ_[v]; }
  Vid pred(Vid v) const { return pred_[v]; }
  std::size_t length() const { return length_; }
  Vid anchor() const { return anchor_; }

  /// u -> v -> old succ(u). v must be off the cycle.
  void insert_after(Vid u, Vid v);
  /// pred(w) -> succ(w); w leaves the cycle.
  void unlink(Vid w);
  bool has_edge(Vid a, Vid b) const { return contains(a) && (succ_[a] == b || pred_[a] == b); }

  std::vector<Vid> sequence_from(Vid start) const;

 private:
  void ensure(Vid v);

  std::vector<Vid> succ_;
  std::vector<Vid> pred_;
  std::size_t length_ = 0;
  Vid anchor_ = kNoVid;
};

/// Extension record over workspace ids. x is the far end of the foundation.
struct DenseRecord {
  ExtensionKind kind = ExtensionKind::Type1;
  Vid v = kNoVid;
  Vid u = kNoVid;
  Vid x = kNoVid;
  Vid w = kNoVid;
  bool plus = true;
};

struct DenseFilters {
  const std::function<bool(Vid)>* base = nullptr;
  const std::function<bool(Vid)>* forbidden_w = nullptr;
  bool type1 = true;
  bool type2_1 = true;
  bool type2_2 = true;
};

/// Why a search came back empty.
struct SearchDiagnosis {
  ExtensionError::Reason reason = ExtensionError::Reason::FiltersExhausted;
  std::string detail;
};

std::optional<DenseRecord> search_extension(Workspace& ws, const CycleBuilder& c, Vid v, const DenseFilters& f,
                                            SearchDiagnosis* why = nullptr);

struct EdgeChange {
  std::array<std::pair<Vid, Vid>, 3> removed{};
  std::array<std::pair<Vid, Vid>, 4> added{};
  int n_removed = 0;
  int n_added = 0;
};

EdgeChange apply_extension(CycleBuilder& c, const DenseRecord& rec);

/// Empty when rec is applicable to c, otherwise the first defect found.
std::string check_extension(Workspace& ws, const CycleBuilder& c, const DenseRecord& rec);

/// Converts between the dense and the public record.
ExtensionRecord to_record(const Workspace& ws, const DenseRecord& rec);

}  // namespace clawham
