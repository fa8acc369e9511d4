#include "clawham/cycle.hpp"

#include <algorithm>

#include "clawham/errors.hpp"

namespace clawham {

OrientedCycle::OrientedCycle(std::vector<VertexId> sequence) : seq_(std::move(sequence)) {
  if (seq_.size() < 3) throw InputError("a cycle needs at least three vertices");
  pos_.reserve(seq_.size());
  for (std::size_t i = 0; i < seq_.size(); ++i)
    if (!pos_.emplace(seq_[i], i).second) throw InputError("cycle repeats vertex " + plain_token(seq_[i]));
}

std::size_t OrientedCycle::position(const VertexId& u) const {
  auto it = pos_.find(u);
  if (it == pos_.end()) throw InputError("vertex " + plain_token(u) + " is not on the cycle");
  return it->second;
}

std::vector<Edge> OrientedCycle::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < seq_.size(); ++i) out.emplace_back(seq_[i], seq_[(i + 1) % seq_.size()]);
  return out;
}

const VertexId& OrientedCycle::successor(const VertexId& u) const {
  return seq_[(position(u) + 1) % seq_.size()];
}

const VertexId& OrientedCycle::predecessor(const VertexId& u) const {
  return seq_[(position(u) + seq_.size() - 1) % seq_.size()];
}

std::vector<VertexId> OrientedCycle::segment(const VertexId& v, const VertexId& w) const {
  std::size_t i = position(v);
  const std::size_t j = position(w);
  std::vector<VertexId> out{seq_[i]};
  while (i != j) {
    i = (i + 1) % seq_.size();
    out.push_back(seq_[i]);
  }
  return out;
}

OrientedCycle OrientedCycle::canonical_rotation() const {
  std::vector<VertexId> rotated(seq_);
  const auto smallest = std::min_element(rotated.begin(), rotated.end());
  std::rotate(rotated.begin(), smallest, rotated.end());
  return OrientedCycle(std::move(rotated));
}

CycleCheck validate_cycle(const FiniteGraph& g, const std::vector<VertexId>& sequence) {
  CycleCheck out;
  if (sequence.size() < 3) {
    out.ok = false;
    out.reason = "fewer than three vertices";
    return out;
  }
  VertexSet seen;
  for (const auto& v : sequence) {
    if (!seen.insert(v).second) {
      out.ok = false;
      out.witness.emplace(v, v);
      out.reason = "repeated vertex";
      return out;
    }
  }
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const auto& a = sequence[i];
    const auto& b = sequence[(i + 1) % sequence.size()];
    if (!g.contains(a) || !g.contains(b) || !g.adjacent(a, b)) {
      out.ok = false;
      out.witness.emplace(a, b);
      out.reason = "consecutive vertices not adjacent";
      return out;
    }
  }
  return out;
}

CycleCheck validate_cycle(const FiniteGraph& g, const OrientedCycle& c) { return validate_cycle(g, c.sequence()); }

}  // namespace clawham
