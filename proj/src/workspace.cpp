#include "clawham/workspace.hpp"

#include <algorithm>
#include <cstring>

#include "clawham/errors.hpp"

namespace clawham {

namespace {
constexpr std::uint64_t kUnexpanded = ~std::uint64_t{0};
}

Workspace::Workspace(OraclePtr oracle) : oracle_(std::move(oracle)), stride_(oracle_->word_count()) {
  table_.assign(1024, kNoVid);
  mask_ = table_.size() - 1;
}

std::uint64_t Workspace::hash_words(const std::uint64_t* w) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::size_t i = 0; i < stride_; ++i) h = mix64(h ^ w[i]);
  return h;
}

bool Workspace::equal_words(Vid v, const std::uint64_t* w) const {
  return std::memcmp(&words_[static_cast<std::size_t>(v) * stride_], w, stride_ * sizeof(std::uint64_t)) == 0;
}

void Workspace::grow_table() {
  std::vector<Vid> bigger(table_.size() * 2, kNoVid);
  const std::size_t mask = bigger.size() - 1;
  for (Vid v : table_) {
    if (v == kNoVid) continue;
    std::size_t slot = hash_words(&words_[static_cast<std::size_t>(v) * stride_]) & mask;
    while (bigger[slot] != kNoVid) slot = (slot + 1) & mask;
    bigger[slot] = v;
  }
  table_.swap(bigger);
  mask_ = mask;
}

std::optional<Vid> Workspace::find(const VertexId& v) const {
  if (v.size() != stride_) return std::nullopt;
  const std::uint64_t* w = v.words().data();
  std::size_t slot = hash_words(w) & mask_;
  while (table_[slot] != kNoVid) {
    if (equal_words(table_[slot], w)) return table_[slot];
    slot = (slot + 1) & mask_;
  }
  return std::nullopt;
}

Vid Workspace::intern(const VertexId& v) {
  if (v.size() != stride_) throw InputError("vertex identifier has the wrong shape for " + oracle_->description());
  const std::uint64_t* w = v.words().data();
  std::size_t slot = hash_words(w) & mask_;
  while (table_[slot] != kNoVid) {
    if (equal_words(table_[slot], w)) return table_[slot];
    slot = (slot + 1) & mask_;
  }
  if (levels_.size() >= kNoVid - 1) throw ResourceCapExceeded("workspace vertex capacity exhausted");
  const Vid id = static_cast<Vid>(levels_.size());
  words_.insert(words_.end(), w, w + stride_);
  levels_.push_back(oracle_->level(v));
  nbr_pos_.push_back(kUnexpanded);
  nbr_len_.push_back(0);
  table_[slot] = id;
  if (2 * levels_.size() > table_.size()) grow_table();
  return id;
}

Vid Workspace::intern_checked(const VertexId& v) {
  if (!oracle_->valid(v)) throw InputError("not a vertex of " + oracle_->description() + ": " + plain_token(v));
  return intern(v);
}

Vid Workspace::intern_token(std::string_view token) { return intern(oracle_->parse_token(token)); }

VertexId Workspace::id(Vid v) const {
  VertexId out(words_[static_cast<std::size_t>(v) * stride_]);
  for (std::size_t i = 1; i < stride_; ++i) out = out.with_suffix(words_[static_cast<std::size_t>(v) * stride_ + i]);
  return out;
}

std::span<const Vid> Workspace::neighbors(Vid v) {
  if (nbr_pos_[v] == kUnexpanded) {
    scratch_.clear();
    oracle_->neighbors_into(id(v), scratch_);
    const std::size_t n = scratch_.size();
    if (n > kChunk) throw ResourceCapExceeded("vertex degree exceeds workspace chunk size");
    if (chunk_fill_ + n > kChunk) {
      chunks_.push_back(std::make_unique<Vid[]>(kChunk));
      chunk_fill_ = 0;
    }
    const std::size_t chunk = chunks_.size() - 1, offset = chunk_fill_;
    chunk_fill_ += n;
    // intern() may grow the id arrays, so write through the chunk pointer.
    Vid* dst = chunks_[chunk].get() + offset;
    std::vector<VertexId> local;
    local.swap(scratch_);
    for (std::size_t i = 0; i < n; ++i) dst[i] = intern(local[i]);
    local.swap(scratch_);
    nbr_pos_[v] = (static_cast<std::uint64_t>(chunk) << 20) | offset;
    nbr_len_[v] = static_cast<std::uint32_t>(n);
  }
  const std::uint64_t pos = nbr_pos_[v];
  return {chunks_[pos >> 20].get() + (pos & (kChunk - 1)), nbr_len_[v]};
}

bool Workspace::adjacent(Vid a, Vid b) {
  for (Vid w : neighbors(a))
    if (w == b) return true;
  return false;
}

bool Workspace::less(Vid a, Vid b) const {
  const std::uint64_t* x = &words_[static_cast<std::size_t>(a) * stride_];
  const std::uint64_t* y = &words_[static_cast<std::size_t>(b) * stride_];
  for (std::size_t i = 0; i < stride_; ++i)
    if (x[i] != y[i]) return x[i] < y[i];
  return false;
}

void Workspace::sort(std::vector<Vid>& v) const {
  std::sort(v.begin(), v.end(), [this](Vid a, Vid b) { return less(a, b); });
}

Vid Workspace::min_of(std::span<const Vid> v) const {
  Vid best = kNoVid;
  for (Vid x : v)
    if (best == kNoVid || less(x, best)) best = x;
  return best;
}

}  // namespace clawham
