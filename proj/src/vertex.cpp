#include "clawham/vertex.hpp"

#include "clawham/errors.hpp"

namespace clawham {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

VertexId VertexId::concat(const VertexId& a, const VertexId& b) {
  if (a.size_ + b.size_ > kMaxWords)
    throw InputError("vertex identifier too deep: transform composition exceeds " +
                     std::to_string(kMaxWords) + " coordinate words");
  VertexId out = a;
  for (std::size_t i = 0; i < b.size_; ++i) out.words_[out.size_++] = b.words_[i];
  return out;
}

VertexId VertexId::with_suffix(std::uint64_t word) const {
  return concat(*this, VertexId(word));
}

VertexId VertexId::prefix(std::size_t n) const {
  VertexId out;
  for (std::size_t i = 0; i < n && i < size_; ++i) out.words_[out.size_++] = words_[i];
  return out;
}

VertexId VertexId::suffix_from(std::size_t start) const {
  VertexId out;
  for (std::size_t i = start; i < size_; ++i) out.words_[out.size_++] = words_[i];
  return out;
}

std::size_t VertexId::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL + size_;
  for (std::size_t i = 0; i < size_; ++i) h = mix64(h ^ words_[i]);
  return static_cast<std::size_t>(h);
}

Edge::Edge(const VertexId& x, const VertexId& y) {
  if (x == y) throw InputError("edge endpoints must be distinct: " + plain_token(x));
  if (x < y) {
    a = x;
    b = y;
  } else {
    a = y;
    b = x;
  }
}

std::string plain_token(const VertexId& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(v.word(i));
  }
  return out;
}

}  // namespace clawham
