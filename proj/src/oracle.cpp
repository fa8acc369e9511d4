#include "clawham/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "clawham/errors.hpp"

namespace clawham {

namespace {

std::uint64_t parse_uint(std::string_view text, std::string_view token) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw InputError("malformed vertex token '" + std::string(token) + "'");
  return value;
}

std::int64_t parse_int(std::string_view text, std::string_view token) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw InputError("malformed vertex token '" + std::string(token) + "'");
  return value;
}

void sort_unique(std::vector<VertexId>& v, std::size_t from) {
  std::sort(v.begin() + static_cast<std::ptrdiff_t>(from), v.end());
  v.erase(std::unique(v.begin() + static_cast<std::ptrdiff_t>(from), v.end()), v.end());
}

// S_n: centre word 0; ray r at depth d is (d << 16) | r.
class TreeS final : public GraphOracle {
 public:
  explicit TreeS(int n) : n_(static_cast<std::uint64_t>(n)) {}

  void neighbors_into(const VertexId& v, std::vector<VertexId>& out) const override {
    const std::uint64_t d = v.word(0) >> 16, r = v.word(0) & 0xffff;
    if (d == 0) {
      for (std::uint64_t i = 0; i < n_; ++i) out.emplace_back(word(1, i));
      return;
    }
    if (d + 1 >= (std::uint64_t{1} << 47)) throw ResourceCapExceeded("ray depth exceeds identifier range");
    out.emplace_back(d == 1 ? 0 : word(d - 1, r));
    out.emplace_back(word(d + 1, r));
  }
  std::vector<VertexId> roots() const override { return {VertexId(0)}; }
  bool is_finite() const override { return false; }
  std::uint32_t level(const VertexId& v) const override {
    return static_cast<std::uint32_t>(v.word(0) >> 16);
  }
  std::string token(const VertexId& v) const override {
    const std::uint64_t d = v.word(0) >> 16, r = v.word(0) & 0xffff;
    if (d == 0) return "c";
    return std::to_string(r) + ":" + std::to_string(d);
  }
  VertexId parse_token(std::string_view t) const override {
    if (t == "c") return VertexId(0);
    const auto colon = t.find(':');
    if (colon == std::string_view::npos) throw InputError("malformed vertex token '" + std::string(t) + "'");
    const auto r = parse_uint(t.substr(0, colon), t), d = parse_uint(t.substr(colon + 1), t);
    if (r >= n_ || d == 0 || d >= (std::uint64_t{1} << 47))
      throw InputError("vertex token '" + std::string(t) + "' is not a vertex of " + description());
    return VertexId(word(d, r));
  }
  bool valid(const VertexId& v) const override {
    if (v.size() != 1) return false;
    const std::uint64_t d = v.word(0) >> 16, r = v.word(0) & 0xffff;
    return d == 0 ? v.word(0) == 0 : r < n_;
  }
  std::size_t word_count() const override { return 1; }
  int tree_class() const override { return 0; }
  bool analytic_two_connected() const override { return false; }
  std::string description() const override { return "S" + std::to_string(n_); }

 private:
  static std::uint64_t word(std::uint64_t d, std::uint64_t r) { return (d << 16) | r; }
  std::uint64_t n_;
};

// D_n: spine position p, pendant ray j in [0, n-2), depth d on that ray.
// word = zigzag(p) << 32 | (d == 0 ? 0 : (j + 1) << 24 | d)
class TreeD final : public GraphOracle {
 public:
  explicit TreeD(int n) : n_(static_cast<std::uint64_t>(n)) {}

  void neighbors_into(const VertexId& v, std::vector<VertexId>& out) const override {
    const auto [p, j, d] = decode(v.word(0));
    const std::size_t from = out.size();
    if (d == 0) {
      if (std::llabs(p) + 1 >= (std::int64_t{1} << 30))
        throw ResourceCapExceeded("spine position exceeds identifier range");
      out.emplace_back(encode(p - 1, 0, 0));
      out.emplace_back(encode(p + 1, 0, 0));
      for (std::uint64_t i = 0; i + 2 < n_; ++i) out.emplace_back(encode(p, i, 1));
    } else {
      if (d + 1 >= (std::uint64_t{1} << 24)) throw ResourceCapExceeded("ray depth exceeds identifier range");
      out.emplace_back(encode(p, j, d - 1));
      out.emplace_back(encode(p, j, d + 1));
    }
    sort_unique(out, from);
  }
  std::vector<VertexId> roots() const override { return {VertexId(0)}; }
  bool is_finite() const override { return false; }
  std::uint32_t level(const VertexId& v) const override {
    const auto [p, j, d] = decode(v.word(0));
    return static_cast<std::uint32_t>(std::llabs(p) + static_cast<std::int64_t>(d));
  }
  std::string token(const VertexId& v) const override {
    const auto [p, j, d] = decode(v.word(0));
    std::string out = "p" + std::to_string(p);
    if (d > 0) out += "/" + std::to_string(j) + ":" + std::to_string(d);
    return out;
  }
  VertexId parse_token(std::string_view t) const override {
    if (t.size() < 2 || t[0] != 'p') throw InputError("malformed vertex token '" + std::string(t) + "'");
    const auto slash = t.find('/');
    const auto p = parse_int(t.substr(1, slash == std::string_view::npos ? t.npos : slash - 1), t);
    if (std::llabs(p) >= (std::int64_t{1} << 30))
      throw InputError("vertex token '" + std::string(t) + "' is out of range");
    if (slash == std::string_view::npos) return VertexId(encode(p, 0, 0));
    const auto rest = t.substr(slash + 1);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw InputError("malformed vertex token '" + std::string(t) + "'");
    const auto j = parse_uint(rest.substr(0, colon), t), d = parse_uint(rest.substr(colon + 1), t);
    if (j + 2 >= n_ || d == 0 || d >= (std::uint64_t{1} << 24))
      throw InputError("vertex token '" + std::string(t) + "' is not a vertex of " + description());
    return VertexId(encode(p, j, d));
  }
  bool valid(const VertexId& v) const override {
    if (v.size() != 1) return false;
    const std::uint64_t tail = v.word(0) & 0xffffffffULL;
    if (tail == 0) return true;
    const std::uint64_t d = tail & 0xffffff, j1 = tail >> 24;
    return d > 0 && j1 >= 1 && j1 - 1 + 2 < n_;
  }
  std::size_t word_count() const override { return 1; }
  int tree_class() const override { return 0; }
  bool analytic_two_connected() const override { return false; }
  std::string description() const override { return "D" + std::to_string(n_); }

 private:
  struct Parts {
    std::int64_t p;
    std::uint64_t j;
    std::uint64_t d;
  };
  static std::uint64_t encode(std::int64_t p, std::uint64_t j, std::uint64_t d) {
    const std::uint64_t zz = p >= 0 ? static_cast<std::uint64_t>(p) * 2 : static_cast<std::uint64_t>(-p) * 2 - 1;
    return zz << 32 | (d == 0 ? 0 : ((j + 1) << 24 | d));
  }
  static Parts decode(std::uint64_t w) {
    const std::uint64_t zz = w >> 32, tail = w & 0xffffffffULL;
    const std::int64_t p = (zz & 1) ? -static_cast<std::int64_t>((zz + 1) / 2) : static_cast<std::int64_t>(zz / 2);
    if (tail == 0) return {p, 0, 0};
    return {p, (tail >> 24) - 1, tail & 0xffffff};
  }
  std::uint64_t n_;
};

// T_n: word = depth << 56 | index, index in mixed radix (first digit base n,
// later digits base n-1), so words order vertices by depth, then path.
class TreeT final : public GraphOracle {
 public:
  explicit TreeT(int n) : n_(static_cast<std::uint64_t>(n)) {
    std::uint64_t width = n_;
    max_depth_ = 1;
    while (width <= (kIndexLimit / (n_ - 1)) && max_depth_ < 255) {
      width *= n_ - 1;
      ++max_depth_;
    }
  }

  void neighbors_into(const VertexId& v, std::vector<VertexId>& out) const override {
    const std::uint64_t depth = v.word(0) >> 56, index = v.word(0) & kIndexMask;
    if (depth + 1 > max_depth_) throw ResourceCapExceeded("tree depth exceeds identifier range");
    if (depth == 0) {
      for (std::uint64_t c = 0; c < n_; ++c) out.emplace_back(word(1, c));
      return;
    }
    out.emplace_back(depth == 1 ? 0 : word(depth - 1, index / (n_ - 1)));
    for (std::uint64_t c = 0; c + 1 < n_; ++c) out.emplace_back(word(depth + 1, index * (n_ - 1) + c));
  }
  std::vector<VertexId> roots() const override { return {VertexId(0)}; }
  bool is_finite() const override { return false; }
  std::uint32_t level(const VertexId& v) const override { return static_cast<std::uint32_t>(v.word(0) >> 56); }
  std::string token(const VertexId& v) const override {
    std::uint64_t depth = v.word(0) >> 56, index = v.word(0) & kIndexMask;
    std::vector<std::uint64_t> digits(depth);
    for (std::uint64_t i = depth; i > 1; --i) {
      digits[i - 1] = index % (n_ - 1);
      index /= n_ - 1;
    }
    if (depth > 0) digits[0] = index;
    std::string out = "t";
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (n_ > 10 && i > 0) out += '.';
      out += std::to_string(digits[i]);
    }
    return out;
  }
  VertexId parse_token(std::string_view t) const override {
    if (t.empty() || t[0] != 't') throw InputError("malformed vertex token '" + std::string(t) + "'");
    std::vector<std::uint64_t> digits;
    const auto body = t.substr(1);
    if (n_ > 10) {
      std::size_t start = 0;
      while (start < body.size()) {
        auto dot = body.find('.', start);
        if (dot == std::string_view::npos) dot = body.size();
        digits.push_back(parse_uint(body.substr(start, dot - start), t));
        start = dot + 1;
        if (dot + 1 == body.size()) throw InputError("malformed vertex token '" + std::string(t) + "'");
      }
    } else {
      for (char c : body) {
        if (c < '0' || c > '9') throw InputError("malformed vertex token '" + std::string(t) + "'");
        digits.push_back(static_cast<std::uint64_t>(c - '0'));
      }
    }
    if (digits.size() > max_depth_) throw InputError("vertex token '" + std::string(t) + "' is too deep");
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      const std::uint64_t radix = i == 0 ? n_ : n_ - 1;
      if (digits[i] >= radix)
        throw InputError("vertex token '" + std::string(t) + "' is not a vertex of " + description());
      index = i == 0 ? digits[i] : index * (n_ - 1) + digits[i];
    }
    return VertexId(word(digits.size(), index));
  }
  bool valid(const VertexId& v) const override {
    if (v.size() != 1) return false;
    const std::uint64_t depth = v.word(0) >> 56, index = v.word(0) & kIndexMask;
    if (depth == 0) return index == 0;
    if (depth > max_depth_) return false;
    std::uint64_t width = n_;
    for (std::uint64_t i = 1; i < depth; ++i) width *= n_ - 1;
    return index < width;
  }
  std::size_t word_count() const override { return 1; }
  int tree_class() const override { return 0; }
  bool analytic_two_connected() const override { return false; }
  std::string description() const override { return "T" + std::to_string(n_); }

 private:
  static constexpr std::uint64_t kIndexMask = (std::uint64_t{1} << 56) - 1;
  static constexpr std::uint64_t kIndexLimit = kIndexMask;
  static std::uint64_t word(std::uint64_t depth, std::uint64_t index) { return depth << 56 | index; }
  std::uint64_t n_;
  std::uint64_t max_depth_ = 0;
};

class LineGraph final : public GraphOracle {
 public:
  explicit LineGraph(OraclePtr base) : base_(std::move(base)), wb_(base_->word_count()) {
    if (2 * wb_ > VertexId::kMaxWords)
      throw InputError("transform composition too deep for vertex identifiers: " + description());
  }

  void neighbors_into(const VertexId& e, std::vector<VertexId>& out) const override {
    const VertexId u = e.prefix(wb_), v = e.suffix_from(wb_);
    std::vector<VertexId> scratch;
    const std::size_t from = out.size();
    base_->neighbors_into(u, scratch);
    for (const auto& z : scratch)
      if (z != v) out.push_back(pair(u, z));
    scratch.clear();
    base_->neighbors_into(v, scratch);
    for (const auto& z : scratch)
      if (z != u) out.push_back(pair(v, z));
    sort_unique(out, from);
  }
  std::vector<VertexId> roots() const override {
    const auto base_roots = base_->roots();
    if (base_roots.empty()) return {};
    const VertexId r = *std::min_element(base_roots.begin(), base_roots.end());
    const auto nb = base_->neighbors(r);
    if (nb.empty()) return {};
    return {pair(r, nb.front())};
  }
  bool is_finite() const override { return base_->is_finite(); }
  std::uint32_t level(const VertexId& e) const override {
    return std::max(base_->level(e.prefix(wb_)), base_->level(e.suffix_from(wb_)));
  }
  std::string token(const VertexId& e) const override {
    return "(" + base_->token(e.prefix(wb_)) + "|" + base_->token(e.suffix_from(wb_)) + ")";
  }
  VertexId parse_token(std::string_view t) const override {
    if (t.size() < 5 || t.front() != '(' || t.back() != ')')
      throw InputError("malformed vertex token '" + std::string(t) + "'");
    int depth = 0;
    std::size_t split = std::string_view::npos;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
      if (t[i] == '(') ++depth;
      if (t[i] == ')') --depth;
      if (t[i] == '|' && depth == 0) {
        split = i;
        break;
      }
    }
    if (split == std::string_view::npos) throw InputError("malformed vertex token '" + std::string(t) + "'");
    const VertexId a = base_->parse_token(t.substr(1, split - 1));
    const VertexId b = base_->parse_token(t.substr(split + 1, t.size() - split - 2));
    if (a == b) throw InputError("vertex token '" + std::string(t) + "' names a loop");
    const auto nb = base_->neighbors(a);
    if (!std::binary_search(nb.begin(), nb.end(), b))
      throw InputError("vertex token '" + std::string(t) + "' is not an edge of " + base_->description());
    return pair(a, b);
  }
  bool valid(const VertexId& e) const override {
    if (e.size() != 2 * wb_) return false;
    const VertexId a = e.prefix(wb_), b = e.suffix_from(wb_);
    if (!(a < b) || !base_->valid(a) || !base_->valid(b)) return false;
    const auto nb = base_->neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }
  std::size_t word_count() const override { return 2 * wb_; }
  int tree_class() const override { return std::min(2, base_->tree_class() + 1); }
  bool analytic_two_connected() const override { return false; }
  std::string description() const override { return "line_graph(" + base_->description() + ")"; }

 private:
  static VertexId pair(const VertexId& a, const VertexId& b) {
    return a < b ? VertexId::concat(a, b) : VertexId::concat(b, a);
  }
  OraclePtr base_;
  std::size_t wb_;
};

class BlowUp final : public GraphOracle {
 public:
  BlowUp(OraclePtr base, int k) : base_(std::move(base)), k_(static_cast<std::uint64_t>(k)), wb_(base_->word_count()) {
    if (wb_ + 1 > VertexId::kMaxWords)
      throw InputError("transform composition too deep for vertex identifiers: " + description());
  }

  void neighbors_into(const VertexId& x, std::vector<VertexId>& out) const override {
    const VertexId v = x.prefix(wb_);
    const std::uint64_t copy = x.last();
    std::vector<VertexId> scratch;
    base_->neighbors_into(v, scratch);
    const auto pos = std::lower_bound(scratch.begin(), scratch.end(), v);
    scratch.insert(pos, v);
    for (const auto& z : scratch) {
      for (std::uint64_t i = 0; i < k_; ++i) {
        if (z == v && i == copy) continue;
        out.push_back(z.with_suffix(i));
      }
    }
  }
  std::vector<VertexId> roots() const override {
    std::vector<VertexId> out;
    for (const auto& r : base_->roots()) out.push_back(r.with_suffix(0));
    return out;
  }
  bool is_finite() const override { return base_->is_finite(); }
  std::uint32_t level(const VertexId& x) const override { return base_->level(x.prefix(wb_)); }
  std::string token(const VertexId& x) const override {
    return base_->token(x.prefix(wb_)) + "#" + std::to_string(x.last());
  }
  VertexId parse_token(std::string_view t) const override {
    const auto hash = t.rfind('#');
    if (hash == std::string_view::npos) throw InputError("malformed vertex token '" + std::string(t) + "'");
    const auto copy = parse_uint(t.substr(hash + 1), t);
    if (copy >= k_) throw InputError("vertex token '" + std::string(t) + "' has copy index out of range");
    return base_->parse_token(t.substr(0, hash)).with_suffix(copy);
  }
  bool valid(const VertexId& x) const override {
    return x.size() == wb_ + 1 && x.last() < k_ && base_->valid(x.prefix(wb_));
  }
  std::size_t word_count() const override { return wb_ + 1; }
  int tree_class() const override { return base_->tree_class(); }
  bool analytic_two_connected() const override { return k_ >= 2 && base_connected_; }
  std::string description() const override {
    return "blow_up(" + base_->description() + "," + std::to_string(k_) + ")";
  }

  void set_base_connected(bool c) { base_connected_ = c; }

 private:
  OraclePtr base_;
  std::uint64_t k_;
  std::size_t wb_;
  bool base_connected_ = false;
};

class FiniteOracle final : public GraphOracle {
 public:
  FiniteOracle(FiniteGraph g, std::vector<std::string> names) : g_(std::move(g)), names_(std::move(names)) {
    for (const auto& v : g_.vertices())
      if (v.size() != g_.vertex(0).size()) throw InputError("finite oracle needs identifiers of one shape");
  }

  void neighbors_into(const VertexId& v, std::vector<VertexId>& out) const override {
    const auto i = g_.find(v);
    if (!i) throw InputError("unknown vertex " + token(v));
    for (auto j : g_.adjacency(*i)) out.push_back(g_.vertex(j));
  }
  std::vector<VertexId> roots() const override { return g_.vertices(); }
  bool is_finite() const override { return true; }
  std::uint32_t level(const VertexId&) const override { return 0; }
  std::string token(const VertexId& v) const override {
    if (!names_.empty() && v.size() == 1 && v.word(0) < names_.size()) return names_[v.word(0)];
    return plain_token(v);
  }
  VertexId parse_token(std::string_view t) const override {
    if (!names_.empty()) {
      auto it = std::lower_bound(names_.begin(), names_.end(), t);
      if (it == names_.end() || *it != t) throw InputError("unknown vertex token '" + std::string(t) + "'");
      return VertexId(static_cast<std::uint64_t>(it - names_.begin()));
    }
    VertexId out;
    std::size_t start = 0;
    while (start <= t.size()) {
      auto dot = t.find('.', start);
      if (dot == std::string_view::npos) dot = t.size();
      out = out.empty() ? VertexId(parse_uint(t.substr(start, dot - start), t))
                        : out.with_suffix(parse_uint(t.substr(start, dot - start), t));
      start = dot + 1;
    }
    if (!g_.contains(out)) throw InputError("unknown vertex token '" + std::string(t) + "'");
    return out;
  }
  bool valid(const VertexId& v) const override { return g_.contains(v); }
  std::size_t word_count() const override { return g_.order() ? g_.vertex(0).size() : 1; }
  int tree_class() const override { return 2; }
  bool analytic_two_connected() const override { return false; }
  std::string description() const override {
    return "finite(" + std::to_string(g_.order()) + " vertices, " + std::to_string(g_.size()) + " edges)";
  }

  const FiniteGraph& graph() const { return g_; }

 private:
  FiniteGraph g_;
  std::vector<std::string> names_;
};

int parse_n(const nlohmann::json& base) {
  if (!base.contains("n") || !base["n"].is_number_integer()) throw InputError("graph spec base needs an integer 'n'");
  const auto n = base["n"].get<std::int64_t>();
  if (n < 3) throw InputError("tree parameter n must be at least 3");
  if (n > 1000) throw InputError("tree parameter n is unreasonably large");
  return static_cast<int>(n);
}

}  // namespace

std::vector<VertexId> GraphOracle::neighbors(const VertexId& v) const {
  std::vector<VertexId> out;
  neighbors_into(v, out);
  return out;
}

OraclePtr borrow(const GraphOracle& o) { return OraclePtr(&o, [](const GraphOracle*) {}); }

OraclePtr tree_S(int n) {
  if (n < 3) throw InputError("S_n needs n >= 3");
  if (n > 0xffff) throw InputError("S_n: n too large");
  return std::make_shared<TreeS>(n);
}

OraclePtr tree_D(int n) {
  if (n < 3) throw InputError("D_n needs n >= 3");
  if (n > 200) throw InputError("D_n: n too large");
  return std::make_shared<TreeD>(n);
}

OraclePtr tree_T(int n) {
  if (n < 3) throw InputError("T_n needs n >= 3");
  return std::make_shared<TreeT>(n);
}

OraclePtr line_graph(OraclePtr base) { return std::make_shared<LineGraph>(std::move(base)); }

OraclePtr blow_up(OraclePtr base, int k) {
  if (k < 1) throw InputError("blow-up needs k >= 1");
  bool connected = !base->is_finite();
  if (auto* f = dynamic_cast<const FiniteOracle*>(base.get()))
    connected = is_connected(f->graph()) && f->graph().order() * static_cast<std::size_t>(k) >= 3;
  auto out = std::make_shared<BlowUp>(std::move(base), k);
  // Trees and their line graphs are connected; finite bases are checked above.
  out->set_base_connected(connected);
  return out;
}

OraclePtr finite_as_oracle(NamedGraph g) {
  return std::make_shared<FiniteOracle>(std::move(g.graph), std::move(g.names));
}

OraclePtr finite_as_oracle(const FiniteGraph& g) { return std::make_shared<FiniteOracle>(g, std::vector<std::string>{}); }

OraclePtr oracle_from_spec(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("base") || !spec["base"].is_object())
    throw InputError("graph spec needs a 'base' object");
  const auto& base = spec["base"];
  if (!base.contains("kind") || !base["kind"].is_string()) throw InputError("graph spec base needs a 'kind'");
  const auto kind = base["kind"].get<std::string>();
  OraclePtr o;
  if (kind == "S") {
    o = tree_S(parse_n(base));
  } else if (kind == "D") {
    o = tree_D(parse_n(base));
  } else if (kind == "T") {
    o = tree_T(parse_n(base));
  } else if (kind == "finite") {
    if (!base.contains("graph")) throw InputError("finite base needs a 'graph'");
    auto g = named_graph_from_json(base["graph"]);
    if (g.graph.order() == 0) throw InputError("finite base graph is empty");
    for (const auto& name : g.names)
      if (name.find_first_of("()|#") != std::string::npos)
        throw InputError("vertex token '" + name + "' uses a reserved character");
    o = finite_as_oracle(std::move(g));
  } else {
    throw InputError("unknown graph kind '" + kind + "'");
  }
  if (spec.contains("transforms")) {
    if (!spec["transforms"].is_array()) throw InputError("'transforms' must be an array");
    for (const auto& t : spec["transforms"]) {
      if (!t.is_object() || !t.contains("op") || !t["op"].is_string()) throw InputError("transform needs an 'op'");
      const auto op = t["op"].get<std::string>();
      if (op == "line_graph") {
        o = line_graph(o);
      } else if (op == "blow_up") {
        if (!t.contains("k") || !t["k"].is_number_integer()) throw InputError("blow_up needs an integer 'k'");
        const auto k = t["k"].get<std::int64_t>();
        if (k < 1 || k > 64) throw InputError("blow_up k must be in [1, 64]");
        o = blow_up(o, static_cast<int>(k));
      } else {
        throw InputError("unknown transform '" + op + "'");
      }
    }
  }
  if (o->roots().empty()) throw InputError("graph spec describes a graph without vertices");
  return o;
}

FiniteGraph ball(const GraphOracle& o, const VertexSet& x, std::size_t r) {
  if (x.empty()) throw InputError("ball needs a nonempty centre set");
  std::unordered_map<VertexId, std::size_t> dist;
  std::deque<VertexId> queue;
  for (const auto& v : x) {
    if (!o.valid(v)) throw InputError("invalid vertex " + o.token(v));
    dist.emplace(v, 0);
    queue.push_back(v);
  }
  std::vector<VertexId> nb;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    if (dist[u] == r) continue;
    nb.clear();
    o.neighbors_into(u, nb);
    for (const auto& w : nb) {
      if (dist.emplace(w, dist[u] + 1).second) queue.push_back(w);
    }
  }
  std::vector<VertexId> vertices;
  vertices.reserve(dist.size());
  for (const auto& [v, d] : dist) vertices.push_back(v);
  std::sort(vertices.begin(), vertices.end());
  std::vector<Edge> edges;
  VertexSet clipped;
  for (const auto& v : vertices) {
    nb.clear();
    o.neighbors_into(v, nb);
    for (const auto& w : nb) {
      if (dist.contains(w)) {
        if (v < w) edges.emplace_back(v, w);
      } else {
        clipped.insert(v);
      }
    }
  }
  return FiniteGraph(std::move(vertices), edges, clipped);
}

namespace {

std::uint32_t max_level(const GraphOracle& o, const VertexSet& s) {
  std::uint32_t h = 0;
  for (const auto& v : s) h = std::max(h, o.level(v));
  return h;
}

// Vertices reachable from start in G - s using only vertices of level <= cap.
std::unordered_set<VertexId> bounded_reach(const GraphOracle& o, const VertexSet& s, const VertexId& start,
                                           std::uint32_t cap) {
  std::unordered_set<VertexId> seen{start};
  std::deque<VertexId> queue{start};
  std::vector<VertexId> nb;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    nb.clear();
    o.neighbors_into(u, nb);
    for (const auto& w : nb) {
      if (s.contains(w) || o.level(w) > cap || seen.contains(w)) continue;
      seen.insert(w);
      queue.push_back(w);
    }
  }
  return seen;
}

// Extra level headroom for grouping in graphs without the tree-like path property.
constexpr std::uint32_t kGroupingSlack = 8;

}  // namespace

bool is_infinite_component(const GraphOracle& o, const VertexSet& s, const VertexId& v) {
  if (s.contains(v)) throw InputError("vertex " + o.token(v) + " lies in the removed set");
  if (o.is_finite()) return false;
  const std::uint32_t h = std::max(max_level(o, s), o.level(v));
  std::unordered_set<VertexId> seen{v};
  std::deque<VertexId> queue{v};
  std::vector<VertexId> nb;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    nb.clear();
    o.neighbors_into(u, nb);
    for (const auto& w : nb) {
      if (s.contains(w) || seen.contains(w)) continue;
      if (o.level(w) > h) return true;
      seen.insert(w);
      queue.push_back(w);
    }
  }
  return false;
}

std::vector<EndDescriptor> end_descriptors(const GraphOracle& o, const VertexSet& s) {
  if (o.is_finite()) return {};
  auto sep = std::make_shared<const VertexSet>(s);
  if (s.empty()) {
    const auto roots = o.roots();
    return {EndDescriptor{sep, *std::min_element(roots.begin(), roots.end())}};
  }
  VertexSet outside;
  for (const auto& v : s)
    for (const auto& w : o.neighbors(v))
      if (!s.contains(w)) outside.insert(w);
  std::uint32_t cap = std::max(max_level(o, outside), max_level(o, s));
  if (!o.tree_like()) cap += kGroupingSlack;
  std::vector<EndDescriptor> out;
  VertexSet grouped;
  for (const auto& a : outside) {
    if (grouped.contains(a)) continue;
    const auto reach = bounded_reach(o, s, a, cap);
    for (const auto& b : outside)
      if (reach.contains(b)) grouped.insert(b);
    if (is_infinite_component(o, s, a)) out.push_back(EndDescriptor{sep, a});
  }
  return out;
}

std::vector<EndDescriptor> EndDescriptor::refine(const GraphOracle& o, const VertexSet& bigger) const {
  const auto mapping = end_refinement(o, *separator, bigger);
  std::vector<EndDescriptor> out;
  auto sep = std::make_shared<const VertexSet>(bigger);
  for (const auto& [child, parent] : mapping)
    if (parent == anchor) out.push_back(EndDescriptor{sep, child});
  return out;
}

std::map<VertexId, VertexId> end_refinement(const GraphOracle& o, const VertexSet& s, const VertexSet& s_bigger) {
  if (!std::includes(s_bigger.begin(), s_bigger.end(), s.begin(), s.end()))
    throw InputError("end refinement needs the first separator inside the second");
  const auto coarse = end_descriptors(o, s);
  const auto fine = end_descriptors(o, s_bigger);
  std::map<VertexId, VertexId> out;
  for (const auto& d : fine) {
    std::uint32_t cap = o.level(d.anchor);
    for (const auto& c : coarse) cap = std::max(cap, o.level(c.anchor));
    cap = std::max(cap, max_level(o, s));
    if (!o.tree_like()) cap += kGroupingSlack;
    const auto reach = bounded_reach(o, s, d.anchor, cap);
    const EndDescriptor* parent = nullptr;
    for (const auto& c : coarse) {
      if (reach.contains(c.anchor)) {
        parent = &c;
        break;
      }
    }
    if (!parent) throw InvariantViolation("end descriptor " + o.token(d.anchor) + " has no parent component");
    out.emplace(d.anchor, parent->anchor);
  }
  return out;
}

}  // namespace clawham
