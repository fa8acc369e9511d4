#include <charconv>
#include <iterator>

#include "clawham/errors.hpp"
#include "clawham/trace.hpp"

namespace clawham {

StepRecord StepRecord::from(const TraceStep& st) {
  StepRecord r;
  r.phase = st.phase;
  r.op = st.op;
  r.rec = st.rec;
  r.a = st.a;
  r.b = st.b;
  r.removed = st.removed;
  r.inner = st.inner;
  if (st.parts_v) {
    r.has_parts = true;
    r.parts_v = *st.parts_v;
    r.parts_w = *st.parts_w;
  }
  return r;
}

std::vector<Vid> canonical_sequence(const Workspace& ws, const CycleBuilder& c) {
  Vid start = c.anchor();
  for (Vid v = c.succ(start); v != c.anchor(); v = c.succ(v))
    if (ws.less(v, start)) start = v;
  return c.sequence_from(start);
}

// ---------------------------------------------------------------- writer

namespace {

constexpr std::size_t kFlushAt = 1 << 20;

void put_uint(std::string& s, std::uint64_t x) {
  char buf[24];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  s.append(buf, end);
}

constexpr Phase kStagePhases[] = {Phase::K0, Phase::Promising, Phase::GrowIn, Phase::Good};

}  // namespace

TraceWriter::TraceWriter(std::ostream& out, Workspace& ws) : out_(out), ws_(ws) {}

std::uint32_t TraceWriter::id(Vid v) const {
  if (v >= ids_.size() || ids_[v] == 0) throw InvariantViolation("trace writer: vertex without table entry");
  return ids_[v] - 1;
}

void TraceWriter::put_id(std::string& s, Vid v) const { put_uint(s, id(v)); }

void TraceWriter::put_ids(std::string& s, const std::vector<Vid>& v) const {
  s += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    put_id(s, v[i]);
  }
  s += ']';
}

void TraceWriter::assign(const std::vector<Vid>& order, std::string& table) {
  auto known = [&](Vid v) { return v < ids_.size() && ids_[v] != 0; };
  bool first = true;
  auto give = [&](Vid v) {
    if (v >= ids_.size()) ids_.resize(std::max<std::size_t>(v + 1, ids_.size() * 3 / 2 + 64), 0);
    ids_[v] = ++next_;
    if (!first) table += ',';
    first = false;
  };
  std::vector<Vid> pending;
  for (Vid v : order)
    if (!known(v)) pending.push_back(v);
  std::vector<Vid> rest;
  while (!pending.empty()) {
    bool progress = false;
    rest.clear();
    for (Vid z : pending) {
      if (known(z)) continue;
      Vid parent = kNoVid;
      for (Vid w : ws_.neighbors(z))
        if (known(w)) {
          parent = w;
          break;
        }
      if (parent == kNoVid) {
        rest.push_back(z);
        continue;
      }
      const auto nb = ws_.neighbors(parent);
      const auto k = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), z) - nb.begin());
      const std::uint32_t p = id(parent);
      give(z);
      table += '[';
      put_uint(table, p);
      table += ',';
      put_uint(table, k);
      table += ']';
      progress = true;
    }
    if (!progress && !rest.empty()) {
      const Vid z = rest.front();
      give(z);
      table += nlohmann::json(ws_.token(z)).dump();
    }
    pending.swap(rest);
  }
}

void TraceWriter::put_step(std::string& s, const StepRecord& st) const {
  switch (st.op) {
    case TraceStep::Op::PathReplacement:
      s += "[\"path\",";
      put_id(s, st.a);
      s += ',';
      put_id(s, st.b);
      s += ',';
      put_ids(s, st.inner);
      s += ']';
      return;
    case TraceStep::Op::Reroute:
      s += "[\"reroute\",";
      put_id(s, st.a);
      s += ',';
      put_id(s, st.b);
      s += ',';
      put_ids(s, st.removed);
      s += ',';
      put_ids(s, st.inner);
      s += ']';
      return;
    case TraceStep::Op::Extension:
      break;
  }
  const auto& r = st.rec;
  s += "[\"";
  s += kind_name(r.kind);
  s += "\",";
  put_id(s, r.v);
  s += ',';
  put_id(s, r.u);
  s += ',';
  put_id(s, r.x);
  s += ',';
  if (r.w == kNoVid) {
    s += "null";
  } else {
    put_id(s, r.w);
  }
  s += r.plus ? ",\"+\"" : ",\"-\"";
  if (st.has_parts) {
    for (const auto* parts : {&st.parts_v, &st.parts_w}) {
      s += ",[";
      for (std::size_t i = 0; i < parts->size(); ++i) {
        if (i) s += ',';
        put_uint(s, (*parts)[i]);
      }
      s += ']';
    }
  }
  s += ']';
}

void TraceWriter::begin(const nlohmann::json& spec, const nlohmann::json& params) {
  out_ << "{\"spec\":" << spec.dump() << ",\"params\":" << params.dump() << ",\"stages\":[";
}

void TraceWriter::stage(const StageData& d, const nlohmann::json& umbrella, const nlohmann::json& verification) {
  std::vector<Vid> order;
  order.reserve(d.cycle.size() + d.initial.size());
  order.insert(order.end(), d.initial.begin(), d.initial.end());
  order.insert(order.end(), d.cycle.begin(), d.cycle.end());
  for (const auto& st : d.steps) {
    for (Vid v : {st.rec.v, st.rec.u, st.rec.x, st.rec.w, st.a, st.b})
      if (v != kNoVid) order.push_back(v);
    order.insert(order.end(), st.removed.begin(), st.removed.end());
    order.insert(order.end(), st.inner.begin(), st.inner.end());
  }
  for (const auto& p : d.parts) {
    order.insert(order.end(), p.s.begin(), p.s.end());
    order.push_back(p.anchor);
    order.insert(order.end(), p.add.begin(), p.add.end());
    order.insert(order.end(), p.remove.begin(), p.remove.end());
    for (const auto& e : p.cut) {
      order.push_back(e.first);
      order.push_back(e.second);
    }
  }

  std::string s;
  s.reserve(kFlushAt + 4096);
  auto flush = [&](bool force) {
    if (force || s.size() >= kFlushAt) {
      out_.write(s.data(), static_cast<std::streamsize>(s.size()));
      s.clear();
    }
  };
  if (!first_stage_) s += ',';
  first_stage_ = false;
  s += "{\"index\":";
  put_uint(s, d.index);
  s += ",\"vertices\":[";
  assign(order, s);
  s += ']';
  flush(false);
  if (d.index == 0) {
    s += ",\"initial\":";
    put_ids(s, d.initial);
  }
  s += ",\"extensions\":{";
  if (!d.steps_recorded) {
    s += "\"omitted\":";
    put_uint(s, d.step_count);
  } else {
    bool first_phase = true;
    auto phase_list = [&](Phase ph) {
      if (!first_phase) s += ',';
      first_phase = false;
      s += '"';
      s += phase_name(ph);
      s += "\":[";
      bool first = true;
      for (const auto& st : d.steps) {
        if (st.phase != ph) continue;
        if (!first) s += ',';
        first = false;
        put_step(s, st);
        flush(false);
      }
      s += ']';
    };
    if (d.index == 0) {
      phase_list(Phase::Bootstrap);
    } else {
      for (Phase ph : kStagePhases) phase_list(ph);
    }
  }
  s += "},\"cycle\":[";
  for (std::size_t i = 0; i < d.cycle.size(); ++i) {
    if (i) s += ',';
    put_id(s, d.cycle[i]);
    flush(false);
  }
  s += "],\"umbrella\":";
  s += umbrella.dump();
  s += ",\"parts\":[";
  for (std::size_t j = 0; j < d.parts.size(); ++j) {
    const auto& p = d.parts[j];
    if (j) s += ',';
    s += "{\"S\":";
    put_ids(s, p.s);
    s += ",\"anchor\":";
    put_id(s, p.anchor);
    s += ",\"M_delta\":{\"add\":";
    put_ids(s, p.add);
    s += ",\"remove\":";
    put_ids(s, p.remove);
    s += "},\"cut\":[";
    for (int e = 0; e < 2; ++e) {
      if (e) s += ',';
      s += '[';
      put_id(s, p.cut[e].first);
      s += ',';
      put_id(s, p.cut[e].second);
      s += ']';
    }
    s += "]}";
    flush(false);
  }
  s += "],\"stats\":";
  s += d.stats.dump();
  s += ",\"verification\":";
  s += verification.dump();
  s += '}';
  flush(true);
}

void TraceWriter::end(const nlohmann::json& ends, const nlohmann::json& summary) {
  out_ << "],\"ends\":" << ends.dump() << ",\"summary\":" << summary.dump() << "}\n";
  out_.flush();
}

// ---------------------------------------------------------------- reader

namespace {

using json = nlohmann::json;

/// Builds a DOM for one subtree out of SAX events.
class Capture {
 public:
  void begin() {
    root_ = json();
    stack_.clear();
    active_ = true;
    done_ = false;
  }
  bool active() const { return active_; }
  bool done() const { return done_; }
  json take() {
    active_ = false;
    return std::move(root_);
  }

  void key(std::string k) { key_ = std::move(k); }
  void scalar(json v) {
    place(std::move(v));
    if (stack_.empty()) done_ = true;
  }
  void open(json container) { stack_.push_back(place(std::move(container))); }
  void close() {
    stack_.pop_back();
    if (stack_.empty()) done_ = true;
  }

 private:
  json* place(json v) {
    if (stack_.empty()) {
      root_ = std::move(v);
      return &root_;
    }
    json& parent = *stack_.back();
    if (parent.is_object()) {
      auto& slot = parent[key_];
      slot = std::move(v);
      return &slot;
    }
    parent.push_back(std::move(v));
    return &parent.back();
  }

  json root_;
  std::vector<json*> stack_;
  std::string key_;
  bool active_ = false;
  bool done_ = false;
};

class TraceSax {
 public:
  explicit TraceSax(TraceHandlers& h) : h_(h) {}

  bool null() { return scalar(json(nullptr)); }
  bool boolean(bool b) { return scalar(json(b)); }
  bool number_integer(std::int64_t x) { return scalar(json(x)); }
  bool number_unsigned(std::uint64_t x) { return scalar(json(x)); }
  bool number_float(double x, const std::string&) { return scalar(json(x)); }
  bool string(std::string& s) { return scalar(json(std::move(s))); }
  bool binary(json::binary_t&) { throw InputError("trace: binary values are not allowed"); }

  bool start_object(std::size_t) {
    if (cap_.active()) {
      cap_.open(json::object());
      return true;
    }
    if (ctx_.empty()) {
      ctx_.push_back(Ctx::Top);
      return true;
    }
    switch (ctx_.back()) {
      case Ctx::Stages:
        cur_ = StageData{};
        umbrella_ = json();
        verification_ = json();
        ctx_.push_back(Ctx::Stage);
        return true;
      case Ctx::Stage:
        if (key_ == "extensions") {
          ctx_.push_back(Ctx::Extensions);
          return true;
        }
        break;
      case Ctx::Parts:
        begin_capture(Target::Part);
        cap_.open(json::object());
        return true;
      default:
        break;
    }
    fail("unexpected object");
  }

  bool end_object() {
    if (cap_.active()) {
      cap_.close();
      return finish_capture();
    }
    const Ctx c = ctx_.back();
    ctx_.pop_back();
    if (c == Ctx::Stage) {
      if (!ws_) fail("stage before spec");
      h_.on_stage(std::move(cur_), umbrella_, verification_);
    }
    return true;
  }

  bool start_array(std::size_t) {
    if (cap_.active()) {
      cap_.open(json::array());
      return true;
    }
    if (ctx_.empty()) fail("top level must be an object");
    switch (ctx_.back()) {
      case Ctx::Top:
        if (key_ == "stages") {
          ctx_.push_back(Ctx::Stages);
          return true;
        }
        break;
      case Ctx::Stage:
        if (key_ == "vertices") {
          ctx_.push_back(Ctx::Vertices);
          return true;
        }
        if (key_ == "initial" || key_ == "cycle") {
          ids_target_ = key_ == "initial" ? &cur_.initial : &cur_.cycle;
          ctx_.push_back(Ctx::Ids);
          return true;
        }
        if (key_ == "parts") {
          ctx_.push_back(Ctx::Parts);
          return true;
        }
        break;
      case Ctx::Vertices:
        pair_.clear();
        ctx_.push_back(Ctx::Pair);
        return true;
      case Ctx::Extensions:
        phase_ = parse_phase(key_);
        ctx_.push_back(Ctx::Steps);
        return true;
      case Ctx::Steps:
        begin_capture(Target::Step);
        cap_.open(json::array());
        return true;
      default:
        break;
    }
    fail("unexpected array");
  }

  bool end_array() {
    if (cap_.active()) {
      cap_.close();
      return finish_capture();
    }
    const Ctx c = ctx_.back();
    ctx_.pop_back();
    if (c == Ctx::Pair) {
      if (pair_.size() != 2) fail("vertex reference must be [entry, neighbour index]");
      const auto nb = ws_->neighbors(vid(pair_[0]));
      if (pair_[1] >= nb.size()) fail("neighbour index out of range");
      table_.push_back(nb[pair_[1]]);
    }
    return true;
  }

  bool key(std::string& k) {
    if (cap_.active()) {
      cap_.key(std::move(k));
      return true;
    }
    key_ = std::move(k);
    if (ctx_.back() == Ctx::Top && key_ != "stages") {
      if (key_ == "spec")
        begin_capture(Target::Spec);
      else if (key_ == "params")
        begin_capture(Target::Params);
      else
        begin_capture(Target::Tail);
    } else if (ctx_.back() == Ctx::Stage) {
      if (key_ == "umbrella")
        begin_capture(Target::Umbrella);
      else if (key_ == "verification")
        begin_capture(Target::Verification);
      else if (key_ == "stats")
        begin_capture(Target::Stats);
    }
    return true;
  }

  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& e) {
    throw InputError("trace is not valid JSON at byte " + std::to_string(pos) + ": " + e.what());
  }

 private:
  enum class Ctx { Top, Stages, Stage, Vertices, Pair, Ids, Extensions, Steps, Parts };
  enum class Target { Spec, Params, Tail, Umbrella, Verification, Stats, Step, Part };

  [[noreturn]] void fail(const std::string& msg) { throw InputError("trace: " + msg); }

  static Phase parse_phase(const std::string& k) {
    for (Phase p : {Phase::K0, Phase::Promising, Phase::GrowIn, Phase::Good, Phase::Bootstrap})
      if (phase_name(p) == k) return p;
    throw InputError("trace: unknown phase '" + k + "'");
  }

  void begin_capture(Target t) {
    target_ = t;
    cap_.begin();
  }

  Vid vid(std::uint64_t id) const {
    if (id >= table_.size()) throw InputError("trace: vertex reference " + std::to_string(id) + " is undefined");
    return table_[id];
  }
  Vid vid(const json& j) const {
    if (!j.is_number_unsigned()) throw InputError("trace: vertex reference must be a non-negative integer");
    return vid(j.get<std::uint64_t>());
  }
  std::vector<Vid> vids(const json& j) const {
    if (!j.is_array()) throw InputError("trace: expected a list of vertex references");
    std::vector<Vid> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(vid(x));
    return out;
  }

  bool scalar(json v) {
    if (cap_.active()) {
      cap_.scalar(std::move(v));
      return finish_capture();
    }
    switch (ctx_.back()) {
      case Ctx::Vertices:
        if (!v.is_string()) fail("vertex table entries are tokens or [entry, index] pairs");
        table_.push_back(ws_->intern_token(v.get<std::string>()));
        return true;
      case Ctx::Pair:
        if (!v.is_number_unsigned()) fail("vertex reference must be a non-negative integer");
        pair_.push_back(v.get<std::uint64_t>());
        return true;
      case Ctx::Ids:
        ids_target_->push_back(vid(v));
        return true;
      case Ctx::Stage:
        if (key_ == "index") cur_.index = v.get<std::size_t>();
        return true;
      case Ctx::Extensions:
        if (key_ == "omitted") {
          cur_.steps_recorded = false;
          cur_.step_count = v.get<std::size_t>();
        }
        return true;
      case Ctx::Parts:
        fail("parts must be objects");
      default:
        return true;
    }
  }

  bool finish_capture() {
    if (!cap_.done()) return true;
    json j = cap_.take();
    switch (target_) {
      case Target::Spec:
        ws_ = &h_.on_spec(j);
        break;
      case Target::Params:
        if (h_.on_params) h_.on_params(j);
        break;
      case Target::Tail:
        if (h_.on_tail) h_.on_tail(key_, j);
        break;
      case Target::Umbrella:
        if (j.is_object()) {
          cur_.k0_size = j.value("k0_size", std::size_t{0});
          cur_.recorded_k = j.value("k", SIZE_MAX);
          cur_.blocker_size = j.value("blocker_size", SIZE_MAX);
          cur_.base_size = j.value("base_size", SIZE_MAX);
        }
        umbrella_ = std::move(j);
        break;
      case Target::Verification:
        verification_ = std::move(j);
        break;
      case Target::Stats:
        cur_.stats = std::move(j);
        break;
      case Target::Step:
        cur_.steps.push_back(parse_step(j));
        ++cur_.step_count;
        break;
      case Target::Part:
        cur_.parts.push_back(parse_part(j));
        break;
    }
    return true;
  }

  StepRecord parse_step(const json& j) const {
    if (!j.is_array() || j.empty() || !j[0].is_string()) throw InputError("trace: malformed step");
    StepRecord st;
    st.phase = phase_;
    const auto op = j[0].get<std::string>();
    if (op == "path") {
      if (j.size() != 4) throw InputError("trace: malformed path step");
      st.op = TraceStep::Op::PathReplacement;
      st.a = vid(j[1]);
      st.b = vid(j[2]);
      st.inner = vids(j[3]);
      return st;
    }
    if (op == "reroute") {
      if (j.size() != 5) throw InputError("trace: malformed reroute step");
      st.op = TraceStep::Op::Reroute;
      st.a = vid(j[1]);
      st.b = vid(j[2]);
      st.removed = vids(j[3]);
      st.inner = vids(j[4]);
      return st;
    }
    if (j.size() != 6 && j.size() != 8) throw InputError("trace: malformed extension step");
    st.rec.kind = parse_kind(op);
    st.rec.v = vid(j[1]);
    st.rec.u = vid(j[2]);
    st.rec.x = vid(j[3]);
    st.rec.w = j[4].is_null() ? kNoVid : vid(j[4]);
    if (!j[5].is_string() || (j[5] != "+" && j[5] != "-")) throw InputError("trace: step side must be + or -");
    st.rec.plus = j[5] == "+";
    if (j.size() == 8) {
      st.has_parts = true;
      st.parts_v = j[6].get<std::vector<std::uint32_t>>();
      st.parts_w = j[7].get<std::vector<std::uint32_t>>();
    }
    return st;
  }

  PartRecord parse_part(const json& j) const {
    if (!j.is_object()) throw InputError("trace: malformed part");
    PartRecord p;
    p.s = vids(j.at("S"));
    p.anchor = vid(j.at("anchor"));
    p.add = vids(j.at("M_delta").at("add"));
    p.remove = vids(j.at("M_delta").at("remove"));
    const auto& cut = j.at("cut");
    if (!cut.is_array() || cut.size() != 2) throw InputError("trace: a part cut lists two edges");
    for (int e = 0; e < 2; ++e) {
      if (!cut[e].is_array() || cut[e].size() != 2) throw InputError("trace: malformed cut edge");
      p.cut[e] = {vid(cut[e][0]), vid(cut[e][1])};
    }
    return p;
  }

  TraceHandlers& h_;
  Workspace* ws_ = nullptr;
  std::vector<Ctx> ctx_;
  std::string key_;
  Capture cap_;
  Target target_ = Target::Tail;
  StageData cur_;
  json umbrella_, verification_;
  std::vector<Vid> table_;
  std::vector<std::uint64_t> pair_;
  std::vector<Vid>* ids_target_ = nullptr;
  Phase phase_ = Phase::Bootstrap;
};

}  // namespace

void read_trace(std::istream& in, TraceHandlers& h) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  TraceSax sax(h);
  try {
    json::sax_parse(text, &sax);
  } catch (const json::exception& e) {
    throw InputError(std::string("trace: ") + e.what());
  }
}

}  // namespace clawham
