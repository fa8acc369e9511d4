// Acceptance harness: prints one PASS/FAIL line per criterion.
//
// usage: acceptance <clawham executable> <data dir> <work dir>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "clawham/driver.hpp"
#include "clawham/extension.hpp"
#include "clawham/finite.hpp"
#include "clawham/forbidden.hpp"
#include "clawham/oracle.hpp"
#include "clawham/separators.hpp"
#include "json.hpp"

using namespace clawham;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Instance {
  std::string name;
  std::string file;
  json spec;
  OraclePtr oracle;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << n << ": " << detail << std::endl;
}

bool adjacent_in(const GraphOracle& o, const VertexId& a, const VertexId& b) {
  const auto nb = o.neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

/// Distances from x up to `depth`, by plain breadth-first search over the oracle.
std::map<VertexId, std::size_t> distances(const GraphOracle& o, const VertexSet& x, std::size_t depth) {
  std::map<VertexId, std::size_t> dist;
  std::deque<VertexId> queue;
  for (const auto& v : x) {
    dist[v] = 0;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    if (dist[v] == depth) continue;
    for (const auto& w : o.neighbors(v))
      if (dist.emplace(w, dist[v] + 1).second) queue.push_back(w);
  }
  return dist;
}

// Criteria 1-3 share one sweep over all labelled graphs on 4..7 vertices.
void finite_criteria() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t pawfree = 0, c1_bad = 0, other = 0, admitted_count = 0, c2_bad = 0, ext_ok = 0, ext_bad = 0;
  std::string c1_note, c2_note, c3_note;
  for (int n = 4; n <= 7; ++n) {
    std::uint64_t all_lengths = 0;
    for (int l = 3; l <= n; ++l) all_lengths |= std::uint64_t{1} << l;
    enumerate_small_graphs(
        n, [](const MaskGraph& g) { return is_two_connected(g) && is_claw_free(g); },
        [&](const MaskGraph& g) {
          if (is_paw_free(g)) {
            ++pawfree;
            const bool ham = hamilton_cycle(g).has_value();
            const auto cls = classify(g);
            if (cls == GraphClass::Other) ++other;
            if (!ham || cls == GraphClass::Other) {
              ++c1_bad;
              if (c1_note.empty()) c1_note = " first counterexample n=" + std::to_string(n);
            }
          }
          if (!paws_satisfy_phi(g)) return;
          ++admitted_count;
          const bool is_cycle = g.edge_count() == g.n;  // connected and 2-connected with n edges
          if (!is_cycle && cycle_length_bits(g) != all_lengths) {
            ++c2_bad;
            if (c2_note.empty()) c2_note = " first counterexample n=" + std::to_string(n);
          }
          const FiniteGraph fg = g.to_graph();
          try {
            const auto c = finite_hamilton_by_extension(fg);
            bool ok = validate_cycle(fg, c).ok && c.length() == fg.order();
            for (std::size_t i = 0; ok && i < c.length(); ++i)
              ok = g.has(static_cast<int>(c.sequence()[i].word(0)),
                         static_cast<int>(c.sequence()[(i + 1) % c.length()].word(0)));
            ok ? ++ext_ok : ++ext_bad;
          } catch (const std::exception& e) {
            ++ext_bad;
            if (c3_note.empty()) c3_note = std::string(" first error: ") + e.what();
          }
        });
  }
  const double t = seconds_since(t0);
  std::ostringstream d1;
  d1 << pawfree << " 2-connected claw-free paw-free graphs on 4..7 vertices, " << c1_bad << " non-Hamiltonian or OTHER ("
     << other << " OTHER), " << t << "s" << c1_note;
  report(1, c1_bad == 0 && pawfree > 0 && t < 600, d1.str());
  std::ostringstream d2;
  d2 << admitted_count << " admitted graphs, " << c2_bad << " neither a cycle nor pancyclic" << c2_note;
  report(2, c2_bad == 0 && admitted_count > 0 && t < 600, d2.str());

  // Random admitted graphs on 8..10 vertices.
  SampleStats stats;
  const auto sample = sample_graphs(8, 10, 1000, 20261018, admitted, &stats);
  std::size_t sample_ok = 0;
  for (const auto& g : sample) {
    const FiniteGraph fg = g.to_graph();
    try {
      const auto c = finite_hamilton_by_extension(fg);
      if (validate_cycle(fg, c).ok && c.length() == fg.order()) ++sample_ok;
    } catch (const std::exception& e) {
      if (c3_note.empty()) c3_note = std::string(" first error: ") + e.what();
    }
  }
  std::ostringstream d3;
  d3 << ext_ok << "/" << admitted_count << " exhaustive and " << sample_ok << "/" << sample.size()
     << " sampled (seed 20261018, n uniform in 8..10, G(n,p) with p uniform in [0.5,0.95], " << stats.drawn
     << " draws) validated" << c3_note;
  report(3, ext_bad == 0 && ext_ok == admitted_count && sample_ok == 1000 && sample.size() == 1000, d3.str());
}

struct DriverOutcome {
  RunSummary summary;
  double seconds = 0;
};

std::map<std::string, DriverOutcome> driver_runs;

void criterion4(const std::vector<Instance>& instances, const fs::path& work) {
  const char* required[] = {"cycle",  "umbrella",       "separators",   "cut_finiteness", "persistence",
                            "replay", "cut_agreement", "edge_stability", "ends"};
  bool all = true;
  std::ostringstream d;
  for (const auto& inst : instances) {
    std::ofstream out(work / (inst.name + ".lib.json"), std::ios::binary);
    const auto t0 = std::chrono::steady_clock::now();
    RunParams p;
    p.stages = 4;
    auto s = run(inst.oracle, inst.spec, p, out);
    out.close();
    const double t = seconds_since(t0);
    bool ok = s.ok && s.stages_completed == 5 && t < 60;
    for (const auto& st : s.stage_reports) {
      ok = ok && st["ok"].get<bool>();
      if (st["index"].get<std::size_t>() == 0) continue;
      for (const char* name : required) {
        const auto& c = st["checks"];
        // Replay is skipped for stages whose steps were not recorded.
        if (std::string(name) == "replay" && c.contains(name) && c[name].is_string()) continue;
        ok = ok && c.contains(name) && c[name].is_boolean() && c[name].get<bool>();
      }
    }
    const std::size_t need_ends = inst.name == "S4" ? 4 : 3;
    ok = ok && s.sampled_ends >= need_ends;
    if (inst.name == "T3")
      for (std::size_t i = 2; i < s.k.size(); ++i) ok = ok && s.k[i] > s.k[i - 1];
    d << inst.name << ": " << s.stages_completed << " stages, k=" << json(s.k).dump() << ", ends " << s.sampled_ends
      << ", " << t << "s" << (ok ? "" : " FAILED " + s.error) << "; ";
    all = all && ok;
    driver_runs[inst.name] = {std::move(s), t};
  }
  report(4, all, d.str());
}

void criterion6() {
  bool all = !driver_runs.empty();
  std::size_t umbrellas = 0;
  std::string note;
  for (const auto& [name, r] : driver_runs)
    for (const auto& st : r.summary.stage_reports) {
      if (st["index"].get<std::size_t>() == 0) continue;
      ++umbrellas;
      const bool ok = st.contains("separators") && st["separators"]["ok"].get<bool>() &&
                      st["separators"]["parts_checked"].get<std::size_t>() ==
                          r.summary.k[st["index"].get<std::size_t>()];
      if (!ok && note.empty()) note = " first failure in " + name + " stage " + st["index"].dump();
      all = all && ok;
    }
  report(6, all && umbrellas == 4 * driver_runs.size(),
         std::to_string(umbrellas) + " umbrellas checked for minimality, K0, exclusive adjacency, two sides and "
                                     "complete neighbourhoods" + note);
}

// Criterion 5: randomized extension calls with independent checks of the
// vertex sandwich and of edge locality.
struct ExtensionSuite {
  std::mt19937_64 rng{20261018};
  std::size_t calls = 0, sandwich_bad = 0, locality_bad = 0, invalid = 0, impossible = 0;
  std::string note;

  void call(const GraphOracle& o, OrientedCycle& c) {
    std::vector<VertexId> frontier;
    for (const auto& u : c.sequence())
      for (const auto& v : o.neighbors(u))
        if (!c.contains(v)) frontier.push_back(v);
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    if (frontier.empty()) return;
    const VertexId v = frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng)];
    ++calls;
    ExtensionRecord rec;
    try {
      rec = find_extension(o, c, v);
    } catch (const std::exception& e) {
      ++impossible;
      if (note.empty()) note = std::string(" first impossible case: ") + e.what();
      return;
    }
    const OrientedCycle next = apply_extension(c, rec);
    const auto before = c.vertex_set(), after = next.vertex_set();
    VertexSet upper = before;
    upper.insert(v);
    bool sandwich = after.contains(v) && std::includes(after.begin(), after.end(), before.begin(), before.end());
    if (rec.w) upper.insert(*rec.w);
    sandwich = sandwich && std::includes(upper.begin(), upper.end(), after.begin(), after.end());
    if (!sandwich) ++sandwich_bad;

    const auto near = distances(o, {v}, 2);
    const auto e1 = c.edges(), e2 = next.edges();
    const EdgeSet s1(e1.begin(), e1.end()), s2(e2.begin(), e2.end());
    std::vector<Edge> diff;
    std::set_symmetric_difference(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(diff));
    for (const auto& e : diff)
      if (!near.contains(e.a) && !near.contains(e.b)) {
        ++locality_bad;
        break;
      }
    for (std::size_t i = 0; i < next.length(); ++i)
      if (!adjacent_in(o, next.sequence()[i], next.sequence()[(i + 1) % next.length()])) {
        ++invalid;
        break;
      }
    c = next;
  }
};

void criterion5(const std::vector<Instance>& instances) {
  ExtensionSuite suite;
  std::size_t finite_calls = 0;
  const auto graphs = sample_graphs(5, 10, 1500, 7, admitted);
  for (const auto& g : graphs) {
    const auto o = finite_as_oracle(g.to_graph());
    auto c = initial_cycle(*o);
    for (int i = 0; i < g.n; ++i) suite.call(*o, c);
  }
  finite_calls = suite.calls;
  for (const auto& inst : instances)
    for (int walk = 0; walk < 40; ++walk) {
      auto c = initial_cycle(*inst.oracle);
      for (int i = 0; i < 40; ++i) suite.call(*inst.oracle, c);
    }
  std::ostringstream d;
  d << suite.calls << " extension calls (" << finite_calls << " on admitted finite graphs, "
    << suite.calls - finite_calls << " on the infinite instances); sandwich failures " << suite.sandwich_bad
    << ", locality failures " << suite.locality_bad << ", invalid cycles " << suite.invalid << ", impossible cases "
    << suite.impossible << suite.note;
  report(5, suite.calls >= 10000 && suite.sandwich_bad == 0 && suite.locality_bad == 0 && suite.invalid == 0 &&
                suite.impossible == 0,
         d.str());
}

void criterion7(const std::vector<Instance>& instances) {
  bool all = true;
  std::ostringstream d;
  for (const auto& inst : instances) {
    const auto& o = *inst.oracle;
    const auto c = initial_cycle(o);
    bool ok = true;
    try {
      const auto p = find_paw_via_ray(o, c);
      // Induced paw: a0 sees a1, b1, b2; b1 b2 adjacent; a1 sees neither b.
      const std::array<VertexId, 4> v{p.a0, p.a1, p.b1, p.b2};
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          const bool want = i == 0 || (i == 2 && j == 3);
          ok = ok && v[i] != v[j] && adjacent_in(o, v[i], v[j]) == want;
        }
      const auto x = c.vertex_set();
      const auto ray = distance_increasing_ray(o, x, 8);
      const auto dist = distances(o, x, 9);
      std::vector<int> per_layer(9, 0);
      for (const auto& r : ray) {
        auto it = dist.find(r);
        if (it == dist.end() || it->second > 8) {
          ok = false;
          continue;
        }
        ++per_layer[it->second];
      }
      for (int n : per_layer) ok = ok && n == 1;
      for (std::size_t i = 0; i + 1 < ray.size(); ++i) ok = ok && adjacent_in(o, ray[i], ray[i + 1]);
      d << inst.name << " paw a0=" << o.token(p.a0) << (ok ? " ok" : " FAILED") << "; ";
    } catch (const std::exception& e) {
      ok = false;
      d << inst.name << " error " << e.what() << "; ";
    }
    all = all && ok;
  }
  report(7, all, d.str());
}

int run_cli(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream x(a, std::ios::binary), y(b, std::ios::binary);
  if (!x || !y) return false;
  std::vector<char> bx(1 << 20), by(1 << 20);
  for (;;) {
    x.read(bx.data(), static_cast<std::streamsize>(bx.size()));
    y.read(by.data(), static_cast<std::streamsize>(by.size()));
    if (x.gcount() != y.gcount() || !std::equal(bx.begin(), bx.begin() + x.gcount(), by.begin())) return false;
    if (!x) return true;
  }
}

void criterion8(const std::vector<Instance>& instances, const std::string& cli, const fs::path& work) {
  bool all = true;
  std::ostringstream d;
  for (const auto& inst : instances) {
    const auto t1 = work / (inst.name + ".1.json"), t2 = work / (inst.name + ".2.json");
    auto run_to = [&](const fs::path& out) {
      return run_cli("\"" + cli + "\" run --spec \"" + inst.file + "\" --stages 4 --out \"" + out.string() +
                     "\" > /dev/null 2>&1");
    };
    const int r1 = run_to(t1), r2 = run_to(t2);
    const bool identical = same_bytes(t1, t2);
    const bool matches_library = same_bytes(t1, work / (inst.name + ".lib.json"));
    const int v = run_cli("\"" + cli + "\" verify --trace \"" + t1.string() + "\" > /dev/null 2>&1");
    const bool ok = r1 == 0 && r2 == 0 && identical && v == 0;
    d << inst.name << ": run " << r1 << "/" << r2 << (identical ? ", identical" : ", DIFFERENT")
      << (matches_library ? "" : " (differs from library run)") << ", verify exit " << v << "; ";
    all = all && ok;
    fs::remove(t2);
  }
  report(8, all, d.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance <clawham executable> <data dir> <work dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path data = argv[2], work = argv[3];
  fs::create_directories(work);

  std::vector<Instance> instances;
  for (const char* name : {"S3", "S4", "D3", "T3"}) {
    Instance inst;
    inst.name = name;
    inst.file = (data / ("blowup_L" + std::string(name) + ".json")).string();
    std::ifstream in(inst.file);
    inst.spec = json::parse(in);
    inst.oracle = oracle_from_spec(inst.spec);
    instances.push_back(std::move(inst));
  }

  const auto t0 = std::chrono::steady_clock::now();
  finite_criteria();
  criterion4(instances, work);
  criterion5(instances);
  criterion6();
  criterion7(instances);
  criterion8(instances, cli, work);
  std::cout << "acceptance finished in " << seconds_since(t0) << "s, " << failures << " failing criteria" << std::endl;
  return failures == 0 ? 0 : 1;
}
