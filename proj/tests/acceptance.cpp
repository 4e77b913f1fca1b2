// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "join2pn/analysis.hpp"
#include "join2pn/generate.hpp"

using namespace join2pn;

namespace {

const char* kChoice = "def x<u>|y<v> |> u<v> in x<k>|x<j>|y<2>";
const char* kScopes = "def x<v>|y<w> |> v<w> in def a<v> |> 0 in x<a> | y<2>";
const char* kM = "def x<u>|y<v> |> u<v> in x<a> | y<1> | x<b> | y<2>";

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are reported.
class Tally {
 public:
  void require(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_.size() < 3) failures_.push_back(what);
    ++failed_;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream os;
    os << summary << "; " << checks_ - failed_ << "/" << checks_ << " checks";
    for (const auto& f : failures_) os << "\n      failed: " << f;
    return {failed_ == 0, os.str()};
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

std::vector<JoinNet> built;  // nets of criteria 2-5, for 6 and 7

std::set<std::string> core_texts(const JoinNet& net, const std::vector<PlaceId>& ids) {
  std::set<std::string> out;
  for (auto p : ids) out.insert(to_string(net.place(p).core));
  return out;
}

Outcome choice_lts() {
  Tally t;
  const Process p = parse(kChoice);
  const TermLts lts = lts_of_process(p, 2);
  t.require(lts.states.size() == 3, "3 states, got " + std::to_string(lts.states.size()));
  t.require(lts.edges.size() == 2, "2 edges, got " + std::to_string(lts.edges.size()));
  for (const auto& e : lts.edges) t.require(e.label.def == 1, "edges labeled D1");
  std::set<std::string> terminal;
  for (std::size_t s = 0; s < lts.states.size(); ++s) {
    const bool out = std::any_of(lts.edges.begin(), lts.edges.end(), [&](const auto& e) { return e.src == s; });
    if (!out) terminal.insert(canonical_key(lts.states[s]));
  }
  const std::set<std::string> want{canonical_key(parse("def x<u>|y<v> |> u<v> in x<k> | j<2>")),
                                   canonical_key(parse("def x<u>|y<v> |> u<v> in x<j> | k<2>"))};
  t.require(terminal == want, "terminal states hold j<2> resp. k<2>");
  return t.outcome("3 states, 2 D1 edges, terminals {x<k>|j<2>, x<j>|k<2>}");
}

Outcome scopes_net() {
  Tally t;
  const JoinNet net = build_net(parse(kScopes), {2});
  built.push_back(net);
  std::vector<PlaceId> all;
  for (const auto& p : net.places()) all.push_back(p.id);
  t.require(core_texts(net, all) ==
                std::set<std::string>{"x<a>@[D1]  args@[D2,D1]", "y<2>@[D1]  args@[]", "a<2>@[D2,D1]  args@[]"},
            "places and scope stacks");
  t.require(core_texts(net, net.initial()) == std::set<std::string>{"x<a>@[D1]  args@[D2,D1]", "y<2>@[D1]  args@[]"},
            "m0");
  t.require(net.transitions().size() == 2, "2 transitions");
  if (net.transitions().size() == 2) {
    const auto& d1 = net.transition(0);
    const auto& d2 = net.transition(1);
    t.require(d1.label.def == 1 && d1.preset.size() == 2 && d1.postset.size() == 1, "D1: preset 2, postset 1");
    t.require(d2.label.def == 2 && d2.preset.size() == 1 && d2.postset.empty(), "D2: preset 1, postset empty");
    t.require(core_texts(net, d1.postset) == std::set<std::string>{"a<2>@[D2,D1]  args@[]"}, "D1 produces a<2>");
    t.require(d2.preset == d1.postset, "D2 consumes a<2>");
  }

  // The expected net, built by hand with places in another order.
  JoinNet expected;
  expected.set_definitions(net.definitions());
  const auto core = [](Name c, std::vector<Name> args, std::vector<DefId> sender, std::vector<std::vector<DefId>> scopes) {
    auto stack = [](const std::vector<DefId>& ids) {
      std::vector<ScopeSymbol> items;
      for (DefId d : ids) items.push_back({d});
      return ScopeStack(items);
    };
    PlaceCore pc{std::move(c), std::move(args), stack(sender), {}};
    for (const auto& s : scopes) pc.arg_scopes.push_back(stack(s));
    return pc;
  };
  const PlaceId a2 = expected.add_place(core("a", {"2"}, {1, 2}, {{}}));
  const PlaceId y2 = expected.add_place(core("y", {"2"}, {1}, {{}}));
  const PlaceId xa = expected.add_place(core("x", {"a"}, {1}, {{1, 2}}));
  expected.add_transition({a2}, net.definitions().at(2).label, {});
  expected.add_transition({xa, y2}, net.definitions().at(1).label, {a2});
  expected.set_initial({xa, y2});
  t.require(iso_check(net, expected).isomorphic, "isomorphic to the expected net");
  return t.outcome("3 places, D1 (2 -> 1), D2 (1 -> 0), m0 = {x<a>, y<2>}, iso to expected");
}

Outcome crossed_net() {
  Tally t;
  const JoinNet net = build_net(parse(kM), {2});
  built.push_back(net);
  t.require(net.places().size() == 8, "8 places");
  t.require(net.transitions().size() == 4, "4 transitions");
  for (const auto& tr : net.transitions()) t.require(tr.label.def == 1, "all labeled D");
  const auto ms = find_M(net);
  t.require(ms.size() == 4, "4 fully reachable M-structures, got " + std::to_string(ms.size()));
  t.require(std::all_of(ms.begin(), ms.end(), [](const MStructure& m) { return m.local; }), "all local");

  // Maximal steps at m0, by presets: {x<a>y<1>, x<b>y<2>} and {x<a>y<2>, x<b>y<1>}.
  std::set<std::set<std::set<std::string>>> steps;
  for (const auto& s : maximal_steps(net, net.initial())) {
    std::set<std::set<std::string>> step;
    for (auto tr : s) {
      std::set<std::string> pre;
      for (auto p : net.transition(tr).preset) {
        const auto& c = net.place(p).core;
        pre.insert(c.channel + "<" + c.args.at(0) + ">");
      }
      step.insert(pre);
    }
    steps.insert(step);
  }
  const std::set<std::set<std::set<std::string>>> want{
      {{"x<a>", "y<1>"}, {"x<b>", "y<2>"}},
      {{"x<a>", "y<2>"}, {"x<b>", "y<1>"}},
  };
  t.require(steps == want, "maximal steps pair the disjoint joins");
  return t.outcome("8 places, 4 D transitions, 4 local M-structures, two maximal steps of 2");
}

Outcome bisimulation_suite() {
  Tally t;
  std::vector<Process> terms = enumerated_corpus();
  const std::size_t corpus = terms.size();
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) terms.push_back(random_term(rng));
  std::size_t runs = 0;
  for (const auto& p : terms) {
    for (std::size_t d = 1; d <= 3; ++d) {
      const TermLts term = lts_of_process(p, d);
      const JoinNet net = build_net(p, {d});
      const NetLts lts = lts_of_net(net, d);
      const auto w = bisim_check(term, lts);
      ++runs;
      t.require(w.verified && validate_bisimulation(term, lts, w),
                "d=" + std::to_string(d) + " " + to_string(p) + ": " + w.reason);
      if (d == 3) built.push_back(net);
    }
  }
  return t.outcome(std::to_string(corpus) + " corpus + 200 random terms, " + std::to_string(runs) +
                   " bisimulation checks at depths 1-3");
}

Outcome congruence_suite() {
  Tally t;
  std::mt19937_64 rng(77);
  std::map<Rewrite, std::size_t> rules;
  for (int i = 0; i < 200; ++i) {
    const Process p = random_term(rng);
    Process q = p;
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int k = 0; k < n; ++k) {
      const auto step = random_rewrite(q, rng);
      if (!step) break;
      ++rules[step->rule];
      q = step->result;
    }
    const JoinNet a = build_net(p, {3});
    const JoinNet b = build_net(q, {3});
    const auto iso = iso_check(a, b);
    t.require(iso.isomorphic, to_string(p) + " vs " + to_string(q) + ": " + iso.reason);
    // Closes the chain P ~ N(P) = N(Q) ~ Q; labels are compared within one program.
    t.require(bisim_check(lts_of_process(q, 3), lts_of_net(b, 3)).verified, "bisim after rewrite: " + to_string(q));
    built.push_back(a);
    built.push_back(b);
  }
  return t.outcome("200 random terms, 1-3 rewrites each over " + std::to_string(rules.size()) + " rules");
}

Outcome structural_suite() {
  Tally t;
  std::size_t ms = 0;
  for (const auto& net : built) {
    const auto occ = check_occurrence(net);
    t.require(occ.ok(), "occurrence criteria");
    t.require(check_1safe(net).safe, "1-safe");
    for (const auto& m : find_M(net)) {
      ++ms;
      t.require(m.local, "M local");
    }
    // Transitions sharing a preset place agree on the sender stack top.
    for (const auto& p : net.places()) {
      const auto top = p.core.sender.top();
      for (auto tr : net.consumers(p.id)) {
        for (auto q : net.transition(tr).preset) t.require(net.place(q).core.sender.top() == top, "common stack top");
      }
    }
  }
  return t.outcome(std::to_string(built.size()) + " nets, " + std::to_string(ms) + " fully reachable M-structures");
}

Outcome step_linearization() {
  Tally t;
  std::size_t steps = 0;
  for (const auto& net : built) {
    for (const auto& m : reachable_markings(net)) {
      for (TransId a = 0; a < net.transitions().size(); ++a) {
        for (TransId b = a + 1; b < net.transitions().size(); ++b) {
          const std::vector<TransId> step{a, b};
          if (!step_enabled(net, m, step)) continue;
          ++steps;
          const Marking both = fire_step(net, m, step);
          t.require(fire(net, fire(net, m, a), b) == both, "a then b");
          t.require(fire(net, fire(net, m, b), a) == both, "b then a");
        }
      }
    }
  }
  return t.outcome(std::to_string(steps) + " enabled steps of size 2");
}

Outcome negative_controls() {
  Tally t;
  JoinNet back;
  const PlaceId a = back.add_place({"a", {}, {}, {}});
  const PlaceId b = back.add_place({"b", {}, {}, {}});
  back.add_transition({a}, JoinLabel{1, "A", "A", "A"}, {b});
  back.add_transition({b}, JoinLabel{2, "B", "B", "B"}, {a});
  back.set_initial({a});
  const auto occ = check_occurrence(back);
  t.require(!occ.initial_unproduced() && !occ.ok(), "arc into m0 reported");

  JoinNet merge;
  const PlaceId p = merge.add_place({"p", {}, {}, {}});
  const PlaceId q = merge.add_place({"q", {}, {}, {}});
  const PlaceId s = merge.add_place({"s", {}, {}, {}});
  merge.add_transition({p}, JoinLabel{1, "A", "A", "A"}, {s});
  merge.add_transition({q}, JoinLabel{2, "B", "B", "B"}, {s});
  merge.set_initial({p, q});
  const auto safety = check_1safe(merge);
  t.require(!safety.safe && safety.place == s, "1-safety violation reported");

  JoinNet mixed;
  const PlaceId r = mixed.add_place({"r", {}, {}, {}});
  const PlaceId u = mixed.add_place({"u", {}, {}, {}});
  const PlaceId v = mixed.add_place({"v", {}, {}, {}});
  const PlaceId w = mixed.add_place({"w", {}, {}, {}});
  mixed.add_transition({r, u}, JoinLabel{1, "A", "A", "A"}, {});
  mixed.add_transition({u, v}, JoinLabel{2, "B", "B", "B"}, {});
  mixed.add_transition({v, w}, JoinLabel{1, "A", "A", "A"}, {});
  mixed.set_initial({r, u, v, w});
  t.require(find_M(mixed).size() == 1 && !check_locality(mixed), "non-local M reported");
  return t.outcome("arc into m0, unsafe merge, mixed-label M");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit_ms;
  };
  const std::vector<Criterion> criteria{
      {1, "choice term LTS", choice_lts, 1000},
      {2, "scopes net", scopes_net, 1000},
      {3, "crossed join net", crossed_net, 1000},
      {4, "term/net bisimulation", bisimulation_suite, 60000},
      {5, "congruent terms, isomorphic nets", congruence_suite, 60000},
      {6, "structural suite", structural_suite, 60000},
      {7, "step linearization", step_linearization, 60000},
      {8, "negative controls", negative_controls, 1000},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (ms > c.limit_ms) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.limit_ms)) + " ms limit";
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
              << static_cast<long>(ms) << " ms]" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return failed ? 1 : 0;
}
