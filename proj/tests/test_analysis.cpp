#include <algorithm>

#include "doctest.h"
#include "join2pn/analysis.hpp"

using namespace join2pn;

namespace {

const char* kScopes = "def x<v>|y<w> |> v<w> in def a<v> |> 0 in x<a> | y<2>";
const char* kM = "def x<u>|y<v> |> u<v> in x<a> | y<1> | x<b> | y<2>";
const char* kChoice = "def x<u>|y<v> |> u<v> in x<k>|x<j>|y<2>";
// Two instances of the nested definition would share scope stacks if stack
// symbols were bare definitions.
const char* kShared =
    "def z<p,q> |> p<> in def w<p,q> |> q<> in "
    "def x<u> |> (def a<>|b<> |> k<> in u<a,b>) in x<z> | x<w>";

JoinNet net_of(const char* src, std::size_t depth = 3) { return build_net(parse(src), {depth}); }

JoinLabel label(const char* text, DefId id) { return JoinLabel{id, text, text, text}; }

}  // namespace

TEST_CASE("occurrence criteria on built nets") {
  for (const char* src : {kScopes, kM, kChoice, kShared}) {
    CAPTURE(src);
    const auto r = check_occurrence(net_of(src));
    CHECK(r.ok());
  }
  const JoinNet m = net_of(kM);
  const auto r = check_occurrence(m);
  CHECK(r.direct_conflicts.size() == 4);
  CHECK(check_occurrence(net_of(kScopes)).direct_conflicts.empty());
}

TEST_CASE("occurrence criteria negative controls") {
  JoinNet back;
  const PlaceId a = back.add_place({"a", {}, {}, {}});
  const PlaceId b = back.add_place({"b", {}, {}, {}});
  back.add_transition({a}, label("A", 1), {b});
  back.add_transition({b}, label("B", 2), {a});
  back.set_initial({a});
  const auto r = check_occurrence(back);
  CHECK(!r.initial_unproduced());
  CHECK(r.produced_initial == std::vector<PlaceId>{a});
  CHECK(!r.acyclic());
  CHECK(r.cycle.size() == 4);
  CHECK(!r.ok());

  JoinNet merge;
  const PlaceId p = merge.add_place({"p", {}, {}, {}});
  const PlaceId q = merge.add_place({"q", {}, {}, {}});
  const PlaceId s = merge.add_place({"s", {}, {}, {}});
  merge.add_transition({p}, label("A", 1), {s});
  merge.add_transition({q}, label("B", 2), {s});
  merge.set_initial({p, q});
  const auto r2 = check_occurrence(merge);
  CHECK(r2.initial_unproduced());
  CHECK(r2.acyclic());
  CHECK(r2.multi_producer == std::vector<PlaceId>{s});

  const auto safety = check_1safe(merge);
  CHECK(!safety.safe);
  CHECK(safety.place == s);
  CHECK(safety.trace.size() == 2);
}

TEST_CASE("built nets are 1-safe") {
  for (const char* src : {kScopes, kM, kChoice, kShared}) {
    CAPTURE(src);
    const auto r = check_1safe(net_of(src));
    CHECK(r.safe);
  }
  CHECK(check_1safe(net_of(kM)).markings == 7);
  CHECK(check_1safe(net_of(kScopes)).markings == 3);
}

TEST_CASE("self-conflicts are reported") {
  CHECK(check_occurrence(net_of(kChoice)).self_conflicts.empty());
  // The a|b join takes one output of each of two conflicting reactions.
  const JoinNet net = net_of("def a<>|b<> |> 0 in def x<u>|y<v> |> u<> in x<a> | x<b> | y<1>");
  REQUIRE(net.transitions().size() == 3);
  const auto r = check_occurrence(net);
  CHECK(r.ok());
  CHECK(r.direct_conflicts.size() == 1);
  CHECK(r.self_conflicts.count(NodeRef{false, 2}));
  CHECK(lts_of_net(net).states.size() == 3);
}

TEST_CASE("isomorphism") {
  const JoinNet a = net_of(kChoice);
  const auto self = iso_check(a, a);
  CHECK(self.isomorphic);
  for (std::size_t i = 0; i < self.place_map.size(); ++i) CHECK(self.place_map[i] == i);

  const JoinNet b = net_of("def x<u>|y<v> |> u<v> in y<2> | (x<j> | x<k>)");
  const auto r = iso_check(a, b);
  REQUIRE(r.isomorphic);
  for (const auto& t : a.transitions()) {
    const auto& u = b.transition(r.transition_map[t.id]);
    std::vector<PlaceId> pre;
    for (auto p : t.preset) pre.push_back(r.place_map[p]);
    std::sort(pre.begin(), pre.end());
    CHECK(pre == u.preset);
    CHECK(u.label.alpha == t.label.alpha);
  }

  CHECK(!iso_check(net_of("x<v>"), net_of("y<v>")).isomorphic);
  CHECK(iso_check(net_of("def x<u>|y<v> |> u<v> in x<k>"), net_of("def a<u>|b<v> |> u<v> in a<k>")).isomorphic);
  CHECK(!iso_check(net_of("def x<u>|y<v> |> u<v> in x<k>"), net_of("def x<u>|y<v> |> u<v> in y<k>")).isomorphic);
  CHECK(!iso_check(net_of(kChoice), net_of(kM)).isomorphic);

  // Renaming an outer definition changes the text of the inner one.
  const char* outer = "def x<s> |> s<j> in def z<> |> (def y<v> |> x<v> in y<k>) in z<>";
  const char* renamed = "def q<s> |> s<j> in def z<> |> (def y<v> |> q<v> in y<k>) in z<>";
  CHECK(iso_check(net_of(outer), net_of(renamed)).isomorphic);
  const auto ka = scoped_alpha_keys(parse(outer));
  const auto kb = scoped_alpha_keys(parse(renamed));
  CHECK(ka == kb);
  CHECK(definition_alpha_key(DefTable(parse(outer)).at(3)) != definition_alpha_key(DefTable(parse(renamed)).at(3)));
  CHECK(!iso_check(net_of(outer), net_of("def x<s> |> s<j> in def z<> |> (def y<v> |> v<v> in y<k>) in z<>")).isomorphic);
}

TEST_CASE("bisimulation between terms and their nets") {
  for (const char* src : {kChoice, kScopes, kM, kShared, "0", "def x<> |> x<> in x<>",
                          "def x<u> |> x<u> | u<> in x<k>",
                          // The nested body sends on a name received by the outer reaction.
                          "def a<w> |> def x<v> |> w<k> in x<w> | 0 in a<a> | k<>"}) {
    for (std::size_t d = 0; d <= 3; ++d) {
      CAPTURE(src);
      CAPTURE(d);
      const auto w = check_against_net(parse(src), d);
      CHECK(w.verified);
      CHECK(w.counterexample.empty());
    }
  }
  const auto ex1 = check_against_net(parse(kChoice), 2);
  CHECK(!ex1.truncated);
  // The two dead end states are related crosswise as well.
  CHECK(ex1.relation.size() == 5);
}

TEST_CASE("bisimulation detects a difference") {
  const Process p = parse(kChoice);
  const TermLts term = lts_of_process(p, 2);
  const JoinNet other = net_of(kScopes, 2);
  const auto w = bisim_check(term, lts_of_net(other, 2));
  CHECK(!w.verified);
  CHECK(!w.reason.empty());

  CHECK_THROWS_AS(bisim_check(term, lts_of_net(net_of(kChoice, 2), 1)), std::invalid_argument);
  CHECK_THROWS_AS(bisim_check(term, lts_of_net(net_of(kChoice, 2))), std::invalid_argument);
}

TEST_CASE("truncation is depth-honest") {
  // At depth 1 the term has a second move left; a net cut after one layer
  // must show the same, and a net that stops dead must not match.
  const Process p = parse(kScopes);
  const TermLts term = lts_of_process(p, 1);
  CHECK(bisim_check(term, lts_of_net(net_of(kScopes, 1), 1)).verified);

  JoinNet dead;
  const PlaceId a = dead.add_place({"x", {}, {}, {}});
  const PlaceId b = dead.add_place({"y", {}, {}, {}});
  dead.add_transition({a, b}, make_label(DefTable(p).at(1)), {});
  dead.set_initial({a, b});
  const auto w = bisim_check(term, lts_of_net(dead, 1));
  CHECK(!w.verified);
  CHECK(w.counterexample.size() == 1);
}

TEST_CASE("validator rejects a broken relation") {
  const Process p = parse(kChoice);
  const TermLts term = lts_of_process(p, 2);
  const NetLts net = lts_of_net(build_net(p, {2}), 2);
  auto w = bisim_check(term, net);
  REQUIRE(w.verified);
  CHECK(validate_bisimulation(term, net, w));
  std::erase_if(w.relation, [](const BisimWitness::Pair& p) { return p.level == 1; });
  CHECK(!validate_bisimulation(term, net, w));
}

TEST_CASE("scope stacks need instance tags") {
  // Literal stacks let the nested definition of one x-instance join
  // messages of the other, which the term cannot do.
  const Process p = parse(kShared);
  // The spurious join is the fifth firing; at depth 4 it shows as a move
  // left at the bound.
  CHECK(check_against_net(p, 3, ScopeMode::Literal).verified);
  const auto cut = check_against_net(p, 4, ScopeMode::Literal);
  CHECK(!cut.verified);
  CHECK(cut.reason.find("net still has moves") == 0);
  const auto literal = check_against_net(p, 5, ScopeMode::Literal);
  CHECK(!literal.verified);
  CHECK(literal.counterexample.size() == 5);
  CHECK(literal.reason.find("term cannot do") == 0);
  CHECK(check_against_net(p, 5, ScopeMode::Instance).verified);
}

TEST_CASE("M-structures of the crossed join") {
  const JoinNet net = net_of(kM, 2);
  const auto ms = find_M(net);
  CHECK(ms.size() == 4);
  for (const auto& m : ms) {
    CHECK(m.local);
    CHECK(contains(m.witness, m.p));
    CHECK(contains(m.witness, m.q));
    CHECK(m.p < m.q);
  }
  CHECK(check_locality(net));
  const auto steps = step_report(net);
  CHECK(steps.max_step_size == 2);
  CHECK(steps.initial_maximal.size() == 2);

  CHECK(find_M(net_of(kScopes)).empty());
  CHECK(find_M(net_of("def x<> |> 0 in x<>")).empty());
}

TEST_CASE("locality negative control") {
  JoinNet net;
  const PlaceId p = net.add_place({"p", {}, {}, {}});
  const PlaceId q = net.add_place({"q", {}, {}, {}});
  const PlaceId r = net.add_place({"r", {}, {}, {}});
  const PlaceId s = net.add_place({"s", {}, {}, {}});
  net.add_transition({r, p}, label("A", 1), {});
  net.add_transition({p, q}, label("B", 2), {});
  net.add_transition({q, s}, label("A", 1), {});
  net.set_initial({p, q, r, s});
  const auto ms = find_M(net);
  REQUIRE(ms.size() == 1);
  CHECK(!ms[0].local);
  CHECK(!check_locality(net));
}
