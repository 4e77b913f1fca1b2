#include <algorithm>
#include <set>

#include "doctest.h"
#include "join2pn/construct.hpp"
#include "join2pn/joinlts.hpp"

using namespace join2pn;

namespace {

const char* kScopes = "def x<v>|y<w> |> v<w> in def a<v> |> 0 in x<a> | y<2>";
const char* kM = "def x<u>|y<v> |> u<v> in x<a> | y<1> | x<b> | y<2>";
const char* kChoice = "def x<u>|y<v> |> u<v> in x<k>|x<j>|y<2>";

PlaceId find_place(const JoinNet& net, const std::string& text) {
  for (const auto& p : net.places())
    if (to_string(p.core) == text) return p.id;
  FAIL("no place " << text);
  return 0;
}

// Place whose message prints as `msg`, e.g. "x<a>".
PlaceId find_msg(const JoinNet& net, const std::string& msg) {
  for (const auto& p : net.places()) {
    std::string s = p.core.channel + "<";
    for (std::size_t i = 0; i < p.core.args.size(); ++i) s += (i ? "," : "") + p.core.args[i];
    if (s + ">" == msg) return p.id;
  }
  FAIL("no message " << msg);
  return 0;
}

TransId by_preset(const JoinNet& net, std::vector<PlaceId> pre) {
  std::sort(pre.begin(), pre.end());
  for (const auto& t : net.transitions())
    if (t.preset == pre) return t.id;
  FAIL("no transition with that preset");
  return 0;
}

}  // namespace

TEST_CASE("net of the scopes term") {
  const JoinNet net = build_net(parse(kScopes), {2});
  REQUIRE(net.places().size() == 3);
  REQUIRE(net.transitions().size() == 2);
  const PlaceId xa = find_place(net, "x<a>@[D1]  args@[D2,D1]");
  const PlaceId y2 = find_place(net, "y<2>@[D1]  args@[]");
  const PlaceId a2 = find_place(net, "a<2>@[D2,D1]  args@[]");
  CHECK(net.initial() == make_marking({xa, y2}));
  const auto& d1 = net.transition(0);
  const auto& d2 = net.transition(1);
  CHECK(d1.label.def == 1);
  CHECK(d1.preset == make_marking({xa, y2}));
  CHECK(d1.postset == std::vector<PlaceId>{a2});
  CHECK(d2.label.def == 2);
  CHECK(d2.preset == std::vector<PlaceId>{a2});
  CHECK(d2.postset.empty());
  CHECK(!net.truncated());

  CHECK(enabled(net, net.initial(), 0));
  CHECK(!enabled(net, net.initial(), 1));
  CHECK(!enabled(net, {}, 0));
  const Marking m1 = fire(net, net.initial(), 0);
  CHECK(m1 == Marking{a2});
  CHECK(enabled(net, m1, 1));
  CHECK(fire(net, m1, 1).empty());
  CHECK(reachable_markings(net).size() == 3);

  const auto rel = causality_conflict(net);
  CHECK(rel.causal.count({0, 1}));
  CHECK(rel.direct_conflict.empty());
}

TEST_CASE("depth bound cuts the scopes term") {
  const JoinNet net = build_net(parse(kScopes), {1});
  CHECK(net.transitions().size() == 1);
  CHECK(net.places().size() == 3);
  CHECK(net.truncated());
  const NetLts lts = lts_of_net(net);
  CHECK(lts.states.size() == 2);
  CHECK(lts.truncated[1]);
}

TEST_CASE("net of the crossed join") {
  const JoinNet net = build_net(parse(kM), {1});
  CHECK(net.places().size() == 8);
  REQUIRE(net.transitions().size() == 4);
  for (const auto& t : net.transitions()) CHECK(t.label.def == 1);
  CHECK(net.initial().size() == 4);
  CHECK(!net.truncated());

  const PlaceId xa = find_msg(net, "x<a>"), y1 = find_msg(net, "y<1>");
  const PlaceId xb = find_msg(net, "x<b>"), y2 = find_msg(net, "y<2>");
  const TransId t1 = by_preset(net, {xa, y1}), t2 = by_preset(net, {y1, xb});
  const TransId t3 = by_preset(net, {xb, y2}), t4 = by_preset(net, {xa, y2});

  const Marking after = fire(net, net.initial(), t1);
  CHECK(after == make_marking({xb, y2, find_msg(net, "a<1>")}));
  // Initial, four after one firing, and two after two: t1;t3 and t3;t1 meet.
  CHECK(reachable_markings(net).size() == 7);
  CHECK(lts_of_process(parse(kM), 3).states.size() == 7);

  const std::vector<TransId> s13{t1, t3}, s12{t1, t2};
  CHECK(step_status(net, net.initial(), s13) == StepStatus::Enabled);
  CHECK(step_status(net, net.initial(), s12) == StepStatus::Conflict);
  CHECK_THROWS_AS(fire_step(net, net.initial(), s12), FiringError);
  const std::vector<TransId> s3{t3};
  CHECK(step_status(net, after, std::vector<TransId>{t4}) == StepStatus::NotEnabled);
  CHECK(fire_step(net, net.initial(), s3) == fire(net, net.initial(), t3));
  CHECK(fire_step(net, net.initial(), s13) == fire(net, fire(net, net.initial(), t1), t3));
  CHECK(fire_step(net, net.initial(), s13) == fire(net, fire(net, net.initial(), t3), t1));

  auto steps = maximal_steps(net, net.initial());
  std::set<std::vector<TransId>> got(steps.begin(), steps.end());
  auto sorted = [](std::vector<TransId> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  CHECK(got == std::set<std::vector<TransId>>{sorted({t1, t3}), sorted({t2, t4})});

  const auto rel = causality_conflict(net);
  CHECK(rel.direct_conflict.count({std::min(t1, t2), std::max(t1, t2)}));
  CHECK(rel.independent.count({std::min(t1, t3), std::max(t1, t3)}));
  CHECK(rel.causal.empty());
}

TEST_CASE("empty process, empty net") {
  const JoinNet net = build_net(Process::nil());
  CHECK(net.places().empty());
  CHECK(net.transitions().empty());
  CHECK(reachable_markings(net).size() == 1);
  CHECK(causality_conflict(net).independent.empty());
}

TEST_CASE("single transition relates nothing") {
  const JoinNet net = build_net(parse("def x<> |> 0 in x<>"));
  REQUIRE(net.transitions().size() == 1);
  const auto rel = causality_conflict(net);
  CHECK(rel.causal.empty());
  CHECK(rel.conflict.empty());
  CHECK(rel.independent.empty());
}

TEST_CASE("firing errors") {
  JoinNet net;
  const PlaceId a = net.add_place({"a", {}, {}, {}});
  const PlaceId b = net.add_place({"b", {}, {}, {}});
  net.add_transition({a}, {}, {b});
  net.set_initial({a, b});
  CHECK_THROWS_AS(enabled(net, net.initial(), 5), FiringError);
  try {
    fire(net, net.initial(), 0);
    FAIL("expected a 1-safety violation");
  } catch (const FiringError& e) {
    CHECK(e.kind() == FiringError::Kind::Unsafe);
  }
  try {
    fire(net, Marking{b}, 0);
    FAIL("expected not enabled");
  } catch (const FiringError& e) {
    CHECK(e.kind() == FiringError::Kind::NotEnabled);
  }
  CHECK_THROWS_AS(net.add_transition({}, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(net.add_transition({7}, {}, {}), std::out_of_range);
}

TEST_CASE("recursive term truncates and caps") {
  const Process p = parse("def x<u> |> x<u> | u<> in x<k>");
  const JoinNet net = build_net(p, {3});
  CHECK(net.transitions().size() == 3);
  CHECK(net.truncated());
  BuildConfig tight{10};
  tight.max_transitions = 2;
  try {
    build_net(p, tight);
    FAIL("expected cap");
  } catch (const CapExceeded& e) {
    CHECK(e.partial().transitions().size() == 2);
  }
}

TEST_CASE("non-normal input is rejected") {
  CHECK_THROWS_AS(build_net(parse("(def x<u> |> 0 in 0) | (def x<w> |> 0 in 0)")), NotNormal);
}

TEST_CASE("rebuilds are identical") {
  const JoinNet a = build_net(parse(kChoice));
  const JoinNet b = build_net(parse(kChoice));
  REQUIRE(a.places().size() == b.places().size());
  for (std::size_t i = 0; i < a.places().size(); ++i) CHECK(a.places()[i].core == b.places()[i].core);
  REQUIRE(a.transitions().size() == b.transitions().size());
  for (std::size_t i = 0; i < a.transitions().size(); ++i) {
    CHECK(a.transitions()[i].preset == b.transitions()[i].preset);
    CHECK(a.transitions()[i].postset == b.transitions()[i].postset);
  }
}

TEST_CASE("fresh postsets") {
  const char* terms[] = {kScopes, kM, kChoice, "def x<u> |> (def a<> |> u<> in a<>) in x<k> | x<j>"};
  for (const char* src : terms) {
    CAPTURE(src);
    const JoinNet net = build_net(parse(src), {3});
    for (const auto& t : net.transitions()) {
      for (auto p : t.postset) {
        CHECK(!contains(net.initial(), p));
        CHECK(net.producers(p) == std::vector<TransId>{t.id});
        CHECK(net.place(p).layer == t.layer);
      }
      for (auto p : t.preset) CHECK(net.place(p).layer < t.layer);
    }
  }
}

TEST_CASE("marking of a term") {
  const Process p = parse(kChoice);
  const JoinNet net = build_net(p, {2});
  CHECK(marking_of_term(net, p) == net.initial());

  for (const auto& r : reactions(p)) {
    const auto m = marking_of_term(net, r.result);
    REQUIRE(m);
    CHECK(m->size() == 2);
  }
  const Process after_k = parse("def x<u>|y<v> |> u<v> in x<j> | k<2>");
  const auto m = marking_of_term(net, after_k);
  REQUIRE(m);
  CHECK(*m == make_marking({find_msg(net, "x<j>"), find_msg(net, "k<2>")}));

  const Process q = parse("def x<u>|y<v> |> u<v> in def a<v> |> v<> in x<a>|y<2>");
  const JoinNet nq = build_net(q, {2});
  const auto r = reactions(q);
  REQUIRE(r.size() == 1);
  CHECK(marking_of_term(nq, r[0].result) == Marking{find_msg(nq, "a<2>")});
  CHECK(!marking_of_term(nq, parse("zz<>")));
}
