#include "doctest.h"
#include "join2pn/io.hpp"

using namespace join2pn;

namespace {

const char* kM = "def x<u>|y<v> |> u<v> in x<a> | y<1> | x<b> | y<2>";
const char* kShared =
    "def z<p,q> |> p<> in def w<p,q> |> q<> in "
    "def x<u> |> (def a<>|b<> |> k<> in u<a,b>) in x<z> | x<w>";

}  // namespace

TEST_CASE("net json round trip") {
  for (const char* src : {kM, kShared, "0", "def x<> |> x<> in x<>"}) {
    CAPTURE(src);
    const JoinNet net = build_net(parse(src), {2});
    const Json j = to_json(net);
    const JoinNet back = net_from_json(Json::parse(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(iso_check(net, back).isomorphic);
    CHECK(to_json(check_occurrence(back)) == to_json(check_occurrence(net)));
    CHECK(to_json(check_1safe(back)) == to_json(check_1safe(net)));
    CHECK(to_json(step_report(back)) == to_json(step_report(net)));
    CHECK(back.truncated() == net.truncated());
    CHECK(bisim_check(lts_of_process(parse(src), 2), lts_of_net(back, 2)).verified);
  }
}

TEST_CASE("net json shape") {
  const JoinNet net = build_net(parse(kM), {2});
  const Json j = to_json(net);
  CHECK(j["places"].size() == 8);
  CHECK(j["transitions"].size() == 4);
  CHECK(j["m0"].size() == 4);
  CHECK(j["depthBound"] == 2);
  CHECK(j["places"][0]["core"]["channel"] == "x");
  CHECK(j["places"][0]["core"]["sender"][0]["def"] == 1);
  CHECK(j["transitions"][0]["label"]["def"] == 1);
}

TEST_CASE("malformed net json") {
  CHECK_THROWS_AS(net_from_json(Json::parse("{}")), std::invalid_argument);
  CHECK_THROWS_AS(net_from_json(Json::parse(R"({"places": [{"id": 3}], "transitions": [], "m0": []})")),
                  std::invalid_argument);
  auto j = to_json(build_net(parse(kM), {2}));
  j["transitions"][0]["pre"] = Json::array({99});
  CHECK_THROWS_AS(net_from_json(j), std::invalid_argument);
}

TEST_CASE("dot and pnml") {
  const JoinNet net = build_net(parse(kM), {2});
  const std::string dot = to_dot(net);
  CHECK(dot.rfind("digraph net {", 0) == 0);
  CHECK(dot.find("shape=circle") != std::string::npos);
  CHECK(dot.find("t0 [shape=box") != std::string::npos);
  CHECK(dot.find("p0 -> t") != std::string::npos);

  const std::string pnml = to_pnml(net);
  CHECK(pnml.find("<pnml") != std::string::npos);
  CHECK(pnml.find("<initialMarking>") != std::string::npos);
  std::size_t places = 0;
  for (std::size_t i = 0; (i = pnml.find("<place ", i)) != std::string::npos; ++i) ++places;
  CHECK(places == 8);
  CHECK(pnml.find("x<a>") == std::string::npos);  // escaped

  const auto term = lts_of_process(parse(kM), 2);
  CHECK(to_dot(term).find("->") != std::string::npos);
  CHECK(to_dot(lts_of_net(net, 2)).find("m0 ->") != std::string::npos);
  const Json lj = to_json(term);
  CHECK(lj["kind"] == "term");
  CHECK(lj["states"].size() == term.states.size());
}
