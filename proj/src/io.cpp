#include "join2pn/io.hpp"

#include <sstream>

namespace join2pn {

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

ScopeStack stack_from_json(const Json& j) {
  std::vector<ScopeSymbol> items;
  for (const auto& s : j) items.push_back(ScopeSymbol{s.at("def").get<DefId>(), s.value("instance", ScopeSymbol::kRootInstance)});
  return ScopeStack(std::move(items));
}

JoinLabel label_from_json(const Json& j) {
  return JoinLabel{j.at("def").get<DefId>(), j.at("term").get<std::string>(), j.at("alpha").get<std::string>(),
                   j.at("display").get<std::string>()};
}

std::string marking_text(const Marking& m) {
  std::string s = "{";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ", ";
    s += "p" + std::to_string(m[i]);
  }
  return s + "}";
}

}  // namespace

Json to_json(const ScopeStack& s) {
  Json out = Json::array();
  for (const auto& sym : s.items()) {
    Json e{{"def", sym.def}};
    if (sym.instance != ScopeSymbol::kRootInstance) e["instance"] = sym.instance;
    out.push_back(std::move(e));
  }
  return out;
}

Json to_json(const PlaceCore& c) {
  Json scopes = Json::array();
  for (const auto& s : c.arg_scopes) scopes.push_back(to_json(s));
  return Json{{"channel", c.channel}, {"args", c.args}, {"sender", to_json(c.sender)},
              {"argScopes", scopes},   {"text", to_string(c)}};
}

Json to_json(const JoinLabel& l) {
  return Json{{"def", l.def}, {"term", l.term}, {"alpha", l.alpha}, {"display", l.display}};
}

Json to_json(const JoinNet& net) {
  Json places = Json::array();
  for (const auto& p : net.places())
    places.push_back(Json{{"id", p.id}, {"core", to_json(p.core)}, {"layer", p.layer}});
  Json transitions = Json::array();
  for (const auto& t : net.transitions())
    transitions.push_back(Json{{"id", t.id}, {"label", to_json(t.label)}, {"pre", t.preset}, {"post", t.postset},
                               {"layer", t.layer}});
  Json pending = Json::array();
  for (const auto& p : net.pending()) pending.push_back(Json{{"pre", p.preset}, {"label", to_json(p.label)}});
  Json defs = Json::array();
  for (const auto& [id, d] : net.definitions())
    defs.push_back(Json{{"id", id}, {"label", to_json(d.label)}, {"channels", d.channels}});
  Json out{{"places", places}, {"transitions", transitions}, {"m0", net.initial()}};
  out["depthBound"] = net.depth_bound() ? Json(*net.depth_bound()) : Json(nullptr);
  out["truncated"] = net.truncated();
  out["pending"] = pending;
  out["definitions"] = defs;
  return out;
}

JoinNet net_from_json(const Json& j) {
  try {
    JoinNet net;
    std::map<DefId, DefInfo> defs;
    for (const auto& d : j.value("definitions", Json::array()))
      defs[d.at("id").get<DefId>()] = DefInfo{label_from_json(d.at("label")), d.at("channels").get<std::vector<Name>>()};
    net.set_definitions(std::move(defs));
    PlaceId expect = 0;
    for (const auto& p : j.at("places")) {
      if (p.at("id").get<PlaceId>() != expect++) throw std::invalid_argument("place ids must be 0..n-1 in order");
      const auto& c = p.at("core");
      PlaceCore core;
      core.channel = c.at("channel").get<Name>();
      core.args = c.at("args").get<std::vector<Name>>();
      core.sender = stack_from_json(c.at("sender"));
      for (const auto& s : c.at("argScopes")) core.arg_scopes.push_back(stack_from_json(s));
      if (core.arg_scopes.size() != core.args.size()) throw std::invalid_argument("argScopes length differs from args");
      net.add_place(std::move(core), p.value("layer", std::size_t{0}));
    }
    TransId texpect = 0;
    for (const auto& t : j.at("transitions")) {
      if (t.at("id").get<TransId>() != texpect++) throw std::invalid_argument("transition ids must be 0..n-1 in order");
      net.add_transition(t.at("pre").get<std::vector<PlaceId>>(), label_from_json(t.at("label")),
                         t.at("post").get<std::vector<PlaceId>>(), t.value("layer", std::size_t{1}));
    }
    net.set_initial(j.at("m0").get<std::vector<PlaceId>>());
    if (j.contains("depthBound") && !j.at("depthBound").is_null())
      net.set_depth_bound(j.at("depthBound").get<std::size_t>());
    for (const auto& p : j.value("pending", Json::array()))
      net.add_pending({p.at("pre").get<std::vector<PlaceId>>(), label_from_json(p.at("label"))});
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed net: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw std::invalid_argument(std::string("malformed net: ") + e.what());
  }
}

Json to_json(const TermLts& lts) {
  Json states = Json::array();
  for (std::size_t i = 0; i < lts.states.size(); ++i)
    states.push_back(Json{{"id", i}, {"term", canonical_key(lts.states[i])}, {"distance", lts.distance[i]},
                          {"truncated", static_cast<bool>(lts.truncated[i])}});
  Json edges = Json::array();
  for (const auto& e : lts.edges) edges.push_back(Json{{"src", e.src}, {"label", e.label.term}, {"def", e.label.def}, {"dst", e.dst}});
  return Json{{"kind", "term"}, {"depth", lts.depth}, {"initial", lts.initial}, {"states", states}, {"edges", edges}};
}

Json to_json(const NetLts& lts) {
  Json states = Json::array();
  for (std::size_t i = 0; i < lts.states.size(); ++i)
    states.push_back(Json{{"id", i}, {"marking", lts.states[i]}, {"distance", lts.distance[i]},
                          {"truncated", static_cast<bool>(lts.truncated[i])}});
  Json edges = Json::array();
  for (const auto& e : lts.edges)
    edges.push_back(Json{{"src", e.src}, {"transition", e.transition}, {"label", e.label.term}, {"dst", e.dst}});
  Json out{{"kind", "net"}};
  out["depth"] = lts.depth ? Json(*lts.depth) : Json(nullptr);
  out["initial"] = lts.initial;
  out["states"] = states;
  out["edges"] = edges;
  return out;
}

Json to_json(const OccurrenceReport& r) {
  auto nodes = [](const auto& v) {
    Json out = Json::array();
    for (const NodeRef& n : v) out.push_back((n.is_place ? "p" : "t") + std::to_string(n.id));
    return out;
  };
  Json conflicts = Json::array();
  for (const auto& [a, b] : r.direct_conflicts) conflicts.push_back(Json::array({a, b}));
  return Json{{"ok", r.ok()},
              {"initialUnproduced", r.initial_unproduced()},
              {"singleProducer", r.single_producer()},
              {"acyclic", r.acyclic()},
              {"producedInitial", r.produced_initial},
              {"multiProducer", r.multi_producer},
              {"cycle", nodes(r.cycle)},
              {"directConflicts", conflicts},
              {"selfConflicts", nodes(r.self_conflicts)}};
}

Json to_json(const SafetyReport& r) {
  Json out{{"safe", r.safe}, {"markings", r.markings}, {"trace", r.trace}};
  out["place"] = r.place ? Json(*r.place) : Json(nullptr);
  return out;
}

Json to_json(const MStructure& m) {
  return Json{{"p", m.p},   {"q", m.q},   {"t1", m.t1},           {"t2", m.t2},
              {"t3", m.t3}, {"witness", m.witness}, {"local", m.local}};
}

Json to_json(const BisimWitness& w) {
  Json rel = Json::array();
  for (const auto& p : w.relation) rel.push_back(Json::array({p.term_state, p.net_state, p.level}));
  return Json{{"verified", w.verified}, {"depth", w.depth}, {"truncated", w.truncated}, {"reason", w.reason},
              {"counterexample", w.counterexample}, {"relation", rel}};
}

Json to_json(const StepReport& r) {
  return Json{{"initialMaximalSteps", r.initial_maximal}, {"maxStepSize", r.max_step_size}};
}

std::string to_dot(const JoinNet& net) {
  std::ostringstream os;
  os << "digraph net {\n  rankdir=TB;\n";
  for (const auto& p : net.places()) {
    const bool marked = contains(net.initial(), p.id);
    os << "  p" << p.id << " [shape=circle, width=0.35, fixedsize=true, label=\"" << (marked ? "&#9679;" : "")
       << "\", xlabel=\"" << dot_escape(to_string(p.core)) << "\"];\n";
  }
  for (const auto& t : net.transitions())
    os << "  t" << t.id << " [shape=box, label=\"D" << t.label.def << "\", tooltip=\"" << dot_escape(t.label.display)
       << "\"];\n";
  for (const auto& t : net.transitions()) {
    for (auto p : t.preset) os << "  p" << p << " -> t" << t.id << ";\n";
    for (auto p : t.postset) os << "  t" << t.id << " -> p" << p << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const TermLts& lts) {
  std::ostringstream os;
  os << "digraph lts {\n";
  for (std::size_t i = 0; i < lts.states.size(); ++i)
    os << "  s" << i << " [label=\"" << dot_escape(to_string(canonical_form(lts.states[i]))) << "\""
       << (i == lts.initial ? ", penwidth=2" : "") << (lts.truncated[i] ? ", style=dashed" : "") << "];\n";
  for (const auto& e : lts.edges)
    os << "  s" << e.src << " -> s" << e.dst << " [label=\"D" << e.label.def << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const NetLts& lts) {
  std::ostringstream os;
  os << "digraph lts {\n";
  for (std::size_t i = 0; i < lts.states.size(); ++i)
    os << "  m" << i << " [label=\"" << marking_text(lts.states[i]) << "\""
       << (i == lts.initial ? ", penwidth=2" : "") << (lts.truncated[i] ? ", style=dashed" : "") << "];\n";
  for (const auto& e : lts.edges)
    os << "  m" << e.src << " -> m" << e.dst << " [label=\"t" << e.transition << ": D" << e.label.def << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_pnml(const JoinNet& net) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n"
     << "  <net id=\"net\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n"
     << "    <page id=\"page\">\n";
  for (const auto& p : net.places()) {
    os << "      <place id=\"p" << p.id << "\"><name><text>" << xml_escape(to_string(p.core)) << "</text></name>";
    if (contains(net.initial(), p.id)) os << "<initialMarking><text>1</text></initialMarking>";
    os << "</place>\n";
  }
  for (const auto& t : net.transitions())
    os << "      <transition id=\"t" << t.id << "\"><name><text>" << xml_escape(t.label.display)
       << "</text></name></transition>\n";
  std::size_t arc = 0;
  for (const auto& t : net.transitions()) {
    for (auto p : t.preset)
      os << "      <arc id=\"a" << arc++ << "\" source=\"p" << p << "\" target=\"t" << t.id << "\"/>\n";
    for (auto p : t.postset)
      os << "      <arc id=\"a" << arc++ << "\" source=\"t" << t.id << "\" target=\"p" << p << "\"/>\n";
  }
  os << "    </page>\n  </net>\n</pnml>\n";
  return os.str();
}

}  // namespace join2pn
