#include "join2pn/cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "join2pn/generate.hpp"
#include "join2pn/io.hpp"

namespace join2pn {

namespace {

struct RunConfig {
  std::string command;
  std::string file;
  std::string term;
  std::size_t depth = 3;
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  std::size_t count = 200;
  std::string which = "term";
  std::string mode = "instance";
  std::size_t max_places = 100000;
  std::size_t max_transitions = 100000;
  std::string out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Input {
  std::optional<Process> term;
  std::optional<JoinNet> net;
};

std::string read_all(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Input load(const RunConfig& cfg) {
  if (cfg.file.empty() == cfg.term.empty()) throw UsageError("give exactly one of FILE or -e TERM");
  std::string text = cfg.term;
  if (!cfg.file.empty()) {
    if (cfg.file == "-") {
      text = read_all(std::cin);
    } else {
      std::ifstream in(cfg.file, std::ios::binary);
      if (!in) throw UsageError("cannot read " + cfg.file);
      text = read_all(in);
    }
  }
  const auto first = text.find_first_not_of(" \t\r\n");
  Input input;
  if (first != std::string::npos && text[first] == '{') {
    try {
      input.net = net_from_json(Json::parse(text));
    } catch (const Json::exception& e) {
      throw UsageError(std::string("malformed net: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    input.term = parse(text);
  }
  return input;
}

const Process& need_term(const Input& in) {
  if (!in.term) throw UsageError("this command needs a term, not a net");
  return *in.term;
}

BuildConfig build_config(const RunConfig& cfg) {
  BuildConfig b;
  b.depth_bound = cfg.depth;
  b.max_places = cfg.max_places;
  b.max_transitions = cfg.max_transitions;
  b.mode = cfg.mode == "literal" ? ScopeMode::Literal : ScopeMode::Instance;
  return b;
}

JoinNet net_for(const Input& in, const RunConfig& cfg) {
  if (in.net) return *in.net;
  return build_net(*in.term, build_config(cfg));
}

std::string set_text(const std::vector<Name>& names) {
  if (names.empty()) return "∅";
  std::string s = "{";
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
  return s + "}";
}

template <class T>
std::string ids_text(const std::vector<T>& ids, const char* prefix) {
  std::string s = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? ", " : "") + std::string(prefix) + std::to_string(ids[i]);
  return s + "}";
}

void warn_truncated_net(const JoinNet& net, std::ostream& err) {
  if (!net.truncated()) return;
  err << "warning: depth bound " << net.depth_bound().value_or(0) << " reached; " << net.pending().size()
      << " pending transition(s) not built\n";
}

template <class Lts>
void warn_truncated_lts(const Lts& lts, std::size_t depth, std::ostream& err) {
  std::size_t cut = 0;
  for (auto t : lts.truncated) cut += t ? 1 : 0;
  if (cut) err << "warning: depth " << depth << " cut the frontier at " << cut << " state(s)\n";
}

std::vector<Name> unique(std::vector<Name> v) {
  std::vector<Name> out;
  for (auto& n : v)
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(std::move(n));
  return out;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const Process p = need_term(load(cfg));
  const auto normality = check_normality(p);
  const DefTable defs(p);
  if (cfg.format == "json") {
    Json j{{"normal", normality.normal}, {"fv", free_vars(p)}};
    Json ds = Json::array();
    for (const auto& [id, d] : defs.all())
      ds.push_back(Json{{"id", id}, {"text", to_string(d)}, {"dv", unique(defined_vars(d))}, {"rv", received_vars(d)}});
    j["definitions"] = ds;
    if (normality.clash)
      j["clash"] = Json{{"first", normality.clash->first.id}, {"second", normality.clash->second.id},
                        {"name", normality.shared}};
    out << j.dump(2) << "\n";
  } else {
    if (normality.normal) {
      out << "normal; fv = " << set_text(free_vars(p)) << "\n";
    } else {
      const auto& [a, b] = *normality.clash;
      out << "not normal: D" << a.id << " and D" << b.id << " both define " << normality.shared << "\n"
          << "  D" << a.id << " at " << a.pos.line << ":" << a.pos.column << ": " << to_string(a) << "\n"
          << "  D" << b.id << " at " << b.pos.line << ":" << b.pos.column << ": " << to_string(b) << "\n";
    }
    for (const auto& [id, d] : defs.all())
      out << "D" << id << "  " << to_string(d) << "  dv = " << set_text(unique(defined_vars(d)))
          << "  rv = " << set_text(received_vars(d)) << "\n";
  }
  return normality.normal ? kExitOk : kExitFalse;
}

void net_text(const JoinNet& net, std::ostream& out) {
  out << net.places().size() << " places, " << net.transitions().size() << " transitions; m0 = "
      << ids_text(net.initial(), "p") << "\n";
  for (const auto& p : net.places()) out << "p" << p.id << "  " << to_string(p.core) << "\n";
  for (const auto& t : net.transitions())
    out << "t" << t.id << "  D" << t.label.def << "  " << ids_text(t.preset, "p") << " -> " << ids_text(t.postset, "p")
        << "  " << t.label.display << "\n";
}

int cmd_build(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const JoinNet net = net_for(load(cfg), cfg);
  warn_truncated_net(net, err);
  if (cfg.format == "json") out << to_json(net).dump(2) << "\n";
  else if (cfg.format == "dot") out << to_dot(net);
  else if (cfg.format == "pnml") out << to_pnml(net);
  else net_text(net, out);
  return kExitOk;
}

int cmd_lts(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.format == "pnml") throw UsageError("pnml is a net format");
  const Input in = load(cfg);
  if (cfg.which == "term") {
    const TermLts lts = lts_of_process(need_term(in), cfg.depth);
    warn_truncated_lts(lts, cfg.depth, err);
    if (cfg.format == "json") {
      out << to_json(lts).dump(2) << "\n";
    } else if (cfg.format == "dot") {
      out << to_dot(lts);
    } else {
      out << "term LTS, depth " << cfg.depth << ": " << lts.states.size() << " states, " << lts.edges.size()
          << " edges\n";
      for (std::size_t i = 0; i < lts.states.size(); ++i)
        out << "s" << i << (lts.truncated[i] ? " (cut)" : "") << "  " << to_string(canonical_form(lts.states[i]))
            << "\n";
      for (const auto& e : lts.edges) out << "s" << e.src << " -D" << e.label.def << "-> s" << e.dst << "\n";
    }
  } else {
    const JoinNet net = net_for(in, cfg);
    warn_truncated_net(net, err);
    const NetLts lts = lts_of_net(net, cfg.depth);
    warn_truncated_lts(lts, cfg.depth, err);
    if (cfg.format == "json") {
      out << to_json(lts).dump(2) << "\n";
    } else if (cfg.format == "dot") {
      out << to_dot(lts);
    } else {
      out << "net LTS, depth " << cfg.depth << ": " << lts.states.size() << " markings, " << lts.edges.size()
          << " edges\n";
      for (std::size_t i = 0; i < lts.states.size(); ++i)
        out << "m" << i << (lts.truncated[i] ? " (cut)" : "") << "  " << ids_text(lts.states[i], "p") << "\n";
      for (const auto& e : lts.edges)
        out << "m" << e.src << " -t" << e.transition << ":D" << e.label.def << "-> m" << e.dst << "\n";
    }
  }
  return kExitOk;
}

BisimWitness bisim_of(const Process& p, const RunConfig& cfg, std::size_t depth, std::ostream* err) {
  RunConfig at = cfg;
  at.depth = depth;
  const TermLts term = lts_of_process(p, depth);
  const JoinNet net = build_net(p, build_config(at));
  const NetLts lts = lts_of_net(net, depth);
  if (err) warn_truncated_lts(term, depth, *err);
  auto w = bisim_check(term, lts);
  if (w.verified && !validate_bisimulation(term, lts, w)) {
    w.verified = false;
    w.reason = "relation fails the transfer clauses";
  }
  return w;
}

int bisim_sweep(const RunConfig& cfg, std::ostream& out) {
  std::mt19937_64 rng(*cfg.seed);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const Process p = random_term(rng);
    for (std::size_t d = 1; d <= cfg.depth; ++d) {
      const auto w = bisim_of(p, cfg, d, nullptr);
      if (!w.verified) {
        out << "not bisimilar at depth " << d << ": " << to_string(p) << "\n  " << w.reason << "\n";
        for (const auto& s : w.counterexample) out << "  " << s << "\n";
        return kExitFalse;
      }
    }
  }
  out << cfg.count << " random terms (seed " << *cfg.seed << ") bisimilar at depths 1-" << cfg.depth << "\n";
  return kExitOk;
}

int cmd_bisim(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.seed && cfg.file.empty() && cfg.term.empty()) return bisim_sweep(cfg, out);
  const Process p = need_term(load(cfg));
  const auto w = bisim_of(p, cfg, cfg.depth, &err);
  if (cfg.format == "json") {
    out << to_json(w).dump(2) << "\n";
  } else if (w.verified) {
    out << "bisimilar\n";
  } else {
    out << "not bisimilar: " << w.reason << "\n";
    for (std::size_t i = 0; i < w.counterexample.size(); ++i) out << "  " << i + 1 << ". " << w.counterexample[i] << "\n";
  }
  return w.verified ? kExitOk : kExitFalse;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const JoinNet net = net_for(load(cfg), cfg);
  warn_truncated_net(net, err);
  const auto occ = check_occurrence(net);
  const auto safety = check_1safe(net);
  const auto ms = find_M(net);
  const auto steps = step_report(net);
  std::size_t nonlocal = 0;
  for (const auto& m : ms) nonlocal += m.local ? 0 : 1;
  const bool ok = occ.ok() && safety.safe && nonlocal == 0;

  if (cfg.format == "json") {
    Json jm = Json::array();
    for (const auto& m : ms) jm.push_back(to_json(m));
    Json j{{"places", net.places().size()},
           {"transitions", net.transitions().size()},
           {"truncated", net.truncated()},
           {"occurrence", to_json(occ)},
           {"safety", to_json(safety)},
           {"mStructures", jm},
           {"local", nonlocal == 0},
           {"steps", to_json(steps)},
           {"ok", ok}};
    out << j.dump(2) << "\n";
    return ok ? kExitOk : kExitFalse;
  }
  if (cfg.format != "text") throw UsageError("analyze writes text or json");

  out << "net: " << net.places().size() << " places, " << net.transitions().size() << " transitions\n";
  if (occ.ok()) {
    out << "occurrence criteria: ok\n";
  } else {
    out << "occurrence criteria: violated\n";
    if (!occ.initial_unproduced()) out << "  produced initial places " << ids_text(occ.produced_initial, "p") << "\n";
    if (!occ.single_producer()) out << "  places with several producers " << ids_text(occ.multi_producer, "p") << "\n";
    if (!occ.acyclic()) {
      out << "  flow cycle";
      for (const auto& n : occ.cycle) out << " " << (n.is_place ? "p" : "t") << n.id;
      out << "\n";
    }
  }
  if (!occ.self_conflicts.empty()) {
    out << "self-conflicts:";
    for (const auto& n : occ.self_conflicts) out << " " << (n.is_place ? "p" : "t") << n.id;
    out << "\n";
  }
  if (safety.safe) {
    out << "1-safe: yes, " << safety.markings << " reachable markings\n";
  } else {
    out << "1-safe: no, p" << safety.place.value_or(0) << " doubly marked after " << ids_text(safety.trace, "t")
        << "\n";
  }
  out << "maximal steps at m0:";
  for (const auto& s : steps.initial_maximal) out << " " << ids_text(s, "t");
  out << "\n";
  for (const auto& m : ms)
    out << "M p" << m.p << " p" << m.q << "  t" << m.t1 << " t" << m.t2 << " t" << m.t3 << "  witness "
        << ids_text(m.witness, "p") << "  " << (m.local ? "local" : "not local") << "\n";
  out << ms.size() << " fully reachable M-structures";
  if (!ms.empty()) out << (nonlocal ? ", " + std::to_string(nonlocal) + " not local" : std::string(", all local"));
  out << "; max step size " << steps.max_step_size << "\n";
  return ok ? kExitOk : kExitFalse;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "check") return cmd_check(cfg, out);
  if (cfg.command == "build") return cmd_build(cfg, out, err);
  if (cfg.command == "lts") return cmd_lts(cfg, out, err);
  if (cfg.command == "bisim") return cmd_bisim(cfg, out, err);
  return cmd_analyze(cfg, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Map core join-calculus terms to Petri nets and check them", "join2pn"};
  app.require_subcommand(1);
  const std::vector<std::pair<const char*, const char*>> commands{
      {"check", "parse, print variable sets and normality"},
      {"build", "construct the net up to the depth bound"},
      {"lts", "labelled transition system of the term or of its net"},
      {"bisim", "compare the term with its net"},
      {"analyze", "occurrence criteria, 1-safety, M-structures, steps"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("FILE", cfg.file, "source file, or - for stdin");
    sub->add_option("-e,--expr", cfg.term, "inline term");
    sub->add_option("--depth", cfg.depth, "depth bound")->capture_default_str();
    sub->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json", "dot", "pnml"}))->capture_default_str();
    sub->add_option("--mode", cfg.mode, "scope stack symbols")->check(CLI::IsMember({"instance", "literal"}));
    sub->add_option("--max-places", cfg.max_places);
    sub->add_option("--max-transitions", cfg.max_transitions);
    sub->add_option("--out", cfg.out, "output path");
    sub->add_option("--seed", cfg.seed, "seed for a random-term sweep");
    if (std::string(name) == "lts") sub->add_option("--which", cfg.which)->check(CLI::IsMember({"term", "net"}));
    if (std::string(name) == "bisim") sub->add_option("--count", cfg.count, "terms in a sweep");
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::ostringstream buffer;
  std::ostream& sink = cfg.out.empty() ? out : buffer;
  int code;
  try {
    code = dispatch(cfg, sink, err);
  } catch (const ParseError& e) {
    err << "parse error at " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotNormal& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapExceeded& e) {
    err << "error: cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << cfg.out << "\n";
      return kExitUsage;
    }
    f << buffer.str();
  }
  return code;
}

}  // namespace join2pn
