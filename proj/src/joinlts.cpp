#include "join2pn/joinlts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace join2pn {

namespace {

// A canonical term is a chain of definitions over a flat composition of
// messages.
struct Prenex {
  std::vector<Definition> defs;
  std::vector<Message> msgs;
};

void collect_messages(const Process& p, std::vector<Message>& out) {
  if (const auto* m = p.as_message()) {
    out.push_back(*m);
  } else if (const auto* par = p.as_par()) {
    collect_messages(par->left, out);
    collect_messages(par->right, out);
  } else if (p.as_def()) {
    throw std::logic_error("definition below a message in canonical form");
  }
}

Prenex prenex(const Process& canonical) {
  Prenex out;
  Process cur = canonical;
  while (const auto* d = cur.as_def()) {
    out.defs.push_back(d->definition);
    cur = d->scope;
  }
  collect_messages(cur, out.msgs);
  return out;
}

Process rebuild(const std::vector<Definition>& defs, const std::vector<Message>& msgs,
                const Process& extra) {
  std::vector<Process> parts;
  for (const auto& m : msgs) parts.push_back(Process::message(m.channel, m.args));
  parts.push_back(extra);
  Process body = par_all(parts);
  for (auto it = defs.rbegin(); it != defs.rend(); ++it) body = Process::def(*it, body);
  return body;
}

// Index tuples of distinct messages matching the pattern slot by slot.
std::vector<std::vector<std::size_t>> matches(const Definition& d, const std::vector<Message>& msgs) {
  std::vector<std::vector<std::size_t>> out;
  auto fits = [&](std::size_t slot, std::size_t i) {
    const auto& t = d.pattern[slot];
    return msgs[i].channel == t.channel && msgs[i].args.size() == t.params.size();
  };
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    if (!fits(0, i)) continue;
    if (d.pattern.size() == 1) {
      out.push_back({i});
      continue;
    }
    for (std::size_t j = 0; j < msgs.size(); ++j)
      if (j != i && fits(1, j)) out.push_back({i, j});
  }
  return out;
}

Process instantiate(const Definition& d, const std::vector<Message>& msgs,
                    const std::vector<std::size_t>& idx) {
  std::map<Name, Name> sigma;
  for (std::size_t slot = 0; slot < idx.size(); ++slot) {
    const auto& params = d.pattern[slot].params;
    for (std::size_t k = 0; k < params.size(); ++k) sigma[params[k]] = msgs[idx[slot]].args[k];
  }
  return substitute(d.reaction, sigma);
}

std::vector<Message> without(const std::vector<Message>& msgs, const std::vector<std::size_t>& idx) {
  std::vector<Message> out;
  for (std::size_t i = 0; i < msgs.size(); ++i)
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) out.push_back(msgs[i]);
  return out;
}

Reaction make_reaction(JoinLabel label, const Process& term) {
  Process c = canonical_form(term, true);
  std::string key = canonical_key(c, true);
  return Reaction{std::move(label), std::move(c), std::move(key)};
}

void sort_unique(std::vector<Reaction>& rs) {
  auto less = [](const Reaction& a, const Reaction& b) {
    return std::tie(a.label.def, a.label.term, a.key) < std::tie(b.label.def, b.label.term, b.key);
  };
  auto same = [](const Reaction& a, const Reaction& b) {
    return a.label.def == b.label.def && a.label.term == b.label.term && a.key == b.key;
  };
  std::sort(rs.begin(), rs.end(), less);
  rs.erase(std::unique(rs.begin(), rs.end(), same), rs.end());
}

}  // namespace

std::vector<Reaction> potential_steps(const Process& p, const Definition& d) {
  const Prenex pre = prenex(canonical_form(p, true));
  for (const auto& inner : pre.defs)
    for (const auto& t : inner.pattern)
      for (const auto& n : defined_vars(d))
        if (t.channel == n) return {};  // the inner definition would capture

  std::vector<Reaction> out;
  const JoinLabel label = make_label(d);
  for (const auto& idx : matches(d, pre.msgs))
    out.push_back(make_reaction(label, rebuild(pre.defs, without(pre.msgs, idx), instantiate(d, pre.msgs, idx))));
  sort_unique(out);
  return out;
}

std::vector<Reaction> reactions(const Process& p, const DefTable& source) {
  const Prenex pre = prenex(canonical_form(p, true));
  std::vector<Reaction> out;
  for (const auto& d : pre.defs) {
    const JoinLabel label = source.contains(d.id) ? make_label(source.at(d.id)) : make_label(d);
    for (const auto& idx : matches(d, pre.msgs))
      out.push_back(make_reaction(label, rebuild(pre.defs, without(pre.msgs, idx), instantiate(d, pre.msgs, idx))));
  }
  sort_unique(out);
  return out;
}

std::vector<Reaction> reactions(const Process& p) { return reactions(p, DefTable(p)); }

std::optional<std::size_t> TermLts::index_of(const std::string& key) const {
  auto it = std::find(keys.begin(), keys.end(), key);
  if (it == keys.end()) return std::nullopt;
  return static_cast<std::size_t>(it - keys.begin());
}

TermLts lts_of_process(const Process& p, std::size_t depth) {
  if (!check_normality(p).normal) throw std::invalid_argument("process is not normal");
  const DefTable source(p);

  TermLts lts;
  lts.depth = depth;
  std::unordered_map<std::string, std::size_t> index;
  auto add = [&](Process term, std::string key, std::size_t dist) {
    auto [it, inserted] = index.emplace(key, lts.states.size());
    if (inserted) {
      lts.states.push_back(std::move(term));
      lts.keys.push_back(std::move(key));
      lts.distance.push_back(dist);
      lts.truncated.push_back(false);
    }
    return it->second;
  };

  Process init = canonical_form(p, true);
  add(init, canonical_key(init, true), 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    const auto moves = reactions(lts.states[s], source);
    if (lts.distance[s] >= depth) {
      lts.truncated[s] = !moves.empty();
      continue;
    }
    for (const auto& r : moves) {
      const std::size_t before = lts.states.size();
      const std::size_t dst = add(r.result, r.key, lts.distance[s] + 1);
      if (lts.states.size() != before) queue.push_back(dst);
      lts.edges.push_back({s, r.label, dst});
    }
  }
  return lts;
}

}  // namespace join2pn
