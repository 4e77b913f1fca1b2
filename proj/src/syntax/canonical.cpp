// Canonical forms modulo structural congruence.
//
// With all defined names distinct, every definition can be extruded to the
// outermost scope. What remains is a set of definitions, a multiset of
// messages, and the scoping order: a definition whose free names include a
// name defined by another must stay inside it. Any two orders compatible
// with that dependency are interconvertible by extrusion, so one of them is
// picked canonically and bound names are renumbered along it.

#include <algorithm>
#include <optional>

#include "join2pn/syntax.hpp"
#include "syntax_internal.hpp"

namespace join2pn {

namespace {

using Subst = std::map<Name, Name>;

constexpr std::size_t kMaxLeaves = 4096;

struct Hoisted {
  std::vector<Definition> defs;
  std::vector<Message> msgs;
};

Subst without_params(Subst s, const Definition& d) {
  for (const auto& n : received_vars(d)) s.erase(n);
  return s;
}

void hoist(const Process& p, Hoisted& out) {
  if (const auto* m = p.as_message()) {
    out.msgs.push_back(*m);
  } else if (const auto* par = p.as_par()) {
    hoist(par->left, out);
    hoist(par->right, out);
  } else if (const auto* def = p.as_def()) {
    Subst sigma;
    for (const auto& n : defined_vars(def->definition)) sigma[n] = fresh_name();
    Definition d = def->definition;
    for (auto& t : d.pattern) t.channel = sigma.at(t.channel);
    d.reaction = substitute(d.reaction, without_params(sigma, def->definition));
    out.defs.push_back(std::move(d));
    hoist(substitute(def->scope, sigma), out);
  }
}

Name defined_name(std::size_t level, std::size_t index) {
  return "%" + std::to_string(level) + "." + std::to_string(index);
}

Name received_name(std::size_t level, std::size_t index) {
  return "$" + std::to_string(level) + "." + std::to_string(index);
}

Process canonical_at(const Process& p, std::size_t level, bool keep_ids);

// Rename a definition whose channels are already mapped in `names`; its
// parameters become `$level.j` and its body is canonicalized one level down.
Definition canonical_definition(const Definition& d, const Subst& names, std::size_t level,
                                bool keep_ids) {
  Definition out = d;
  Subst body = names;
  std::size_t j = 0;
  for (auto& t : out.pattern) {
    auto it = names.find(t.channel);
    if (it != names.end()) t.channel = it->second;
  }
  for (auto& t : out.pattern) {
    for (auto& param : t.params) {
      Name fresh = received_name(level, j++);
      body[param] = fresh;
      param = std::move(fresh);
    }
  }
  out.reaction = canonical_at(substitute(d.reaction, body), level + 1, keep_ids);
  if (!keep_ids) out.id = 0;
  return out;
}

std::string message_key(const Message& m) { return to_string(m); }

class Orderer {
 public:
  Orderer(const Hoisted& h, std::size_t level, bool keep_ids)
      : h_(h), level_(level), keep_ids_(keep_ids), used_(h.defs.size(), false) {
    std::map<Name, std::size_t> owner;
    for (std::size_t i = 0; i < h.defs.size(); ++i)
      for (const auto& n : defined_vars(h.defs[i])) owner[n] = i;
    deps_.resize(h.defs.size());
    for (std::size_t i = 0; i < h.defs.size(); ++i) {
      for (const auto& n : free_vars(h.defs[i])) {
        auto it = owner.find(n);
        if (it != owner.end() && it->second != i) deps_[i].push_back(it->second);
      }
    }
  }

  Process run() {
    std::vector<Definition> chosen;
    Subst names;
    search(chosen, names, 0);
    return *best_;
  }

 private:
  bool ready(std::size_t i) const {
    if (used_[i]) return false;
    return std::all_of(deps_[i].begin(), deps_[i].end(), [&](std::size_t d) { return used_[d]; });
  }

  void search(std::vector<Definition>& chosen, Subst& names, std::size_t next_index) {
    if (leaves_ >= kMaxLeaves && best_) return;
    if (chosen.size() == h_.defs.size()) {
      leaf(chosen, names);
      return;
    }
    struct Candidate {
      std::size_t index;
      Definition def;
      std::string key;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < h_.defs.size(); ++i) {
      if (!ready(i)) continue;
      Subst local = names;
      std::size_t k = next_index;
      for (const auto& n : defined_vars(h_.defs[i])) local[n] = defined_name(level_, k++);
      Definition d = canonical_definition(h_.defs[i], local, level_, keep_ids_);
      std::string key = detail::print_definition_term(d, keep_ids_);
      cands.push_back({i, std::move(d), std::move(key)});
    }
    const auto& min_key =
        std::min_element(cands.begin(), cands.end(),
                         [](const Candidate& a, const Candidate& b) { return a.key < b.key; })
            ->key;
    for (auto& c : cands) {
      if (c.key != min_key) continue;
      if (leaves_ >= kMaxLeaves && best_) return;
      const auto& dv = defined_vars(h_.defs[c.index]);
      Subst saved = names;
      for (std::size_t k = 0; k < dv.size(); ++k) names[dv[k]] = defined_name(level_, next_index + k);
      used_[c.index] = true;
      chosen.push_back(c.def);
      search(chosen, names, next_index + dv.size());
      chosen.pop_back();
      used_[c.index] = false;
      names = std::move(saved);
    }
  }

  void leaf(const std::vector<Definition>& chosen, const Subst& names) {
    ++leaves_;
    std::vector<std::pair<std::string, Message>> msgs;
    for (const auto& m : h_.msgs) {
      Message r;
      auto map = [&](const Name& n) {
        auto it = names.find(n);
        return it == names.end() ? n : it->second;
      };
      r.channel = map(m.channel);
      for (const auto& a : m.args) r.args.push_back(map(a));
      msgs.emplace_back(message_key(r), std::move(r));
    }
    std::sort(msgs.begin(), msgs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Process> parts;
    for (auto& [k, m] : msgs) parts.push_back(Process::message(m.channel, m.args));
    Process body = par_all(parts);
    for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) body = Process::def(*it, body);
    std::string key = detail::print_term(body, keep_ids_);
    if (!best_ || key < best_key_) {
      best_ = body;
      best_key_ = std::move(key);
    }
  }

  const Hoisted& h_;
  std::size_t level_;
  bool keep_ids_;
  std::vector<bool> used_;
  std::vector<std::vector<std::size_t>> deps_;
  std::optional<Process> best_;
  std::string best_key_;
  std::size_t leaves_ = 0;
};

Process canonical_at(const Process& p, std::size_t level, bool keep_ids) {
  Hoisted h;
  hoist(p, h);
  return Orderer(h, level, keep_ids).run();
}

}  // namespace

Process canonical_form(const Process& p, bool keep_ids) { return canonical_at(p, 0, keep_ids); }

std::string canonical_key(const Process& p, bool keep_ids) {
  return detail::print_term(canonical_form(p, keep_ids), keep_ids);
}

bool congruent(const Process& p, const Process& q) {
  return canonical_key(p) == canonical_key(q);
}

std::string definition_term_key(const Definition& d) {
  return detail::print_definition_term(canonical_definition(d, {}, 0, false), false);
}

std::string definition_alpha_key(const Definition& d) {
  Subst names;
  std::size_t k = 0;
  for (const auto& n : defined_vars(d)) names[n] = defined_name(0, k++);
  return detail::print_definition_term(canonical_definition(d, names, 0, false), false);
}

}  // namespace join2pn
