#include <algorithm>
#include <set>

#include "join2pn/syntax.hpp"

namespace join2pn {

namespace {

using Subst = std::map<Name, Name>;

bool contains(const std::vector<Name>& v, const Name& n) {
  return std::find(v.begin(), v.end(), n) != v.end();
}

Subst without(Subst s, const std::vector<Name>& keys) {
  for (const auto& k : keys) s.erase(k);
  return s;
}

// Images of the entries of `s` whose key is free in `fv`.
std::set<Name> live_images(const Subst& s, const std::vector<Name>& fv) {
  std::set<Name> out;
  for (const auto& n : fv) {
    auto it = s.find(n);
    if (it != s.end()) out.insert(it->second);
  }
  return out;
}

Name rename_one(const Subst& s, const Name& n) {
  auto it = s.find(n);
  return it == s.end() ? n : it->second;
}

Process subst(const Process& p, const Subst& s);

Definition subst_definition(const Definition& d, const Subst& outer, const Process& scope,
                            Process& scope_out) {
  const auto dv = defined_vars(d);
  Subst s1 = without(outer, dv);

  // Defined names that would capture an image in the definition or its scope.
  std::vector<Name> fv = free_vars(scope);
  for (const auto& n : free_vars(d)) fv.push_back(n);
  const auto captured = live_images(s1, fv);
  for (const auto& c : dv)
    if (captured.count(c)) s1[c] = fresh_name();

  Definition out = d;
  for (auto& t : out.pattern) t.channel = rename_one(s1, t.channel);

  Subst s2 = without(s1, received_vars(d));
  const auto rcaptured = live_images(s2, free_vars(d.reaction));
  for (auto& t : out.pattern) {
    for (auto& param : t.params) {
      if (rcaptured.count(param)) {
        const Name f = fresh_name();
        s2[param] = f;
        param = f;
      }
    }
  }
  out.reaction = subst(d.reaction, s2);
  scope_out = subst(scope, s1);
  return out;
}

Process subst(const Process& p, const Subst& s) {
  if (s.empty()) return p;
  if (const auto* m = p.as_message()) {
    std::vector<Name> args;
    args.reserve(m->args.size());
    for (const auto& a : m->args) args.push_back(rename_one(s, a));
    return Process::message(rename_one(s, m->channel), std::move(args));
  }
  if (const auto* par = p.as_par()) {
    return Process::par(subst(par->left, s), subst(par->right, s));
  }
  if (const auto* def = p.as_def()) {
    Process scope;
    Definition d = subst_definition(def->definition, s, def->scope, scope);
    return Process::def(std::move(d), std::move(scope));
  }
  return p;
}

void check_injective(const Subst& sigma) {
  std::set<Name> targets;
  for (const auto& [from, to] : sigma)
    if (!targets.insert(to).second) throw RenameError("renaming is not injective: two names map to '" + to + "'");
}

}  // namespace

Process substitute(const Process& p, const std::map<Name, Name>& sigma) { return subst(p, sigma); }

Process alpha_rename(const Process& p, RenameKind kind, const std::map<Name, Name>& sigma) {
  const auto* def = p.as_def();
  if (!def) throw RenameError("alpha_rename expects a definition at the root");
  check_injective(sigma);
  const Definition& d = def->definition;

  if (kind == RenameKind::Defined) {
    const auto dv = defined_vars(d);
    const auto fv = free_vars(p);
    for (const auto& [from, to] : sigma) {
      if (!contains(dv, from)) throw RenameError("'" + from + "' is not defined by the definition");
      if (from == to) continue;
      if (contains(fv, to)) throw RenameError("renaming '" + from + "' to '" + to + "' captures a free name");
      if (contains(dv, to) && !sigma.count(to))
        throw RenameError("renaming '" + from + "' to '" + to + "' clashes with another defined name");
    }
    Definition out = d;
    for (auto& t : out.pattern) t.channel = rename_one(sigma, t.channel);
    out.reaction = subst(d.reaction, without(sigma, received_vars(d)));
    return Process::def(std::move(out), subst(def->scope, sigma));
  }

  const auto rv = received_vars(d);
  const auto body_fv = free_vars(d.reaction);
  for (const auto& [from, to] : sigma) {
    if (!contains(rv, from)) throw RenameError("'" + from + "' is not received by the definition");
    if (from == to) continue;
    if (contains(body_fv, to) && !contains(rv, to))
      throw RenameError("renaming '" + from + "' to '" + to + "' captures a name of the body");
    if (contains(rv, to) && !sigma.count(to))
      throw RenameError("renaming '" + from + "' to '" + to + "' clashes with another received name");
  }
  Definition out = d;
  for (auto& t : out.pattern)
    for (auto& param : t.params) param = rename_one(sigma, param);
  out.reaction = subst(d.reaction, sigma);
  return Process::def(std::move(out), def->scope);
}

}  // namespace join2pn
