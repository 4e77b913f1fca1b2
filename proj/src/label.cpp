#include "join2pn/label.hpp"

namespace join2pn {

JoinLabel make_label(const Definition& source) {
  return JoinLabel{source.id, definition_term_key(source), definition_alpha_key(source),
                   to_string(source)};
}

namespace {

void scoped_keys(const Process& p, const std::map<Name, Name>& ctx, std::map<DefId, std::string>& out) {
  if (const auto* par = p.as_par()) {
    scoped_keys(par->left, ctx, out);
    scoped_keys(par->right, ctx, out);
    return;
  }
  const auto* def = p.as_def();
  if (!def) return;
  const Definition& d = def->definition;
  std::map<Name, Name> sigma;
  for (const auto& n : free_vars(d))
    if (auto it = ctx.find(n); it != ctx.end()) sigma[n] = it->second;
  for (const auto& n : defined_vars(d)) sigma.erase(n);
  std::string key = definition_alpha_key(d);
  if (!sigma.empty()) key = definition_alpha_key(substitute(Process::def(d, Process::nil()), sigma).as_def()->definition);
  out[d.id] = key;

  std::map<Name, Name> scope = ctx;
  for (std::size_t i = 0; i < d.pattern.size(); ++i) scope[d.pattern[i].channel] = "^{" + key + "}.d" + std::to_string(i);
  std::map<Name, Name> body = scope;
  std::size_t j = 0;
  for (const auto& t : d.pattern)
    for (const auto& v : t.params) body[v] = "^{" + key + "}.r" + std::to_string(j++);
  scoped_keys(def->scope, scope, out);
  scoped_keys(d.reaction, body, out);
}

}  // namespace

std::map<DefId, std::string> scoped_alpha_keys(const Process& program) {
  std::map<DefId, std::string> out;
  scoped_keys(program, {}, out);
  return out;
}

}  // namespace join2pn
