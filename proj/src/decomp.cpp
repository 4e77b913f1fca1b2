#include "join2pn/decomp.hpp"

#include <algorithm>
#include <sstream>

namespace join2pn {

std::string to_string(const ScopeSymbol& s) {
  std::string out = "D" + std::to_string(s.def);
  if (s.instance != ScopeSymbol::kRootInstance) out += ".t" + std::to_string(s.instance);
  return out;
}

std::optional<ScopeSymbol> ScopeStack::top() const {
  if (items_.empty()) return std::nullopt;
  return items_.back();
}

ScopeStack ScopeStack::push(ScopeSymbol s) const {
  ScopeStack out = *this;
  out.items_.push_back(s);
  return out;
}

ScopeStack ScopeStack::pop() const {
  ScopeStack out = *this;
  if (!out.items_.empty()) out.items_.pop_back();
  return out;
}

std::string to_string(const ScopeStack& s) {
  std::string out = "[";
  const auto& items = s.items();
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    if (it != items.rbegin()) out += ',';
    out += to_string(*it);
  }
  return out + "]";
}

NameBinding NameEnv::lookup(const Name& n) const {
  auto it = overrides_.find(n);
  if (it != overrides_.end()) return it->second;
  return NameBinding{n, base_, false};
}

NameEnv NameEnv::with(const Name& n, NameBinding b) const {
  NameEnv out = *this;
  out.overrides_[n] = std::move(b);
  return out;
}

NameEnv NameEnv::pop(const Name& n) const {
  NameBinding b = lookup(n);
  b.stack = b.stack.pop();
  return with(n, std::move(b));
}

NameEnv NameEnv::enter(const Definition& def, ScopeSymbol sym, ScopeMode mode) const {
  NameEnv out = *this;
  if (mode == ScopeMode::Instance) {
    // The definition's own names shadow whatever they were bound to.
    for (const auto& t : def.pattern) out.overrides_.erase(t.channel);
  }
  out.base_ = out.base_.push(sym);
  for (auto& [n, b] : out.overrides_) {
    if (mode == ScopeMode::Instance && b.pinned) continue;
    b.stack = b.stack.push(sym);
  }
  return out;
}

NameEnv g(const Name& n, const NameEnv& f) { return f.pop(n); }

std::string to_string(const PlaceCore& c) {
  std::ostringstream os;
  os << c.channel << '<';
  for (std::size_t i = 0; i < c.args.size(); ++i) os << (i ? "," : "") << c.args[i];
  os << ">@" << to_string(c.sender);
  if (!c.args.empty()) {
    os << "  args@";
    for (std::size_t i = 0; i < c.arg_scopes.size(); ++i)
      os << (i ? "," : "") << to_string(c.arg_scopes[i]);
  }
  return os.str();
}

namespace {

bool resolved(const NameBinding& b, const DefTable& table) {
  const auto top = b.stack.top();
  return !top || table.defines(top->def, b.name);
}

void dec_into(const Process& p, const NameEnv& f, const DefTable& table, const DecOptions& opts,
              std::vector<PlaceCore>& out) {
  if (const auto* m = p.as_message()) {
    NameEnv env = f;
    // Sender first, then each argument; pops of distinct names commute.
    while (!resolved(env.lookup(m->channel), table)) env = g(m->channel, env);
    for (const auto& a : m->args)
      while (!resolved(env.lookup(a), table)) env = g(a, env);
    PlaceCore core;
    const NameBinding chan = env.lookup(m->channel);
    core.channel = chan.name;
    core.sender = chan.stack;
    for (const auto& a : m->args) {
      const NameBinding b = env.lookup(a);
      core.args.push_back(b.name);
      core.arg_scopes.push_back(b.stack);
    }
    out.push_back(std::move(core));
  } else if (const auto* par = p.as_par()) {
    dec_into(par->left, f, table, opts, out);
    dec_into(par->right, f, table, opts, out);
  } else if (const auto* def = p.as_def()) {
    const ScopeSymbol sym{def->definition.id,
                          opts.mode == ScopeMode::Instance ? opts.instance
                                                           : ScopeSymbol::kRootInstance};
    NameEnv entered = f.enter(def->definition, sym, opts.mode);
    if (opts.closures && opts.mode == ScopeMode::Instance) (*opts.closures)[sym] = entered;
    dec_into(def->scope, entered, table, opts, out);
  }
}

}  // namespace

std::vector<PlaceCore> dec(const Process& p, const NameEnv& f, const DefTable& table,
                           const DecOptions& opts) {
  std::vector<PlaceCore> out;
  dec_into(p, f, table, opts, out);
  return out;
}

NameEnv f_for_transition(const Definition& def, std::span<const PlaceCore> matched,
                         ScopeMode mode, const Closures* closures) {
  if (matched.size() != def.pattern.size())
    throw TransitionRuleError("pattern has " + std::to_string(def.pattern.size()) +
                              " messages, got " + std::to_string(matched.size()) + " places");
  const ScopeStack& s = matched.front().sender;
  const auto top = s.top();
  if (!top || top->def != def.id)
    throw TransitionRuleError("sender scope " + to_string(s) + " is not topped by D" +
                              std::to_string(def.id));
  NameEnv f(s);
  if (closures && mode == ScopeMode::Instance) {
    auto it = closures->find(*top);
    if (it != closures->end()) f = it->second;
  }
  for (std::size_t i = 0; i < matched.size(); ++i) {
    const PlaceCore& place = matched[i];
    const MessageTemplate& t = def.pattern[i];
    if (place.sender != s) throw TransitionRuleError("matched places have different sender scopes");
    if (place.channel != t.channel)
      throw TransitionRuleError("place on '" + place.channel + "' does not match '" + t.channel + "'");
    if (place.args.size() != t.params.size())
      throw TransitionRuleError("arity mismatch on '" + t.channel + "'");
    for (std::size_t j = 0; j < t.params.size(); ++j)
      f = f.with(t.params[j],
                 NameBinding{place.args[j], place.arg_scopes[j], mode == ScopeMode::Instance});
  }
  return f;
}

bool well_scoped(const PlaceCore& c, const DefTable& table) {
  if (!resolved(NameBinding{c.channel, c.sender}, table)) return false;
  for (std::size_t i = 0; i < c.args.size(); ++i)
    if (!resolved(NameBinding{c.args[i], c.arg_scopes[i]}, table)) return false;
  return true;
}

}  // namespace join2pn
