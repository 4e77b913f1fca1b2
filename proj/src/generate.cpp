#include "join2pn/generate.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace join2pn {

namespace {

struct Channel {
  Name name;
  std::size_t arity;
};

class TermGen {
 public:
  TermGen(std::mt19937_64& rng, const TermShape& shape)
      : rng_(rng), shape_(shape), defs_left_(shape.max_defs), msgs_left_(shape.max_messages) {}

  Process top() { return proc({}, {"k", "j"}, 0); }

 private:
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::size_t arity() { return pick(shape_.max_arity + 1); }

  Process proc(const std::vector<Channel>& chans, const std::vector<Name>& values, int depth) {
    if (defs_left_ > 0 && coin(0.4)) return def(chans, values, depth);
    if (msgs_left_ > 1 && depth < 4 && coin(0.5))
      return Process::par(proc(chans, values, depth + 1), proc(chans, values, depth + 1));
    if (msgs_left_ > 0 && coin(0.9)) return message(chans, values);
    return Process::nil();
  }

  Process message(const std::vector<Channel>& chans, const std::vector<Name>& values) {
    --msgs_left_;
    Name chan;
    std::size_t n;
    if (!chans.empty() && coin(0.85)) {
      const auto& c = chans[pick(chans.size())];
      chan = c.name;
      n = c.arity;
    } else {
      chan = values[pick(values.size())];
      n = arity();
    }
    std::vector<Name> args;
    for (std::size_t i = 0; i < n; ++i) args.push_back(values[pick(values.size())]);
    return Process::message(chan, std::move(args));
  }

  Process def(const std::vector<Channel>& chans, const std::vector<Name>& values, int depth) {
    --defs_left_;
    static const std::vector<Name> kChannels{"x", "y", "z", "a", "b"};
    static const std::vector<Name> kParams{"u", "v", "w", "s"};
    Definition d;
    std::vector<Name> pool = kChannels;
    std::shuffle(pool.begin(), pool.end(), rng_);
    std::vector<Name> params = kParams;
    std::shuffle(params.begin(), params.end(), rng_);
    std::size_t next_param = 0;
    const std::size_t size = coin(0.6) ? 2 : 1;
    std::vector<Channel> own;
    for (std::size_t i = 0; i < size; ++i) {
      MessageTemplate t{pool[i], {}};
      const std::size_t n = std::min(arity(), params.size() - next_param);
      for (std::size_t k = 0; k < n; ++k) t.params.push_back(params[next_param++]);
      own.push_back({t.channel, t.params.size()});
      d.pattern.push_back(std::move(t));
    }

    std::vector<Channel> inner = chans;
    std::vector<Name> inner_values = values;
    for (const auto& c : own) {
      std::erase_if(inner, [&](const Channel& o) { return o.name == c.name; });
      inner.push_back(c);
      if (std::find(inner_values.begin(), inner_values.end(), c.name) == inner_values.end())
        inner_values.push_back(c.name);
    }

    // Body: received names may be used as channels or as values.
    std::vector<Channel> body_chans = inner;
    std::vector<Name> body_values = inner_values;
    for (std::size_t k = 0; k < next_param; ++k) {
      body_chans.push_back({params[k], arity()});
      body_values.push_back(params[k]);
    }
    const std::size_t saved = msgs_left_;
    msgs_left_ = std::min<std::size_t>(msgs_left_, 2);
    const std::size_t granted = msgs_left_;
    d.reaction = proc(body_chans, body_values, depth + 2);
    msgs_left_ = saved - (granted - msgs_left_);

    // Often seed the scope with one full match of the pattern.
    std::vector<Process> parts;
    if (msgs_left_ >= own.size() && coin(0.6)) {
      for (const auto& c : own) {
        msgs_left_ -= 1;
        std::vector<Name> args;
        for (std::size_t k = 0; k < c.arity; ++k) args.push_back(inner_values[pick(inner_values.size())]);
        parts.push_back(Process::message(c.name, std::move(args)));
      }
    }
    parts.push_back(proc(inner, inner_values, depth + 1));
    return Process::def(std::move(d), par_all(parts));
  }

  std::mt19937_64& rng_;
  TermShape shape_;
  std::size_t defs_left_;
  std::size_t msgs_left_;
};

// Positions are paths: 0 = left or scope, 1 = right or reaction body.
using Path = std::vector<int>;

void positions(const Process& p, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  if (const auto* par = p.as_par()) {
    cur.push_back(0);
    positions(par->left, cur, out);
    cur.back() = 1;
    positions(par->right, cur, out);
    cur.pop_back();
  } else if (const auto* d = p.as_def()) {
    cur.push_back(0);
    positions(d->scope, cur, out);
    cur.back() = 1;
    positions(d->definition.reaction, cur, out);
    cur.pop_back();
  }
}

Process replace_at(const Process& p, const Path& path, std::size_t i, const std::function<Process(const Process&)>& f) {
  if (i == path.size()) return f(p);
  if (const auto* par = p.as_par()) {
    return path[i] == 0 ? Process::par(replace_at(par->left, path, i + 1, f), par->right)
                        : Process::par(par->left, replace_at(par->right, path, i + 1, f));
  }
  const auto* d = p.as_def();
  if (path[i] == 0) return Process::def(d->definition, replace_at(d->scope, path, i + 1, f));
  Definition def = d->definition;
  def.reaction = replace_at(def.reaction, path, i + 1, f);
  return Process::def(std::move(def), d->scope);
}

const Process& at(const Process& p, const Path& path) {
  const Process* cur = &p;
  for (int step : path) {
    if (const auto* par = cur->as_par()) {
      cur = step == 0 ? &par->left : &par->right;
    } else {
      const auto* d = cur->as_def();
      cur = step == 0 ? &d->scope : &d->definition.reaction;
    }
  }
  return *cur;
}

bool disjoint(const std::vector<Name>& a, const std::vector<Name>& b) {
  return std::none_of(a.begin(), a.end(), [&](const Name& n) { return std::find(b.begin(), b.end(), n) != b.end(); });
}

// The rule applied at `n`, or empty if its side condition fails.
std::optional<Process> apply_rule(Rewrite r, const Process& n, std::mt19937_64& rng) {
  const auto* par = n.as_par();
  const auto* def = n.as_def();
  switch (r) {
    case Rewrite::AddUnit:
      return Process::par(n, Process::nil());
    case Rewrite::DropUnit:
      if (par && par->right.is_nil()) return par->left;
      if (par && par->left.is_nil()) return par->right;
      return std::nullopt;
    case Rewrite::Commute:
      if (par) return Process::par(par->right, par->left);
      return std::nullopt;
    case Rewrite::AssocRight:
      if (par && par->left.as_par()) {
        const auto* l = par->left.as_par();
        return Process::par(l->left, Process::par(l->right, par->right));
      }
      return std::nullopt;
    case Rewrite::AssocLeft:
      if (par && par->right.as_par()) {
        const auto* r2 = par->right.as_par();
        return Process::par(Process::par(par->left, r2->left), r2->right);
      }
      return std::nullopt;
    case Rewrite::ExtrudeOut:
      // P | def D in Q  ->  def D in P | Q
      if (par && par->right.as_def()) {
        const auto* d = par->right.as_def();
        if (disjoint(free_vars(par->left), defined_vars(d->definition)))
          return Process::def(d->definition, Process::par(par->left, d->scope));
      }
      if (par && par->left.as_def()) {
        const auto* d = par->left.as_def();
        if (disjoint(free_vars(par->right), defined_vars(d->definition)))
          return Process::def(d->definition, Process::par(d->scope, par->right));
      }
      return std::nullopt;
    case Rewrite::ExtrudeIn:
      // def D in P | Q  ->  P | def D in Q
      if (def && def->scope.as_par()) {
        const auto* s = def->scope.as_par();
        if (disjoint(free_vars(s->left), defined_vars(def->definition)))
          return Process::par(s->left, Process::def(def->definition, s->right));
      }
      return std::nullopt;
    case Rewrite::Swap:
      if (def && def->scope.as_def()) {
        const auto* inner = def->scope.as_def();
        if (disjoint(free_vars(def->definition), free_vars(inner->definition)))
          return Process::def(inner->definition, Process::def(def->definition, inner->scope));
      }
      return std::nullopt;
    case Rewrite::RenameDefined:
    case Rewrite::RenameReceived: {
      if (!def) return std::nullopt;
      const auto kind = r == Rewrite::RenameDefined ? RenameKind::Defined : RenameKind::Received;
      const auto names = kind == RenameKind::Defined ? defined_vars(def->definition) : received_vars(def->definition);
      if (names.empty()) return std::nullopt;
      std::map<Name, Name> sigma;
      for (const auto& v : names)
        if (std::bernoulli_distribution(0.7)(rng) || sigma.empty()) sigma[v] = fresh_name();
      return alpha_rename(n, kind, sigma);
    }
  }
  return std::nullopt;
}

const std::vector<Rewrite> kRules{Rewrite::AddUnit,    Rewrite::DropUnit,  Rewrite::Commute,
                                  Rewrite::AssocLeft,  Rewrite::AssocRight, Rewrite::ExtrudeOut,
                                  Rewrite::ExtrudeIn,  Rewrite::Swap,      Rewrite::RenameDefined,
                                  Rewrite::RenameReceived};

}  // namespace

Process random_term(std::mt19937_64& rng, const TermShape& shape) {
  while (true) {
    Process p = elaborate(TermGen(rng, shape).top());
    if (check_normality(p).normal) return p;
  }
}

std::string to_string(Rewrite r) {
  switch (r) {
    case Rewrite::AddUnit: return "add-unit";
    case Rewrite::DropUnit: return "drop-unit";
    case Rewrite::Commute: return "commute";
    case Rewrite::AssocLeft: return "assoc-left";
    case Rewrite::AssocRight: return "assoc-right";
    case Rewrite::ExtrudeOut: return "extrude-out";
    case Rewrite::ExtrudeIn: return "extrude-in";
    case Rewrite::Swap: return "swap";
    case Rewrite::RenameDefined: return "rename-dv";
    case Rewrite::RenameReceived: return "rename-rv";
  }
  return "?";
}

std::optional<RewriteStep> random_rewrite(const Process& p, std::mt19937_64& rng) {
  std::vector<Path> all;
  Path cur;
  positions(p, cur, all);
  std::vector<std::pair<Path, Rewrite>> options;
  for (const auto& path : all)
    for (Rewrite r : kRules) options.emplace_back(path, r);
  std::shuffle(options.begin(), options.end(), rng);
  // AddUnit always applies; prefer the others by trying it last.
  std::stable_partition(options.begin(), options.end(),
                        [](const auto& o) { return o.second != Rewrite::AddUnit; });
  for (const auto& [path, rule] : options) {
    const auto replaced = apply_rule(rule, at(p, path), rng);
    if (!replaced) continue;
    Process result = replace_at(p, path, 0, [&](const Process&) { return *replaced; });
    if (!check_normality(result).normal) continue;
    return RewriteStep{rule, std::move(result)};
  }
  return std::nullopt;
}

std::vector<Process> enumerated_corpus() {
  // Definition templates over channels {0},{1}; bodies may use k.
  struct Template {
    const char* pattern;
    std::vector<std::pair<int, std::size_t>> channels;  // (slot, arity)
  };
  static const std::vector<Template> kTemplates{
      {"{0}<u> |> u<>", {{0, 1}}},
      {"{0}<> |> 0", {{0, 0}}},
      {"{0}<u>|{1}<v> |> u<v>", {{0, 1}, {1, 1}}},
      {"{0}<u,v> |> u<v>", {{0, 2}}},
      {"{0}<u>|{1}<> |> {0}<u> | u<>", {{0, 1}, {1, 0}}},
      {"{0}<u>|{1}<v> |> (def r<w> |> v<w> in u<r>)", {{0, 1}, {1, 1}}},
  };
  auto fill = [](std::string s, const Name& c0, const Name& c1) {
    for (std::size_t i; (i = s.find("{0}")) != std::string::npos;) s.replace(i, 3, c0);
    for (std::size_t i; (i = s.find("{1}")) != std::string::npos;) s.replace(i, 3, c1);
    return s;
  };
  auto pool_for = [](const Template& t, const Name& c0, const Name& c1, const std::vector<Name>& values) {
    std::vector<std::string> pool;
    for (const auto& [slot, arity] : t.channels) {
      const Name& c = slot == 0 ? c0 : c1;
      if (arity == 0) {
        pool.push_back(c + "<>");
      } else if (arity == 1) {
        for (const auto& v : values) pool.push_back(c + "<" + v + ">");
      } else {
        pool.push_back(c + "<" + values[0] + "," + values.back() + ">");
      }
    }
    if (pool.size() > 4) pool.resize(4);
    return pool;
  };
  // Multisets of size <= n over `pool`, as "m1 | m2 | ..." (or "0").
  auto multisets = [](const std::vector<std::string>& pool, std::size_t n) {
    std::vector<std::string> out;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> go = [&](std::size_t from) {
      std::string s;
      for (std::size_t i = 0; i < pick.size(); ++i) s += (i ? " | " : "") + pool[pick[i]];
      out.push_back(pick.empty() ? "0" : s);
      if (pick.size() == n) return;
      for (std::size_t i = from; i < pool.size(); ++i) {
        pick.push_back(i);
        go(i);
        pick.pop_back();
      }
    };
    go(0);
    return out;
  };

  std::vector<std::string> sources{"0", "k<>", "k<j>", "k<j> | j<k,k>"};
  for (const auto& t : kTemplates) {
    const std::string d = fill(t.pattern, "x", "y");
    for (const auto& m : multisets(pool_for(t, "x", "y", {"k", "x"}), 4)) sources.push_back("def " + d + " in " + m);
  }
  for (std::size_t i = 0; i < kTemplates.size(); ++i) {
    for (std::size_t j = 0; j < kTemplates.size(); ++j) {
      const auto& t1 = kTemplates[i];
      const auto& t2 = kTemplates[j];
      const std::string d1 = fill(t1.pattern, "x", "y");
      const std::string d2 = fill(t2.pattern, "a", "b");
      // Nested: the inner definition's names may travel on the outer channels.
      auto pool = pool_for(t1, "x", "y", {"k", "a"});
      const auto inner = pool_for(t2, "a", "b", {"k", "x"});
      pool.resize(std::min<std::size_t>(pool.size(), 2));
      pool.insert(pool.end(), inner.begin(), inner.begin() + std::min<std::size_t>(inner.size(), 2));
      for (const auto& m : multisets(pool, 3)) sources.push_back("def " + d1 + " in def " + d2 + " in " + m);
      // Side by side.
      const auto left = multisets(pool_for(t1, "x", "y", {"k"}), 2);
      const auto right = multisets(pool_for(t2, "a", "b", {"k"}), 2);
      for (const auto& l : left)
        for (const auto& r : right) sources.push_back("(def " + d1 + " in " + l + ") | (def " + d2 + " in " + r + ")");
    }
  }

  std::vector<Process> out;
  std::set<std::string> seen;
  for (const auto& s : sources) {
    Process p = parse(s);
    if (!check_normality(p).normal) continue;
    if (!seen.insert(canonical_key(p)).second) continue;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace join2pn
