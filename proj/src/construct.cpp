#include "join2pn/construct.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace join2pn {

namespace {

std::size_t count_defs(const Process& p) {
  if (const auto* par = p.as_par()) return count_defs(par->left) + count_defs(par->right);
  if (const auto* d = p.as_def()) return 1 + count_defs(d->definition.reaction) + count_defs(d->scope);
  return 0;
}

std::optional<std::size_t> slot_of(const Definition& d, const PlaceCore& c) {
  for (std::size_t i = 0; i < d.pattern.size(); ++i)
    if (d.pattern[i].channel == c.channel && d.pattern[i].params.size() == c.args.size()) return i;
  return std::nullopt;
}

class Builder {
 public:
  Builder(const Process& j, const BuildConfig& cfg) : table_(j), cfg_(cfg) {
    net_.set_depth_bound(cfg.depth_bound);
    std::map<DefId, DefInfo> defs;
    const auto keys = scoped_alpha_keys(j);
    for (const auto& [id, d] : table_.all()) {
      JoinLabel label = make_label(d);
      label.alpha = keys.at(id);
      defs[id] = DefInfo{label, defined_vars(d)};
    }
    net_.set_definitions(std::move(defs));
    Marking m0;
    for (auto& core : dec(j, NameEnv::bottom(), table_, {cfg.mode, ScopeSymbol::kRootInstance, &closures_}))
      m0.push_back(add_place(std::move(core), 0));
    net_.set_initial(m0);
  }

  JoinNet run() {
    while (!queue_.empty()) {
      const PlaceId p = queue_.front();
      queue_.pop_front();
      visit(p);
    }
    return std::move(net_);
  }

 private:
  PlaceId add_place(PlaceCore core, std::size_t layer) {
    if (net_.places().size() >= cfg_.max_places)
      throw CapExceeded("place cap of " + std::to_string(cfg_.max_places) + " exceeded", net_);
    const PlaceId id = net_.add_place(std::move(core), layer);
    queue_.push_back(id);
    return id;
  }

  // Pairs each place with the places visited before it, so every candidate
  // preset is seen exactly once.
  void visit(PlaceId p) {
    const PlaceCore core = net_.place(p).core;
    const auto top = core.sender.top();
    if (!top) return;
    const Definition& d = table_.at(top->def);
    const auto slot = slot_of(d, core);
    if (!slot) return;

    if (d.pattern.size() == 1) {
      candidate(d, {p});
    } else {
      const std::size_t other = 1 - *slot;
      auto it = seen_.find({core.sender, d.pattern[other].channel});
      if (it != seen_.end()) {
        for (PlaceId q : it->second) {
          if (net_.place(q).core.args.size() != d.pattern[other].params.size()) continue;
          candidate(d, *slot == 0 ? std::vector<PlaceId>{p, q} : std::vector<PlaceId>{q, p});
        }
      }
    }
    seen_[{core.sender, core.channel}].push_back(p);
  }

  // `preset` in pattern order.
  void candidate(const Definition& d, std::vector<PlaceId> preset) {
    std::size_t layer = 0;
    for (auto q : preset) layer = std::max(layer, net_.place(q).layer);
    ++layer;
    std::vector<PlaceId> sorted = preset;
    std::sort(sorted.begin(), sorted.end());
    if (!keys_.insert({sorted, d.id}).second) return;

    JoinLabel label = net_.definitions().at(d.id).label;
    if (layer > cfg_.depth_bound) {
      net_.add_pending({sorted, std::move(label)});
      return;
    }
    if (net_.transitions().size() >= cfg_.max_transitions)
      throw CapExceeded("transition cap of " + std::to_string(cfg_.max_transitions) + " exceeded", net_);

    std::vector<PlaceCore> matched;
    for (auto q : preset) matched.push_back(net_.place(q).core);
    const NameEnv f = f_for_transition(d, matched, cfg_.mode, &closures_);
    const auto t = static_cast<std::int32_t>(net_.transitions().size());
    std::vector<PlaceId> post;
    for (auto& c : dec(d.reaction, f, table_, {cfg_.mode, t, &closures_})) post.push_back(add_place(std::move(c), layer));
    net_.add_transition(std::move(sorted), std::move(label), std::move(post), layer);
  }

  DefTable table_;
  BuildConfig cfg_;
  Closures closures_;
  JoinNet net_;
  std::deque<PlaceId> queue_;
  std::map<std::pair<ScopeStack, Name>, std::vector<PlaceId>> seen_;
  std::set<std::pair<std::vector<PlaceId>, DefId>> keys_;
};

// Binder of a name: definition id and pattern position, or the free text.
using Binder = std::pair<std::int64_t, std::string>;
using MessageSig = std::vector<Binder>;

Binder place_binder(const JoinNet& net, const Name& n, const ScopeStack& s) {
  const auto top = s.top();
  if (!top) return {-1, n};
  auto it = net.definitions().find(top->def);
  if (it == net.definitions().end()) return {-1, n};
  const auto& chans = it->second.channels;
  for (std::size_t i = 0; i < chans.size(); ++i)
    if (chans[i] == n) return {top->def, std::to_string(i)};
  return {-1, n};
}

}  // namespace

JoinNet build_net(const Process& j, const BuildConfig& cfg) {
  const auto nr = check_normality(j);
  if (!nr.normal) throw NotNormal("process is not normal: parallel definitions share '" + nr.shared + "'");
  if (DefTable(j).all().size() != count_defs(j))
    throw std::invalid_argument("definition ids are not unique; elaborate the term first");
  return Builder(j, cfg).run();
}

std::optional<Marking> marking_of_term(const JoinNet& net, const Process& p) {
  // Canonical forms keep every definition at the top, above the messages.
  std::map<Name, Binder> bound;
  Process cur = canonical_form(p, true);
  while (const auto* d = cur.as_def()) {
    const auto& pat = d->definition.pattern;
    for (std::size_t i = 0; i < pat.size(); ++i) bound[pat[i].channel] = {d->definition.id, std::to_string(i)};
    cur = d->scope;
  }
  auto binder = [&](const Name& n) {
    auto it = bound.find(n);
    return it == bound.end() ? Binder{-1, n} : it->second;
  };
  std::vector<MessageSig> want;
  std::vector<Process> stack{cur};
  while (!stack.empty()) {
    const Process q = stack.back();
    stack.pop_back();
    if (const auto* m = q.as_message()) {
      MessageSig sig{binder(m->channel)};
      for (const auto& a : m->args) sig.push_back(binder(a));
      want.push_back(std::move(sig));
    } else if (const auto* par = q.as_par()) {
      stack.push_back(par->left);
      stack.push_back(par->right);
    }
  }
  std::sort(want.begin(), want.end());

  for (const auto& m : reachable_markings(net)) {
    if (m.size() != want.size()) continue;
    std::vector<MessageSig> have;
    for (auto pid : m) {
      const auto& c = net.place(pid).core;
      MessageSig sig{place_binder(net, c.channel, c.sender)};
      for (std::size_t i = 0; i < c.args.size(); ++i) sig.push_back(place_binder(net, c.args[i], c.arg_scopes[i]));
      have.push_back(std::move(sig));
    }
    std::sort(have.begin(), have.end());
    if (have == want) return m;
  }
  return std::nullopt;
}

}  // namespace join2pn
