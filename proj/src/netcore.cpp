#include "join2pn/netcore.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace join2pn {

Marking make_marking(std::vector<PlaceId> places) {
  std::sort(places.begin(), places.end());
  places.erase(std::unique(places.begin(), places.end()), places.end());
  return places;
}

bool contains(const Marking& m, PlaceId p) { return std::binary_search(m.begin(), m.end(), p); }

PlaceId JoinNet::add_place(PlaceCore core, std::size_t layer) {
  const auto id = static_cast<PlaceId>(places_.size());
  places_.push_back(Place{id, std::move(core), layer});
  consumers_.emplace_back();
  producers_.emplace_back();
  return id;
}

TransId JoinNet::add_transition(std::vector<PlaceId> preset, JoinLabel label,
                                std::vector<PlaceId> postset, std::size_t layer) {
  if (preset.empty()) throw std::invalid_argument("transition with empty preset");
  for (auto p : preset)
    if (p >= places_.size()) throw std::out_of_range("preset place " + std::to_string(p));
  for (auto p : postset)
    if (p >= places_.size()) throw std::out_of_range("postset place " + std::to_string(p));
  const auto id = static_cast<TransId>(transitions_.size());
  for (auto p : preset) consumers_[p].push_back(id);
  for (auto p : postset) producers_[p].push_back(id);
  transitions_.push_back(Transition{id, std::move(preset), std::move(label), std::move(postset), layer});
  return id;
}

void JoinNet::set_initial(Marking m) {
  m = make_marking(std::move(m));
  for (auto p : m)
    if (p >= places_.size()) throw std::out_of_range("initial place " + std::to_string(p));
  initial_ = std::move(m);
}

namespace {

const Transition& checked(const JoinNet& net, TransId t) {
  if (t >= net.transitions().size())
    throw FiringError(FiringError::Kind::Foreign, "transition " + std::to_string(t) + " is not in the net");
  return net.transition(t);
}

}  // namespace

bool enabled(const JoinNet& net, const Marking& m, TransId t) {
  const Transition& tr = checked(net, t);
  return std::all_of(tr.preset.begin(), tr.preset.end(), [&](PlaceId p) { return contains(m, p); });
}

Marking fire(const JoinNet& net, const Marking& m, TransId t) {
  if (!enabled(net, m, t))
    throw FiringError(FiringError::Kind::NotEnabled, "transition " + std::to_string(t) + " is not enabled");
  const Transition& tr = net.transition(t);
  Marking rest;
  for (auto p : m)
    if (std::find(tr.preset.begin(), tr.preset.end(), p) == tr.preset.end()) rest.push_back(p);
  for (auto p : tr.postset)
    if (contains(rest, p))
      throw FiringError(FiringError::Kind::Unsafe,
                        "firing " + std::to_string(t) + " puts a second token on place " + std::to_string(p));
  rest.insert(rest.end(), tr.postset.begin(), tr.postset.end());
  return make_marking(std::move(rest));
}

std::optional<std::size_t> NetLts::index_of(const Marking& m) const {
  auto it = std::find(states.begin(), states.end(), m);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

NetLts lts_of_net(const JoinNet& net, std::optional<std::size_t> depth) {
  NetLts lts;
  lts.depth = depth;
  std::map<Marking, std::size_t> index;

  // Pending transitions stand for moves the bounded construction left out.
  auto has_pending = [&](const Marking& m) {
    return std::any_of(net.pending().begin(), net.pending().end(), [&](const PendingTransition& p) {
      return std::all_of(p.preset.begin(), p.preset.end(), [&](PlaceId q) { return contains(m, q); });
    });
  };
  auto add = [&](const Marking& m, std::size_t dist) {
    auto [it, inserted] = index.emplace(m, lts.states.size());
    if (inserted) {
      lts.states.push_back(m);
      lts.distance.push_back(dist);
      lts.truncated.push_back(has_pending(m));
    }
    return std::pair{it->second, inserted};
  };

  add(net.initial(), 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    const Marking m = lts.states[s];
    const bool at_bound = depth && lts.distance[s] >= *depth;
    for (const auto& t : net.transitions()) {
      if (!enabled(net, m, t.id)) continue;
      if (at_bound) {
        lts.truncated[s] = true;
        break;
      }
      auto [dst, fresh] = add(fire(net, m, t.id), lts.distance[s] + 1);
      if (fresh) queue.push_back(dst);
      lts.edges.push_back({s, t.id, t.label, dst});
    }
  }
  return lts;
}

std::vector<Marking> reachable_markings(const JoinNet& net) { return lts_of_net(net).states; }

StepStatus step_status(const JoinNet& net, const Marking& m, std::span<const TransId> step) {
  if (step.empty()) throw std::invalid_argument("empty step");
  std::vector<PlaceId> used;
  for (auto t : step) {
    const Transition& tr = checked(net, t);
    used.insert(used.end(), tr.preset.begin(), tr.preset.end());
  }
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end()) return StepStatus::Conflict;
  for (auto p : used)
    if (!contains(m, p)) return StepStatus::NotEnabled;
  return StepStatus::Enabled;
}

bool step_enabled(const JoinNet& net, const Marking& m, std::span<const TransId> step) {
  return step_status(net, m, step) == StepStatus::Enabled;
}

Marking fire_step(const JoinNet& net, const Marking& m, std::span<const TransId> step) {
  switch (step_status(net, m, step)) {
    case StepStatus::Conflict:
      throw FiringError(FiringError::Kind::Conflict, "step transitions share a preset place");
    case StepStatus::NotEnabled:
      throw FiringError(FiringError::Kind::NotEnabled, "step is not enabled");
    case StepStatus::Enabled:
      break;
  }
  std::vector<PlaceId> consumed;
  std::vector<PlaceId> produced;
  for (auto t : step) {
    const Transition& tr = net.transition(t);
    consumed.insert(consumed.end(), tr.preset.begin(), tr.preset.end());
    produced.insert(produced.end(), tr.postset.begin(), tr.postset.end());
  }
  Marking rest;
  for (auto p : m)
    if (std::find(consumed.begin(), consumed.end(), p) == consumed.end()) rest.push_back(p);
  std::sort(produced.begin(), produced.end());
  for (std::size_t i = 0; i < produced.size(); ++i)
    if (contains(rest, produced[i]) || (i && produced[i] == produced[i - 1]))
      throw FiringError(FiringError::Kind::Unsafe, "step puts a second token on place " +
                                                       std::to_string(produced[i]));
  rest.insert(rest.end(), produced.begin(), produced.end());
  return make_marking(std::move(rest));
}

std::vector<std::vector<TransId>> maximal_steps(const JoinNet& net, const Marking& m) {
  std::vector<TransId> en;
  for (const auto& t : net.transitions())
    if (enabled(net, m, t.id)) en.push_back(t.id);

  auto disjoint = [&](TransId a, TransId b) {
    const auto& pa = net.transition(a).preset;
    const auto& pb = net.transition(b).preset;
    return std::none_of(pa.begin(), pa.end(),
                        [&](PlaceId p) { return std::find(pb.begin(), pb.end(), p) != pb.end(); });
  };

  // Maximal independent sets of the conflict graph on enabled transitions.
  std::vector<std::vector<TransId>> out;
  std::vector<TransId> cur;
  auto extend = [&](auto&& self, std::size_t i) -> void {
    if (i == en.size()) {
      if (cur.empty()) return;
      for (auto t : en) {
        if (std::find(cur.begin(), cur.end(), t) != cur.end()) continue;
        if (std::all_of(cur.begin(), cur.end(), [&](TransId c) { return disjoint(c, t); })) return;
      }
      out.push_back(cur);
      return;
    }
    const TransId t = en[i];
    if (std::all_of(cur.begin(), cur.end(), [&](TransId c) { return disjoint(c, t); })) {
      cur.push_back(t);
      self(self, i + 1);
      cur.pop_back();
    }
    self(self, i + 1);
  };
  extend(extend, 0);
  std::sort(out.begin(), out.end());
  return out;
}

NetRelations conflict_relations(const JoinNet& net) {
  NetRelations rel;
  const auto& ts = net.transitions();
  const std::size_t np = net.places().size();
  const std::size_t nt = ts.size();

  for (std::size_t a = 0; a < nt; ++a)
    for (std::size_t b = a + 1; b < nt; ++b)
      for (auto p : ts[a].preset)
        if (std::find(ts[b].preset.begin(), ts[b].preset.end(), p) != ts[b].preset.end()) {
          rel.direct_conflict.emplace(a, b);
          break;
        }

  // Nodes reachable from each transition along the flow relation, itself included.
  auto node_index = [&](NodeRef n) { return n.is_place ? n.id : np + n.id; };
  std::vector<std::vector<bool>> reach(nt, std::vector<bool>(np + nt, false));
  for (std::size_t t = 0; t < nt; ++t) {
    std::vector<NodeRef> stack{NodeRef{false, static_cast<std::uint32_t>(t)}};
    while (!stack.empty()) {
      const NodeRef n = stack.back();
      stack.pop_back();
      if (reach[t][node_index(n)]) continue;
      reach[t][node_index(n)] = true;
      if (n.is_place) {
        for (auto c : net.consumers(n.id)) stack.push_back({false, c});
      } else {
        for (auto p : ts[n.id].postset) stack.push_back({true, p});
      }
    }
  }

  for (const auto& [a, b] : rel.direct_conflict) {
    for (std::size_t i = 0; i < nt; ++i) {
      if (!reach[a][np + i] && !reach[b][np + i]) continue;
      for (std::size_t j = 0; j < nt; ++j)
        if ((reach[a][np + i] && reach[b][np + j]) || (reach[b][np + i] && reach[a][np + j]))
          if (i != j) rel.conflict.emplace(std::min(i, j), std::max(i, j));
    }
    for (std::size_t n = 0; n < np + nt; ++n)
      if (reach[a][n] && reach[b][n])
        rel.self_conflict.insert(n < np ? NodeRef{true, static_cast<std::uint32_t>(n)}
                                        : NodeRef{false, static_cast<std::uint32_t>(n - np)});
  }

  return rel;
}

NetRelations causality_conflict(const JoinNet& net) {
  NetRelations rel = conflict_relations(net);
  const std::size_t nt = net.transitions().size();

  // t1 < t2: t2 occurs somewhere, but never before t1 has fired.
  const NetLts lts = lts_of_net(net);
  std::vector<std::vector<std::size_t>> out_edges(lts.states.size());
  for (std::size_t i = 0; i < lts.edges.size(); ++i) out_edges[lts.edges[i].src].push_back(i);
  std::vector<bool> occurs(nt, false);
  for (const auto& e : lts.edges) occurs[e.transition] = true;

  for (std::size_t t1 = 0; t1 < nt; ++t1) {
    std::vector<bool> seen(lts.states.size(), false);
    std::vector<bool> reachable_without(nt, false);
    std::vector<std::size_t> stack{lts.initial};
    while (!stack.empty()) {
      const std::size_t s = stack.back();
      stack.pop_back();
      if (seen[s]) continue;
      seen[s] = true;
      for (auto ei : out_edges[s]) {
        const auto& e = lts.edges[ei];
        reachable_without[e.transition] = true;
        if (e.transition != t1) stack.push_back(e.dst);
      }
    }
    for (std::size_t t2 = 0; t2 < nt; ++t2)
      if (t2 != t1 && occurs[t2] && !reachable_without[t2]) rel.causal.emplace(t1, t2);
  }

  for (std::size_t a = 0; a < nt; ++a)
    for (std::size_t b = a + 1; b < nt; ++b) {
      const std::pair<TransId, TransId> ab(a, b);
      if (rel.conflict.count(ab) || rel.causal.count(ab) || rel.causal.count({b, a})) continue;
      rel.independent.insert(ab);
    }
  return rel;
}

}  // namespace join2pn
