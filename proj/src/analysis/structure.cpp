#include <algorithm>
#include <deque>
#include <map>

#include "join2pn/analysis.hpp"

namespace join2pn {

OccurrenceReport check_occurrence(const JoinNet& net) {
  OccurrenceReport r;
  for (auto p : net.initial())
    if (!net.producers(p).empty()) r.produced_initial.push_back(p);
  for (const auto& p : net.places())
    if (net.producers(p.id).size() > 1) r.multi_producer.push_back(p.id);

  // Iterative DFS over the flow relation; a grey successor closes a cycle.
  const std::size_t np = net.places().size();
  const std::size_t n = np + net.transitions().size();
  auto node = [&](std::size_t i) {
    return i < np ? NodeRef{true, static_cast<std::uint32_t>(i)}
                  : NodeRef{false, static_cast<std::uint32_t>(i - np)};
  };
  auto succ = [&](std::size_t i) {
    std::vector<std::size_t> out;
    if (i < np) {
      for (auto t : net.consumers(static_cast<PlaceId>(i))) out.push_back(np + t);
    } else {
      for (auto p : net.transition(static_cast<TransId>(i - np)).postset) out.push_back(p);
    }
    return out;
  };
  std::vector<int> colour(n, 0);
  std::vector<std::size_t> parent(n, n);
  for (std::size_t root = 0; root < n && r.cycle.empty(); ++root) {
    if (colour[root]) continue;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> stack;
    stack.emplace_back(root, succ(root));
    colour[root] = 1;
    while (!stack.empty() && r.cycle.empty()) {
      auto& [v, next] = stack.back();
      if (next.empty()) {
        colour[v] = 2;
        stack.pop_back();
        continue;
      }
      const std::size_t w = next.back();
      next.pop_back();
      if (colour[w] == 1) {
        for (std::size_t u = v; u != w; u = parent[u]) r.cycle.push_back(node(u));
        r.cycle.push_back(node(w));
        std::reverse(r.cycle.begin(), r.cycle.end());
      } else if (colour[w] == 0) {
        colour[w] = 1;
        parent[w] = v;
        stack.emplace_back(w, succ(w));
      }
    }
  }

  const NetRelations rel = conflict_relations(net);
  r.direct_conflicts = rel.direct_conflict;
  r.self_conflicts = rel.self_conflict;
  return r;
}

SafetyReport check_1safe(const JoinNet& net) {
  SafetyReport r;
  std::map<Marking, std::pair<std::size_t, TransId>> parent;
  std::vector<Marking> order{net.initial()};
  parent.emplace(net.initial(), std::pair{std::size_t(-1), TransId(0)});
  auto trace_to = [&](std::size_t idx) {
    std::vector<TransId> out;
    while (idx != std::size_t(-1)) {
      const auto& [prev, t] = parent.at(order[idx]);
      if (prev == std::size_t(-1)) break;
      out.push_back(t);
      idx = prev;
    }
    std::reverse(out.begin(), out.end());
    return out;
  };

  for (std::size_t i = 0; i < order.size(); ++i) {
    const Marking m = order[i];
    for (const auto& t : net.transitions()) {
      if (!enabled(net, m, t.id)) continue;
      Marking rest;
      for (auto p : m)
        if (std::find(t.preset.begin(), t.preset.end(), p) == t.preset.end()) rest.push_back(p);
      std::vector<PlaceId> post = t.postset;
      std::sort(post.begin(), post.end());
      for (std::size_t k = 0; k < post.size(); ++k) {
        if (contains(rest, post[k]) || (k && post[k] == post[k - 1])) {
          r.safe = false;
          r.place = post[k];
          r.trace = trace_to(i);
          r.trace.push_back(t.id);
          r.markings = order.size();
          return r;
        }
      }
      Marking next = fire(net, m, t.id);
      if (parent.emplace(next, std::pair{i, t.id}).second) order.push_back(std::move(next));
    }
  }
  r.markings = order.size();
  return r;
}

std::vector<MStructure> find_M(const JoinNet& net) {
  std::vector<MStructure> shapes;
  auto in_pre = [&](TransId t, PlaceId p) {
    const auto& pre = net.transition(t).preset;
    return std::find(pre.begin(), pre.end(), p) != pre.end();
  };
  for (const auto& mid : net.transitions()) {
    for (auto p : mid.preset) {
      for (auto q : mid.preset) {
        if (!(p < q)) continue;
        for (auto t1 : net.consumers(p)) {
          if (t1 == mid.id || in_pre(t1, q)) continue;
          for (auto t3 : net.consumers(q)) {
            if (t3 == mid.id || in_pre(t3, p)) continue;
            const auto& l1 = net.transition(t1).label;
            const auto& l3 = net.transition(t3).label;
            shapes.push_back(MStructure{p, q, t1, mid.id, t3, {},
                                        same_action(l1, mid.label) && same_action(mid.label, l3)});
          }
        }
      }
    }
  }
  if (shapes.empty()) return shapes;

  const auto reach = reachable_markings(net);
  std::vector<MStructure> out;
  for (auto& m : shapes) {
    for (const auto& mk : reach) {
      if (contains(mk, m.p) && contains(mk, m.q)) {
        m.witness = mk;
        out.push_back(m);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const MStructure& a, const MStructure& b) {
    return std::tie(a.t2, a.p, a.q, a.t1, a.t3) < std::tie(b.t2, b.p, b.q, b.t1, b.t3);
  });
  return out;
}

bool check_locality(const JoinNet& net) {
  const auto ms = find_M(net);
  return std::all_of(ms.begin(), ms.end(), [](const MStructure& m) { return m.local; });
}

StepReport step_report(const JoinNet& net) {
  StepReport r;
  r.initial_maximal = maximal_steps(net, net.initial());
  for (const auto& m : reachable_markings(net))
    for (const auto& s : maximal_steps(net, m)) r.max_step_size = std::max(r.max_step_size, s.size());
  return r;
}

}  // namespace join2pn
