#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "join2pn/analysis.hpp"

namespace join2pn {

namespace {

// One side of the comparison as plain adjacency: moves per state and
// whether the state has moves at all (explored or not).
struct Side {
  std::vector<std::vector<std::pair<const JoinLabel*, std::size_t>>> moves;
  std::vector<bool> live;
  std::size_t initial = 0;
};

Side side_of(const TermLts& l) {
  Side s;
  s.moves.resize(l.states.size());
  s.live.assign(l.states.size(), false);
  for (const auto& e : l.edges) s.moves[e.src].push_back({&e.label, e.dst});
  for (std::size_t i = 0; i < l.states.size(); ++i) s.live[i] = !s.moves[i].empty() || l.truncated[i];
  s.initial = l.initial;
  return s;
}

Side side_of(const NetLts& l) {
  Side s;
  s.moves.resize(l.states.size());
  s.live.assign(l.states.size(), false);
  for (const auto& e : l.edges) s.moves[e.src].push_back({&e.label, e.dst});
  for (std::size_t i = 0; i < l.states.size(); ++i) s.live[i] = !s.moves[i].empty() || l.truncated[i];
  s.initial = l.initial;
  return s;
}

struct Node {
  int side = 0;
  std::size_t state = 0;
  std::size_t level = 0;
  friend auto operator<=>(const Node&, const Node&) = default;
};

class Unfolding {
 public:
  Unfolding(const Side& term, const Side& net, std::size_t depth) : sides_{&term, &net}, depth_(depth) {
    for (int side = 0; side < 2; ++side) explore({side, sides_[side]->initial, 0});
  }

  // Coarsest stable partition; classes are indices into `cls_`.
  void refine() {
    std::map<std::pair<std::size_t, bool>, int> init;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const bool mark = nodes_[i].level == depth_ && live(i);
      cls_.push_back(init.emplace(std::pair{nodes_[i].level, mark}, static_cast<int>(init.size())).first->second);
    }
    std::size_t count = init.size();
    while (true) {
      std::map<std::pair<int, std::set<std::pair<std::string, int>>>, int> sigs;
      std::vector<int> next(nodes_.size());
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        std::set<std::pair<std::string, int>> out;
        for (const auto& [label, dst] : succ_[i]) out.insert({label->term, cls_[dst]});
        next[i] = sigs.emplace(std::pair{cls_[i], std::move(out)}, static_cast<int>(sigs.size())).first->second;
      }
      cls_ = std::move(next);
      if (sigs.size() == count) break;
      count = sigs.size();
    }
  }

  std::size_t root(int side) const { return index_.at({side, sides_[side]->initial, 0}); }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  int cls(std::size_t i) const { return cls_[i]; }
  bool live(std::size_t i) const { return sides_[nodes_[i].side]->live[nodes_[i].state]; }
  const std::vector<std::pair<const JoinLabel*, std::size_t>>& succ(std::size_t i) const { return succ_[i]; }
  std::size_t depth() const { return depth_; }

 private:
  void explore(Node start) {
    std::deque<std::size_t> queue{add(start)};
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      const Node n = nodes_[i];
      if (n.level >= depth_) continue;
      for (const auto& [label, dst] : sides_[n.side]->moves[n.state]) {
        const std::size_t before = nodes_.size();
        const std::size_t j = add({n.side, dst, n.level + 1});
        if (nodes_.size() != before) queue.push_back(j);
        succ_[i].push_back({label, j});
      }
    }
  }

  std::size_t add(const Node& n) {
    auto [it, inserted] = index_.emplace(n, nodes_.size());
    if (inserted) {
      nodes_.push_back(n);
      succ_.emplace_back();
    }
    return it->second;
  }

  const Side* sides_[2];
  std::size_t depth_;
  std::vector<Node> nodes_;
  std::vector<std::vector<std::pair<const JoinLabel*, std::size_t>>> succ_;
  std::map<Node, std::size_t> index_;
  std::vector<int> cls_;
};

const char* side_name(int side) { return side == 0 ? "term" : "net"; }

// Walks down from an inequivalent pair to a move the other side cannot match.
void explain(const Unfolding& u, std::size_t a, std::size_t b, BisimWitness& w) {
  while (true) {
    const Node& na = u.node(a);
    if (na.level == u.depth()) {
      w.reason = std::string(u.live(a) ? side_name(0) : side_name(1)) +
                 " still has moves at the depth bound, the other does not";
      return;
    }
    bool stepped = false;
    for (int flip = 0; flip < 2 && !stepped; ++flip) {
      const std::size_t x = flip ? b : a;
      const std::size_t y = flip ? a : b;
      for (const auto& [label, dx] : u.succ(x)) {
        std::optional<std::size_t> partner;
        bool matched = false;
        for (const auto& [ly, dy] : u.succ(y)) {
          if (ly->term != label->term) continue;
          if (!partner) partner = dy;
          if (u.cls(dy) == u.cls(dx)) matched = true;
        }
        if (matched) continue;
        w.counterexample.push_back(std::string(side_name(u.node(x).side)) + " does " + label->display);
        if (!partner) {
          w.reason = std::string(side_name(u.node(y).side)) + " cannot do " + label->display;
          return;
        }
        a = u.node(dx).side == 0 ? dx : *partner;
        b = u.node(dx).side == 0 ? *partner : dx;
        stepped = true;
        break;
      }
    }
    if (!stepped) {
      w.reason = "states differ only below the explored part";
      return;
    }
  }
}

bool live_term(const TermLts& l, std::size_t s) {
  if (l.truncated[s]) return true;
  return std::any_of(l.edges.begin(), l.edges.end(), [&](const TermLts::Edge& e) { return e.src == s; });
}

bool live_net(const NetLts& l, std::size_t s) {
  if (l.truncated[s]) return true;
  return std::any_of(l.edges.begin(), l.edges.end(), [&](const NetLts::Edge& e) { return e.src == s; });
}

}  // namespace

BisimWitness bisim_check(const TermLts& term, const NetLts& net) {
  if (!net.depth || *net.depth != term.depth)
    throw std::invalid_argument("term and net systems are cut at different depths");
  const Side ts = side_of(term);
  const Side ns = side_of(net);
  Unfolding u(ts, ns, term.depth);
  u.refine();

  BisimWitness w;
  w.depth = term.depth;
  w.truncated = std::any_of(term.truncated.begin(), term.truncated.end(), [](bool b) { return b; }) ||
                std::any_of(net.truncated.begin(), net.truncated.end(), [](bool b) { return b; });
  const std::size_t a = u.root(0);
  const std::size_t b = u.root(1);
  if (u.cls(a) != u.cls(b)) {
    explain(u, a, b, w);
    return w;
  }

  std::set<std::pair<std::size_t, std::size_t>> seen{{a, b}};
  std::deque<std::pair<std::size_t, std::size_t>> queue{{a, b}};
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    w.relation.push_back({u.node(x).state, u.node(y).state, u.node(x).level});
    for (const auto& [lx, dx] : u.succ(x))
      for (const auto& [ly, dy] : u.succ(y))
        if (lx->term == ly->term && u.cls(dx) == u.cls(dy) && seen.insert({dx, dy}).second)
          queue.push_back({dx, dy});
  }
  std::sort(w.relation.begin(), w.relation.end());
  w.verified = validate_bisimulation(term, net, w);
  if (!w.verified) w.reason = "refinement result failed validation";
  return w;
}

bool validate_bisimulation(const TermLts& term, const NetLts& net, const BisimWitness& w) {
  using Triple = std::tuple<std::size_t, std::size_t, std::size_t>;
  std::set<Triple> rel;
  for (const auto& p : w.relation) rel.insert({p.term_state, p.net_state, p.level});
  if (!rel.count({term.initial, net.initial, 0})) return false;
  const std::size_t d = w.depth;
  for (const auto& [s, m, k] : rel) {
    if (k > d || s >= term.states.size() || m >= net.states.size()) return false;
    if (k == d) {
      if (live_term(term, s) != live_net(net, m)) return false;
      continue;
    }
    for (const auto& e : term.edges) {
      if (e.src != s) continue;
      bool ok = false;
      for (const auto& f : net.edges)
        if (f.src == m && f.label.term == e.label.term && rel.count({e.dst, f.dst, k + 1})) ok = true;
      if (!ok) return false;
    }
    for (const auto& f : net.edges) {
      if (f.src != m) continue;
      bool ok = false;
      for (const auto& e : term.edges)
        if (e.src == s && f.label.term == e.label.term && rel.count({e.dst, f.dst, k + 1})) ok = true;
      if (!ok) return false;
    }
    // Below the bound both sides must be fully explored.
    if (term.truncated[s] || net.truncated[m]) return false;
  }
  return true;
}

BisimWitness check_against_net(const Process& p, std::size_t depth, ScopeMode mode) {
  BuildConfig cfg;
  cfg.depth_bound = depth;
  cfg.mode = mode;
  const JoinNet net = build_net(p, cfg);
  return bisim_check(lts_of_process(p, depth), lts_of_net(net, depth));
}

}  // namespace join2pn
