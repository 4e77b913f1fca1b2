#pragma once

// Labeled 1-safe Petri nets: structure, firing, reachability, steps and the
// causality/conflict relations.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "join2pn/decomp.hpp"
#include "join2pn/label.hpp"

namespace join2pn {

using PlaceId = std::uint32_t;
using TransId = std::uint32_t;

/// Set of marked places, sorted ascending without duplicates.
using Marking = std::vector<PlaceId>;

Marking make_marking(std::vector<PlaceId> places);
bool contains(const Marking& m, PlaceId p);

struct Place {
  PlaceId id = 0;
  PlaceCore core;
  std::size_t layer = 0;
};

struct Transition {
  TransId id = 0;
  std::vector<PlaceId> preset;
  JoinLabel label;
  std::vector<PlaceId> postset;
  std::size_t layer = 1;
};

/// A transition the construction would add next but that lies beyond the
/// depth bound.
struct PendingTransition {
  std::vector<PlaceId> preset;
  JoinLabel label;
};

/// A definition of the source program, as seen by the net.
struct DefInfo {
  JoinLabel label;
  std::vector<Name> channels;
};

class JoinNet {
 public:
  PlaceId add_place(PlaceCore core, std::size_t layer = 0);
  /// Presets must be nonempty; both sets must name existing places.
  TransId add_transition(std::vector<PlaceId> preset, JoinLabel label,
                         std::vector<PlaceId> postset, std::size_t layer = 1);
  void set_initial(Marking m);
  void add_pending(PendingTransition p) { pending_.push_back(std::move(p)); }
  void set_depth_bound(std::optional<std::size_t> d) { depth_bound_ = d; }
  void set_definitions(std::map<DefId, DefInfo> defs) { definitions_ = std::move(defs); }

  const std::vector<Place>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const Place& place(PlaceId id) const { return places_.at(id); }
  const Transition& transition(TransId id) const { return transitions_.at(id); }
  const Marking& initial() const { return initial_; }
  const std::vector<PendingTransition>& pending() const { return pending_; }
  std::optional<std::size_t> depth_bound() const { return depth_bound_; }
  /// Definitions that may occur on scope stacks, by id.
  const std::map<DefId, DefInfo>& definitions() const { return definitions_; }

  /// Transitions consuming from / producing to a place.
  const std::vector<TransId>& consumers(PlaceId p) const { return consumers_.at(p); }
  const std::vector<TransId>& producers(PlaceId p) const { return producers_.at(p); }

  /// True iff some pending transition exists, i.e. the bound cut the net.
  bool truncated() const { return !pending_.empty(); }

 private:
  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<TransId>> consumers_;
  std::vector<std::vector<TransId>> producers_;
  Marking initial_;
  std::vector<PendingTransition> pending_;
  std::optional<std::size_t> depth_bound_;
  std::map<DefId, DefInfo> definitions_;
};

class FiringError : public std::runtime_error {
 public:
  enum class Kind { Foreign, NotEnabled, Unsafe, Conflict };
  FiringError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

bool enabled(const JoinNet& net, const Marking& m, TransId t);

/// (m \ pre) u post. Throws if `t` is not enabled or if a produced place is
/// still marked, which would break 1-safety.
Marking fire(const JoinNet& net, const Marking& m, TransId t);

struct NetLts {
  struct Edge {
    std::size_t src = 0;
    TransId transition = 0;
    JoinLabel label;
    std::size_t dst = 0;
  };
  std::vector<Marking> states;
  std::vector<Edge> edges;
  std::size_t initial = 0;
  /// BFS distance from the initial marking.
  std::vector<std::size_t> distance;
  /// Unexplored moves left at this state: depth cut, or pending transitions.
  std::vector<bool> truncated;
  std::optional<std::size_t> depth;

  std::optional<std::size_t> index_of(const Marking& m) const;
};

/// Breadth-first closure of firing from m0, up to `depth` firings when set.
NetLts lts_of_net(const JoinNet& net, std::optional<std::size_t> depth = std::nullopt);
std::vector<Marking> reachable_markings(const JoinNet& net);

// Steps

enum class StepStatus { Enabled, Conflict, NotEnabled };

StepStatus step_status(const JoinNet& net, const Marking& m, std::span<const TransId> step);
bool step_enabled(const JoinNet& net, const Marking& m, std::span<const TransId> step);
Marking fire_step(const JoinNet& net, const Marking& m, std::span<const TransId> step);

/// Inclusion-maximal enabled steps at `m`, each sorted, in lexicographic order.
std::vector<std::vector<TransId>> maximal_steps(const JoinNet& net, const Marking& m);

// Relations

struct NodeRef {
  bool is_place = false;
  std::uint32_t id = 0;
  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

struct NetRelations {
  /// (t1, t2): t1 causally before t2.
  std::set<std::pair<TransId, TransId>> causal;
  /// Unordered pairs, stored with first < second.
  std::set<std::pair<TransId, TransId>> direct_conflict;
  std::set<std::pair<TransId, TransId>> conflict;
  std::set<std::pair<TransId, TransId>> independent;
  std::set<NodeRef> self_conflict;
};

/// Direct conflict, conflict and self-conflicting nodes only; needs no
/// reachability and so also works on unsafe nets.
NetRelations conflict_relations(const JoinNet& net);
/// All relations; the causal order is read off the reachability graph.
NetRelations causality_conflict(const JoinNet& net);

}  // namespace join2pn
