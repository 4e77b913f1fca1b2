#pragma once

// Structural and behavioural checks on built nets.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "join2pn/construct.hpp"
#include "join2pn/joinlts.hpp"
#include "join2pn/netcore.hpp"

namespace join2pn {

// Occurrence criteria

struct OccurrenceReport {
  /// Criterion 1: initial places with a producer.
  std::vector<PlaceId> produced_initial;
  /// Criterion 2: places with more than one producer.
  std::vector<PlaceId> multi_producer;
  /// Criterion 3: a cycle of the flow relation, if any.
  std::vector<NodeRef> cycle;
  std::set<std::pair<TransId, TransId>> direct_conflicts;
  std::set<NodeRef> self_conflicts;

  bool initial_unproduced() const { return produced_initial.empty(); }
  bool single_producer() const { return multi_producer.empty(); }
  bool acyclic() const { return cycle.empty(); }
  bool ok() const { return initial_unproduced() && single_producer() && acyclic(); }
};

OccurrenceReport check_occurrence(const JoinNet& net);

// 1-safety

struct SafetyReport {
  bool safe = true;
  std::size_t markings = 0;
  /// Firing sequence from m0 ending in the violating transition.
  std::vector<TransId> trace;
  std::optional<PlaceId> place;
};

/// Exhaustive search for a firing that puts a token on a marked place.
SafetyReport check_1safe(const JoinNet& net);

// Isomorphism

struct IsoResult {
  bool isomorphic = false;
  /// place_map[p] and transition_map[t] are the images in the second net.
  std::vector<PlaceId> place_map;
  std::vector<TransId> transition_map;
  std::string reason;
};

/// Bijection on places and transitions preserving presets, postsets, labels
/// (by their `alpha` text), the initial marking, and place cores up to the
/// renaming of bound names.
IsoResult iso_check(const JoinNet& a, const JoinNet& b);

// Bisimulation

struct BisimWitness {
  struct Pair {
    std::size_t term_state = 0;
    std::size_t net_state = 0;
    std::size_t level = 0;
    friend auto operator<=>(const Pair&, const Pair&) = default;
  };
  bool verified = false;
  /// Related pairs of the level-indexed unfoldings reachable from the
  /// initial pair.
  std::vector<Pair> relation;
  /// Replayable trace to a distinguishing move, with the reason.
  std::vector<std::string> counterexample;
  std::string reason;
  std::size_t depth = 0;
  bool truncated = false;
};

/// Strong bisimilarity of the two systems cut at their common depth: both
/// are unfolded into levels 0..depth, and a level-`depth` state that still
/// has moves carries a truncation mark that only a truncated state matches.
/// Labels compare by `term`. Throws std::invalid_argument on a depth mismatch.
BisimWitness bisim_check(const TermLts& term, const NetLts& net);

/// Independent recheck of the transfer conditions for `w.relation`.
bool validate_bisimulation(const TermLts& term, const NetLts& net, const BisimWitness& w);

/// lts_of_process(p, d) against lts_of_net(build_net(p, d), d).
BisimWitness check_against_net(const Process& p, std::size_t depth, ScopeMode mode = ScopeMode::Instance);

// Steps and M-structures

struct MStructure {
  PlaceId p = 0;
  PlaceId q = 0;
  TransId t1 = 0;
  TransId t2 = 0;
  TransId t3 = 0;
  Marking witness;
  bool local = false;
};

/// Fully reachable M-structures, one per mirror pair (p < q).
std::vector<MStructure> find_M(const JoinNet& net);
bool check_locality(const JoinNet& net);

struct StepReport {
  std::vector<std::vector<TransId>> initial_maximal;
  std::size_t max_step_size = 0;
};

StepReport step_report(const JoinNet& net);

}  // namespace join2pn
