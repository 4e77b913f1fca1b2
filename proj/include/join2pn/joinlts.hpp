#pragma once

// Labeled reduction semantics of core join terms and bounded LTS generation.

#include <optional>
#include <string>
#include <vector>

#include "join2pn/label.hpp"
#include "join2pn/syntax.hpp"

namespace join2pn {

/// One labeled move. `result` is in canonical form with definition ids kept.
struct Reaction {
  JoinLabel label;
  Process result;
  /// canonical_key(result, true)
  std::string key;
};

/// p ->_D P': moves of the messages of `p` against a definition `d` that
/// encloses `p` from outside. Labels are taken from `d` itself.
std::vector<Reaction> potential_steps(const Process& p, const Definition& d);

/// p |->_D P' for every definition of `p`. Labels come from `source` by
/// definition id, so copies of a nested definition share one label.
/// Results are sorted by (definition id, key) without duplicates.
std::vector<Reaction> reactions(const Process& p, const DefTable& source);
/// Same, with `p` as its own source program.
std::vector<Reaction> reactions(const Process& p);

struct TermLts {
  struct Edge {
    std::size_t src = 0;
    JoinLabel label;
    std::size_t dst = 0;
  };
  /// Canonical states with definition ids; display with `to_string`.
  std::vector<Process> states;
  std::vector<std::string> keys;
  std::vector<Edge> edges;
  std::size_t initial = 0;
  std::vector<std::size_t> distance;
  /// At the depth frontier with reactions left unexplored.
  std::vector<bool> truncated;
  std::size_t depth = 0;

  std::optional<std::size_t> index_of(const std::string& key) const;
};

/// Breadth-first closure of `reactions` up to `depth` steps from `p`.
/// Throws std::invalid_argument on non-normal input.
TermLts lts_of_process(const Process& p, std::size_t depth);

}  // namespace join2pn
