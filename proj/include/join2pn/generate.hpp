#pragma once

// Term generators for property checks: seeded random terms, a fixed
// enumerated corpus, and random structural-congruence rewrites.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "join2pn/syntax.hpp"

namespace join2pn {

struct TermShape {
  std::size_t max_defs = 2;
  std::size_t max_messages = 4;
  std::size_t max_arity = 2;
};

/// A normal, elaborated term within `shape`. Messages in reaction bodies
/// count toward the message bound.
Process random_term(std::mt19937_64& rng, const TermShape& shape = {});

/// Normal terms with at most two definitions outside reaction bodies, four
/// messages in the initial term and arity two, built from a fixed set of definition
/// templates and message pools. Deterministic.
std::vector<Process> enumerated_corpus();

enum class Rewrite {
  AddUnit,
  DropUnit,
  Commute,
  AssocLeft,
  AssocRight,
  ExtrudeOut,
  ExtrudeIn,
  Swap,
  RenameDefined,
  RenameReceived,
};

std::string to_string(Rewrite r);

struct RewriteStep {
  Rewrite rule;
  Process result;
};

/// One congruence rule applied at a random position, inside reaction bodies
/// included, when its side condition holds and the result is normal.
/// Definition ids are kept. Empty only if no rule applies anywhere.
std::optional<RewriteStep> random_rewrite(const Process& p, std::mt19937_64& rng);

}  // namespace join2pn
