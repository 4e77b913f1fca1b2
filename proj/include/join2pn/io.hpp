#pragma once

// Serialization of nets, LTSs and reports.

#include <string>

#include "json.hpp"
#include "join2pn/analysis.hpp"

namespace join2pn {

using Json = nlohmann::ordered_json;

Json to_json(const ScopeStack& s);
Json to_json(const PlaceCore& c);
Json to_json(const JoinLabel& l);
Json to_json(const JoinNet& net);
Json to_json(const TermLts& lts);
Json to_json(const NetLts& lts);
Json to_json(const OccurrenceReport& r);
Json to_json(const SafetyReport& r);
Json to_json(const MStructure& m);
Json to_json(const BisimWitness& w);
Json to_json(const StepReport& r);

/// Inverse of to_json(JoinNet). Throws std::invalid_argument on malformed input.
JoinNet net_from_json(const Json& j);

/// Places as circles (a dot per token), transitions as boxes labeled with
/// the definition.
std::string to_dot(const JoinNet& net);
std::string to_dot(const TermLts& lts);
std::string to_dot(const NetLts& lts);

/// PNML place/transition net.
std::string to_pnml(const JoinNet& net);

}  // namespace join2pn
