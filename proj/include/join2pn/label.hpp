#pragma once

#include <map>
#include <string>

#include "join2pn/syntax.hpp"

namespace join2pn {

/// Transition label: the definition a reaction or transition belongs to.
/// Two labels denote the same action iff their `term` texts are equal;
/// `alpha` additionally identifies definitions up to renaming of their
/// defined names.
struct JoinLabel {
  DefId def = 0;
  std::string term;
  std::string alpha;
  std::string display;
};

JoinLabel make_label(const Definition& source);

/// `alpha` texts of every definition of `program` where names bound by an
/// enclosing definition are replaced by a reference to that binder (its own
/// key and pattern position) instead of their spelling, so renaming an
/// outer definition leaves the keys of inner ones unchanged.
std::map<DefId, std::string> scoped_alpha_keys(const Process& program);

inline bool same_action(const JoinLabel& a, const JoinLabel& b) { return a.term == b.term; }

}  // namespace join2pn
