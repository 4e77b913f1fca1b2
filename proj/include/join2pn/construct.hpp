#pragma once

// Bounded construction of the net of a core join term.

#include <optional>
#include <stdexcept>

#include "join2pn/netcore.hpp"
#include "join2pn/syntax.hpp"

namespace join2pn {

struct BuildConfig {
  /// Maximal transition layer; transitions of layer > depth_bound are
  /// recorded as pending instead of added.
  std::size_t depth_bound = 3;
  std::size_t max_places = 100000;
  std::size_t max_transitions = 100000;
  ScopeMode mode = ScopeMode::Instance;
};

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, JoinNet partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const JoinNet& partial() const { return partial_; }

 private:
  JoinNet partial_;
};

class NotNormal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// m0 = dec(j, f_bot), then saturation under the transition rule up to
/// `cfg.depth_bound` layers. `j` must be elaborated (unique definition ids)
/// and normal.
JoinNet build_net(const Process& j, const BuildConfig& cfg = {});

/// The reachable marking of `net` that represents `p`, a term reachable
/// from the program the net was built from. Messages are compared through
/// their binders (definition id and pattern position) or, for free names,
/// their text. Empty if no marking within the built depth matches.
std::optional<Marking> marking_of_term(const JoinNet& net, const Process& p);

}  // namespace join2pn
