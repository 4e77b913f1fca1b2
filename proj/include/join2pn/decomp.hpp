#pragma once

// Scope stacks, name environments and the decomposition of terms into
// place cores.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "join2pn/syntax.hpp"

namespace join2pn {

/// A stack symbol: a definition, and in instance mode the transition whose
/// firing created this copy of it (`kRootInstance` for the initial term).
struct ScopeSymbol {
  static constexpr std::int32_t kRootInstance = -1;
  DefId def = 0;
  std::int32_t instance = kRootInstance;
  friend auto operator<=>(const ScopeSymbol&, const ScopeSymbol&) = default;
};

std::string to_string(const ScopeSymbol& s);

class ScopeStack {
 public:
  ScopeStack() = default;
  /// `items` bottom first.
  explicit ScopeStack(std::vector<ScopeSymbol> items) : items_(std::move(items)) {}

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  /// Empty (the distinguished symbol) for the empty stack.
  std::optional<ScopeSymbol> top() const;
  ScopeStack push(ScopeSymbol s) const;
  ScopeStack pop() const;
  /// Bottom first.
  const std::vector<ScopeSymbol>& items() const { return items_; }

  friend auto operator<=>(const ScopeStack&, const ScopeStack&) = default;

 private:
  std::vector<ScopeSymbol> items_;
};

/// `[D2,D1]`, topmost first; `[]` for the empty stack.
std::string to_string(const ScopeStack& s);

/// How definition scopes are recorded.
///
/// `Literal` follows the decomposition clauses literally: stack symbols are
/// bare definitions and every definition pushes onto every name.
///
/// `Instance` additionally tags symbols with the creating transition and
/// keeps names received through a transition bound where they were sent.
/// The two modes agree on terms without definitions in reaction bodies.
enum class ScopeMode { Literal, Instance };

struct NameBinding {
  Name name;
  ScopeStack stack;
  /// Received through a transition; later definitions do not rebind it.
  bool pinned = false;
  friend bool operator==(const NameBinding&, const NameBinding&) = default;
};

/// Total map from names to (name, stack). Names without an override map to
/// themselves with the default stack.
class NameEnv {
 public:
  NameEnv() = default;
  explicit NameEnv(ScopeStack base) : base_(std::move(base)) {}

  /// f_bot: every name maps to itself with the empty stack.
  static NameEnv bottom() { return NameEnv(); }

  NameBinding lookup(const Name& n) const;
  NameEnv with(const Name& n, NameBinding b) const;
  /// g_n: pop the stack of `n`.
  NameEnv pop(const Name& n) const;
  /// (id x push) o f, entering the scope of `def` under `mode`.
  NameEnv enter(const Definition& def, ScopeSymbol sym, ScopeMode mode) const;

  const ScopeStack& base() const { return base_; }
  const std::map<Name, NameBinding>& overrides() const { return overrides_; }

 private:
  ScopeStack base_;
  std::map<Name, NameBinding> overrides_;
};

/// g_n(f): agrees with f except that the stack of n is popped.
NameEnv g(const Name& n, const NameEnv& f);

/// A message together with the scope of its channel and of each argument.
struct PlaceCore {
  Name channel;
  std::vector<Name> args;
  ScopeStack sender;
  std::vector<ScopeStack> arg_scopes;
  friend auto operator<=>(const PlaceCore&, const PlaceCore&) = default;
};

/// `chan<a1,...>@[Dk,...,D1]  args@[...]`
std::string to_string(const PlaceCore& c);

/// Environment in force where each definition instance was entered. A
/// later firing of the instance resolves the free names of its body here.
using Closures = std::map<ScopeSymbol, NameEnv>;

struct DecOptions {
  ScopeMode mode = ScopeMode::Instance;
  /// Instance tag for definitions entered during this decomposition.
  std::int32_t instance = ScopeSymbol::kRootInstance;
  /// Filled in instance mode when set.
  Closures* closures = nullptr;
};

/// The decomposition of `p` under `f`, as a multiset in syntactic order.
std::vector<PlaceCore> dec(const Process& p, const NameEnv& f, const DefTable& table,
                           const DecOptions& opts = {});

class TransitionRuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// f_t for `def` consuming `matched` (one place per pattern position):
/// received parameters map to the sent names with their scopes, every other
/// name to itself under the common sender stack, or in instance mode to its
/// binding in the closure of the sender's top symbol when one is given.
NameEnv f_for_transition(const Definition& def, std::span<const PlaceCore> matched,
                         ScopeMode mode = ScopeMode::Instance, const Closures* closures = nullptr);

/// True iff `c` is a valid decomposition result: each stack is empty or its
/// top defines the corresponding name.
bool well_scoped(const PlaceCore& c, const DefTable& table);

}  // namespace join2pn
