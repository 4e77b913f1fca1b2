#pragma once

// Core join-calculus terms: AST, parser, variable sets, normality,
// alpha-renaming and canonical forms modulo structural congruence.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace join2pn {

using Name = std::string;
using DefId = std::uint32_t;

struct SourcePos {
  int line = 0;
  int column = 0;
};

struct MessageTemplate {
  Name channel;
  std::vector<Name> params;
  friend bool operator==(const MessageTemplate&, const MessageTemplate&) = default;
};

struct Message {
  Name channel;
  std::vector<Name> args;
  friend bool operator==(const Message&, const Message&) = default;
};

struct Node;
struct Definition;

/// Immutable handle to a shared term tree. Default-constructed value is `0`.
class Process {
 public:
  Process();

  static Process nil();
  static Process message(Name channel, std::vector<Name> args = {});
  static Process par(Process left, Process right);
  static Process def(Definition definition, Process scope);

  const Node& node() const { return *node_; }

  bool is_nil() const;
  const Message* as_message() const;
  const struct Par* as_par() const;
  const struct Def* as_def() const;

 private:
  explicit Process(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// A join definition `J |> R`. `id` identifies the syntactic occurrence and
/// survives renaming and instantiation, so it names a stack symbol and
/// selects the transition label.
struct Definition {
  DefId id = 0;
  std::vector<MessageTemplate> pattern;
  Process reaction;
  SourcePos pos;
};

struct Nil {};
struct Par {
  Process left;
  Process right;
};
struct Def {
  Definition definition;
  Process scope;
};

struct Node {
  std::variant<Nil, Message, Par, Def> value;
};

/// Left-nested parallel composition of `parts`, `0` when empty.
Process par_all(const std::vector<Process>& parts);

// ---------------------------------------------------------------------------
// Parsing and printing

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, SourcePos pos);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Parse a term and number its definitions 1..n in preorder.
Process parse(const std::string& text);

std::string to_string(const Process& p);
std::string to_string(const Definition& d);
std::string to_string(const Message& m);

// ---------------------------------------------------------------------------
// Definition table

/// All definitions of a program by id, including the ones nested in
/// reaction bodies. Instantiated copies share the id of their source.
class DefTable {
 public:
  DefTable() = default;
  explicit DefTable(const Process& program);

  const Definition& at(DefId id) const;
  bool contains(DefId id) const { return defs_.count(id) != 0; }
  const std::map<DefId, Definition>& all() const { return defs_; }

  /// True iff the definition `id` has `n` among its pattern channels.
  bool defines(DefId id, const Name& n) const;

 private:
  std::map<DefId, Definition> defs_;
};

/// Renumber every definition with fresh ids 1..n in preorder.
Process elaborate(const Process& p);

// ---------------------------------------------------------------------------
// Variable sets

/// Free names, without duplicates, in order of first occurrence.
std::vector<Name> free_vars(const Process& p);
std::vector<Name> free_vars(const Definition& d);
/// Multisets, in pattern order.
std::vector<Name> defined_vars(const Definition& d);
std::vector<Name> received_vars(const Definition& d);

struct NormalityResult {
  bool normal = true;
  /// Offending pair when not normal.
  std::optional<std::pair<Definition, Definition>> clash;
  Name shared;
};

NormalityResult check_normality(const Process& p);

// ---------------------------------------------------------------------------
// Renaming and substitution

class RenameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Capture-avoiding simultaneous substitution of free names. Binders that
/// would capture an image name are renamed to fresh names.
Process substitute(const Process& p, const std::map<Name, Name>& sigma);

/// A name that cannot occur in parsed source.
Name fresh_name();

enum class RenameKind { Defined, Received };

/// Injective renaming of the defined or received variables of the
/// definition at the root of `p` (which must be a `def`).
Process alpha_rename(const Process& p, RenameKind kind, const std::map<Name, Name>& sigma);

// ---------------------------------------------------------------------------
// Structural congruence

/// Canonical representative of the congruence class. Definitions are hoisted
/// to the outermost scope, ordered canonically, and bound names renumbered
/// (`%L.i` for defined, `$L.j` for received names at body depth L).
/// With `keep_ids`, definition ids take part in the ordering and key.
Process canonical_form(const Process& p, bool keep_ids = false);

/// Printed canonical form; equal keys iff canonical forms are equal.
std::string canonical_key(const Process& p, bool keep_ids = false);

bool congruent(const Process& p, const Process& q);

/// Label texts of a definition: received names renamed positionally and
/// the body canonicalized (`term`); additionally defined names renamed
/// (`alpha`).
std::string definition_term_key(const Definition& d);
std::string definition_alpha_key(const Definition& d);

}  // namespace join2pn
