#include "join2pn/syntax.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>

#include "syntax_internal.hpp"

namespace join2pn {

namespace {

const std::shared_ptr<const Node>& nil_node() {
  static const auto node = std::make_shared<const Node>(Node{Nil{}});
  return node;
}

void print_names(std::ostringstream& os, const std::vector<Name>& names) {
  os << '<';
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) os << ',';
    os << names[i];
  }
  os << '>';
}

void print_pattern(std::ostringstream& os, const Definition& d) {
  for (std::size_t i = 0; i < d.pattern.size(); ++i) {
    if (i) os << " | ";
    os << d.pattern[i].channel;
    print_names(os, d.pattern[i].params);
  }
}

void print(std::ostringstream& os, const Process& p, bool with_ids);

void print_definition(std::ostringstream& os, const Definition& d, bool with_ids) {
  print_pattern(os, d);
  os << " |> ";
  print(os, d.reaction, with_ids);
}

// Operands of `|` that are definitions get parentheses: `def` extends as far
// to the right as possible.
void print_par_operand(std::ostringstream& os, const Process& p, bool with_ids, bool right) {
  const bool wrap = p.as_def() != nullptr || (right && p.as_par() != nullptr);
  if (wrap) os << '(';
  print(os, p, with_ids);
  if (wrap) os << ')';
}

void print(std::ostringstream& os, const Process& p, bool with_ids) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Nil>) {
          os << '0';
        } else if constexpr (std::is_same_v<T, Message>) {
          os << n.channel;
          print_names(os, n.args);
        } else if constexpr (std::is_same_v<T, Par>) {
          print_par_operand(os, n.left, with_ids, false);
          os << " | ";
          print_par_operand(os, n.right, with_ids, true);
        } else {
          os << "def";
          if (with_ids) os << '[' << n.definition.id << ']';
          os << ' ';
          print_definition(os, n.definition, with_ids);
          os << " in ";
          print(os, n.scope, with_ids);
        }
      },
      p.node().value);
}

void collect(const Process& p, std::map<DefId, Definition>& out) {
  if (const auto* par = p.as_par()) {
    collect(par->left, out);
    collect(par->right, out);
  } else if (const auto* def = p.as_def()) {
    out.emplace(def->definition.id, def->definition);
    collect(def->definition.reaction, out);
    collect(def->scope, out);
  }
}

Process renumber(const Process& p, DefId& next) {
  if (const auto* par = p.as_par()) {
    auto l = renumber(par->left, next);
    return Process::par(std::move(l), renumber(par->right, next));
  }
  if (const auto* def = p.as_def()) {
    Definition d = def->definition;
    d.id = next++;
    d.reaction = renumber(d.reaction, next);
    return Process::def(std::move(d), renumber(def->scope, next));
  }
  return p;
}

void add_unique(std::vector<Name>& out, const Name& n) {
  if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
}

void free_vars_into(const Process& p, std::vector<Name>& out);

void free_vars_into(const Definition& d, std::vector<Name>& out) {
  for (const auto& n : defined_vars(d)) add_unique(out, n);
  const auto rv = received_vars(d);
  for (const auto& n : free_vars(d.reaction))
    if (std::find(rv.begin(), rv.end(), n) == rv.end()) add_unique(out, n);
}

void free_vars_into(const Process& p, std::vector<Name>& out) {
  if (const auto* m = p.as_message()) {
    add_unique(out, m->channel);
    for (const auto& a : m->args) add_unique(out, a);
  } else if (const auto* par = p.as_par()) {
    free_vars_into(par->left, out);
    free_vars_into(par->right, out);
  } else if (const auto* def = p.as_def()) {
    std::vector<Name> inner;
    free_vars_into(def->scope, inner);
    free_vars_into(def->definition, inner);
    const auto dv = defined_vars(def->definition);
    for (const auto& n : inner)
      if (std::find(dv.begin(), dv.end(), n) == dv.end()) add_unique(out, n);
  }
}

// Definitions that are direct components of one parallel composition.
void parallel_components(const Process& p, std::vector<const Definition*>& defs,
                         std::vector<const Process*>& nested) {
  if (const auto* par = p.as_par()) {
    parallel_components(par->left, defs, nested);
    parallel_components(par->right, defs, nested);
  } else if (const auto* def = p.as_def()) {
    defs.push_back(&def->definition);
    nested.push_back(&def->definition.reaction);
    nested.push_back(&def->scope);
  }
}

void normality_into(const Process& p, NormalityResult& result) {
  if (!result.normal) return;
  std::vector<const Definition*> defs;
  std::vector<const Process*> nested;
  parallel_components(p, defs, nested);
  for (std::size_t i = 0; i < defs.size() && result.normal; ++i) {
    const auto dvi = defined_vars(*defs[i]);
    for (std::size_t j = i + 1; j < defs.size() && result.normal; ++j) {
      for (const auto& n : defined_vars(*defs[j])) {
        if (std::find(dvi.begin(), dvi.end(), n) != dvi.end()) {
          result.normal = false;
          result.clash = std::make_pair(*defs[i], *defs[j]);
          result.shared = n;
          break;
        }
      }
    }
  }
  for (const auto* q : nested) normality_into(*q, result);
}

}  // namespace

Process::Process() : node_(nil_node()) {}

Process Process::nil() { return Process(); }

Process Process::message(Name channel, std::vector<Name> args) {
  return Process(std::make_shared<const Node>(Node{Message{std::move(channel), std::move(args)}}));
}

Process Process::par(Process left, Process right) {
  return Process(std::make_shared<const Node>(Node{Par{std::move(left), std::move(right)}}));
}

Process Process::def(Definition definition, Process scope) {
  return Process(
      std::make_shared<const Node>(Node{Def{std::move(definition), std::move(scope)}}));
}

bool Process::is_nil() const { return std::holds_alternative<Nil>(node_->value); }
const Message* Process::as_message() const { return std::get_if<Message>(&node_->value); }
const Par* Process::as_par() const { return std::get_if<Par>(&node_->value); }
const Def* Process::as_def() const { return std::get_if<Def>(&node_->value); }

Process par_all(const std::vector<Process>& parts) {
  if (parts.empty()) return Process::nil();
  Process acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Process::par(acc, parts[i]);
  return acc;
}

ParseError::ParseError(const std::string& what, SourcePos pos)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                         what),
      pos_(pos) {}

std::string to_string(const Process& p) {
  std::ostringstream os;
  print(os, p, false);
  return os.str();
}

std::string to_string(const Definition& d) {
  std::ostringstream os;
  print_definition(os, d, false);
  return os.str();
}

std::string to_string(const Message& m) {
  std::ostringstream os;
  os << m.channel;
  print_names(os, m.args);
  return os.str();
}

namespace detail {
std::string print_term(const Process& p, bool with_ids) {
  std::ostringstream os;
  print(os, p, with_ids);
  return os.str();
}
std::string print_definition_term(const Definition& d, bool with_ids) {
  std::ostringstream os;
  if (with_ids) os << '[' << d.id << ']';
  print_definition(os, d, with_ids);
  return os.str();
}
}  // namespace detail

DefTable::DefTable(const Process& program) { collect(program, defs_); }

const Definition& DefTable::at(DefId id) const {
  auto it = defs_.find(id);
  if (it == defs_.end()) throw std::out_of_range("unknown definition id " + std::to_string(id));
  return it->second;
}

bool DefTable::defines(DefId id, const Name& n) const {
  const auto& d = at(id);
  return std::any_of(d.pattern.begin(), d.pattern.end(),
                     [&](const MessageTemplate& t) { return t.channel == n; });
}

Process elaborate(const Process& p) {
  DefId next = 1;
  return renumber(p, next);
}

std::vector<Name> free_vars(const Process& p) {
  std::vector<Name> out;
  free_vars_into(p, out);
  return out;
}

std::vector<Name> free_vars(const Definition& d) {
  std::vector<Name> out;
  free_vars_into(d, out);
  return out;
}

std::vector<Name> defined_vars(const Definition& d) {
  std::vector<Name> out;
  for (const auto& t : d.pattern) out.push_back(t.channel);
  return out;
}

std::vector<Name> received_vars(const Definition& d) {
  std::vector<Name> out;
  for (const auto& t : d.pattern) out.insert(out.end(), t.params.begin(), t.params.end());
  return out;
}

NormalityResult check_normality(const Process& p) {
  NormalityResult result;
  normality_into(p, result);
  return result;
}

Name fresh_name() {
  static std::atomic<std::uint64_t> counter{0};
  return "#" + std::to_string(counter.fetch_add(1, std::memory_order_relaxed));
}

}  // namespace join2pn
