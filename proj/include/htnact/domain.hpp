#pragma once

#include <map>
#include <string>
#include <vector>

#include "htnact/constraints.hpp"

namespace htn {

inline constexpr const char* kNopSymbol = "nop";

/// STRIPS-like operator. `head` has distinct variable parameters; every
/// variable of pre/add/del must be one of them.
struct Operator {
  Task head;
  std::vector<Literal> pre;
  std::vector<Atom> add;
  std::vector<Atom> del;

  bool operator==(const Operator&) const = default;
};

/// Operator instantiated for a concrete task.
struct GroundOperator {
  std::vector<Literal> pre;
  std::vector<Atom> add;
  std::vector<Atom> del;
};

struct Method {
  std::string name;
  Task head;
  TaskNetwork body;

  bool operator==(const Method&) const = default;
};

/// ⟨Op, Me⟩. Methods keep declaration order; `nop` is always available.
struct Domain {
  std::string name;
  std::map<std::string, Operator> operators;
  std::vector<Method> methods;

  Domain();

  bool is_primitive(const std::string& symbol) const { return operators.count(symbol) != 0; }
  bool is_primitive(const Task& t) const { return is_primitive(t.symbol); }
  bool has_methods(const std::string& symbol) const;
  const Method* find_method(const std::string& name) const;

  /// pre/add/del of the operator for t, with parameters bound to t's args.
  GroundOperator instantiate(const Task& t) const;
};

/// Label/variable generator for standalone renaming. Each call yields a new
/// suffix: "@scope", "@scope#2", ...
class NameSupply {
 public:
  explicit NameSupply(std::string scope = "r") : scope_(std::move(scope)) {}
  std::string next_suffix();

 private:
  std::string scope_;
  unsigned counter_ = 0;
};

/// Isomorphic copy of d with every label and variable given a fresh suffix.
TaskNetwork fresh_rename(const TaskNetwork& d, NameSupply& gen);

/// Body of m specialised for task t reduced at label n: body label b becomes
/// `b@n`, method variable V becomes `V@n.<method>`, head variables are bound to
/// t's arguments. Returns nullopt when the head does not match t.
std::optional<TaskNetwork> instantiate_method(const Method& m, const Task& t, const TaskLabel& n);

struct ValidationIssue {
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return issues.empty(); }
};

ValidationReport validate_domain(const Domain& d);

/// Some task follows all others in the ordering closure and carries no
/// after-constraint.
bool has_trailing_task(const TaskNetwork& body);

/// Gives every method lacking a trailing task a `<method>.end:nop` ordered
/// after its other tasks. Returns the names of the methods changed.
std::vector<std::string> append_trailing_nops(Domain& d);

/// Plain-label pairs implied by the ordering constraints of phi, with
/// first[]/last[] expanded, closed transitively.
std::set<std::pair<TaskLabel, TaskLabel>> ordering_closure(const Formula& phi);

/// Constants mentioned anywhere in the domain.
std::set<std::string> domain_constants(const Domain& d);

}  // namespace htn
