#pragma once

#include <map>
#include <set>
#include <string>

#include "htnact/term.hpp"

namespace htn {

/// Task label. Labels minted by reductions have the form `b@n` (body label b,
/// reduced task n); base() recovers b.
struct TaskLabel {
  std::string name;

  TaskLabel() = default;
  TaskLabel(std::string n) : name(std::move(n)) {}  // NOLINT: implicit by design of call sites
  TaskLabel(const char* n) : name(n) {}             // NOLINT

  std::string base() const { return name.substr(0, name.find('@')); }
  bool empty() const { return name.empty(); }

  auto operator<=>(const TaskLabel&) const = default;
  bool operator==(const TaskLabel&) const = default;
};

using LabelSet = std::set<TaskLabel>;

/// A constraint endpoint: a plain label, first[L] or last[L].
struct TaskRef {
  enum class Kind : unsigned char { label, first, last };

  Kind kind = Kind::label;
  LabelSet labels;  // exactly one element for Kind::label

  static TaskRef plain(TaskLabel n) { return {Kind::label, {std::move(n)}}; }
  static TaskRef first(LabelSet l) { return {Kind::first, std::move(l)}; }
  static TaskRef last(LabelSet l) { return {Kind::last, std::move(l)}; }

  bool is_plain() const { return kind == Kind::label; }
  bool is_plain(const TaskLabel& n) const { return kind == Kind::label && labels.count(n); }
  const TaskLabel& label() const { return *labels.begin(); }
  bool mentions(const TaskLabel& n) const { return labels.count(n) != 0; }

  auto operator<=>(const TaskRef&) const = default;
  bool operator==(const TaskRef&) const = default;
};

/// One possibly negated constraint. Field use by kind:
///   order   (from ≺ to)
///   before  (literal, to)
///   after   (from, literal)
///   between (from, literal, to)
struct Constraint {
  enum class Kind : unsigned char { order, before, after, between };

  Kind kind = Kind::order;
  bool negated = false;
  TaskRef from;
  TaskRef to;
  Literal literal;

  static Constraint order(TaskRef x, TaskRef y, bool neg = false) {
    return {Kind::order, neg, std::move(x), std::move(y), {}};
  }
  static Constraint before(Literal l, TaskRef x, bool neg = false) {
    return {Kind::before, neg, {}, std::move(x), std::move(l)};
  }
  static Constraint after(TaskRef x, Literal l, bool neg = false) {
    return {Kind::after, neg, std::move(x), {}, std::move(l)};
  }
  static Constraint between(TaskRef x, Literal l, TaskRef y, bool neg = false) {
    return {Kind::between, neg, std::move(x), std::move(y), std::move(l)};
  }

  bool has_from() const { return kind != Kind::before; }
  bool has_to() const { return kind != Kind::after; }
  bool has_literal() const { return kind != Kind::order; }
  bool mentions(const TaskLabel& n) const {
    return (has_from() && from.mentions(n)) || (has_to() && to.mentions(n));
  }

  auto operator<=>(const Constraint&) const = default;
  bool operator==(const Constraint&) const = default;
};

/// A conjunctive constraint formula, kept as a set.
using Formula = std::set<Constraint>;

using TaskSet = std::map<TaskLabel, Task>;

struct LabelledTask {
  TaskLabel label;
  Task task;

  auto operator<=>(const LabelledTask&) const = default;
  bool operator==(const LabelledTask&) const = default;
};

struct TaskNetwork {
  TaskSet tasks;
  Formula formula;

  LabelSet labels() const;

  auto operator<=>(const TaskNetwork&) const = default;
  bool operator==(const TaskNetwork&) const = default;
};

LabelSet labels_of(const TaskSet& s);

/// Adds (a ≺ c) for every chain (a ≺ b), (b ≺ c) over identical endpoints.
/// Negated and state constraints pass through unchanged.
Formula transitive_closure(const Formula& phi);

/// Replaces n by `replacement` inside every first[]/last[] set.
Formula rewrite_labels(const Formula& phi, const TaskLabel& n, const LabelSet& replacement);

/// Closed-world evaluation of a ground literal. `=` is the identity relation.
bool holds(const Literal& l, const State& s);

Constraint substitute(const Constraint& c, const Substitution& theta);
Formula substitute(const Formula& phi, const Substitution& theta);
TaskNetwork substitute(const TaskNetwork& d, const Substitution& theta);

void collect_variables(const Constraint& c, std::set<std::string>& out);
void collect_variables(const TaskNetwork& d, std::set<std::string>& out);
void collect_constants(const TaskNetwork& d, std::set<std::string>& out);

std::string to_string(const TaskRef& r);
std::string to_string(const Constraint& c);
std::string to_string(const LabelledTask& t);

}  // namespace htn
