#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace htn {

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A function-free first-order term: a named variable or a named constant.
struct Term {
  enum class Kind : unsigned char { variable, constant };

  Kind kind = Kind::constant;
  std::string name;

  static Term var(std::string n) { return {Kind::variable, std::move(n)}; }
  static Term constant(std::string n) { return {Kind::constant, std::move(n)}; }

  bool is_variable() const { return kind == Kind::variable; }

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

/// Variable name -> term.
using Substitution = std::map<std::string, Term>;

/// predicate(args...)
struct Atom {
  std::string predicate;
  std::vector<Term> args;

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

struct Literal {
  bool positive = true;
  Atom atom;

  Literal negated() const { return {!positive, atom}; }

  auto operator<=>(const Literal&) const = default;
  bool operator==(const Literal&) const = default;
};

/// A task symbol applied to arguments; primitive-ness comes from the domain.
struct Task {
  std::string symbol;
  std::vector<Term> args;

  auto operator<=>(const Task&) const = default;
  bool operator==(const Task&) const = default;
};

/// Closed-world state: the set of ground atoms that hold.
using State = std::set<Atom>;

/// Name of the built-in identity predicate used for binding constraints.
inline constexpr const char* kEqualityPredicate = "=";

// -- substitution -----------------------------------------------------------

Term substitute(const Term& t, const Substitution& theta);
Atom substitute(const Atom& a, const Substitution& theta);
Literal substitute(const Literal& l, const Substitution& theta);
Task substitute(const Task& t, const Substitution& theta);

/// theta2 after theta1: applies theta2 to theta1's range and adds theta2's
/// bindings for variables theta1 leaves unbound.
Substitution compose(const Substitution& theta1, const Substitution& theta2);

/// The unique theta with substitute(head, theta) == t, if any. Head arguments are
/// expected to be distinct variables.
std::optional<Substitution> match_task(const Task& t, const Task& head);

bool is_ground(const Atom& a);
bool is_ground(const Task& t);

void collect_variables(const Term& t, std::set<std::string>& out);
void collect_variables(const Atom& a, std::set<std::string>& out);
void collect_variables(const Task& t, std::set<std::string>& out);
void collect_constants(const Atom& a, std::set<std::string>& out);
void collect_constants(const Task& t, std::set<std::string>& out);

// -- rendering --------------------------------------------------------------

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(const Task& t);
std::string to_string(const Substitution& theta);

}  // namespace htn
