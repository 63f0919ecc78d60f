#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "htnact/reduction.hpp"

namespace htn {

/// ⟨origin, S, D⟩: the tasks pursued for the reduction of `origin` and the
/// method-bodies not tried yet. The top-level couple has an empty origin.
struct Couple {
  TaskLabel origin;
  LabelSet pursued;
  std::vector<Alternative> alternatives;

  auto operator<=>(const Couple&) const = default;
  bool operator==(const Couple&) const = default;
};

/// R, keyed by origin label.
using CoupleSet = std::map<TaskLabel, Couple>;

using Universe = std::set<std::string>;

/// ⟨d, I, R, D⟩ plus the accumulated substitution.
struct Configuration {
  TaskNetwork network;
  State state;
  CoupleSet couples;
  Substitution theta;
  std::shared_ptr<const Domain> domain;
  std::shared_ptr<const Universe> universe;

  /// Structural identity of the execution-relevant parts (d, I, R, θ).
  bool same_as(const Configuration& o) const {
    return network == o.network && state == o.state && couples == o.couples && theta == o.theta;
  }
};

/// Constants of the domain, the state and the network.
std::shared_ptr<const Universe> make_universe(const Domain& D, const State& I, const TaskNetwork& d);

/// First configuration of a trace: R = {⟨S_d, ∅⟩}.
Configuration initial_configuration(TaskNetwork d, State I, std::shared_ptr<const Domain> D);

/// Raised when a step descriptor cannot be applied to a configuration.
class IllegalStep : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// -- tasks and constraints ---------------------------------------------------

LabelSet primary_tasks(const TaskNetwork& d, const Domain& D);

/// bef(n, d), including the negated-between rule: ¬(x, l, x′) is relevant to n
/// when x has been executed and n is x′ or in first[x′].
Formula relevant_constraints(const TaskLabel& n, const TaskNetwork& d);

std::set<Literal> extracted_literals(const TaskLabel& n, const TaskNetwork& d);

/// Φ(n, d, Op): precondition and extracted literals.
std::vector<Literal> applicability_formula(const TaskLabel& n, const TaskNetwork& d, const Domain& D);

/// Ground substitutions θ (over the variables of Φ and of n's task) with
/// I ⊨ Φθ, in increasing order. With `all` false, at most the smallest.
std::vector<Substitution> groundings(const TaskLabel& n, const TaskNetwork& d, const State& I,
                                     const Domain& D, const Universe& U, bool all);

std::optional<Substitution> is_applicable(const TaskLabel& n, const TaskNetwork& d, const State& I,
                                          const Domain& D, const Universe& U);

/// fin(n, d) = C1 ∪ C2.
Formula realised_constraints(const TaskLabel& n, const TaskNetwork& d);

struct ActionResult {
  TaskNetwork network;
  State state;
  CoupleSet couples;
};

ActionResult action_result(const TaskLabel& n, const State& I, const TaskNetwork& d,
                           const Substitution& theta, const CoupleSet& R, const Domain& D);

bool has_relevant_method(const Task& t, const Domain& D);

bool is_blocked(const LabelSet& S, const TaskNetwork& d, const State& I, const Domain& D,
                const Universe& U);

/// rep(S, d_new, d).
TaskNetwork replace(const LabelSet& S, const TaskNetwork& d_new, const TaskNetwork& d);

/// upd(S′, S, d_new, R) where S is the pursued set of the couple `origin` and
/// d_new its alternative taken from method `method`.
CoupleSet update_couples(const LabelSet& s_prime, const TaskLabel& origin, const std::string& method,
                         const CoupleSet& R);

/// Origins of the couples in smallest(R).
LabelSet smallest_replaceable(const CoupleSet& R);

// -- execution ---------------------------------------------------------------

struct Step {
  enum class Kind : unsigned char { initial, reduction, action, replacement, observation };

  Kind kind = Kind::initial;
  TaskLabel label;       // reduced task, executed action, or replaced couple's origin
  std::string method;    // body chosen by a reduction or replacement
  Substitution binding;  // action grounding
  Task task;             // ground action, or the reduced task
  bool complete = false;
  bool jump = false;
  std::vector<LabelledTask> observed;

  bool operator==(const Step&) const = default;
};

const char* to_string(Step::Kind k);
std::string describe(const Step& s);

struct Successor {
  Step step;
  Configuration config;
};

struct ExecOptions {
  bool all_groundings = false;
};

std::vector<Successor> exec_via_action(const Configuration& cfg, const ExecOptions& opt = {});
std::vector<Successor> exec_via_reduction(const Configuration& cfg);
std::vector<Successor> exec_via_replacement(const Configuration& cfg);

/// Actions (by label), then reductions (by label, then method order), then
/// replacements (by origin, then alternative order).
std::vector<Successor> exec_all(const Configuration& cfg, const ExecOptions& opt = {});

std::optional<Successor> action_step(const Configuration& cfg, const TaskLabel& n,
                                     const std::optional<Substitution>& binding = std::nullopt);
std::optional<Successor> reduce_step(const Configuration& cfg, const TaskLabel& n,
                                     const std::string& method);
std::optional<Successor> replace_step(const Configuration& cfg, const TaskLabel& origin,
                                      const std::string& method);

/// Replays a reduction, action or replacement descriptor; throws IllegalStep.
Successor apply_step(const Configuration& cfg, const Step& step);

}  // namespace htn
