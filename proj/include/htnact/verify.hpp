#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "htnact/io.hpp"

namespace htn {

// -- random corpus ------------------------------------------------------------

struct CorpusBounds {
  int constants = 3;       // at most 6
  int predicates = 3;      // at most 6
  int primitives = 4;
  int compounds = 3;       // non-primitive symbols, spread over the levels
  int levels = 3;          // reduction depth
  int max_methods = 3;     // per non-primitive symbol
  int max_body = 3;        // at most 4
  int max_top = 2;         // top-level tasks
  int max_leaves = 6;      // worst-case primitive tasks under the top network
  bool event_tasks = false;  // add precondition-free primitives usable as events
};

struct RandomProblem {
  std::uint64_t seed = 0;
  Domain domain;
  State init;
  TaskNetwork network;
  std::vector<Task> event_tasks;  // observable tasks, when requested
};

/// Draws domains from `seed` until one validates (at most `attempts`).
std::optional<RandomProblem> generate_problem(std::uint64_t seed, const CorpusBounds& b = {},
                                              int attempts = 64);

std::map<std::size_t, std::vector<ObservedTask>> random_schedule(const RandomProblem& p,
                                                                 std::uint64_t seed);

// -- exhaustive exploration --------------------------------------------------

using ActionSequence = std::vector<Task>;

struct ExploreOptions {
  bool complete_replacements = true;
  bool partial_replacements = false;
  std::size_t max_configurations = 200000;
};

struct ExploreResult {
  std::set<ActionSequence> successful;  // act(T) of every successful trace
  std::size_t configurations = 0;
  bool truncated = false;
  /// Configurations where exec_all emptiness disagreed with classify.
  std::vector<std::string> extendability_violations;
};

/// Depth-first over every trace from cfg using the permitted step kinds,
/// memoised on (d, I, R).
ExploreResult explore_traces(const Configuration& cfg, const ExploreOptions& opt = {});

std::set<ActionSequence> plan_actions(const std::set<Plan>& plans);

// -- suites --------------------------------------------------------------------

struct SuiteReport {
  std::string name;
  bool pass = false;
  std::size_t cases = 0;
  std::size_t skipped = 0;
  std::vector<std::string> witnesses;
  std::vector<std::string> failures;
  double seconds = 0;

  std::string summary() const;
};

/// Oracle vs exhaustive acting, both directions, on `domains` random problems.
SuiteReport verify_equivalence(std::uint64_t seed, std::size_t domains, const CorpusBounds& b = {});

/// exec_all(last) = ∅ ⟺ successful or blocked, on every configuration of
/// random-strategy traces and of the exhaustive search.
SuiteReport verify_extendability(std::uint64_t seed, std::size_t domains, const CorpusBounds& b = {});

/// Every random trace with a complete replacement is rewritten into a valid,
/// complete-replacement free trace with the same actions and no more steps.
SuiteReport verify_elimination(std::uint64_t seed, std::size_t domains, std::size_t runs_per_domain = 8,
                               const CorpusBounds& b = {});

/// The same three checks on given problems; nothing is generated.
SuiteReport verify_equivalence(const std::vector<RandomProblem>& problems);
SuiteReport verify_extendability(const std::vector<RandomProblem>& problems);
SuiteReport verify_elimination(const std::vector<RandomProblem>& problems, std::size_t runs_per_domain = 8);

/// dtrace_to_trace soundness on random event schedules.
SuiteReport verify_dtrace_soundness(std::uint64_t seed, std::size_t schedules,
                                    const CorpusBounds& b = {});

/// Checks one finished agent run.
std::optional<std::string> check_dtrace(const AgentState& st);

/// A scripted trace on (D, I, d) is successful while its action sequence is
/// not among the oracle's solutions, and no oracle plan has both labels.
SuiteReport verify_acting_only(const Domain& D, const Problem& p, const std::vector<Directive>& script,
                               std::size_t depth, const std::string& label_a = "8",
                               const std::string& label_b = "1");

/// Every complete-replacement free trace reproducing the scripted trace's
/// actions contains a jump (and at least one such trace exists).
SuiteReport verify_jumps(const Domain& D, const Problem& p, const std::vector<Directive>& script);

/// Outcome of the target-directed search behind verify_jumps.
struct JumpSearch {
  bool target_reachable = false;  // some replacement-complete-free trace matches
  bool jump_free_exists = false;
  std::size_t configurations = 0;
  std::vector<Step> witness;  // a matching trace (with a jump, if any exists)
};

JumpSearch search_jump_free(const Configuration& cfg, const ActionSequence& target);

}  // namespace htn
