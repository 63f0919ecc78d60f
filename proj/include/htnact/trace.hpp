#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "htnact/acting.hpp"

namespace htn {

/// τ1 · … · τk. `steps[i]` holds τ_{i+2} and the step that produced it.
struct Trace {
  Configuration initial;
  std::vector<Successor> steps;

  const Configuration& last() const { return steps.empty() ? initial : steps.back().config; }
  const Configuration& before(std::size_t i) const { return i == 0 ? initial : steps[i - 1].config; }
  std::size_t size() const { return steps.size() + 1; }
};

enum class TraceStatus { successful, blocked, open };

const char* to_string(TraceStatus s);

TraceStatus classify(const Configuration& last);
inline TraceStatus classify(const Trace& t) { return classify(t.last()); }

/// act(T): ground actions in execution order, final θ applied.
std::vector<Task> actions_performed(const Trace& t);
std::vector<TaskLabel> action_labels(const Trace& t);

struct Freedom {
  bool complete_replacement_free = true;
  bool partial_replacement_free = true;
  bool jump_free = true;
};

Freedom freedom_predicates(const Trace& t);

/// Picks the next execution, or nullopt when nothing can be executed.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::optional<Successor> next(const Configuration& cfg) = 0;
};

/// Smallest applicable primary action, else reduction of the smallest primary
/// non-primitive task with its first body, else a replacement (non-jump first).
class DefaultStrategy : public Strategy {
 public:
  std::optional<Successor> next(const Configuration& cfg) override;
};

/// Uniform choice over exec_all, all groundings included.
class RandomStrategy : public Strategy {
 public:
  explicit RandomStrategy(std::uint64_t seed) : rng_(seed) {}
  std::optional<Successor> next(const Configuration& cfg) override;

 private:
  std::mt19937_64 rng_;
};

/// One scripted choice: `act L`, `reduce L M` or `replace ORIGIN [M]`.
struct Directive {
  enum class Kind { act, reduce, replace };
  Kind kind = Kind::act;
  std::string label;
  std::string method;
  int line = 0;
};

class ScriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Follows the directives in order, then defers to the default strategy. A
/// directive that does not name a legal execution raises ScriptError. Labels
/// match exactly or by a unique base label.
class ScriptedStrategy : public Strategy {
 public:
  explicit ScriptedStrategy(std::vector<Directive> script) : script_(std::move(script)) {}
  std::optional<Successor> next(const Configuration& cfg) override;
  bool exhausted() const { return pos_ >= script_.size(); }

 private:
  std::vector<Directive> script_;
  std::size_t pos_ = 0;
  DefaultStrategy fallback_;
};

/// Resolves a user-written label against candidates: exact name, else the
/// unique candidate whose base label equals it.
std::optional<TaskLabel> resolve_label(const std::string& text, const LabelSet& candidates);

enum class RunOutcome { successful, blocked, budget_exhausted, stalled };

const char* to_string(RunOutcome o);

struct RunResult {
  Trace trace;
  RunOutcome outcome = RunOutcome::stalled;
};

inline constexpr std::size_t kDefaultBudget = 10000;

RunResult run(const Configuration& cfg0, Strategy& strat, std::size_t budget = kDefaultBudget);

/// Replays every step from its predecessor and compares the result; returns
/// a description of the first discrepancy.
std::optional<std::string> validate_trace(const Trace& t);

/// Rebuilds a trace by replaying step descriptors from `initial`.
Trace replay(const Configuration& initial, const std::vector<Step>& steps);

struct EliminationResult {
  Trace trace;
  std::size_t removed = 0;
  std::vector<std::string> problems;
};

/// Removes complete replacements by redirecting the reduction they undo to
/// the body they install and replaying the rest.
EliminationResult eliminate_complete_replacements(const Trace& t);

}  // namespace htn
