#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htnact/trace.hpp"

namespace htn {

/// A task reported by the environment. An empty label asks the loop to mint one.
struct ObservedTask {
  std::string label;
  Task task;

  bool operator==(const ObservedTask&) const = default;
};

class EventSource {
 public:
  virtual ~EventSource() = default;
  /// Tasks newly observed at the given iteration (possibly none).
  virtual std::vector<ObservedTask> sense(std::size_t iteration) = 0;
  /// True when no task will ever arrive at or after `iteration`.
  virtual bool closed(std::size_t iteration) const = 0;
};

/// Iteration index -> tasks.
class ScheduledEvents : public EventSource {
 public:
  ScheduledEvents() = default;
  explicit ScheduledEvents(std::map<std::size_t, std::vector<ObservedTask>> s) : schedule_(std::move(s)) {}

  std::vector<ObservedTask> sense(std::size_t iteration) override;
  bool closed(std::size_t iteration) const override;
  const std::map<std::size_t, std::vector<ObservedTask>>& schedule() const { return schedule_; }

 private:
  std::map<std::size_t, std::vector<ObservedTask>> schedule_;
};

/// One line per iteration from a stream; an empty line means nothing new.
/// End of input closes the source.
class InteractiveEvents : public EventSource {
 public:
  using LineParser = std::function<std::vector<ObservedTask>(const std::string&)>;

  InteractiveEvents(std::istream& in, std::ostream* prompt, LineParser parse)
      : in_(in), prompt_(prompt), parse_(std::move(parse)) {}

  std::vector<ObservedTask> sense(std::size_t iteration) override;
  bool closed(std::size_t) const override { return eof_; }

 private:
  std::istream& in_;
  std::ostream* prompt_;
  LineParser parse_;
  bool eof_ = false;
};

/// Why t may not be observed: primitive tasks need an empty precondition,
/// non-primitive ones a relevant method. nullopt when acceptable.
std::optional<std::string> stipulation_violation(const Task& t, const Domain& D);

class ObservationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kNopLabel = "0";

/// The couple with empty origin, whose pursued set holds the nop lineage.
const Couple& top_couple(const CoupleSet& R);

struct AgentState {
  Trace dtrace;     // starts at ⟨{(0:nop)}, true⟩
  TaskSet observed; // T̄, nop included
  std::size_t iteration = 0;

  const Configuration& current() const { return dtrace.last(); }
};

AgentState start_agent(State I, std::shared_ptr<const Domain> D);

/// Adds tasks as top-level tasks (lines 5-8). Labels are minted as
/// t<iteration>.<k> unless given. Throws ObservationError on a stipulation
/// violation (when `enforce`) or a clashing label. Returns the observation
/// successor, or nullopt for an empty set.
std::optional<Successor> observe(const AgentState& st, const std::vector<ObservedTask>& tasks,
                                 bool enforce = true);

struct IterationReport {
  std::size_t observed = 0;
  bool executed = false;
  TraceStatus status = TraceStatus::open;
};

/// One pass of the loop body: sense, then at most one execution.
IterationReport sra_step(AgentState& st, EventSource& events, Strategy& strat, bool enforce = true);

struct AgentOptions {
  std::size_t max_iterations = kDefaultBudget;
  /// Stop at the first successful d-trace even if more events are scheduled.
  bool stop_on_success = false;
  /// Applies from iteration 1 on; whatever arrives at iteration 0 is the set
  /// of initial requests.
  bool enforce_stipulation = true;
  /// Extra initial requests, observed at iteration 0.
  std::vector<ObservedTask> initial;
};

struct AgentResult {
  AgentState state;
  RunOutcome outcome = RunOutcome::stalled;
};

/// Iterates sra_step until the source is closed and the d-trace cannot
/// progress (or is successful with stop_on_success), or the iteration bound.
AgentResult run_agent(State I, std::shared_ptr<const Domain> D, EventSource& events, Strategy& strat,
                      const AgentOptions& opt = {});

/// Propagates observed tasks back to the first configuration and drops the
/// observation steps, yielding an execution trace of ⟨T̄, true⟩.
Trace dtrace_to_trace(const AgentState& st);

}  // namespace htn
