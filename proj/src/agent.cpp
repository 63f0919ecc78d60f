#include "htnact/agent.hpp"

#include <istream>
#include <ostream>

namespace htn {

std::vector<ObservedTask> ScheduledEvents::sense(std::size_t iteration) {
  auto it = schedule_.find(iteration);
  return it == schedule_.end() ? std::vector<ObservedTask>{} : it->second;
}

bool ScheduledEvents::closed(std::size_t iteration) const {
  return schedule_.empty() || schedule_.rbegin()->first < iteration;
}

std::vector<ObservedTask> InteractiveEvents::sense(std::size_t iteration) {
  if (eof_) return {};
  if (prompt_) *prompt_ << "[" << iteration << "] observe> " << std::flush;
  std::string line;
  if (!std::getline(in_, line)) {
    eof_ = true;
    return {};
  }
  return parse_(line);
}

std::optional<std::string> stipulation_violation(const Task& t, const Domain& D) {
  if (!is_ground(t)) return "observed task " + to_string(t) + " is not ground";
  if (D.is_primitive(t)) {
    if (!D.instantiate(t).pre.empty())
      return "observed primitive task " + to_string(t) + " has a non-empty precondition";
    return std::nullopt;
  }
  if (!D.has_methods(t.symbol)) return "observed task " + to_string(t) + " has no relevant method";
  return std::nullopt;
}

const Couple& top_couple(const CoupleSet& R) {
  auto it = R.find(TaskLabel{});
  if (it == R.end()) throw ContractViolation("top_couple: no top-level couple");
  if (!it->second.alternatives.empty())
    throw ContractViolation("top_couple: top-level couple has alternatives");
  return it->second;
}

AgentState start_agent(State I, std::shared_ptr<const Domain> D) {
  TaskNetwork d;
  d.tasks.emplace(TaskLabel(kNopLabel), Task{kNopSymbol, {}});
  AgentState st;
  st.observed = d.tasks;
  st.dtrace.initial = initial_configuration(std::move(d), std::move(I), std::move(D));
  return st;
}

std::optional<Successor> observe(const AgentState& st, const std::vector<ObservedTask>& tasks,
                                 bool enforce) {
  if (tasks.empty()) return std::nullopt;
  const Configuration& cfg = st.current();
  Successor s;
  s.step.kind = Step::Kind::observation;
  s.config = cfg;

  LabelSet taken = labels_of(st.observed);
  const LabelSet live = cfg.network.labels();
  taken.insert(live.begin(), live.end());
  std::size_t k = 0;
  auto universe = std::make_shared<Universe>(*cfg.universe);
  for (const auto& o : tasks) {
    if (enforce)
      if (auto why = stipulation_violation(o.task, *cfg.domain)) throw ObservationError(*why);
    if (!is_ground(o.task)) throw ObservationError("observed task " + to_string(o.task) + " is not ground");
    if (!cfg.domain->is_primitive(o.task) && !cfg.domain->has_methods(o.task.symbol))
      throw ObservationError("unknown task symbol " + o.task.symbol);
    TaskLabel n(o.label);
    if (n.empty()) {
      do {
        n = TaskLabel("t" + std::to_string(st.iteration) + "." + std::to_string(++k));
      } while (taken.count(n));
    } else if (taken.count(n) || n.name.find('@') != std::string::npos) {
      throw ObservationError("label " + n.name + " is already in use or reserved");
    }
    taken.insert(n);
    collect_constants(o.task, *universe);
    s.config.network.tasks.emplace(n, o.task);
    s.config.couples.at(TaskLabel{}).pursued.insert(n);
    s.step.observed.push_back({n, o.task});
  }
  s.config.universe = std::move(universe);
  return s;
}

namespace {

IterationReport iterate(AgentState& st, const std::vector<ObservedTask>& exempt,
                        std::vector<ObservedTask> sensed, Strategy& strat, bool enforce) {
  IterationReport rep;
  if (enforce)
    for (const auto& o : sensed)
      if (auto why = stipulation_violation(o.task, *st.current().domain)) throw ObservationError(*why);
  sensed.insert(sensed.begin(), exempt.begin(), exempt.end());
  if (auto obs = observe(st, sensed, false)) {
    rep.observed = obs->step.observed.size();
    for (const auto& lt : obs->step.observed) st.observed.emplace(lt.label, lt.task);
    st.dtrace.steps.push_back(std::move(*obs));
  }
  rep.status = classify(st.dtrace);
  if (rep.status == TraceStatus::open) {
    if (auto next = strat.next(st.current())) {
      st.dtrace.steps.push_back(std::move(*next));
      rep.executed = true;
      rep.status = classify(st.dtrace);
    }
  }
  ++st.iteration;
  return rep;
}

}  // namespace

IterationReport sra_step(AgentState& st, EventSource& events, Strategy& strat, bool enforce) {
  return iterate(st, {}, events.sense(st.iteration), strat, enforce);
}

AgentResult run_agent(State I, std::shared_ptr<const Domain> D, EventSource& events, Strategy& strat,
                      const AgentOptions& opt) {
  AgentResult res;
  res.state = start_agent(std::move(I), std::move(D));
  AgentState& st = res.state;

  while (true) {
    if (st.iteration >= opt.max_iterations) {
      const TraceStatus s = classify(st.dtrace);
      res.outcome = s == TraceStatus::successful ? RunOutcome::successful
                    : s == TraceStatus::blocked  ? RunOutcome::blocked
                                                 : RunOutcome::budget_exhausted;
      return res;
    }
    const std::vector<ObservedTask> none;
    const auto& exempt = st.iteration == 0 ? opt.initial : none;
    const IterationReport rep =
        iterate(st, exempt, events.sense(st.iteration), strat,
                opt.enforce_stipulation && st.iteration > 0);

    const bool quiet = events.closed(st.iteration);
    if (rep.status == TraceStatus::successful && (opt.stop_on_success || quiet)) {
      res.outcome = RunOutcome::successful;
      return res;
    }
    if (!quiet) continue;
    if (rep.status == TraceStatus::blocked) {
      res.outcome = RunOutcome::blocked;
      return res;
    }
    if (rep.status == TraceStatus::open && !rep.executed) {
      res.outcome = RunOutcome::stalled;
      return res;
    }
  }
}

Trace dtrace_to_trace(const AgentState& st) {
  std::vector<Successor> steps = st.dtrace.steps;
  Configuration initial = st.dtrace.initial;
  const auto universe = st.current().universe;

  auto widen = [](Configuration& c, const std::vector<LabelledTask>& added) {
    for (const auto& lt : added) {
      c.network.tasks.emplace(lt.label, lt.task);
      c.couples.at(TaskLabel{}).pursued.insert(lt.label);
    }
  };

  for (std::size_t j = steps.size(); j-- > 0;) {
    if (steps[j].step.kind != Step::Kind::observation) continue;
    const std::vector<LabelledTask> added = steps[j].step.observed;
    for (std::size_t i = 0; i < j; ++i) widen(steps[i].config, added);
    widen(initial, added);
    steps.erase(steps.begin() + static_cast<std::ptrdiff_t>(j));
  }

  Trace t;
  t.initial = std::move(initial);
  t.initial.universe = universe;
  t.steps = std::move(steps);
  for (auto& s : t.steps) s.config.universe = universe;
  return t;
}

}  // namespace htn
