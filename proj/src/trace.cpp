#include "htnact/trace.hpp"

#include <algorithm>

namespace htn {

const char* to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::successful: return "successful";
    case TraceStatus::blocked: return "blocked";
    case TraceStatus::open: return "open";
  }
  return "?";
}

const char* to_string(RunOutcome o) {
  switch (o) {
    case RunOutcome::successful: return "successful";
    case RunOutcome::blocked: return "blocked";
    case RunOutcome::budget_exhausted: return "budget-exhausted";
    case RunOutcome::stalled: return "stalled";
  }
  return "?";
}

TraceStatus classify(const Configuration& last) {
  if (last.network.tasks.empty()) return TraceStatus::successful;
  const Domain& D = *last.domain;
  const LabelSet primary = primary_tasks(last.network, D);
  for (const auto& [o, c] : last.couples) {
    bool touches = std::any_of(c.pursued.begin(), c.pursued.end(),
                               [&](const TaskLabel& n) { return primary.count(n) != 0; });
    if (!touches) continue;
    if (!c.alternatives.empty()) return TraceStatus::open;
    if (!is_blocked(c.pursued, last.network, last.state, D, *last.universe))
      return TraceStatus::open;
  }
  return TraceStatus::blocked;
}

std::vector<Task> actions_performed(const Trace& t) {
  std::vector<Task> out;
  const Substitution& theta = t.last().theta;
  for (const auto& s : t.steps)
    if (s.step.kind == Step::Kind::action) out.push_back(substitute(s.step.task, theta));
  return out;
}

std::vector<TaskLabel> action_labels(const Trace& t) {
  std::vector<TaskLabel> out;
  for (const auto& s : t.steps)
    if (s.step.kind == Step::Kind::action) out.push_back(s.step.label);
  return out;
}

Freedom freedom_predicates(const Trace& t) {
  Freedom f;
  for (const auto& s : t.steps) {
    if (s.step.kind != Step::Kind::replacement) continue;
    if (s.step.complete)
      f.complete_replacement_free = false;
    else
      f.partial_replacement_free = false;
    if (s.step.jump) f.jump_free = false;
  }
  return f;
}

std::optional<Successor> DefaultStrategy::next(const Configuration& cfg) {
  const Domain& D = *cfg.domain;
  const LabelSet primary = primary_tasks(cfg.network, D);
  for (const auto& n : primary) {
    if (!D.is_primitive(cfg.network.tasks.at(n))) continue;
    if (auto s = action_step(cfg, n)) return s;
  }
  for (const auto& n : primary) {
    const Task& t = cfg.network.tasks.at(n);
    if (D.is_primitive(t)) continue;
    for (const auto& m : D.methods)
      if (m.head.symbol == t.symbol && m.head.args.size() == t.args.size())
        if (auto s = reduce_step(cfg, n, m.name)) return s;
  }
  auto reps = exec_via_replacement(cfg);
  if (reps.empty()) return std::nullopt;
  auto it = std::find_if(reps.begin(), reps.end(), [](const Successor& s) { return !s.step.jump; });
  return std::move(it != reps.end() ? *it : reps.front());
}

std::optional<Successor> RandomStrategy::next(const Configuration& cfg) {
  auto all = exec_all(cfg, ExecOptions{true});
  if (all.empty()) return std::nullopt;
  return std::move(all[rng_() % all.size()]);
}

std::optional<TaskLabel> resolve_label(const std::string& text, const LabelSet& candidates) {
  if (candidates.count(TaskLabel(text))) return TaskLabel(text);
  std::optional<TaskLabel> found;
  for (const auto& n : candidates) {
    if (n.base() != text) continue;
    if (found) return std::nullopt;
    found = n;
  }
  return found;
}

std::optional<Successor> ScriptedStrategy::next(const Configuration& cfg) {
  if (exhausted()) return fallback_.next(cfg);
  const Directive& d = script_[pos_];
  const std::string where = "script line " + std::to_string(d.line) + ": ";
  std::optional<Successor> s;
  if (d.kind == Directive::Kind::replace) {
    LabelSet origins;
    for (const auto& [o, c] : cfg.couples)
      if (!o.empty()) origins.insert(o);
    auto origin = resolve_label(d.label, origins);
    if (!origin) throw ScriptError(where + "no unique reduction couple for '" + d.label + "'");
    auto& alts = cfg.couples.at(*origin).alternatives;
    std::string method = d.method;
    if (method.empty() && !alts.empty()) method = alts.front().method;
    s = replace_step(cfg, *origin, method);
    if (!s) throw ScriptError(where + "cannot replace " + origin->name + " with '" + method + "'");
  } else {
    auto n = resolve_label(d.label, cfg.network.labels());
    if (!n) throw ScriptError(where + "no unique task labelled '" + d.label + "'");
    if (d.kind == Directive::Kind::act) {
      s = action_step(cfg, *n);
      if (!s) throw ScriptError(where + "action " + n->name + " is not executable");
    } else {
      s = reduce_step(cfg, *n, d.method);
      if (!s) throw ScriptError(where + "cannot reduce " + n->name + " with '" + d.method + "'");
    }
  }
  ++pos_;
  return s;
}

RunResult run(const Configuration& cfg0, Strategy& strat, std::size_t budget) {
  if (budget == 0) throw ContractViolation("run: budget must be positive");
  RunResult r;
  r.trace.initial = cfg0;
  for (std::size_t i = 0;; ++i) {
    const TraceStatus st = classify(r.trace.last());
    if (st == TraceStatus::successful) {
      r.outcome = RunOutcome::successful;
      return r;
    }
    if (st == TraceStatus::blocked) {
      r.outcome = RunOutcome::blocked;
      return r;
    }
    if (i == budget) {
      r.outcome = RunOutcome::budget_exhausted;
      return r;
    }
    auto s = strat.next(r.trace.last());
    if (!s) {
      r.outcome = RunOutcome::stalled;
      return r;
    }
    r.trace.steps.push_back(std::move(*s));
  }
}

std::optional<std::string> validate_trace(const Trace& t) {
  if (t.initial.couples.size() != 1 || !t.initial.couples.begin()->first.empty() ||
      t.initial.couples.begin()->second.pursued != t.initial.network.labels() ||
      !t.initial.couples.begin()->second.alternatives.empty())
    return std::string("first configuration does not have R = {<S_d, {}>}");
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& recorded = t.steps[i].step;
    Successor s;
    try {
      s = apply_step(t.before(i), recorded);
    } catch (const std::exception& e) {
      return "step " + std::to_string(i + 1) + ": " + e.what();
    }
    if (!s.config.same_as(t.steps[i].config))
      return "step " + std::to_string(i + 1) + " (" + describe(recorded) +
             "): configuration differs from its replay";
    if (!(s.step == recorded))
      return "step " + std::to_string(i + 1) + " (" + describe(recorded) +
             "): recorded classification differs from " + describe(s.step);
  }
  return std::nullopt;
}

Trace replay(const Configuration& initial, const std::vector<Step>& steps) {
  Trace t;
  t.initial = initial;
  for (const auto& s : steps) t.steps.push_back(apply_step(t.last(), s));
  return t;
}

namespace {

std::optional<std::size_t> first_complete_replacement(const Trace& t) {
  for (std::size_t j = 0; j < t.steps.size(); ++j) {
    const Step& s = t.steps[j].step;
    if (s.kind == Step::Kind::replacement && s.complete) return j;
  }
  return std::nullopt;
}

}  // namespace

EliminationResult eliminate_complete_replacements(const Trace& t) {
  EliminationResult res;
  Trace cur = t;
  while (auto j = first_complete_replacement(cur)) {
    const Step rep = cur.steps[*j].step;
    const TaskLabel origin = rep.label;

    std::optional<std::size_t> i;
    for (std::size_t k = 0; k < *j; ++k) {
      const Step& s = cur.steps[k].step;
      if (s.kind == Step::Kind::reduction && s.label == origin) i = k;
    }
    if (!i) {
      res.problems.push_back("no reduction of " + origin.name + " precedes " + describe(rep));
      break;
    }

    Trace next;
    next.initial = cur.initial;
    next.steps.assign(cur.steps.begin(), cur.steps.begin() + static_cast<std::ptrdiff_t>(*i));
    auto redirected = reduce_step(cur.before(*i), origin, rep.method);
    if (!redirected) {
      res.problems.push_back("cannot reduce " + origin.name + " with " + rep.method);
      break;
    }
    next.steps.push_back(std::move(*redirected));

    bool failed = false;
    auto replay_from = [&](std::size_t from, std::size_t to, bool skip_descendants) {
      for (std::size_t k = from; k < to && !failed; ++k) {
        const Step& s = cur.steps[k].step;
        if (skip_descendants) {
          const Configuration& old = cur.before(k);
          auto c = old.couples.find(origin);
          bool descendant = c != old.couples.end() && c->second.pursued.count(s.label);
          if (descendant && s.kind == Step::Kind::reduction) continue;
          if (descendant) {
            res.problems.push_back("step " + describe(s) + " touches the replaced tasks");
            failed = true;
            break;
          }
        }
        try {
          next.steps.push_back(apply_step(next.last(), s));
        } catch (const std::exception& e) {
          res.problems.push_back(std::string("replay failed: ") + e.what());
          failed = true;
        }
      }
    };
    replay_from(*i + 1, *j, true);
    if (!failed) {
      const Configuration& want = cur.steps[*j].config;
      const Configuration& got = next.last();
      if (!(got.network == want.network && got.state == want.state)) {
        res.problems.push_back("redirected prefix does not reach the replacement's result");
        failed = true;
      }
    }
    if (!failed) replay_from(*j + 1, cur.steps.size(), false);
    if (failed) break;
    cur = std::move(next);
    ++res.removed;
  }
  res.trace = std::move(cur);
  return res;
}

}  // namespace htn
