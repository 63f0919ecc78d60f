#include "htnact/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <tuple>

namespace htn {

// -- random corpus ------------------------------------------------------------

namespace {

class Dice {
 public:
  explicit Dice(std::uint64_t seed) : rng_(seed) {}
  int below(int n) { return n <= 0 ? 0 : static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  bool chance(int percent) { return below(100) < percent; }
  template <class T>
  const T& pick(const std::vector<T>& xs) { return xs[static_cast<std::size_t>(below(static_cast<int>(xs.size())))]; }
  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[static_cast<std::size_t>(below(static_cast<int>(i)))]);
  }

 private:
  std::mt19937_64 rng_;
};

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Vocabulary {
  std::vector<std::string> constants;
  std::vector<std::pair<std::string, int>> predicates;
};

/// A literal over the vocabulary; unary arguments come from `vars` or constants.
Atom random_atom(Dice& dice, const Vocabulary& v, const std::vector<Term>& vars) {
  const auto& [p, arity] = dice.pick(v.predicates);
  Atom a{p, {}};
  if (arity == 1) {
    if (!vars.empty() && dice.chance(60))
      a.args.push_back(dice.pick(vars));
    else
      a.args.push_back(Term::constant(dice.pick(v.constants)));
  }
  return a;
}

Literal random_literal(Dice& dice, const Vocabulary& v, const std::vector<Term>& vars) {
  return {dice.chance(70), random_atom(dice, v, vars)};
}

std::optional<RandomProblem> generate_once(std::uint64_t seed, const CorpusBounds& b) {
  Dice dice(seed);
  RandomProblem rp;
  rp.seed = seed;
  Domain& D = rp.domain;
  D.name = "random-" + std::to_string(seed);

  Vocabulary v;
  for (int i = 0; i < std::max(1, b.constants); ++i) v.constants.push_back("c" + std::to_string(i));
  for (int i = 0; i < std::max(1, b.predicates); ++i)
    v.predicates.push_back({"p" + std::to_string(i), dice.below(2)});

  std::map<std::string, int> arity;
  std::vector<std::string> primitives;
  for (int i = 0; i < b.primitives; ++i) {
    const std::string sym = "a" + std::to_string(i);
    Operator op;
    op.head.symbol = sym;
    std::vector<Term> params;
    if (dice.chance(50)) params.push_back(Term::var("P"));
    op.head.args = params;
    for (int k = dice.below(2); k > 0; --k) op.pre.push_back(random_literal(dice, v, params));
    for (int k = dice.below(3); k > 0; --k) op.add.push_back(random_atom(dice, v, params));
    for (int k = dice.below(2); k > 0; --k) op.del.push_back(random_atom(dice, v, params));
    arity[sym] = static_cast<int>(params.size());
    primitives.push_back(sym);
    D.operators[sym] = std::move(op);
  }
  if (b.event_tasks) {
    for (int i = 0; i < 2; ++i) {
      const std::string sym = "ev" + std::to_string(i);
      Operator op;
      op.head.symbol = sym;
      (i == 0 ? op.add : op.del).push_back(random_atom(dice, v, {}));
      arity[sym] = 0;
      D.operators[sym] = std::move(op);
      rp.event_tasks.push_back({sym, {}});
    }
  }

  std::vector<std::string> compounds;
  std::map<std::string, int> level;
  for (int i = 0; i < b.compounds; ++i) {
    const std::string sym = "t" + std::to_string(i);
    compounds.push_back(sym);
    level[sym] = 1 + (i * std::max(1, b.levels)) / std::max(1, b.compounds);
    arity[sym] = dice.below(2);
  }

  int next_label = 1;
  int method_no = 1;
  for (const auto& sym : compounds) {
    std::vector<std::string> lower = primitives;
    std::vector<std::string> lower_compounds;
    for (const auto& c : compounds)
      if (level[c] < level[sym]) lower_compounds.push_back(c);
    const int methods = 1 + dice.below(b.max_methods);
    for (int m = 0; m < methods; ++m) {
      Method me;
      me.name = "m" + std::to_string(method_no++);
      me.head.symbol = sym;
      std::vector<Term> head_vars;
      if (arity[sym] == 1) head_vars.push_back(Term::var("X"));
      me.head.args = head_vars;

      const int size = 2 + dice.below(std::max(1, b.max_body - 1));
      std::vector<TaskLabel> order;
      std::set<TaskLabel> primitive_labels;
      bool local_var = false;
      for (int k = 0; k < size; ++k) {
        const bool compound = !lower_compounds.empty() && dice.chance(35);
        const std::string s = compound ? dice.pick(lower_compounds) : dice.pick(lower);
        Task t{s, {}};
        if (arity[s] == 1) {
          const int r = dice.below(100);
          if (!head_vars.empty() && r < 50) {
            t.args.push_back(head_vars.front());
          } else if (!compound && r >= 85) {
            t.args.push_back(Term::var("Y"));
            local_var = true;
          } else {
            t.args.push_back(Term::constant(dice.pick(v.constants)));
          }
        }
        TaskLabel n(std::to_string(next_label++));
        if (!compound) primitive_labels.insert(n);
        me.body.tasks.emplace(n, std::move(t));
        order.push_back(n);
      }
      std::vector<Term> vars = head_vars;
      if (local_var) vars.push_back(Term::var("Y"));

      dice.shuffle(order);
      Formula& phi = me.body.formula;
      const TaskLabel trailing = order.back();
      std::set<std::pair<std::size_t, std::size_t>> ord;
      for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
          if (dice.chance(30)) ord.insert({i, j});
      // every task must reach the trailing one
      for (std::size_t i = order.size() - 1; i-- > 0;) {
        bool reaches = false;
        for (const auto& [x, y] : ord)
          if (x == i && (y == order.size() - 1)) reaches = true;
        std::vector<bool> seen(order.size(), false);
        std::vector<std::size_t> stack{i};
        while (!stack.empty() && !reaches) {
          std::size_t x = stack.back();
          stack.pop_back();
          for (const auto& [a, c] : ord)
            if (a == x && !seen[c]) {
              seen[c] = true;
              if (c == order.size() - 1) reaches = true;
              stack.push_back(c);
            }
        }
        if (!reaches) ord.insert({i, order.size() - 1});
      }
      for (const auto& [i, j] : ord) phi.insert(Constraint::order(TaskRef::plain(order[i]), TaskRef::plain(order[j])));

      for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
          if (primitive_labels.count(order[j]) && !ord.count({i, j}) && dice.chance(10))
            phi.insert(Constraint::order(TaskRef::plain(order[j]), TaskRef::plain(order[i]), true));

      for (const auto& n : order) {
        if (dice.chance(25)) phi.insert(Constraint::before(random_literal(dice, v, vars), TaskRef::plain(n)));
        if (n != trailing && dice.chance(15))
          phi.insert(Constraint::after(TaskRef::plain(n), random_literal(dice, v, vars)));
      }
      if (order.size() >= 3 && dice.chance(15))
        phi.insert(Constraint::before(random_literal(dice, v, vars), TaskRef::first({order[0], order[1]})));
      for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
          if (dice.chance(10))
            phi.insert(Constraint::between(TaskRef::plain(order[i]), random_literal(dice, v, vars),
                                           TaskRef::plain(order[j])));
      D.methods.push_back(std::move(me));
    }
  }

  // worst-case number of primitive tasks below each symbol
  std::map<std::string, int> leaves;
  for (const auto& s : primitives) leaves[s] = 1;
  for (const auto& s : compounds) {
    int worst = 0;
    for (const auto& m : D.methods) {
      if (m.head.symbol != s) continue;
      int n = 0;
      for (const auto& [l, t] : m.body.tasks) n += leaves[t.symbol];
      worst = std::max(worst, n);
    }
    leaves[s] = worst;
  }

  int top_level = 0;
  for (const auto& s : compounds) top_level = std::max(top_level, level[s]);
  std::vector<std::string> tops;
  for (const auto& s : compounds)
    if (level[s] == top_level) tops.push_back(s);
  const int ntop = 1 + dice.below(b.max_top);
  int total = 0;
  for (int i = 0; i < ntop; ++i) {
    const bool prim = tops.empty() || (i > 0 && dice.chance(20));
    const std::string s = prim ? dice.pick(primitives) : dice.pick(tops);
    Task t{s, {}};
    if (arity[s] == 1) t.args.push_back(Term::constant(dice.pick(v.constants)));
    total += leaves[s];
    rp.network.tasks.emplace(TaskLabel("T" + std::to_string(i + 1)), std::move(t));
  }
  if (total > b.max_leaves) return std::nullopt;

  for (const auto& [p, a] : v.predicates) {
    if (a == 0) {
      if (dice.chance(50)) rp.init.insert({p, {}});
    } else {
      for (const auto& c : v.constants)
        if (dice.chance(50)) rp.init.insert({p, {Term::constant(c)}});
    }
  }
  if (!validate_domain(D).ok()) return std::nullopt;
  return rp;
}

}  // namespace

std::optional<RandomProblem> generate_problem(std::uint64_t seed, const CorpusBounds& b, int attempts) {
  for (int a = 0; a < attempts; ++a)
    if (auto p = generate_once(mix(seed * 131 + static_cast<std::uint64_t>(a)), b)) return p;
  return std::nullopt;
}

std::map<std::size_t, std::vector<ObservedTask>> random_schedule(const RandomProblem& p,
                                                                 std::uint64_t seed) {
  Dice dice(mix(seed));
  std::map<std::size_t, std::vector<ObservedTask>> s;
  for (const auto& [n, t] : p.network.tasks) s[0].push_back({n.name, t});
  std::vector<Task> pool = p.event_tasks;
  std::set<std::string> seen;
  for (const auto& m : p.domain.methods) {
    if (!seen.insert(m.head.symbol).second) continue;
    Task t{m.head.symbol, {}};
    for (std::size_t i = 0; i < m.head.args.size(); ++i) t.args.push_back(Term::constant("c0"));
    pool.push_back(t);
  }
  if (pool.empty()) return s;
  for (int k = 1 + dice.below(3); k > 0; --k)
    s[static_cast<std::size_t>(1 + dice.below(6))].push_back({"", dice.pick(pool)});
  return s;
}

// -- exhaustive exploration --------------------------------------------------

namespace {

using Key = std::tuple<TaskNetwork, State, CoupleSet>;

class Explorer {
 public:
  explicit Explorer(const ExploreOptions& opt) : opt_(opt) {}

  const std::set<ActionSequence>& visit(const Configuration& cfg) {
    Key key{cfg.network, cfg.state, cfg.couples};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= opt_.max_configurations) {
      res.truncated = true;
      return empty_;
    }
    auto& slot = memo_[key];

    std::vector<Successor> next = exec_via_action(cfg, ExecOptions{true});
    for (auto& s : exec_via_reduction(cfg)) next.push_back(std::move(s));
    for (auto& s : exec_via_replacement(cfg)) next.push_back(std::move(s));

    const TraceStatus st = classify(cfg);
    if (next.empty() != (st != TraceStatus::open) && res.extendability_violations.size() < 5)
      res.extendability_violations.push_back("exec_all " + std::string(next.empty() ? "empty" : "non-empty") +
                                             " but trace is " + to_string(st));
    std::set<ActionSequence> out;
    if (st == TraceStatus::successful) out.insert(ActionSequence{});

    for (const auto& s : next) {
      if (s.step.kind == Step::Kind::replacement) {
        if (s.step.complete && !opt_.complete_replacements) continue;
        if (!s.step.complete && !opt_.partial_replacements) continue;
      }
      const std::set<ActionSequence> sub = visit(s.config);
      for (const auto& seq : sub) {
        if (s.step.kind != Step::Kind::action) {
          out.insert(seq);
          continue;
        }
        ActionSequence full;
        full.reserve(seq.size() + 1);
        full.push_back(s.step.task);
        full.insert(full.end(), seq.begin(), seq.end());
        out.insert(std::move(full));
      }
    }
    auto& stored = memo_[key];
    stored = std::move(out);
    (void)slot;
    return stored;
  }

  ExploreResult res;
  std::size_t size() const { return memo_.size(); }

 private:
  ExploreOptions opt_;
  std::map<Key, std::set<ActionSequence>> memo_;
  const std::set<ActionSequence> empty_;
};

}  // namespace

ExploreResult explore_traces(const Configuration& cfg, const ExploreOptions& opt) {
  Explorer e(opt);
  std::set<ActionSequence> found = e.visit(cfg);
  e.res.successful = std::move(found);
  e.res.configurations = e.size();
  return std::move(e.res);
}

std::set<ActionSequence> plan_actions(const std::set<Plan>& plans) {
  std::set<ActionSequence> out;
  for (const auto& p : plans) out.insert(plan_tasks(p));
  return out;
}

// -- suites --------------------------------------------------------------------

std::string SuiteReport::summary() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2fs", seconds);
  std::string s = std::string(pass ? "PASS " : "FAIL ") + name + ": " + std::to_string(cases) + " cases";
  if (skipped) s += " (" + std::to_string(skipped) + " skipped)";
  return s + " in " + buf;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string render(const ActionSequence& seq) {
  std::string s = "<";
  for (std::size_t i = 0; i < seq.size(); ++i) s += (i ? " " : "") + to_string(seq[i]);
  return s + ">";
}

Configuration start(const RandomProblem& p) {
  return initial_configuration(p.network, p.init, std::make_shared<const Domain>(p.domain));
}

void fail(SuiteReport& r, std::string msg) {
  if (r.failures.size() < 20) r.failures.push_back(std::move(msg));
}

using CaseFn = std::function<bool(const RandomProblem&)>;
/// Feeds problems to a per-problem check, which returns false to skip one.
using Feed = std::function<void(SuiteReport&, const CaseFn&)>;

/// `count` generated problems, drawing more seeds for skipped ones.
Feed corpus(std::uint64_t seed, std::size_t count, const CorpusBounds& b) {
  return [=](SuiteReport& r, const CaseFn& f) {
    std::uint64_t k = 0;
    while (r.cases < count && k < count * 20) {
      auto p = generate_problem(seed + k++, b);
      if (p && f(*p))
        ++r.cases;
      else
        ++r.skipped;
    }
  };
}

Feed given(const std::vector<RandomProblem>& ps) {
  return [&ps](SuiteReport& r, const CaseFn& f) {
    for (const auto& p : ps) {
      if (f(p))
        ++r.cases;
      else
        ++r.skipped;
    }
  };
}

std::string id_of(const RandomProblem& p) {
  return p.domain.name.empty() ? "seed " + std::to_string(p.seed) : p.domain.name;
}

SuiteReport equivalence(const Feed& feed, std::size_t required) {
  SuiteReport r;
  r.name = "equivalence";
  const auto t0 = Clock::now();
  std::size_t with_solutions = 0, plans = 0;
  feed(r, [&](const RandomProblem& p) {
    const Configuration cfg = start(p);
    OracleStats stats;
    const auto oracle = plan_actions(solutions_fixpoint(p.network, p.init, p.domain, *cfg.universe, &stats));
    const ExploreResult acting = explore_traces(cfg);
    if (acting.truncated || !stats.saturated) return false;
    for (const auto& seq : acting.successful)
      if (!oracle.count(seq)) fail(r, id_of(p) + ": acting-only " + render(seq));
    for (const auto& seq : oracle)
      if (!acting.successful.count(seq)) fail(r, id_of(p) + ": oracle plan not reached " + render(seq));
    if (!oracle.empty()) ++with_solutions;
    plans += oracle.size();
    return true;
  });
  r.seconds = since(t0);
  r.pass = r.failures.empty() && r.cases >= required;
  r.witnesses.push_back(std::to_string(with_solutions) + " problems with solutions, " +
                        std::to_string(plans) + " plans compared");
  return r;
}

SuiteReport extendability(const Feed& feed, std::size_t required) {
  SuiteReport r;
  r.name = "extendability";
  const auto t0 = Clock::now();
  std::size_t configs = 0;
  feed(r, [&](const RandomProblem& p) {
    const Configuration cfg = start(p);
    ExploreOptions opt;
    opt.partial_replacements = true;
    opt.max_configurations = 50000;
    const ExploreResult ex = explore_traces(cfg, opt);
    configs += ex.configurations;
    for (const auto& v : ex.extendability_violations) fail(r, id_of(p) + ": " + v);
    for (std::uint64_t run_seed = 0; run_seed < 4; ++run_seed) {
      RandomStrategy strat(mix(p.seed + run_seed));
      const RunResult rr = run(cfg, strat, 500);
      for (std::size_t i = 0; i < rr.trace.size(); ++i) {
        const Configuration& c = rr.trace.before(i);
        const bool none = exec_all(c).empty();
        const TraceStatus st = classify(c);
        ++configs;
        if (none != (st != TraceStatus::open))
          fail(r, id_of(p) + " step " + std::to_string(i) + ": exec_all " + (none ? "empty" : "non-empty") +
                      " but trace is " + to_string(st));
      }
    }
    return true;
  });
  r.seconds = since(t0);
  r.pass = r.failures.empty() && r.cases >= required;
  r.witnesses.push_back(std::to_string(configs) + " configurations checked");
  return r;
}

SuiteReport elimination(const Feed& feed, std::size_t runs_per_domain) {
  SuiteReport r;
  r.name = "elimination";
  const auto t0 = Clock::now();
  std::size_t traces = 0, removed = 0;
  feed(r, [&](const RandomProblem& p) {
    const Configuration cfg = start(p);
    for (std::uint64_t k = 0; k < runs_per_domain; ++k) {
      RandomStrategy strat(mix(p.seed ^ (k + 1)));
      const RunResult rr = run(cfg, strat, 500);
      if (freedom_predicates(rr.trace).complete_replacement_free) continue;
      ++traces;
      const std::string id = id_of(p) + " run " + std::to_string(k);
      const EliminationResult e = eliminate_complete_replacements(rr.trace);
      removed += e.removed;
      for (const auto& pr : e.problems) fail(r, id + ": " + pr);
      if (auto bad = validate_trace(e.trace)) fail(r, id + ": result invalid: " + *bad);
      if (!freedom_predicates(e.trace).complete_replacement_free)
        fail(r, id + ": result still has a complete replacement");
      if (actions_performed(e.trace) != actions_performed(rr.trace)) fail(r, id + ": actions differ");
      if (e.trace.size() > rr.trace.size()) fail(r, id + ": result is longer");
    }
    return true;
  });
  r.seconds = since(t0);
  r.pass = r.failures.empty() && traces > 0;
  r.witnesses.push_back(std::to_string(traces) + " traces with complete replacements, " +
                        std::to_string(removed) + " replacements eliminated");
  return r;
}

}  // namespace

SuiteReport verify_equivalence(std::uint64_t seed, std::size_t domains, const CorpusBounds& b) {
  return equivalence(corpus(seed, domains, b), domains);
}

SuiteReport verify_equivalence(const std::vector<RandomProblem>& problems) {
  return equivalence(given(problems), problems.size());
}

SuiteReport verify_extendability(std::uint64_t seed, std::size_t domains, const CorpusBounds& b) {
  return extendability(corpus(seed, domains, b), domains);
}

SuiteReport verify_extendability(const std::vector<RandomProblem>& problems) {
  return extendability(given(problems), problems.size());
}

SuiteReport verify_elimination(std::uint64_t seed, std::size_t domains, std::size_t runs_per_domain,
                               const CorpusBounds& b) {
  return elimination(corpus(seed, domains, b), runs_per_domain);
}

SuiteReport verify_elimination(const std::vector<RandomProblem>& problems, std::size_t runs_per_domain) {
  return elimination(given(problems), runs_per_domain);
}

std::optional<std::string> check_dtrace(const AgentState& st) {
  const Trace t = dtrace_to_trace(st);
  for (const auto& s : t.steps)
    if (s.step.kind == Step::Kind::observation) return std::string("observation step survived");
  if (t.initial.network.tasks != st.observed || !t.initial.network.formula.empty())
    return std::string("first network is not <T-bar, true>");
  if (t.initial.state != st.dtrace.initial.state) return std::string("initial state changed");
  if (auto bad = validate_trace(t)) return "not an execution trace: " + *bad;
  if (actions_performed(t) != actions_performed(st.dtrace)) return std::string("actions differ");
  return std::nullopt;
}

SuiteReport verify_dtrace_soundness(std::uint64_t seed, std::size_t schedules, const CorpusBounds& b) {
  SuiteReport r;
  r.name = "dtrace-soundness";
  const auto t0 = Clock::now();
  CorpusBounds eb = b;
  eb.event_tasks = true;
  std::size_t observations = 0;
  corpus(seed, schedules, eb)(r, [&](const RandomProblem& p) {
    ScheduledEvents events(random_schedule(p, p.seed));
    RandomStrategy strat(mix(p.seed + 7));
    AgentOptions opt;
    opt.max_iterations = 400;
    const AgentResult ar = run_agent(p.init, std::make_shared<const Domain>(p.domain), events, strat, opt);
    for (const auto& s : ar.state.dtrace.steps)
      if (s.step.kind == Step::Kind::observation) ++observations;
    if (auto bad = check_dtrace(ar.state)) fail(r, "seed " + std::to_string(p.seed) + ": " + *bad);
    return true;
  });
  r.seconds = since(t0);
  r.pass = r.failures.empty() && r.cases >= schedules;
  r.witnesses.push_back(std::to_string(observations) + " observation steps propagated");
  return r;
}

namespace {

std::vector<Directive> without_nop(const std::vector<Directive>& script) {
  std::vector<Directive> out;
  for (const auto& d : script)
    if (d.label != kNopLabel) out.push_back(d);
  return out;
}

std::string label_sequence(const Trace& t) {
  std::string s;
  for (const auto& n : action_labels(t)) s += (s.empty() ? "" : "·") + n.base();
  return s;
}

}  // namespace

SuiteReport verify_acting_only(const Domain& D, const Problem& p, const std::vector<Directive>& script,
                               std::size_t depth, const std::string& label_a, const std::string& label_b) {
  SuiteReport r;
  r.name = "acting-only";
  const auto t0 = Clock::now();
  const Configuration cfg = initial_configuration(p.network, p.init, std::make_shared<const Domain>(D));
  ScriptedStrategy strat(without_nop(script));
  const RunResult rr = run(cfg, strat);
  if (rr.outcome != RunOutcome::successful) fail(r, std::string("scripted trace is ") + to_string(rr.outcome));
  if (!strat.exhausted()) fail(r, "script not fully used");

  const auto plans = solutions_bounded(p.network, p.init, D, *cfg.universe, depth);
  const auto acts = actions_performed(rr.trace);
  if (plan_actions(plans).count(acts)) fail(r, "acted sequence is an HTN solution");
  for (const auto& plan : plans) {
    ++r.cases;
    bool a = false, b = false;
    for (const auto& lt : plan) {
      a = a || lt.label.base() == label_a;
      b = b || lt.label.base() == label_b;
    }
    if (a && b) fail(r, "solution with labels " + label_a + " and " + label_b + ": " + to_string(plan));
  }
  r.seconds = since(t0);
  r.pass = r.failures.empty();
  r.witnesses.push_back("acted " + label_sequence(rr.trace) + " " + render(acts));
  r.witnesses.push_back(std::to_string(plans.size()) + " solutions at depth " + std::to_string(depth));
  return r;
}

namespace {

struct JumpKey {
  Key cfg;
  std::size_t k;
  auto operator<=>(const JumpKey&) const = default;
};

class JumpSearcher {
 public:
  explicit JumpSearcher(const ActionSequence& target) : target_(target) {}

  struct Value {
    bool any = false;
    bool jump_free = false;
  };

  Value visit(const Configuration& cfg, std::size_t k) {
    if (k == target_.size()) return {true, true};
    JumpKey key{{cfg.network, cfg.state, cfg.couples}, k};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Value v;
    for (const auto& s : moves(cfg, k)) {
      const Value sub = visit(s.config, k + (s.step.kind == Step::Kind::action ? 1 : 0));
      v.any = v.any || sub.any;
      v.jump_free = v.jump_free || (sub.jump_free && !s.step.jump);
    }
    memo_[key] = v;
    return v;
  }

  std::vector<Successor> moves(const Configuration& cfg, std::size_t k) const {
    std::vector<Successor> out;
    for (auto& s : exec_via_action(cfg, ExecOptions{true}))
      if (s.step.task == target_[k]) out.push_back(std::move(s));
    for (auto& s : exec_via_reduction(cfg)) out.push_back(std::move(s));
    for (auto& s : exec_via_replacement(cfg))
      if (!s.step.complete) out.push_back(std::move(s));
    return out;
  }

  std::size_t size() const { return memo_.size(); }

 private:
  const ActionSequence& target_;
  std::map<JumpKey, Value> memo_;
};

}  // namespace

JumpSearch search_jump_free(const Configuration& cfg, const ActionSequence& target) {
  JumpSearcher js(target);
  const auto v = js.visit(cfg, 0);
  JumpSearch out;
  out.target_reachable = v.any;
  out.jump_free_exists = v.jump_free;
  // reconstruct one matching trace, jump-free if possible
  Configuration cur = cfg;
  std::size_t k = 0;
  bool want_free = v.jump_free;
  while (v.any && k < target.size()) {
    bool moved = false;
    for (auto& s : js.moves(cur, k)) {
      const std::size_t nk = k + (s.step.kind == Step::Kind::action ? 1 : 0);
      const auto sub = js.visit(s.config, nk);
      if (!sub.any || (want_free && (s.step.jump || !sub.jump_free))) continue;
      out.witness.push_back(s.step);
      cur = std::move(s.config);
      k = nk;
      moved = true;
      break;
    }
    if (!moved) break;
  }
  out.configurations = js.size();
  return out;
}

SuiteReport verify_jumps(const Domain& D, const Problem& p, const std::vector<Directive>& script) {
  SuiteReport r;
  r.name = "jumps";
  const auto t0 = Clock::now();
  const Configuration cfg = initial_configuration(p.network, p.init, std::make_shared<const Domain>(D));
  ScriptedStrategy strat(without_nop(script));
  const RunResult rr = run(cfg, strat);
  if (rr.outcome != RunOutcome::successful) fail(r, std::string("scripted trace is ") + to_string(rr.outcome));
  const ActionSequence target = actions_performed(rr.trace);

  const JumpSearch js = search_jump_free(cfg, target);
  r.cases = js.configurations;
  if (!js.target_reachable) fail(r, "no complete-replacement free trace reproduces " + render(target));
  if (js.jump_free_exists) fail(r, "a jump-free, complete-replacement free trace reproduces " + render(target));
  std::string w;
  for (const auto& s : js.witness) w += (w.empty() ? "" : "; ") + describe(s);
  r.witnesses.push_back("target " + label_sequence(rr.trace) + " " + render(target));
  r.witnesses.push_back("witness: " + w);
  r.seconds = since(t0);
  r.pass = r.failures.empty();
  return r;
}

}  // namespace htn
