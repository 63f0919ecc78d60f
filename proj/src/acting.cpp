#include "htnact/acting.hpp"

#include <algorithm>

namespace htn {

namespace {

bool includes(const LabelSet& big, const LabelSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool intersects(const LabelSet& a, const LabelSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else
      return true;
  }
  return false;
}

LabelSet intersection(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

/// x ∈ {n, first[{n, ...}]}
bool starts_with(const TaskRef& r, const TaskLabel& n) {
  return r.is_plain(n) || (r.kind == TaskRef::Kind::first && r.mentions(n));
}

/// x is n′ ∉ lab(S) or last[∅]
bool executed(const TaskRef& r, const TaskSet& live) {
  if (r.is_plain()) return !live.count(r.label());
  return r.kind == TaskRef::Kind::last && r.labels.empty();
}

}  // namespace

std::shared_ptr<const Universe> make_universe(const Domain& D, const State& I, const TaskNetwork& d) {
  auto u = std::make_shared<Universe>(domain_constants(D));
  for (const auto& a : I) collect_constants(a, *u);
  collect_constants(d, *u);
  return u;
}

Configuration initial_configuration(TaskNetwork d, State I, std::shared_ptr<const Domain> D) {
  Configuration c;
  c.universe = make_universe(*D, I, d);
  c.couples.emplace(TaskLabel{}, Couple{TaskLabel{}, d.labels(), {}});
  c.network = std::move(d);
  c.state = std::move(I);
  c.domain = std::move(D);
  return c;
}

LabelSet primary_tasks(const TaskNetwork& d, const Domain& D) {
  LabelSet blocked;
  for (const auto& c : d.formula) {
    if (c.kind != Constraint::Kind::order) continue;
    if (!c.negated) {
      blocked.insert(c.to.labels.begin(), c.to.labels.end());
    } else if (c.from.labels.size() == 1 &&
               (c.from.is_plain() || c.from.kind == TaskRef::Kind::last)) {
      auto it = d.tasks.find(c.from.label());
      if (it != d.tasks.end() && D.is_primitive(it->second)) blocked.insert(it->first);
    }
  }
  LabelSet out;
  for (const auto& [n, t] : d.tasks)
    if (!blocked.count(n)) out.insert(n);
  return out;
}

Formula relevant_constraints(const TaskLabel& n, const TaskNetwork& d) {
  Formula out;
  for (const auto& c : d.formula) {
    switch (c.kind) {
      case Constraint::Kind::before:
        if (starts_with(c.to, n)) out.insert(c);
        break;
      case Constraint::Kind::after:
        if (executed(c.from, d.tasks)) out.insert(c);
        break;
      case Constraint::Kind::between:
        if (!executed(c.from, d.tasks)) break;
        if (!c.negated || starts_with(c.to, n)) out.insert(c);
        break;
      case Constraint::Kind::order:
        break;
    }
  }
  return out;
}

std::set<Literal> extracted_literals(const TaskLabel& n, const TaskNetwork& d) {
  std::set<Literal> out;
  for (const auto& c : relevant_constraints(n, d))
    out.insert(c.negated ? c.literal.negated() : c.literal);
  return out;
}

std::vector<Literal> applicability_formula(const TaskLabel& n, const TaskNetwork& d,
                                           const Domain& D) {
  auto it = d.tasks.find(n);
  if (it == d.tasks.end()) throw ContractViolation("no task labelled " + n.name);
  std::vector<Literal> phi = D.instantiate(it->second).pre;
  for (const auto& l : extracted_literals(n, d)) phi.push_back(l);
  return phi;
}

namespace {

class Grounder {
 public:
  Grounder(const std::vector<Literal>& phi, const Task& t, const State& I, const Universe& U)
      : phi_(phi), I_(I), U_(U) {
    for (const auto& l : phi) {
      collect_variables(l.atom, vars_);
      if (l.positive && l.atom.predicate != kEqualityPredicate) positives_.push_back(l.atom);
    }
    collect_variables(t, vars_);
    std::stable_sort(positives_.begin(), positives_.end(),
                     [](const Atom& a, const Atom& b) { return a.args.size() > b.args.size(); });
  }

  std::set<Substitution> run() {
    Substitution theta;
    match(0, theta);
    return std::move(found_);
  }

 private:
  static bool unify(const Atom& pattern, const Atom& fact, Substitution& theta) {
    if (pattern.args.size() != fact.args.size()) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
      const Term p = substitute(pattern.args[i], theta);
      if (p.is_variable())
        theta[p.name] = fact.args[i];
      else if (p != fact.args[i])
        return false;
    }
    return true;
  }

  void match(std::size_t i, Substitution& theta) {
    if (i == positives_.size()) {
      std::vector<std::string> open;
      for (const auto& v : vars_)
        if (!theta.count(v)) open.push_back(v);
      enumerate(open, 0, theta);
      return;
    }
    const Atom p = substitute(positives_[i], theta);
    if (is_ground(p)) {
      if (I_.count(p)) match(i + 1, theta);
      return;
    }
    for (auto it = I_.lower_bound(Atom{p.predicate, {}});
         it != I_.end() && it->predicate == p.predicate; ++it) {
      Substitution next = theta;
      if (unify(p, *it, next)) match(i + 1, next);
    }
  }

  void enumerate(const std::vector<std::string>& open, std::size_t k, Substitution& theta) {
    if (k == open.size()) {
      for (const auto& l : phi_)
        if (!holds(substitute(l, theta), I_)) return;
      found_.insert(theta);
      return;
    }
    for (const auto& c : U_) {
      theta[open[k]] = Term::constant(c);
      enumerate(open, k + 1, theta);
    }
    theta.erase(open[k]);
  }

  const std::vector<Literal>& phi_;
  const State& I_;
  const Universe& U_;
  std::set<std::string> vars_;
  std::vector<Atom> positives_;
  std::set<Substitution> found_;
};

}  // namespace

std::vector<Substitution> groundings(const TaskLabel& n, const TaskNetwork& d, const State& I,
                                     const Domain& D, const Universe& U, bool all) {
  const auto phi = applicability_formula(n, d, D);
  auto found = Grounder(phi, d.tasks.at(n), I, U).run();
  std::vector<Substitution> out;
  for (auto& th : found) {
    out.push_back(th);
    if (!all) break;
  }
  return out;
}

std::optional<Substitution> is_applicable(const TaskLabel& n, const TaskNetwork& d, const State& I,
                                          const Domain& D, const Universe& U) {
  auto g = groundings(n, d, I, D, U, false);
  if (g.empty()) return std::nullopt;
  return g.front();
}

Formula realised_constraints(const TaskLabel& n, const TaskNetwork& d) {
  Formula out;
  for (const auto& c : d.formula) {
    if (c.kind != Constraint::Kind::order) continue;
    if (!c.negated) {
      if (c.from.is_plain(n) || (c.from.kind == TaskRef::Kind::last && c.from.labels.size() == 1 &&
                                 c.from.mentions(n)))
        out.insert(c);
    } else if (starts_with(c.to, n)) {
      out.insert(c);
    }
  }
  for (const auto& c : relevant_constraints(n, d))
    if (c.kind != Constraint::Kind::between || starts_with(c.to, n)) out.insert(c);
  return out;
}

namespace {

CoupleSet substitute(const CoupleSet& R, const Substitution& theta) {
  if (theta.empty()) return R;
  CoupleSet out = R;
  for (auto& [o, c] : out)
    for (auto& alt : c.alternatives) alt.body = substitute(alt.body, theta);
  return out;
}

}  // namespace

ActionResult action_result(const TaskLabel& n, const State& I, const TaskNetwork& d,
                           const Substitution& theta, const CoupleSet& R, const Domain& D) {
  auto it = d.tasks.find(n);
  if (it == d.tasks.end()) throw ContractViolation("action_result: no task labelled " + n.name);
  const Task ground = substitute(it->second, theta);
  if (!is_ground(ground))
    throw ContractViolation("action_result: " + to_string(ground) + " is not ground");
  const GroundOperator op = D.instantiate(ground);

  ActionResult res;
  res.state = I;
  for (const auto& a : op.del) res.state.erase(a);
  for (const auto& a : op.add) res.state.insert(a);

  const Formula fin = realised_constraints(n, d);
  TaskNetwork next;
  next.tasks = d.tasks;
  next.tasks.erase(n);
  for (const auto& c : d.formula) {
    if (fin.count(c)) continue;
    if (c.kind == Constraint::Kind::between && c.to.mentions(n)) continue;
    Constraint r = c;
    if (r.has_from() && r.from.kind == TaskRef::Kind::last) r.from.labels.erase(n);
    if (r.has_to() && r.to.kind == TaskRef::Kind::last) r.to.labels.erase(n);
    next.formula.insert(std::move(r));
  }
  next = substitute(next, theta);

  for (auto c = next.formula.begin(); c != next.formula.end();) {
    if (c->kind == Constraint::Kind::between && c->negated && executed(c->from, next.tasks) &&
        is_ground(c->literal.atom) && holds(c->literal.negated(), res.state))
      c = next.formula.erase(c);
    else
      ++c;
  }
  res.network = std::move(next);
  res.couples = substitute(R, theta);
  return res;
}

bool has_relevant_method(const Task& t, const Domain& D) {
  return std::any_of(D.methods.begin(), D.methods.end(), [&](const Method& m) {
    return m.head.symbol == t.symbol && m.head.args.size() == t.args.size();
  });
}

namespace {

bool blocked_within(const LabelSet& S, const LabelSet& primary, const TaskNetwork& d,
                    const State& I, const Domain& D, const Universe& U) {
  for (const auto& n : intersection(S, primary)) {
    const Task& t = d.tasks.at(n);
    if (D.is_primitive(t)) {
      if (is_applicable(n, d, I, D, U)) return false;
    } else if (has_relevant_method(t, D)) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool is_blocked(const LabelSet& S, const TaskNetwork& d, const State& I, const Domain& D,
                const Universe& U) {
  const LabelSet primary = primary_tasks(d, D);
  if (!intersects(S, primary)) throw ContractViolation("is_blocked: S has no primary task");
  return blocked_within(S, primary, d, I, D, U);
}

TaskNetwork replace(const LabelSet& S, const TaskNetwork& d_new, const TaskNetwork& d) {
  LabelSet s_prime;
  for (const auto& n : S)
    if (d.tasks.count(n)) s_prime.insert(n);
  const LabelSet fresh = d_new.labels();

  auto retarget = [&](TaskRef& r) {
    if (r.is_plain() || s_prime.empty() || !includes(r.labels, s_prime)) return;
    for (const auto& n : s_prime) r.labels.erase(n);
    r.labels.insert(fresh.begin(), fresh.end());
  };

  TaskNetwork out;
  out.tasks = d.tasks;
  for (const auto& n : s_prime) out.tasks.erase(n);
  for (const auto& [n, t] : d_new.tasks)
    if (!out.tasks.emplace(n, t).second)
      throw ContractViolation("replace: label " + n.name + " is not fresh");
  for (const auto& c : d.formula) {
    Constraint r = c;
    if (r.has_from()) retarget(r.from);
    if (r.has_to()) retarget(r.to);
    bool mentions = false;
    for (const auto& n : S) mentions = mentions || r.mentions(n);
    if (!mentions) out.formula.insert(std::move(r));
  }
  out.formula.insert(d_new.formula.begin(), d_new.formula.end());
  return out;
}

CoupleSet update_couples(const LabelSet& s_prime, const TaskLabel& origin, const std::string& method,
                         const CoupleSet& R) {
  CoupleSet out = R;
  auto cit = out.find(origin);
  if (cit == out.end()) throw ContractViolation("update_couples: no couple for " + origin.name);
  auto& alts = cit->second.alternatives;
  auto ait = std::find_if(alts.begin(), alts.end(),
                          [&](const Alternative& a) { return a.method == method; });
  if (ait == alts.end())
    throw ContractViolation("update_couples: " + method + " is not an alternative of " + origin.name);
  const LabelSet fresh = ait->body.labels();
  alts.erase(ait);
  const LabelSet S = cit->second.pursued;

  for (auto& [o, c] : out) {
    if (!includes(c.pursued, S)) continue;
    for (const auto& n : s_prime) c.pursued.erase(n);
    c.pursued.insert(fresh.begin(), fresh.end());
  }
  for (auto it = out.begin(); it != out.end();) {
    if (intersects(it->second.pursued, s_prime))
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

LabelSet smallest_replaceable(const CoupleSet& R) {
  LabelSet out;
  for (const auto& [o, c] : R) {
    if (c.alternatives.empty()) continue;
    bool ok = true;
    for (const auto& [o2, c2] : R) {
      if (includes(c2.pursued, c.pursued)) continue;
      if (includes(c.pursued, c2.pursued) && c2.alternatives.empty()) continue;
      if (!intersects(c.pursued, c2.pursued)) continue;
      ok = false;
      break;
    }
    if (ok) out.insert(o);
  }
  return out;
}

const char* to_string(Step::Kind k) {
  switch (k) {
    case Step::Kind::initial: return "initial";
    case Step::Kind::reduction: return "reduction";
    case Step::Kind::action: return "action";
    case Step::Kind::replacement: return "replacement";
    case Step::Kind::observation: return "observation";
  }
  return "?";
}

std::string describe(const Step& s) {
  switch (s.kind) {
    case Step::Kind::initial: return "initial";
    case Step::Kind::reduction: return "reduce " + s.label.name + " " + s.method;
    case Step::Kind::action: return "act " + s.label.name;
    case Step::Kind::replacement:
      return std::string("replace ") + s.label.name + " " + s.method +
             (s.complete ? " complete" : " partial") + (s.jump ? " jump" : "");
    case Step::Kind::observation: {
      std::string out = "observe";
      for (const auto& t : s.observed) out += " " + to_string(t);
      return out;
    }
  }
  return "?";
}

namespace {

Successor make_action(const Configuration& cfg, const TaskLabel& n, const Substitution& theta) {
  ActionResult res = action_result(n, cfg.state, cfg.network, theta, cfg.couples, *cfg.domain);
  Successor s;
  s.step.kind = Step::Kind::action;
  s.step.label = n;
  s.step.binding = theta;
  s.step.task = substitute(cfg.network.tasks.at(n), theta);
  s.config.network = std::move(res.network);
  s.config.state = std::move(res.state);
  s.config.couples = std::move(res.couples);
  s.config.theta = compose(cfg.theta, theta);
  s.config.domain = cfg.domain;
  s.config.universe = cfg.universe;
  return s;
}

Successor make_reduction(const Configuration& cfg, const TaskLabel& n,
                         const std::vector<Alternative>& alts, std::size_t i) {
  Successor s;
  s.step.kind = Step::Kind::reduction;
  s.step.label = n;
  s.step.method = alts[i].method;
  s.step.task = cfg.network.tasks.at(n);
  s.config = cfg;
  s.config.network = reduce(cfg.network, n, alts[i].body, *cfg.domain);
  const LabelSet sub = alts[i].body.labels();
  for (auto& [o, c] : s.config.couples)
    if (c.pursued.erase(n)) c.pursued.insert(sub.begin(), sub.end());
  Couple r{n, sub, {}};
  for (std::size_t j = 0; j < alts.size(); ++j)
    if (j != i) r.alternatives.push_back(alts[j]);
  if (!s.config.couples.emplace(n, std::move(r)).second)
    throw ContractViolation("task " + n.name + " was already reduced");
  return s;
}

Successor make_replacement(const Configuration& cfg, const Couple& c, const Alternative& alt,
                           const LabelSet& smallest) {
  const LabelSet live = cfg.network.labels();
  const LabelSet s_prime = intersection(c.pursued, live);
  Successor s;
  s.step.kind = Step::Kind::replacement;
  s.step.label = c.origin;
  s.step.method = alt.method;
  s.step.complete = includes(live, c.pursued);
  s.step.jump = !smallest.count(c.origin);
  s.config = cfg;
  s.config.network = replace(c.pursued, alt.body, cfg.network);
  s.config.couples = update_couples(s_prime, c.origin, alt.method, cfg.couples);
  return s;
}

bool replaceable(const Configuration& cfg, const Couple& c, const LabelSet& primary) {
  return !c.alternatives.empty() && intersects(c.pursued, primary) &&
         blocked_within(c.pursued, primary, cfg.network, cfg.state, *cfg.domain, *cfg.universe);
}

}  // namespace

std::vector<Successor> exec_via_action(const Configuration& cfg, const ExecOptions& opt) {
  std::vector<Successor> out;
  const Domain& D = *cfg.domain;
  for (const auto& n : primary_tasks(cfg.network, D)) {
    if (!D.is_primitive(cfg.network.tasks.at(n))) continue;
    for (const auto& theta :
         groundings(n, cfg.network, cfg.state, D, *cfg.universe, opt.all_groundings))
      out.push_back(make_action(cfg, n, theta));
  }
  return out;
}

std::vector<Successor> exec_via_reduction(const Configuration& cfg) {
  std::vector<Successor> out;
  const Domain& D = *cfg.domain;
  for (const auto& n : primary_tasks(cfg.network, D)) {
    const Task& t = cfg.network.tasks.at(n);
    if (D.is_primitive(t)) continue;
    const auto alts = relevant_method_bodies(t, n, D);
    for (std::size_t i = 0; i < alts.size(); ++i) out.push_back(make_reduction(cfg, n, alts, i));
  }
  return out;
}

std::vector<Successor> exec_via_replacement(const Configuration& cfg) {
  std::vector<Successor> out;
  const LabelSet primary = primary_tasks(cfg.network, *cfg.domain);
  const LabelSet smallest = smallest_replaceable(cfg.couples);
  for (const auto& [o, c] : cfg.couples) {
    if (!replaceable(cfg, c, primary)) continue;
    for (const auto& alt : c.alternatives) out.push_back(make_replacement(cfg, c, alt, smallest));
  }
  return out;
}

std::vector<Successor> exec_all(const Configuration& cfg, const ExecOptions& opt) {
  std::vector<Successor> out = exec_via_action(cfg, opt);
  for (auto& s : exec_via_reduction(cfg)) out.push_back(std::move(s));
  for (auto& s : exec_via_replacement(cfg)) out.push_back(std::move(s));
  return out;
}

std::optional<Successor> action_step(const Configuration& cfg, const TaskLabel& n,
                                     const std::optional<Substitution>& binding) {
  const Domain& D = *cfg.domain;
  auto it = cfg.network.tasks.find(n);
  if (it == cfg.network.tasks.end() || !D.is_primitive(it->second)) return std::nullopt;
  if (!primary_tasks(cfg.network, D).count(n)) return std::nullopt;
  if (!binding) {
    auto theta = is_applicable(n, cfg.network, cfg.state, D, *cfg.universe);
    if (!theta) return std::nullopt;
    return make_action(cfg, n, *theta);
  }
  if (!is_ground(substitute(it->second, *binding))) return std::nullopt;
  for (const auto& l : applicability_formula(n, cfg.network, D)) {
    const Literal g = substitute(l, *binding);
    if (!is_ground(g.atom) || !holds(g, cfg.state)) return std::nullopt;
  }
  return make_action(cfg, n, *binding);
}

std::optional<Successor> reduce_step(const Configuration& cfg, const TaskLabel& n,
                                     const std::string& method) {
  const Domain& D = *cfg.domain;
  auto it = cfg.network.tasks.find(n);
  if (it == cfg.network.tasks.end() || D.is_primitive(it->second)) return std::nullopt;
  if (!primary_tasks(cfg.network, D).count(n)) return std::nullopt;
  const auto alts = relevant_method_bodies(it->second, n, D);
  for (std::size_t i = 0; i < alts.size(); ++i)
    if (alts[i].method == method) return make_reduction(cfg, n, alts, i);
  return std::nullopt;
}

std::optional<Successor> replace_step(const Configuration& cfg, const TaskLabel& origin,
                                      const std::string& method) {
  auto it = cfg.couples.find(origin);
  if (it == cfg.couples.end()) return std::nullopt;
  const LabelSet primary = primary_tasks(cfg.network, *cfg.domain);
  if (!replaceable(cfg, it->second, primary)) return std::nullopt;
  for (const auto& alt : it->second.alternatives)
    if (alt.method == method)
      return make_replacement(cfg, it->second, alt, smallest_replaceable(cfg.couples));
  return std::nullopt;
}

Successor apply_step(const Configuration& cfg, const Step& step) {
  std::optional<Successor> s;
  switch (step.kind) {
    case Step::Kind::action: s = action_step(cfg, step.label, step.binding); break;
    case Step::Kind::reduction: s = reduce_step(cfg, step.label, step.method); break;
    case Step::Kind::replacement: s = replace_step(cfg, step.label, step.method); break;
    default: throw IllegalStep(std::string("cannot replay a ") + to_string(step.kind) + " step");
  }
  if (!s) throw IllegalStep("step not applicable: " + describe(step));
  return std::move(*s);
}

}  // namespace htn
