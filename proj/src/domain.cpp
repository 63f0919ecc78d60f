#include "htnact/domain.hpp"

#include <algorithm>
#include <functional>

namespace htn {

Domain::Domain() { operators.emplace(kNopSymbol, Operator{Task{kNopSymbol, {}}, {}, {}, {}}); }

bool Domain::has_methods(const std::string& symbol) const {
  return std::any_of(methods.begin(), methods.end(),
                     [&](const Method& m) { return m.head.symbol == symbol; });
}

const Method* Domain::find_method(const std::string& name) const {
  for (const auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

GroundOperator Domain::instantiate(const Task& t) const {
  auto it = operators.find(t.symbol);
  if (it == operators.end()) throw ContractViolation("no operator for task " + to_string(t));
  auto theta = match_task(t, it->second.head);
  if (!theta) throw ContractViolation("operator head does not match " + to_string(t));
  GroundOperator g;
  for (const auto& l : it->second.pre) g.pre.push_back(substitute(l, *theta));
  for (const auto& a : it->second.add) g.add.push_back(substitute(a, *theta));
  for (const auto& a : it->second.del) g.del.push_back(substitute(a, *theta));
  return g;
}

namespace {

using LabelMap = std::function<TaskLabel(const TaskLabel&)>;

TaskRef rename_ref(const TaskRef& r, const LabelMap& f) {
  TaskRef out{r.kind, {}};
  for (const auto& n : r.labels) out.labels.insert(f(n));
  return out;
}

TaskNetwork rename_network(const TaskNetwork& d, const LabelMap& f, const Substitution& vars) {
  TaskNetwork out;
  for (const auto& [n, t] : d.tasks) out.tasks.emplace(f(n), substitute(t, vars));
  for (const auto& c : d.formula) {
    Constraint r = substitute(c, vars);
    if (r.has_from()) r.from = rename_ref(r.from, f);
    if (r.has_to()) r.to = rename_ref(r.to, f);
    out.formula.insert(std::move(r));
  }
  return out;
}

}  // namespace

std::string NameSupply::next_suffix() {
  ++counter_;
  return counter_ == 1 ? "@" + scope_ : "@" + scope_ + "#" + std::to_string(counter_);
}

TaskNetwork fresh_rename(const TaskNetwork& d, NameSupply& gen) {
  const std::string suffix = gen.next_suffix();
  std::set<std::string> vars;
  collect_variables(d, vars);
  Substitution sigma;
  for (const auto& v : vars) sigma.emplace(v, Term::var(v + suffix));
  return rename_network(d, [&](const TaskLabel& n) { return TaskLabel(n.name + suffix); }, sigma);
}

std::optional<TaskNetwork> instantiate_method(const Method& m, const Task& t, const TaskLabel& n) {
  if (m.head.symbol != t.symbol || m.head.args.size() != t.args.size()) return std::nullopt;
  const std::string vsuffix = "@" + n.name + "." + m.name;
  std::set<std::string> vars;
  collect_variables(m.head, vars);
  collect_variables(m.body, vars);
  Substitution sigma;
  for (const auto& v : vars) sigma.emplace(v, Term::var(v + vsuffix));
  auto theta = match_task(t, substitute(m.head, sigma));
  if (!theta) return std::nullopt;
  Substitution both;
  for (const auto& [v, term] : sigma) both.emplace(v, substitute(term, *theta));
  const std::string lsuffix = "@" + n.name;
  return rename_network(m.body, [&](const TaskLabel& b) { return TaskLabel(b.name + lsuffix); },
                        both);
}

std::set<std::pair<TaskLabel, TaskLabel>> ordering_closure(const Formula& phi) {
  std::map<TaskLabel, LabelSet> succ;
  for (const auto& c : phi) {
    if (c.kind != Constraint::Kind::order || c.negated) continue;
    for (const auto& a : c.from.labels)
      for (const auto& b : c.to.labels) succ[a].insert(b);
  }
  std::set<std::pair<TaskLabel, TaskLabel>> out;
  for (const auto& [start, direct] : succ) {
    std::vector<TaskLabel> stack(direct.begin(), direct.end());
    LabelSet seen;
    while (!stack.empty()) {
      TaskLabel x = stack.back();
      stack.pop_back();
      if (!seen.insert(x).second) continue;
      out.emplace(start, x);
      auto it = succ.find(x);
      if (it != succ.end()) stack.insert(stack.end(), it->second.begin(), it->second.end());
    }
  }
  return out;
}

namespace {

void note_arity(std::map<std::string, std::size_t>& table, const std::string& sym, std::size_t n,
                const std::string& where, const std::string& what, ValidationReport& rep) {
  auto [it, inserted] = table.emplace(sym, n);
  if (!inserted && it->second != n)
    rep.issues.push_back({where, what + " '" + sym + "' used with arity " + std::to_string(n) +
                                     " and " + std::to_string(it->second)});
}

bool distinct_variables(const Task& head) {
  std::set<std::string> seen;
  for (const auto& a : head.args)
    if (!a.is_variable() || !seen.insert(a.name).second) return false;
  return true;
}

void check_body(const Domain& dom, const Method& m, ValidationReport& rep,
                std::map<std::string, std::size_t>& task_arity,
                std::map<std::string, std::size_t>& pred_arity) {
  const std::string where = "method " + m.name;
  const TaskNetwork& body = m.body;
  const LabelSet labels = body.labels();

  if (body.tasks.size() <= 1)
    rep.issues.push_back({where, "body must contain more than one task"});

  for (const auto& [n, t] : body.tasks) {
    note_arity(task_arity, t.symbol, t.args.size(), where, "task", rep);
    if (!dom.is_primitive(t) && !dom.has_methods(t.symbol))
      rep.issues.push_back({where, "task symbol '" + t.symbol + "' has no operator or method"});
  }

  for (const auto& c : body.formula) {
    for (const TaskRef* r : {c.has_from() ? &c.from : nullptr, c.has_to() ? &c.to : nullptr}) {
      if (!r) continue;
      if (r->labels.empty())
        rep.issues.push_back({where, "empty task reference in '" + to_string(c) + "'"});
      for (const auto& n : r->labels)
        if (!labels.count(n))
          rep.issues.push_back({where, "constraint '" + to_string(c) + "' refers to unknown label " + n.name});
    }
    if (c.has_literal() && c.literal.atom.predicate != kEqualityPredicate)
      note_arity(pred_arity, c.literal.atom.predicate, c.literal.atom.args.size(), where,
                 "predicate", rep);
    if (c.kind == Constraint::Kind::order && c.negated) {
      for (const auto& n : c.from.labels) {
        auto it = body.tasks.find(n);
        if (it != body.tasks.end() && !dom.is_primitive(it->second))
          rep.warnings.push_back(
              {where, "non-primitive task " + n.name + " on the left of a negated ordering"});
      }
    }
  }

  const auto closure = ordering_closure(body.formula);
  for (const auto& [a, b] : closure)
    if (a == b) {
      rep.issues.push_back({where, "ordering constraints are cyclic through " + a.name});
      break;
    }
  for (const auto& c : body.formula) {
    if (c.kind != Constraint::Kind::order || !c.negated) continue;
    bool all = !c.from.labels.empty() && !c.to.labels.empty();
    for (const auto& a : c.from.labels)
      for (const auto& b : c.to.labels) all = all && closure.count({a, b});
    if (all)
      rep.issues.push_back({where, "'" + to_string(c) + "' contradicts the ordering closure"});
  }

  if (!has_trailing_task(body) && body.tasks.size() > 1)
    rep.issues.push_back({where, "no task is ordered after all others without an after-constraint"});
}

}  // namespace

bool has_trailing_task(const TaskNetwork& body) {
  const LabelSet labels = body.labels();
  const auto closure = ordering_closure(body.formula);
  for (const auto& n : labels) {
    bool after_all = true;
    for (const auto& o : labels)
      if (o != n && !closure.count({o, n})) after_all = false;
    if (!after_all) continue;
    bool has_after = false;
    for (const auto& c : body.formula)
      if (c.kind == Constraint::Kind::after && c.from.mentions(n)) has_after = true;
    if (!has_after) return true;
  }
  return false;
}

std::vector<std::string> append_trailing_nops(Domain& d) {
  std::vector<std::string> touched;
  for (auto& m : d.methods) {
    if (m.body.tasks.size() <= 1 || has_trailing_task(m.body)) continue;
    const TaskLabel end(m.name + ".end");
    if (m.body.tasks.count(end)) continue;
    for (const auto& n : m.body.labels())
      m.body.formula.insert(Constraint::order(TaskRef::plain(n), TaskRef::plain(end)));
    m.body.tasks.emplace(end, Task{kNopSymbol, {}});
    touched.push_back(m.name);
  }
  return touched;
}

ValidationReport validate_domain(const Domain& d) {
  ValidationReport rep;
  std::map<std::string, std::size_t> task_arity;
  std::map<std::string, std::size_t> pred_arity;

  for (const auto& [sym, op] : d.operators) {
    const std::string where = "operator " + sym;
    note_arity(task_arity, sym, op.head.args.size(), where, "task", rep);
    if (!distinct_variables(op.head))
      rep.issues.push_back({where, "parameters must be distinct variables"});
    std::set<std::string> params;
    collect_variables(op.head, params);
    std::set<std::string> used;
    for (const auto& l : op.pre) {
      collect_variables(l.atom, used);
      if (l.atom.predicate != kEqualityPredicate)
        note_arity(pred_arity, l.atom.predicate, l.atom.args.size(), where, "predicate", rep);
    }
    for (const auto* list : {&op.add, &op.del})
      for (const auto& a : *list) {
        collect_variables(a, used);
        note_arity(pred_arity, a.predicate, a.args.size(), where, "predicate", rep);
        if (a.predicate == kEqualityPredicate)
          rep.issues.push_back({where, "effects may not mention '='"});
      }
    for (const auto& v : used)
      if (!params.count(v)) rep.issues.push_back({where, "variable " + v + " is not a parameter"});
    if (sym == kNopSymbol && (!op.pre.empty() || !op.add.empty() || !op.del.empty()))
      rep.issues.push_back({where, "nop is reserved and must have empty precondition and effects"});
    if (d.has_methods(sym))
      rep.issues.push_back({where, "symbol is both primitive and non-primitive"});
  }

  std::set<std::string> method_names;
  std::map<TaskLabel, std::string> label_owner;
  for (const auto& m : d.methods) {
    const std::string where = "method " + m.name;
    if (!method_names.insert(m.name).second)
      rep.issues.push_back({where, "duplicate method name"});
    note_arity(task_arity, m.head.symbol, m.head.args.size(), where, "task", rep);
    if (!distinct_variables(m.head))
      rep.issues.push_back({where, "head arguments must be distinct variables"});
    for (const auto& [n, t] : m.body.tasks) {
      auto [it, inserted] = label_owner.emplace(n, m.name);
      if (!inserted)
        rep.issues.push_back({where, "label " + n.name + " already used in method " + it->second});
    }
    check_body(d, m, rep, task_arity, pred_arity);
  }
  return rep;
}

std::set<std::string> domain_constants(const Domain& d) {
  std::set<std::string> out;
  for (const auto& [sym, op] : d.operators) {
    collect_constants(op.head, out);
    for (const auto& l : op.pre) collect_constants(l.atom, out);
    for (const auto& a : op.add) collect_constants(a, out);
    for (const auto& a : op.del) collect_constants(a, out);
  }
  for (const auto& m : d.methods) {
    collect_constants(m.head, out);
    collect_constants(m.body, out);
  }
  return out;
}

}  // namespace htn
