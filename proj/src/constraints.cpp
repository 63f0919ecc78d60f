#include "htnact/constraints.hpp"

namespace htn {

LabelSet TaskNetwork::labels() const { return labels_of(tasks); }

LabelSet labels_of(const TaskSet& s) {
  LabelSet out;
  for (const auto& [n, t] : s) out.insert(n);
  return out;
}

Formula transitive_closure(const Formula& phi) {
  Formula out = phi;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Constraint> added;
    for (const auto& a : out) {
      if (a.kind != Constraint::Kind::order || a.negated) continue;
      for (const auto& b : out) {
        if (b.kind != Constraint::Kind::order || b.negated) continue;
        if (a.to != b.from) continue;
        auto c = Constraint::order(a.from, b.to);
        if (!out.count(c)) added.push_back(std::move(c));
      }
    }
    for (auto& c : added) changed |= out.insert(std::move(c)).second;
  }
  return out;
}

namespace {

TaskRef rewrite_ref(const TaskRef& r, const TaskLabel& n, const LabelSet& replacement) {
  if (r.is_plain() || !r.mentions(n)) return r;
  TaskRef out = r;
  out.labels.erase(n);
  out.labels.insert(replacement.begin(), replacement.end());
  return out;
}

}  // namespace

Formula rewrite_labels(const Formula& phi, const TaskLabel& n, const LabelSet& replacement) {
  Formula out;
  for (const auto& c : phi) {
    Constraint r = c;
    if (r.has_from()) r.from = rewrite_ref(r.from, n, replacement);
    if (r.has_to()) r.to = rewrite_ref(r.to, n, replacement);
    out.insert(std::move(r));
  }
  return out;
}

bool holds(const Literal& l, const State& s) {
  if (!is_ground(l.atom))
    throw ContractViolation("holds: literal is not ground: " + to_string(l));
  bool truth;
  if (l.atom.predicate == kEqualityPredicate && l.atom.args.size() == 2)
    truth = l.atom.args[0] == l.atom.args[1];
  else
    truth = s.count(l.atom) != 0;
  return l.positive ? truth : !truth;
}

Constraint substitute(const Constraint& c, const Substitution& theta) {
  if (!c.has_literal() || theta.empty()) return c;
  Constraint out = c;
  out.literal = substitute(c.literal, theta);
  return out;
}

Formula substitute(const Formula& phi, const Substitution& theta) {
  if (theta.empty()) return phi;
  Formula out;
  for (const auto& c : phi) out.insert(substitute(c, theta));
  return out;
}

TaskNetwork substitute(const TaskNetwork& d, const Substitution& theta) {
  if (theta.empty()) return d;
  TaskNetwork out;
  for (const auto& [n, t] : d.tasks) out.tasks.emplace(n, substitute(t, theta));
  out.formula = substitute(d.formula, theta);
  return out;
}

void collect_variables(const Constraint& c, std::set<std::string>& out) {
  if (c.has_literal()) collect_variables(c.literal.atom, out);
}

void collect_variables(const TaskNetwork& d, std::set<std::string>& out) {
  for (const auto& [n, t] : d.tasks) collect_variables(t, out);
  for (const auto& c : d.formula) collect_variables(c, out);
}

void collect_constants(const TaskNetwork& d, std::set<std::string>& out) {
  for (const auto& [n, t] : d.tasks) collect_constants(t, out);
  for (const auto& c : d.formula)
    if (c.has_literal()) collect_constants(c.literal.atom, out);
}

std::string to_string(const TaskRef& r) {
  if (r.is_plain()) return r.label().name;
  std::string s = r.kind == TaskRef::Kind::first ? "first[" : "last[";
  bool first = true;
  for (const auto& n : r.labels) {
    if (!first) s += ",";
    first = false;
    s += n.name;
  }
  return s + "]";
}

std::string to_string(const Constraint& c) {
  std::string s = c.negated ? "not " : "";
  switch (c.kind) {
    case Constraint::Kind::order:
      return s + "ord " + to_string(c.from) + " " + to_string(c.to);
    case Constraint::Kind::before:
      return s + "before " + to_string(c.literal) + " " + to_string(c.to);
    case Constraint::Kind::after:
      return s + "after " + to_string(c.from) + " " + to_string(c.literal);
    case Constraint::Kind::between:
      return s + "between " + to_string(c.from) + " " + to_string(c.literal) + " " +
             to_string(c.to);
  }
  return s;
}

std::string to_string(const LabelledTask& t) { return t.label.name + ":" + to_string(t.task); }

}  // namespace htn
