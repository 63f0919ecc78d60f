#include "htnact/reduction.hpp"

namespace htn {

std::vector<Alternative> relevant_method_bodies(const Task& t, const TaskLabel& n, const Domain& D) {
  if (D.is_primitive(t))
    throw ContractViolation("relevant_method_bodies: " + to_string(t) + " is primitive");
  std::vector<Alternative> out;
  for (const auto& m : D.methods)
    if (auto body = instantiate_method(m, t, n)) out.push_back({m.name, std::move(*body)});
  return out;
}

TaskNetwork reduce(const TaskNetwork& d, const TaskLabel& n, const TaskNetwork& body,
                   const Domain& D) {
  auto it = d.tasks.find(n);
  if (it == d.tasks.end()) throw ContractViolation("reduce: no task labelled " + n.name);
  if (D.is_primitive(it->second))
    throw ContractViolation("reduce: task " + n.name + " is primitive");

  const LabelSet sub = body.labels();
  TaskNetwork out;
  out.tasks = d.tasks;
  out.tasks.erase(n);
  for (const auto& [b, t] : body.tasks)
    if (!out.tasks.emplace(b, t).second)
      throw ContractViolation("reduce: label " + b.name + " is not fresh");

  out.formula = body.formula;
  for (const auto& c : rewrite_labels(d.formula, n, sub)) {
    Constraint r = c;
    if (r.has_from() && r.from.is_plain(n)) r.from = TaskRef::last(sub);
    if (r.has_to() && r.to.is_plain(n)) r.to = TaskRef::first(sub);
    out.formula.insert(std::move(r));
  }
  return out;
}

}  // namespace htn
