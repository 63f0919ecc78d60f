#include "htnact/term.hpp"

#include <sstream>

namespace htn {

Term substitute(const Term& t, const Substitution& theta) {
  if (!t.is_variable()) return t;
  auto it = theta.find(t.name);
  return it == theta.end() ? t : it->second;
}

namespace {

std::vector<Term> apply_args(const std::vector<Term>& args, const Substitution& theta) {
  std::vector<Term> out;
  out.reserve(args.size());
  for (const auto& a : args) out.push_back(substitute(a, theta));
  return out;
}

std::string render_args(const std::string& head, const std::vector<Term>& args) {
  if (args.empty()) return head;
  std::string s = head + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += args[i].name;
  }
  return s + ")";
}

}  // namespace

Atom substitute(const Atom& a, const Substitution& theta) {
  if (theta.empty()) return a;
  return {a.predicate, apply_args(a.args, theta)};
}

Literal substitute(const Literal& l, const Substitution& theta) {
  return {l.positive, substitute(l.atom, theta)};
}

Task substitute(const Task& t, const Substitution& theta) {
  if (theta.empty()) return t;
  return {t.symbol, apply_args(t.args, theta)};
}

Substitution compose(const Substitution& theta1, const Substitution& theta2) {
  Substitution out;
  for (const auto& [v, t] : theta1) out.emplace(v, substitute(t, theta2));
  for (const auto& [v, t] : theta2) out.emplace(v, t);  // no-op if already bound
  return out;
}

std::optional<Substitution> match_task(const Task& t, const Task& head) {
  if (t.symbol != head.symbol || t.args.size() != head.args.size()) return std::nullopt;
  Substitution theta;
  for (std::size_t i = 0; i < head.args.size(); ++i) {
    const Term& h = head.args[i];
    if (!h.is_variable()) {
      if (h != t.args[i]) return std::nullopt;
      continue;
    }
    auto [it, inserted] = theta.emplace(h.name, t.args[i]);
    if (!inserted && it->second != t.args[i]) return std::nullopt;
  }
  return theta;
}

bool is_ground(const Atom& a) {
  for (const auto& t : a.args)
    if (t.is_variable()) return false;
  return true;
}

bool is_ground(const Task& t) {
  for (const auto& a : t.args)
    if (a.is_variable()) return false;
  return true;
}

void collect_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) out.insert(t.name);
}
void collect_variables(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args) collect_variables(t, out);
}
void collect_variables(const Task& t, std::set<std::string>& out) {
  for (const auto& a : t.args) collect_variables(a, out);
}
void collect_constants(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args)
    if (!t.is_variable()) out.insert(t.name);
}
void collect_constants(const Task& t, std::set<std::string>& out) {
  for (const auto& a : t.args)
    if (!a.is_variable()) out.insert(a.name);
}

std::string to_string(const Term& t) { return t.name; }
std::string to_string(const Atom& a) { return render_args(a.predicate, a.args); }
std::string to_string(const Literal& l) {
  if (l.atom.predicate == kEqualityPredicate && l.atom.args.size() == 2)
    return l.atom.args[0].name + (l.positive ? " = " : " != ") + l.atom.args[1].name;
  return (l.positive ? "" : "!") + to_string(l.atom);
}
std::string to_string(const Task& t) { return render_args(t.symbol, t.args); }

std::string to_string(const Substitution& theta) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [v, t] : theta) {
    if (!first) os << ", ";
    first = false;
    os << v << "/" << t.name;
  }
  os << "}";
  return os.str();
}

}  // namespace htn
