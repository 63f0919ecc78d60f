#pragma once

#include <gtest/gtest.h>

#include "htnact/verify.hpp"

namespace htn::test {

inline std::string fixture(const std::string& f) { return read_file(std::string(HTNACT_FIXTURES) + "/" + f); }
inline std::string fixture_path(const std::string& f) { return std::string(HTNACT_FIXTURES) + "/" + f; }
inline std::string golden_path(const std::string& f) { return std::string(HTNACT_GOLDEN) + "/" + f; }

template <class T>
T must(Parsed<T> p) {
  if (!p.ok()) {
    std::string msg;
    for (const auto& d : p.diagnostics) msg += d.str() + "\n";
    throw std::runtime_error("parse failed:\n" + msg);
  }
  return std::move(*p.value);
}

inline Domain domain_of(const std::string& text) { return must(parse_domain(text)); }
inline Problem problem_of(const std::string& text) { return must(parse_problem(text)); }
inline Domain rover() { return domain_of(fixture("rover.htn")); }
inline Problem rover_problem() { return problem_of(fixture("rover.prob")); }
inline std::vector<Directive> walkthrough_script() { return must(parse_script(fixture("walkthrough.chs"))); }

/// "p(a, X)" style atoms and "!p(a)" style literals.
inline Atom atom(const std::string& pred, std::vector<std::string> args = {}) {
  Atom a{pred, {}};
  for (auto& s : args)
    a.args.push_back(std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_' ? Term::var(s)
                                                                                    : Term::constant(s));
  return a;
}
inline Literal pos(const std::string& pred, std::vector<std::string> args = {}) { return {true, atom(pred, std::move(args))}; }
inline Literal neg(const std::string& pred, std::vector<std::string> args = {}) { return {false, atom(pred, std::move(args))}; }
inline Task task(const std::string& sym, std::vector<std::string> args = {}) {
  const Atom a = atom(sym, std::move(args));
  return {a.predicate, a.args};
}
inline TaskRef L(const char* n) { return TaskRef::plain(n); }

inline std::shared_ptr<const Domain> share(Domain d) { return std::make_shared<const Domain>(std::move(d)); }

inline Configuration rover_start(const Domain& D, const Problem& p) {
  return initial_configuration(p.network, p.init, share(D));
}

inline std::vector<Directive> without_nop(std::vector<Directive> s) {
  std::erase_if(s, [](const Directive& d) { return d.label == kNopLabel; });
  return s;
}

/// The walkthrough as a plain execution trace.
inline RunResult walkthrough_run() {
  ScriptedStrategy strat(without_nop(walkthrough_script()));
  return run(rover_start(rover(), rover_problem()), strat);
}

inline std::string label_sequence(const Trace& t) {
  std::string s;
  for (const auto& n : action_labels(t)) s += (s.empty() ? "" : "·") + n.base();
  return s;
}

inline std::vector<std::string> step_strings(const Trace& t) {
  std::vector<std::string> out;
  for (const auto& s : t.steps) out.push_back(describe(s.step));
  return out;
}

inline LabelSet labels(std::initializer_list<const char*> xs) {
  LabelSet s;
  for (auto x : xs) s.insert(x);
  return s;
}

}  // namespace htn::test
