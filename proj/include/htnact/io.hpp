#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htnact/agent.hpp"
#include "htnact/planner.hpp"

namespace htn {

struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string message;

  std::string str(const std::string& file = {}) const;
};

template <class T>
struct Parsed {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;
  std::vector<Diagnostic> warnings;  // accepted input that was adjusted

  bool ok() const { return value.has_value() && diagnostics.empty(); }
};

/// Initial state plus an optional initial network.
struct Problem {
  std::string name;
  State init;
  TaskNetwork network;

  bool operator==(const Problem&) const = default;
};

/// Iteration index -> observed tasks.
struct Scenario {
  std::map<std::size_t, std::vector<ObservedTask>> events;

  bool operator==(const Scenario&) const = default;
};

// Concrete syntax. Identifiers starting with an upper-case letter or '_' are
// variables; '#' starts a comment.
//
//   domain NAME
//   operator move(L)
//     pre: !lowCharge
//     add: lowCharge
//     del:
//   method m4 navigate(L)
//     tasks: 8:calibrate, 9:moveCams, 10:move(L)
//     constraints:
//       before !cali first[8,9]
//       ord last[8,9] 10
//
// Constraint lines: `[not] ord X Y`, `[not] before LIT X`, `[not] after X LIT`,
// `[not] between X LIT Y`, where X, Y are labels, first[..] or last[..].

Parsed<Domain> parse_domain(const std::string& text);
Parsed<Problem> parse_problem(const std::string& text);
/// Lines `N: [label:]task, ...`. With a domain, unknown symbols are reported.
Parsed<Scenario> parse_scenario(const std::string& text, const Domain* D = nullptr);
/// Lines `act L`, `reduce L M`, `replace L [M]`.
Parsed<std::vector<Directive>> parse_script(const std::string& text);
/// A comma-separated task list, as typed at the interactive prompt.
Parsed<std::vector<ObservedTask>> parse_task_list(const std::string& text);

std::string print_domain(const Domain& D);
std::string print_problem(const Problem& p);
std::string print_scenario(const Scenario& s);
std::string print_script(const std::vector<Directive>& s);

ScheduledEvents to_events(const Scenario& s);

struct ExportOptions {
  /// Include each configuration's full network and couple set.
  bool full_configurations = true;
};

/// Deterministic JSON rendering of a trace or d-trace.
std::string export_trace(const Trace& t, const ExportOptions& opt = {});

std::string export_plans(const std::set<Plan>& plans);

/// Whole file; throws std::runtime_error when unreadable.
std::string read_file(const std::string& path);

}  // namespace htn
