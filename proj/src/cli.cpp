#include "htnact/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "htnact/verify.hpp"

namespace htn {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T, class Parse>
T load(const std::string& path, Parse parse, std::ostream& err) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  Parsed<T> p = parse(text);
  for (const auto& d : p.diagnostics) err << d.str(path) << "\n";
  for (const auto& d : p.warnings)
    err << path << ":" << d.line << ":" << d.column << ": warning: " << d.message << "\n";
  if (!p.ok()) throw InputError(path + ": " + std::to_string(p.diagnostics.size()) + " error(s)");
  return std::move(*p.value);
}

Domain load_domain(const std::string& path, std::ostream& err) {
  Domain D = load<Domain>(path, parse_domain, err);
  const ValidationReport v = validate_domain(D);
  for (const auto& w : v.warnings) err << path << ": warning: " << w.where << ": " << w.message << "\n";
  for (const auto& i : v.issues) err << path << ": " << i.where << ": " << i.message << "\n";
  if (!v.ok()) throw InputError(path + ": domain is invalid");
  return D;
}

Problem load_problem(const std::string& path, std::ostream& err) {
  return load<Problem>(path, parse_problem, err);
}

Scenario load_scenario(const std::string& path, const Domain& D, std::ostream& err) {
  return load<Scenario>(path, [&](const std::string& t) { return parse_scenario(t, &D); }, err);
}

std::vector<Directive> load_script(const std::string& path, std::ostream& err) {
  return load<std::vector<Directive>>(path, parse_script, err);
}

std::string label_sequence(const Trace& t) {
  std::string s;
  for (const auto& n : action_labels(t)) s += (s.empty() ? "" : "·") + n.base();
  return s;
}

int exit_for(RunOutcome o) {
  switch (o) {
    case RunOutcome::successful:
      return kExitSuccess;
    case RunOutcome::budget_exhausted:
      return kExitBudget;
    case RunOutcome::blocked:
    case RunOutcome::stalled:
      return kExitBlocked;
  }
  return kExitBlocked;
}

/// Problem tasks first, then scenario tasks; repeats of a problem task at
/// iteration 0 are dropped.
std::vector<ObservedTask> initial_requests(const Problem& p) {
  std::vector<ObservedTask> out;
  for (const auto& [n, t] : p.network.tasks) out.push_back({n.name, t});
  return out;
}

void strip_repeats(Scenario& s, const std::vector<ObservedTask>& initial) {
  auto it = s.events.find(0);
  if (it == s.events.end()) return;
  auto& v = it->second;
  v.erase(std::remove_if(v.begin(), v.end(),
                         [&](const ObservedTask& o) {
                           return std::find(initial.begin(), initial.end(), o) != initial.end();
                         }),
          v.end());
  if (v.empty()) s.events.erase(it);
}

struct ActArgs {
  std::string domain, problem, scenario, script, output;
  std::string strategy;
  std::uint64_t seed = 0;
  bool seeded = false;
  bool interactive = false;
  bool stop_on_success = false;
  bool plain = false;
  bool brief = false;
  std::size_t max_iterations = kDefaultBudget;
};

int cmd_act(const ActArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  std::string strategy = a.strategy.empty() ? (a.seeded ? "random" : "default") : a.strategy;
  if (strategy == "exhaustive") throw InputError("--strategy exhaustive is only available under verify");
  if (!a.script.empty() && strategy != "default") throw InputError("--script cannot be combined with --strategy random");
  if (a.interactive && !a.scenario.empty()) throw InputError("--interactive cannot be combined with a scenario file");

  auto D = std::make_shared<const Domain>(load_domain(a.domain, err));
  const Problem p = load_problem(a.problem, err);
  if (!p.network.formula.empty())
    throw InputError(a.problem + ": the agent starts from unconstrained requests; drop the constraints");

  AgentOptions opt;
  opt.max_iterations = a.max_iterations;
  opt.stop_on_success = a.stop_on_success;
  opt.initial = initial_requests(p);

  std::unique_ptr<EventSource> events;
  if (a.interactive) {
    const Domain* dom = D.get();
    events = std::make_unique<InteractiveEvents>(in, &err, [dom, &err](const std::string& line) {
      auto parsed = parse_task_list(line);
      for (const auto& d : parsed.diagnostics) err << d.str("<input>") << "\n";
      if (!parsed.ok()) return std::vector<ObservedTask>{};
      for (const auto& o : *parsed.value) {
        if (auto why = stipulation_violation(o.task, *dom)) {
          err << "<input>: " << to_string(o.task) << ": " << *why << "\n";
          return std::vector<ObservedTask>{};
        }
      }
      return *parsed.value;
    });
  } else {
    Scenario s;
    if (!a.scenario.empty()) s = load_scenario(a.scenario, *D, err);
    strip_repeats(s, opt.initial);
    events = std::make_unique<ScheduledEvents>(to_events(s));
  }

  std::unique_ptr<Strategy> strat;
  if (!a.script.empty())
    strat = std::make_unique<ScriptedStrategy>(load_script(a.script, err));
  else if (strategy == "random")
    strat = std::make_unique<RandomStrategy>(a.seed);
  else
    strat = std::make_unique<DefaultStrategy>();

  AgentResult res;
  try {
    res = run_agent(p.init, D, *events, *strat, opt);
  } catch (const ObservationError& e) {
    throw InputError(std::string("observation rejected: ") + e.what());
  } catch (const ScriptError& e) {
    throw InputError(a.script + ": " + e.what());
  }

  const Trace plain = dtrace_to_trace(res.state);
  ExportOptions eo;
  eo.full_configurations = !a.brief;
  const std::string doc = export_trace(a.plain ? plain : res.state.dtrace, eo);
  if (a.output.empty()) {
    out << doc;
  } else {
    std::ofstream f(a.output, std::ios::binary);
    if (!f) throw InputError("cannot write " + a.output);
    f << doc;
  }

  err << "outcome: " << to_string(res.outcome) << "\n";
  err << "actions: " << label_sequence(res.state.dtrace) << "\n";
  if (auto bad = check_dtrace(res.state)) {
    err << "d-trace check failed: " << *bad << "\n";
    return kExitVerification;
  }
  return exit_for(res.outcome);
}

struct PlanArgs {
  std::string domain, problem;
  int depth = 3;
  bool fixpoint = false;
  bool json = false;
};

int cmd_plan(const PlanArgs& a, std::ostream& out, std::ostream& err) {
  const Domain D = load_domain(a.domain, err);
  const Problem p = load_problem(a.problem, err);
  const auto U = make_universe(D, p.init, p.network);
  OracleStats stats;
  const auto plans = a.fixpoint ? solutions_fixpoint(p.network, p.init, D, *U, &stats)
                                : solutions_bounded(p.network, p.init, D, *U, static_cast<std::size_t>(a.depth), &stats);
  if (a.json) {
    out << export_plans(plans);
  } else {
    for (const auto& plan : plans) out << to_string(plan) << "\n";
  }
  err << plans.size() << " solution(s), " << stats.networks << " networks explored"
      << (stats.saturated ? "" : ", search truncated by depth") << "\n";
  return kExitSuccess;
}

struct VerifyArgs {
  std::string suite, domain, problem, scenario, script, strategy;
  std::uint64_t seed = 1;
  std::size_t count = 0;
  std::size_t depth = 3;
};

void report(const SuiteReport& r, std::ostream& out) {
  out << r.summary() << "\n";
  for (const auto& w : r.witnesses) out << "  witness: " << w << "\n";
  for (const auto& f : r.failures) out << "  failure: " << f << "\n";
}

RandomProblem from_files(const VerifyArgs& a, std::ostream& err) {
  RandomProblem rp;
  rp.seed = a.seed;
  rp.domain = load_domain(a.domain, err);
  Problem p = load_problem(a.problem, err);
  rp.init = std::move(p.init);
  rp.network = std::move(p.network);
  return rp;
}

SuiteReport dtrace_on_files(const VerifyArgs& a, std::ostream& err) {
  SuiteReport r;
  r.name = "dtrace-soundness";
  auto D = std::make_shared<const Domain>(load_domain(a.domain, err));
  Problem p;
  if (!a.problem.empty()) p = load_problem(a.problem, err);
  AgentOptions opt;
  opt.initial = initial_requests(p);
  Scenario s;
  if (!a.scenario.empty()) s = load_scenario(a.scenario, *D, err);
  strip_repeats(s, opt.initial);
  ScheduledEvents events = to_events(s);
  std::unique_ptr<Strategy> strat;
  if (!a.script.empty())
    strat = std::make_unique<ScriptedStrategy>(load_script(a.script, err));
  else if (a.strategy == "random")
    strat = std::make_unique<RandomStrategy>(a.seed);
  else
    strat = std::make_unique<DefaultStrategy>();
  const AgentResult res = run_agent(p.init, D, events, *strat, opt);
  r.cases = 1;
  if (auto bad = check_dtrace(res.state)) r.failures.push_back(*bad);
  r.pass = r.failures.empty();
  r.witnesses.push_back(std::string(to_string(res.outcome)) + " run, actions " + label_sequence(res.state.dtrace));
  return r;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (a.strategy == "exhaustive" && !a.script.empty())
    throw InputError("--script cannot be combined with --strategy exhaustive");
  const bool files = !a.domain.empty();
  if (files && a.problem.empty() && a.suite != "dtrace-soundness")
    throw InputError("suite " + a.suite + " needs a problem file with the domain");
  auto need_script = [&] {
    if (!files || a.script.empty()) throw InputError("suite " + a.suite + " needs DOMAIN PROBLEM and --script");
  };
  const std::size_t count = a.count ? a.count : (a.suite == "dtrace-soundness" ? 50 : 200);

  SuiteReport r;
  if (a.suite == "equivalence") {
    r = files ? verify_equivalence({from_files(a, err)}) : verify_equivalence(a.seed, count);
  } else if (a.suite == "extendability") {
    r = files ? verify_extendability({from_files(a, err)}) : verify_extendability(a.seed, count);
  } else if (a.suite == "elimination") {
    r = files ? verify_elimination({from_files(a, err)}) : verify_elimination(a.seed, count);
  } else if (a.suite == "dtrace-soundness") {
    r = files ? dtrace_on_files(a, err) : verify_dtrace_soundness(a.seed, count);
  } else if (a.suite == "acting-only") {
    need_script();
    r = verify_acting_only(load_domain(a.domain, err), load_problem(a.problem, err), load_script(a.script, err),
                           a.depth);
  } else if (a.suite == "jumps") {
    need_script();
    r = verify_jumps(load_domain(a.domain, err), load_problem(a.problem, err), load_script(a.script, err));
  }
  report(r, out);
  return r.pass ? kExitSuccess : kExitVerification;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"HTN acting engine: run the agent loop, enumerate HTN solutions, check properties"};
  app.name("htnact");
  app.require_subcommand(1);

  ActArgs act;
  auto* c_act = app.add_subcommand("act", "Run the sense-reason-act loop and export the d-trace as JSON");
  c_act->add_option("domain", act.domain, "Domain file (.htn)")->required();
  c_act->add_option("problem", act.problem, "Problem file (.prob); its tasks are the initial requests")->required();
  c_act->add_option("scenario", act.scenario, "Scenario file (.evt) with tasks observed per iteration");
  c_act->add_option("--script", act.script, "Choice script (.chs) followed before the default strategy");
  c_act->add_flag("--interactive", act.interactive, "Read observed tasks from stdin, one line per iteration");
  c_act->add_option("--strategy", act.strategy, "default or random")
      ->check(CLI::IsMember({"default", "random", "exhaustive"}));
  auto* seed_opt = c_act->add_option("--seed", act.seed, "Seed for the random strategy (implies it)");
  c_act->add_option("--max-iterations", act.max_iterations, "Iteration bound")->check(CLI::PositiveNumber);
  c_act->add_flag("--stop-on-success", act.stop_on_success, "Stop at the first successful d-trace");
  c_act->add_flag("--plain", act.plain, "Export the execution trace recovered from the d-trace");
  c_act->add_flag("--brief", act.brief, "Leave full networks and couple sets out of the export");
  c_act->add_option("-o,--output", act.output, "Write the export here instead of stdout");

  PlanArgs plan;
  auto* c_plan = app.add_subcommand("plan", "List HTN solutions by exhaustive reduction");
  c_plan->add_option("domain", plan.domain, "Domain file (.htn)")->required();
  c_plan->add_option("problem", plan.problem, "Problem file (.prob)")->required();
  c_plan->add_option("--depth", plan.depth, "Solutions reachable within depth-1 reductions")
      ->check(CLI::Range(1, 1000000));
  c_plan->add_flag("--fixpoint", plan.fixpoint, "Reduce until nothing changes (ignores --depth)");
  c_plan->add_flag("--json", plan.json, "JSON output");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Run a verification suite and report PASS or FAIL");
  c_ver->add_option("--suite", ver.suite, "Suite to run")
      ->required()
      ->check(CLI::IsMember(
          {"extendability", "equivalence", "elimination", "acting-only", "jumps", "dtrace-soundness"}));
  c_ver->add_option("domain", ver.domain, "Domain file; without it the random corpus is used");
  c_ver->add_option("problem", ver.problem, "Problem file");
  c_ver->add_option("scenario", ver.scenario, "Scenario file (dtrace-soundness)");
  c_ver->add_option("--script", ver.script, "Choice script (acting-only, jumps, dtrace-soundness)");
  c_ver->add_option("--strategy", ver.strategy, "Strategy for a file-based dtrace-soundness run")
      ->check(CLI::IsMember({"default", "random", "exhaustive"}));
  c_ver->add_option("--seed", ver.seed, "Corpus seed");
  c_ver->add_option("--count", ver.count, "Corpus size (default 200, 50 for dtrace-soundness)");
  c_ver->add_option("--depth", ver.depth, "Oracle depth for acting-only")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "htnact: " << e.what() << "\n";
    if (const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front())
      err << "run 'htnact " << (sub == &app ? "" : sub->get_name() + " ") << "--help' for usage\n";
    return kExitInput;
  }

  try {
    if (c_act->parsed()) {
      act.seeded = seed_opt->count() > 0;
      return cmd_act(act, in, out, err);
    }
    if (c_plan->parsed()) return cmd_plan(plan, out, err);
    return cmd_verify(ver, out, err);
  } catch (const InputError& e) {
    err << "htnact: " << e.what() << "\n";
    return kExitInput;
  } catch (const ContractViolation& e) {
    err << "htnact: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace htn
