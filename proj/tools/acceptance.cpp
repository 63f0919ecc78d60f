#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "htnact/cli.hpp"
#include "htnact/verify.hpp"

using namespace htn;

namespace {

const std::string kFixtures = HTNACT_FIXTURES;

template <class T>
T must(Parsed<T> p, const std::string& what) {
  if (!p.ok()) {
    std::string msg = what + ":";
    for (const auto& d : p.diagnostics) msg += " " + d.str();
    throw std::runtime_error(msg);
  }
  return std::move(*p.value);
}

Domain domain(const std::string& f) { return must(parse_domain(read_file(kFixtures + "/" + f)), f); }
Problem problem(const std::string& f) { return must(parse_problem(read_file(kFixtures + "/" + f)), f); }
std::vector<Directive> script(const std::string& f) { return must(parse_script(read_file(kFixtures + "/" + f)), f); }
Scenario scenario(const std::string& f, const Domain& D) {
  return must(parse_scenario(read_file(kFixtures + "/" + f), &D), f);
}

std::string labels(const Trace& t) {
  std::string s;
  for (const auto& n : action_labels(t)) s += (s.empty() ? "" : "·") + n.base();
  return s;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict from(const SuiteReport& r, double limit) {
  Verdict v;
  v.pass = r.pass && r.seconds < limit;
  v.detail = std::to_string(r.cases) + " cases";
  if (r.skipped) v.detail += ", " + std::to_string(r.skipped) + " skipped";
  for (const auto& w : r.witnesses) v.detail += "; " + w;
  if (!r.failures.empty()) v.detail += "; first failure: " + r.failures.front();
  if (r.seconds >= limit) v.detail += "; over the time limit";
  return v;
}

std::vector<Directive> without_nop(std::vector<Directive> s) {
  std::erase_if(s, [](const Directive& d) { return d.label == kNopLabel; });
  return s;
}

Verdict walkthrough() {
  const auto t0 = std::chrono::steady_clock::now();
  const Domain D = domain("rover.htn");
  const Problem p = problem("rover.prob");
  const Configuration cfg = initial_configuration(p.network, p.init, std::make_shared<const Domain>(D));
  ScriptedStrategy strat(without_nop(script("walkthrough.chs")));
  const RunResult rr = run(cfg, strat);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::string got;
  for (const auto& s : rr.trace.steps) got += (got.empty() ? "" : "; ") + describe(s.step);
  const std::string want =
      "reduce A m2; reduce 6@A m5; replace 6@A m4 complete; act 8@6@A; act 9@6@A; act B; "
      "replace A m1 partial; act 1@A; reduce 2@A m3; act 4@2@A; act 5@2@A; act 3@A";
  const std::string golden = read_file(std::string(HTNACT_GOLDEN) + "/walkthrough.json");
  const bool exact = got == want;
  const bool same_export = export_trace(rr.trace) == golden;
  Verdict v;
  v.pass = rr.outcome == RunOutcome::successful && exact && same_export && labels(rr.trace) == "8·9·B·1·4·5·3" &&
           secs < 1.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", secs);
  v.detail = labels(rr.trace) + " in " + buf + (exact ? "" : "; steps were: " + got) +
             (same_export ? "; golden export matches" : "; export differs from golden");
  return v;
}

Verdict acting_only() {
  const Domain D = domain("rover.htn");
  const Problem p = problem("rover.prob");
  const auto s = script("walkthrough.chs");
  Verdict v{true, ""};
  double total = 0;
  for (std::size_t depth : {3, 4, 5, 6}) {
    const SuiteReport r = verify_acting_only(D, p, s, depth);
    total += r.seconds;
    v.pass = v.pass && r.pass;
    v.detail += (v.detail.empty() ? "" : "; ") + std::string("depth ") + std::to_string(depth) + ": " +
                std::to_string(r.cases) + " solution(s)" + (r.failures.empty() ? "" : " " + r.failures.front());
  }
  v.pass = v.pass && total < 30;
  return v;
}

Verdict jumps() {
  return from(verify_jumps(domain("rover_variant.htn"), problem("rover.prob"), script("variant.chs")), 60);
}

Verdict dtrace() {
  Verdict v = from(verify_dtrace_soundness(7, 60), 300);
  // the walkthrough and the low-charge scenario, driven by the agent loop
  const auto D = std::make_shared<const Domain>(domain("rover.htn"));
  const Problem st = problem("rover_state.prob");
  for (const char* evt : {"walkthrough.evt", "low_charge.evt"}) {
    ScheduledEvents events = to_events(scenario(evt, *D));
    ScriptedStrategy scripted(script("walkthrough.chs"));
    DefaultStrategy plain;
    Strategy& strat = std::string(evt) == "walkthrough.evt" ? static_cast<Strategy&>(scripted) : plain;
    const AgentResult res = run_agent(st.init, D, events, strat);
    if (auto bad = check_dtrace(res.state)) {
      v.pass = false;
      v.detail += std::string("; ") + evt + ": " + *bad;
    } else {
      v.detail += std::string("; ") + evt + " " + to_string(res.outcome) + " " + labels(res.state.dtrace);
    }
  }
  return v;
}

Verdict determinism() {
  Verdict v{true, ""};
  auto twice = [&](const std::string& name, const std::function<std::string()>& f) {
    const std::string a = f(), b = f();
    if (a != b || a.empty()) v.pass = false;
    v.detail += (v.detail.empty() ? "" : "; ") + name + (a == b ? " identical (" + std::to_string(a.size()) + " bytes)" : " differs");
  };
  const std::string dir = kFixtures + "/";
  for (const std::string seed : {"1", "42"}) {
    twice("act --seed " + seed, [&] {
      std::istringstream in;
      std::ostringstream out, err;
      run_cli({"act", dir + "rover.htn", dir + "rover_state.prob", dir + "low_charge.evt", "--seed", seed}, in, out,
              err);
      return out.str();
    });
  }
  twice("random corpus", [&] {
    std::string all;
    for (std::uint64_t s = 100; s < 110; ++s) {
      auto p = generate_problem(s);
      if (!p) continue;
      ScheduledEvents events(random_schedule(*p, s));
      RandomStrategy strat(s);
      const AgentResult res = run_agent(p->init, std::make_shared<const Domain>(p->domain), events, strat);
      all += export_trace(res.state.dtrace);
    }
    return all;
  });
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> all = {
      {1, "walkthrough reproduction", walkthrough},
      {2, "acting-only solution", acting_only},
      {3, "equivalence", [] { return from(verify_equivalence(2024, 200), 600); }},
      {4, "extendability", [] { return from(verify_extendability(2024, 200), 120); }},
      {5, "complete-replacement elimination", [] { return from(verify_elimination(2024, 200), 300); }},
      {6, "unavoidable jump", jumps},
      {7, "d-trace soundness", dtrace},
      {8, "determinism", determinism},
  };
  bool ok = true;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", secs);
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " [" << buf << "]: " << v.detail
              << std::endl;
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}
