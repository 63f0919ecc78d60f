#include <fstream>
#include <random>

#include "json.hpp"

#include "support.hpp"

using namespace htn;
using namespace htn::test;

TEST(ParseDomain, Rover) {
  const Parsed<Domain> p = parse_domain(fixture("rover.htn"));
  ASSERT_TRUE(p.ok());
  EXPECT_TRUE(p.warnings.empty());
  EXPECT_EQ(p.value->name, "rover");
  EXPECT_EQ(p.value->methods.size(), 5u);
  const Method& m4 = *p.value->find_method("m4");
  EXPECT_EQ(m4.head, task("navigate", {"L"}));
  EXPECT_TRUE(m4.body.formula.count(Constraint::before(neg("cali"), TaskRef::first(labels({"8", "9"})))));
  EXPECT_TRUE(m4.body.formula.count(Constraint::order(TaskRef::last(labels({"8", "9"})), L("10"))));
  EXPECT_EQ(p.value->operators.at("monitor").pre, (std::vector<Literal>{pos("raw"), neg("lowCharge")}));
}

TEST(ParseDomain, NoDomainDeclared) {
  const auto p = parse_domain("operator a\n");
  ASSERT_FALSE(p.ok());
  EXPECT_EQ(p.diagnostics[0].message, "no domain declared");
}

TEST(ParseDomain, DisjunctionRejected) {
  const auto p = parse_domain(
      "domain d\noperator a\nmethod m t\n  tasks: 1:a, 2:a\n  constraints:\n    ord 1 2 | ord 2 1\n");
  ASSERT_FALSE(p.ok());
  EXPECT_EQ(p.diagnostics[0].line, 6);
  EXPECT_NE(p.diagnostics[0].message.find("disjunctive"), std::string::npos);
}

TEST(ParseDomain, DiagnosticPosition) {
  const auto p = parse_domain("domain d\noperator a\n  pre: p(\n");
  ASSERT_FALSE(p.ok());
  EXPECT_EQ(p.diagnostics[0].line, 3);
  EXPECT_GT(p.diagnostics[0].column, 1);
  EXPECT_EQ(p.diagnostics[0].str("f.htn").rfind("f.htn:3:", 0), 0u);
}

TEST(ParseDomain, TrailingNopWarning) {
  const auto p = parse_domain("domain d\noperator a\nmethod m t\n  tasks: 1:a, 2:a\n");
  ASSERT_TRUE(p.ok());
  ASSERT_EQ(p.warnings.size(), 1u);
  EXPECT_EQ(p.warnings[0].line, 3);
  EXPECT_NE(p.warnings[0].message.find("m.end:nop"), std::string::npos);
  const Method& m = p.value->methods[0];
  EXPECT_EQ(m.body.tasks.at("m.end"), task(kNopSymbol));
  EXPECT_TRUE(validate_domain(*p.value).ok());
}

TEST(RoundTrip, Domain) {
  const Domain D = rover();
  EXPECT_EQ(domain_of(print_domain(D)).methods, D.methods);
  EXPECT_EQ(domain_of(print_domain(D)).operators, D.operators);
}

TEST(RoundTrip, Problem) {
  const Problem p = rover_problem();
  EXPECT_EQ(problem_of(print_problem(p)), p);
  Problem q = p;
  q.network.formula = {Constraint::order(L("A"), L("B"), true)};
  EXPECT_EQ(problem_of(print_problem(q)), q);
}

TEST(RoundTrip, ScenarioAndScript) {
  const Scenario s = must(parse_scenario(fixture("low_charge.evt")));
  EXPECT_EQ(must(parse_scenario(print_scenario(s))), s);
  const auto script = walkthrough_script();
  const auto again = must(parse_script(print_script(script)));
  ASSERT_EQ(again.size(), script.size());
  for (std::size_t i = 0; i < script.size(); ++i) {
    EXPECT_EQ(again[i].kind, script[i].kind);
    EXPECT_EQ(again[i].label, script[i].label);
    EXPECT_EQ(again[i].method, script[i].method);
  }
}

TEST(ParseScenario, UnknownSymbol) {
  const Domain D = rover();
  const auto p = parse_scenario("1: teleport\n", &D);
  ASSERT_FALSE(p.ok());
  EXPECT_NE(p.diagnostics[0].message.find("teleport"), std::string::npos);
  EXPECT_TRUE(parse_scenario("1: teleport\n").ok());
}

TEST(ParseScript, UnknownDirective) {
  const auto p = parse_script("act 8\njump 9\n");
  ASSERT_FALSE(p.ok());
  EXPECT_EQ(p.diagnostics[0].line, 2);
}

TEST(ParseProblem, NonGroundInit) {
  EXPECT_FALSE(parse_problem("problem p\ninit: p(X)\n").ok());
}

TEST(Export, GoldenWalkthrough) {
  const std::string got = export_trace(walkthrough_run().trace);
  std::ifstream f(golden_path("walkthrough.json"), std::ios::binary);
  ASSERT_TRUE(f) << "missing golden file";
  const std::string want((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(got, want);
}

TEST(Export, Deterministic) {
  EXPECT_EQ(export_trace(walkthrough_run().trace), export_trace(walkthrough_run().trace));
}

TEST(Export, InitialOnly) {
  Trace t;
  t.initial = rover_start(rover(), rover_problem());
  const auto j = nlohmann::json::parse(export_trace(t));
  EXPECT_TRUE(j.is_object());
  EXPECT_EQ(j.at("steps").size(), 0u);
}

TEST(Export, Plans) {
  const auto empty = nlohmann::json::parse(export_plans({}));
  EXPECT_TRUE(empty.is_array() && empty.empty());
  const Plan p{{"B", task("monitor")}, {"x", task("move", {"lan1"})}};
  const auto j = nlohmann::json::parse(export_plans({p}));
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0][1]["label"], "x");
  EXPECT_EQ(j[0][1]["task"], "move(lan1)");
}

TEST(Parsers, ArbitraryBytesDoNotCrash) {
  std::mt19937 rng(12345);
  const std::string alphabet = "domain operator method tasks constraints pre: add: del: ord before after between "
                               "not first[ last[ ] ( ) , : ! # \n 0123456789 ABCxyz@|;=";
  for (int i = 0; i < 500; ++i) {
    std::string text;
    const int len = static_cast<int>(rng() % 200);
    for (int k = 0; k < len; ++k) {
      if (rng() % 8 == 0)
        text += static_cast<char>(rng() % 256);
      else
        text += alphabet[rng() % alphabet.size()];
    }
    EXPECT_NO_THROW({
      (void)parse_domain(text);
      (void)parse_problem(text);
      (void)parse_scenario(text);
      (void)parse_script(text);
      (void)parse_task_list(text);
    });
  }
}

TEST(ReadFile, Missing) { EXPECT_THROW(read_file("/nonexistent/file"), std::runtime_error); }
