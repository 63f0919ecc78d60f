#include "support.hpp"

using namespace htn;
using namespace htn::test;

TEST(Generate, ValidatesAndIsDeterministic) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto p = generate_problem(seed);
    ASSERT_TRUE(p) << seed;
    EXPECT_TRUE(validate_domain(p->domain).ok()) << seed;
    EXPECT_FALSE(p->network.tasks.empty());
    const auto q = generate_problem(seed);
    EXPECT_EQ(print_domain(p->domain), print_domain(q->domain));
    EXPECT_EQ(p->init, q->init);
    EXPECT_EQ(p->network, q->network);
  }
}

TEST(Generate, EventTasks) {
  CorpusBounds b;
  b.event_tasks = true;
  const auto p = generate_problem(5, b);
  ASSERT_TRUE(p);
  for (const auto& t : p->event_tasks) EXPECT_FALSE(stipulation_violation(t, p->domain)) << to_string(t);
  EXPECT_EQ(random_schedule(*p, 9), random_schedule(*p, 9));
}

TEST(Suites, SmallCorpus) {
  EXPECT_TRUE(verify_equivalence(11, 10).pass);
  EXPECT_TRUE(verify_extendability(11, 10).pass);
  EXPECT_TRUE(verify_elimination(11, 10, 4).pass);
  EXPECT_TRUE(verify_dtrace_soundness(11, 5).pass);
}

TEST(Suites, RoverFiles) {
  RandomProblem rp;
  rp.domain = rover();
  const Problem p = rover_problem();
  rp.init = p.init;
  rp.network = p.network;
  const SuiteReport eq = verify_equivalence({rp});
  EXPECT_TRUE(eq.pass) << (eq.failures.empty() ? "" : eq.failures[0]);
  EXPECT_TRUE(verify_extendability({rp}).pass);
  EXPECT_TRUE(verify_elimination({rp}, 4).pass);
}

TEST(Suites, SummaryFormat) {
  SuiteReport r;
  r.name = "x";
  r.pass = true;
  r.cases = 3;
  r.skipped = 1;
  EXPECT_EQ(r.summary().rfind("PASS x: 3 cases (1 skipped) in ", 0), 0u);
}

TEST(Explore, RoverFindsWalkthroughActions) {
  const ExploreResult no_partial = explore_traces(rover_start(rover(), rover_problem()));
  EXPECT_FALSE(no_partial.successful.count(actions_performed(walkthrough_run().trace)));
  const ExploreResult e = explore_traces(rover_start(rover(), rover_problem()), {.partial_replacements = true});
  EXPECT_FALSE(e.truncated);
  EXPECT_TRUE(e.extendability_violations.empty());
  EXPECT_TRUE(e.successful.count(actions_performed(walkthrough_run().trace)));
}

TEST(ActingOnly, Rover) {
  const SuiteReport r = verify_acting_only(rover(), rover_problem(), walkthrough_script(), 3);
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures[0]);
}

TEST(Jumps, Variant) {
  const Domain D = domain_of(fixture("rover_variant.htn"));
  const auto script = must(parse_script(fixture("variant.chs")));
  const SuiteReport r = verify_jumps(D, rover_problem(), script);
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures[0]);
}

TEST(Jumps, SearchOnRoverHasJumpFreeTrace) {
  const Configuration c = rover_start(rover(), rover_problem());
  const JumpSearch s = search_jump_free(c, actions_performed(walkthrough_run().trace));
  EXPECT_TRUE(s.target_reachable);
  EXPECT_TRUE(s.jump_free_exists);
  EXPECT_FALSE(s.witness.empty());
}

TEST(Jumps, UnreachableTarget) {
  const Configuration c = rover_start(rover(), rover_problem());
  const JumpSearch s = search_jump_free(c, {task("charge")});
  EXPECT_FALSE(s.target_reachable);
}
