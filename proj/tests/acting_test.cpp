#include "support.hpp"

using namespace htn;
using namespace htn::test;

namespace {

const Domain& D() {
  static const Domain d = rover();
  return d;
}

TaskNetwork body(const char* method, const Task& t, const char* at) {
  for (auto& a : relevant_method_bodies(t, at, D()))
    if (a.method == method) return a.body;
  throw std::runtime_error("no body");
}

Universe U() { return *make_universe(D(), {}, {}); }

}  // namespace

TEST(PrimaryTasks, SequentialBody) {
  EXPECT_EQ(primary_tasks(D().find_method("m1")->body, D()), labels({"1"}));
}

TEST(PrimaryTasks, FirstSetBody) {
  EXPECT_EQ(primary_tasks(D().find_method("m4")->body, D()), labels({"8", "9"}));
}

TEST(PrimaryTasks, Unordered) {
  TaskNetwork d;
  d.tasks = {{"a", task("charge")}, {"b", task("monitor")}, {"c", task("calibrate")}};
  d.formula = {Constraint::order(L("a"), L("c"))};
  EXPECT_EQ(primary_tasks(d, D()), labels({"a", "b"}));
}

TEST(PrimaryTasks, NegatedOrderingPutsRightSideFirst) {
  TaskNetwork d;
  d.tasks = {{"a", task("charge")}, {"b", task("monitor")}};
  d.formula = {Constraint::order(L("a"), L("b"), true)};
  EXPECT_EQ(primary_tasks(d, D()), labels({"b"}));
}

TEST(Relevant, FirstMemberSeesBefore) {
  const TaskNetwork& d5 = D().find_method("m5")->body;
  const Formula rel = relevant_constraints("11", d5);
  EXPECT_TRUE(rel.count(Constraint::before(pos("cali"), L("11"))));
  EXPECT_TRUE(rel.count(Constraint::before(neg("lowCharge"), L("11"))));
  EXPECT_EQ(extracted_literals("11", d5), (std::set<Literal>{pos("cali"), neg("lowCharge")}));
  EXPECT_TRUE(extracted_literals("12", d5).empty());
}

TEST(Applicability, DependsOnCali) {
  const TaskNetwork& d5 = D().find_method("m5")->body;
  const Universe u = U();
  EXPECT_FALSE(is_applicable("11", d5, {}, D(), u));
  EXPECT_TRUE(is_applicable("11", d5, {atom("cali")}, D(), u));
  EXPECT_FALSE(is_applicable("11", d5, {atom("cali"), atom("lowCharge")}, D(), u));
}

TEST(Applicability, FormulaCombinesPreconditionAndExtracted) {
  TaskNetwork d;
  d.tasks = {{"x", task("move", {"lan1"})}};
  d.formula = {Constraint::before(pos("cali"), L("x"))};
  const auto phi = applicability_formula("x", d, D());
  EXPECT_EQ(std::set<Literal>(phi.begin(), phi.end()), (std::set<Literal>{neg("lowCharge"), pos("cali")}));
}

TEST(Applicability, Nop) {
  TaskNetwork d;
  d.tasks = {{"0", task(kNopSymbol)}};
  EXPECT_TRUE(is_applicable("0", d, {}, D(), U()));
}

TEST(Applicability, VariableIsGrounded) {
  TaskNetwork d = body("m2", task("transmitData", {"loc1"}), "A");
  State I{atom("didExp", {"loc1"}), atom("lander", {"lan1"})};
  const TaskNetwork d6 = reduce(d, "6@A", body("m4", d.tasks.at("6@A"), "6@A"), D());
  const Universe u = *make_universe(D(), I, d6);
  const auto theta = is_applicable("8@6@A", d6, I, D(), u);
  ASSERT_TRUE(theta);
  EXPECT_EQ(theta->at("L@A.m2"), Term::constant("lan1"));
}

TEST(Realised, Constraints) {
  const TaskNetwork& d1 = D().find_method("m1")->body;
  const Formula fin = realised_constraints("1", d1);
  EXPECT_TRUE(fin.count(Constraint::before(pos("lowCharge"), L("1"))));
  EXPECT_TRUE(fin.count(Constraint::order(L("1"), L("2"))));
  EXPECT_FALSE(fin.count(Constraint::between(L("1"), pos("connEst"), L("3"))));
}

TEST(ActionResult, RemovesTaskAndAppliesEffects) {
  const TaskNetwork& d4 = D().find_method("m4")->body;
  CoupleSet R{{TaskLabel(), Couple{TaskLabel(), d4.labels(), {}}}};
  const ActionResult r = action_result("8", {}, d4, {}, R, D());
  EXPECT_EQ(r.network.labels(), labels({"9", "10"}));
  EXPECT_EQ(r.state, State{atom("cali")});
  EXPECT_EQ(r.couples, R);
  EXPECT_TRUE(r.network.formula.count(Constraint::order(TaskRef::last(labels({"9"})), L("10"))));
  for (const auto& c : r.network.formula) EXPECT_FALSE(c.mentions("8"));
}

TEST(Blocked, NoRelevantMethod) {
  Domain d2 = D();
  d2.methods.clear();
  TaskNetwork d;
  d.tasks = {{"A", task("transmitData", {"loc1"})}};
  EXPECT_TRUE(is_blocked({"A"}, d, {}, d2, U()));
  EXPECT_FALSE(is_blocked({"A"}, d, {}, D(), U()));
}

TEST(Blocked, InapplicableAction) {
  TaskNetwork d;
  d.tasks = {{"x", task("move", {"lan1"})}};
  EXPECT_TRUE(is_blocked({"x"}, d, {atom("lowCharge")}, D(), U()));
  EXPECT_FALSE(is_blocked({"x"}, d, {}, D(), U()));
}

TEST(Replace, SwapsPursuedTasks) {
  TaskNetwork d;
  d.tasks = {{"9@6", task("moveCams")}, {"10@6", task("move", {"lan1"})}, {"B", task("monitor")}};
  d.formula = {Constraint::order(TaskRef::last(labels({"9@6"})), L("10@6")),
               Constraint::order(TaskRef::last(labels({"9@6", "10@6"})), L("B")),
               Constraint::before(pos("cali"), TaskRef::first(labels({"10@6"})))};
  TaskNetwork nd;
  nd.tasks = {{"11@6", task("moveCams")}, {"12@6", task("move", {"lan1"})}};
  nd.formula = {Constraint::order(L("11@6"), L("12@6"))};
  const TaskNetwork r = replace(labels({"9@6", "10@6"}), nd, d);
  EXPECT_EQ(r.labels(), labels({"11@6", "12@6", "B"}));
  EXPECT_TRUE(r.formula.count(Constraint::order(L("11@6"), L("12@6"))));
  EXPECT_TRUE(r.formula.count(Constraint::order(TaskRef::last(labels({"11@6", "12@6"})), L("B"))));
  for (const auto& c : r.formula) {
    EXPECT_FALSE(c.mentions("9@6"));
    EXPECT_FALSE(c.mentions("10@6"));
  }
}

TEST(Couples, UpdateAndSmallest) {
  const Trace t = walkthrough_run().trace;
  const CoupleSet& R = t.before(2).couples;  // after reducing A with m2 and 6@A with m5
  EXPECT_EQ(smallest_replaceable(R), labels({"6@A"}));
  const CoupleSet up = update_couples(R.at("6@A").pursued, "6@A", "m4", R);
  EXPECT_EQ(up, t.before(3).couples);
  EXPECT_TRUE(up.at("6@A").alternatives.empty());
  EXPECT_EQ(up.at("6@A").pursued, labels({"8@6@A", "9@6@A", "10@6@A"}));
  EXPECT_EQ(smallest_replaceable(up), labels({"A"}));
  EXPECT_THROW(update_couples({}, "6@A", "m5", up), ContractViolation);
}

TEST(Couples, SmallestIgnoresExhausted) {
  CoupleSet R;
  R[TaskLabel()] = Couple{TaskLabel(), labels({"x"}), {}};
  R["A"] = Couple{"A", labels({"x"}), {}};
  EXPECT_TRUE(smallest_replaceable(R).empty());
  R["B"] = Couple{"B", labels({"x"}), {Alternative{"m", {}}}};
  EXPECT_EQ(smallest_replaceable(R), labels({"B"}));
}

TEST(Exec, InitialSuccessorsInOrder) {
  const Configuration c = rover_start(D(), rover_problem());
  const auto next = exec_all(c);
  ASSERT_FALSE(next.empty());
  EXPECT_EQ(next[0].step.kind, Step::Kind::action);
  EXPECT_EQ(next[0].step.label, TaskLabel("B"));
  std::vector<std::string> reductions;
  for (const auto& s : next)
    if (s.step.kind == Step::Kind::reduction) reductions.push_back(s.step.method);
  EXPECT_EQ(reductions, (std::vector<std::string>{"m1", "m2"}));
  EXPECT_TRUE(exec_via_replacement(c).empty());
}

TEST(Exec, ReduceThenReplace) {
  const Configuration c0 = rover_start(D(), rover_problem());
  const auto c1 = reduce_step(c0, "A", "m2");
  ASSERT_TRUE(c1);
  EXPECT_EQ(c1->config.network.labels(), labels({"6@A", "7@A", "B"}));
  EXPECT_EQ(c1->config.couples.at("A").alternatives.size(), 1u);
  const auto c2 = reduce_step(c1->config, "6@A", "m5");
  ASSERT_TRUE(c2);
  EXPECT_FALSE(action_step(c2->config, "11@6@A"));

  const auto reps = exec_via_replacement(c2->config);
  ASSERT_FALSE(reps.empty());
  const auto r = replace_step(c2->config, "6@A", "m4");
  ASSERT_TRUE(r);
  EXPECT_TRUE(r->step.complete);
  EXPECT_FALSE(r->step.jump);
  EXPECT_EQ(r->config.network.labels(), labels({"8@6@A", "9@6@A", "10@6@A", "7@A", "B"}));
  EXPECT_FALSE(r->config.couples.at("6@A").alternatives.size());
}

TEST(Exec, ApplyStepRoundTrip) {
  const Configuration c0 = rover_start(D(), rover_problem());
  for (const auto& s : exec_all(c0)) {
    const Successor again = apply_step(c0, s.step);
    EXPECT_TRUE(again.config.same_as(s.config)) << describe(s.step);
  }
  Step bogus;
  bogus.kind = Step::Kind::action;
  bogus.label = "7@A";
  EXPECT_THROW(apply_step(c0, bogus), IllegalStep);
}

TEST(Exec, AllGroundings) {
  TaskNetwork d;
  d.tasks = {{"x", task("extData", {"X"})}};
  State I{atom("didExp", {"loc1"}), atom("lander", {"lan1"})};
  const Configuration c = initial_configuration(d, I, share(D()));
  EXPECT_EQ(exec_via_action(c).size(), 1u);
  EXPECT_EQ(exec_via_action(c, {.all_groundings = true}).size(), c.universe->size());
}
