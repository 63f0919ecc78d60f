#include "support.hpp"

using namespace htn;
using namespace htn::test;

TEST(RelevantMethods, TransmitData) {
  const auto rel = relevant_method_bodies(task("transmitData", {"loc1"}), "A", rover());
  ASSERT_EQ(rel.size(), 2u);
  EXPECT_EQ(rel[0].method, "m1");
  EXPECT_EQ(rel[1].method, "m2");
  EXPECT_EQ(rel[0].body.tasks.at("2@A"), task("sendData", {"loc1"}));
  EXPECT_EQ(rel[1].body.tasks.at("7@A"), task("uploadData", {"loc1"}));
}

TEST(RelevantMethods, Navigate) {
  const auto rel = relevant_method_bodies(task("navigate", {"lan1"}), "6", rover());
  ASSERT_EQ(rel.size(), 2u);
  EXPECT_EQ(rel[0].method, "m4");
  EXPECT_EQ(rel[1].method, "m5");
  EXPECT_EQ(rel[0].body.tasks.at("10@6"), task("move", {"lan1"}));
  EXPECT_EQ(rel[1].body.tasks.at("12@6"), task("move", {"lan1"}));
}

TEST(RelevantMethods, PrimitiveIsContractViolation) {
  EXPECT_THROW(relevant_method_bodies(task("calibrate"), "8", rover()), ContractViolation);
}

TEST(Reduce, PaperExample) {
  const Domain D = rover();
  TaskNetwork d;
  d.tasks.emplace("A", task("transmitData", {"loc1"}));
  d.tasks.emplace("B", task("monitor"));
  d.formula.insert(Constraint::order(L("A"), L("B")));
  const auto rel = relevant_method_bodies(d.tasks.at("A"), "A", D);
  const TaskNetwork r = reduce(d, "A", rel[1].body, D);

  EXPECT_EQ(r.labels(), labels({"6@A", "7@A", "B"}));
  EXPECT_EQ(r.tasks.at("7@A"), task("uploadData", {"loc1"}));
  const Formula want{
      Constraint::before(pos("lander", {"L@A.m2"}), L("6@A")),
      Constraint::before(pos("didExp", {"loc1"}), L("6@A")),
      Constraint::order(L("6@A"), L("7@A")),
      Constraint::order(TaskRef::last(labels({"6@A", "7@A"})), L("B")),
  };
  EXPECT_EQ(r.formula, want);
}

TEST(Reduce, BeforeOnReducedTaskTargetsFirst) {
  const Domain D = rover();
  TaskNetwork d;
  d.tasks.emplace("6", task("navigate", {"lan1"}));
  d.tasks.emplace("7", task("uploadData", {"loc1"}));
  d.formula = {Constraint::before(pos("lander", {"lan1"}), L("6")), Constraint::order(L("6"), L("7"))};
  const auto rel = relevant_method_bodies(d.tasks.at("6"), "6", D);
  const TaskNetwork r = reduce(d, "6", rel[1].body, D);
  EXPECT_TRUE(r.formula.count(Constraint::before(pos("lander", {"lan1"}), TaskRef::first(labels({"11@6", "12@6"})))));
  EXPECT_TRUE(r.formula.count(Constraint::order(TaskRef::last(labels({"11@6", "12@6"})), L("7"))));
  EXPECT_EQ(r.tasks.size(), d.tasks.size() - 1 + rel[1].body.tasks.size());
}

TEST(Reduce, UnmentionedTaskKeepsFormula) {
  const Domain D = rover();
  TaskNetwork d;
  d.tasks.emplace("A", task("transmitData", {"loc1"}));
  d.tasks.emplace("B", task("monitor"));
  d.tasks.emplace("C", task("charge"));
  d.formula = {Constraint::order(L("B"), L("C"))};
  const auto body = relevant_method_bodies(d.tasks.at("A"), "A", D)[0].body;
  const TaskNetwork r = reduce(d, "A", body, D);
  Formula want = d.formula;
  want.insert(body.formula.begin(), body.formula.end());
  EXPECT_EQ(r.formula, want);
}

TEST(Reduce, AfterAndBetweenRetargeted) {
  const Domain D = rover();
  TaskNetwork d;
  d.tasks.emplace("A", task("transmitData", {"loc1"}));
  d.tasks.emplace("B", task("monitor"));
  d.formula = {Constraint::after(L("A"), pos("p")), Constraint::between(L("B"), pos("q"), L("A")),
               Constraint::order(L("B"), L("A"), true)};
  const auto body = relevant_method_bodies(d.tasks.at("A"), "A", D)[1].body;
  const TaskNetwork r = reduce(d, "A", body, D);
  const TaskRef first = TaskRef::first(labels({"6@A", "7@A"}));
  const TaskRef last = TaskRef::last(labels({"6@A", "7@A"}));
  EXPECT_TRUE(r.formula.count(Constraint::after(last, pos("p"))));
  EXPECT_TRUE(r.formula.count(Constraint::between(L("B"), pos("q"), first)));
  EXPECT_TRUE(r.formula.count(Constraint::order(L("B"), first, true)));
}

TEST(Reduce, Errors) {
  const Domain D = rover();
  TaskNetwork d;
  d.tasks.emplace("B", task("monitor"));
  EXPECT_THROW(reduce(d, "A", {}, D), ContractViolation);
  EXPECT_THROW(reduce(d, "B", {}, D), ContractViolation);
}
