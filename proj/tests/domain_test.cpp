#include "support.hpp"

using namespace htn;
using namespace htn::test;

namespace {

Domain with_method(std::vector<std::pair<std::string, Task>> tasks, Formula phi) {
  Domain D;
  D.name = "t";
  D.operators["a"] = Operator{task("a"), {}, {}, {}};
  Method m;
  m.name = "m";
  m.head = task("t");
  for (auto& [n, t] : tasks) m.body.tasks.emplace(n, t);
  m.body.formula = std::move(phi);
  D.methods.push_back(m);
  return D;
}

bool mentions(const ValidationReport& r, const std::string& what) {
  for (const auto& i : r.issues)
    if (i.message.find(what) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Validate, RoverIsClean) {
  const auto r = validate_domain(rover());
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.issues.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Validate, OrderingCycle) {
  const Domain D = with_method({{"1", task("a")}, {"2", task("a")}, {"3", task("a")}},
                               {Constraint::order(L("1"), L("2")), Constraint::order(L("2"), L("3")),
                                Constraint::order(L("3"), L("1"))});
  const auto r = validate_domain(D);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "cyclic"));
}

TEST(Validate, SingleTaskBody) {
  const auto r = validate_domain(with_method({{"1", task("a")}}, {}));
  EXPECT_TRUE(mentions(r, "more than one task"));
}

TEST(Validate, MissingTrailingTask) {
  const auto r = validate_domain(with_method({{"1", task("a")}, {"2", task("a")}}, {}));
  EXPECT_TRUE(mentions(r, "ordered after all others without"));
}

TEST(Validate, TrailingTaskWithAfterConstraint) {
  const auto r = validate_domain(with_method(
      {{"1", task("a")}, {"2", task("a")}},
      {Constraint::order(L("1"), L("2")), Constraint::after(L("2"), pos("p"))}));
  EXPECT_TRUE(mentions(r, "ordered after all others without"));
}

TEST(Validate, UnknownLabelAndSymbol) {
  const auto r = validate_domain(with_method({{"1", task("a")}, {"2", task("zzz")}},
                                             {Constraint::order(L("1"), L("9"))}));
  EXPECT_TRUE(mentions(r, "unknown label 9"));
  EXPECT_TRUE(mentions(r, "no operator or method"));
}

TEST(Validate, NegatedOrderingAgainstClosure) {
  const auto r = validate_domain(with_method(
      {{"1", task("a")}, {"2", task("a")}},
      {Constraint::order(L("1"), L("2")), Constraint::order(L("1"), L("2"), true)}));
  EXPECT_TRUE(mentions(r, "contradicts"));
}

TEST(TrailingNops, AppendedWhenMissing) {
  Domain D = with_method({{"1", task("a")}, {"2", task("a")}}, {});
  EXPECT_FALSE(has_trailing_task(D.methods[0].body));
  EXPECT_EQ(append_trailing_nops(D), std::vector<std::string>{"m"});
  EXPECT_TRUE(has_trailing_task(D.methods[0].body));
  EXPECT_TRUE(validate_domain(D).ok());
  EXPECT_TRUE(append_trailing_nops(D).empty());
}

TEST(TrailingNops, RoverUnchanged) {
  Domain D = rover();
  const Domain before = D;
  EXPECT_TRUE(append_trailing_nops(D).empty());
  EXPECT_EQ(D.methods, before.methods);
}

TEST(Domain, NopIsBuiltin) {
  const Domain D;
  EXPECT_TRUE(D.is_primitive(kNopSymbol));
  const GroundOperator op = D.instantiate(task(kNopSymbol));
  EXPECT_TRUE(op.pre.empty() && op.add.empty() && op.del.empty());
}

TEST(Domain, InstantiateBindsParameters) {
  const Domain D = rover();
  const GroundOperator op = D.instantiate(task("move", {"lan1"}));
  ASSERT_EQ(op.pre.size(), 1u);
  EXPECT_EQ(to_string(op.pre[0]), "!lowCharge");
  ASSERT_EQ(op.add.size(), 1u);
  EXPECT_EQ(to_string(op.add[0]), "lowCharge");
}

TEST(FreshRename, IsomorphicCopy) {
  const Domain D = rover();
  const TaskNetwork& d2 = D.find_method("m2")->body;
  NameSupply gen;
  const TaskNetwork r = fresh_rename(d2, gen);
  EXPECT_EQ(r.tasks.size(), d2.tasks.size());
  EXPECT_EQ(r.formula.size(), d2.formula.size());
  for (const auto& n : r.labels()) EXPECT_FALSE(d2.tasks.count(n));
  std::set<std::string> vars;
  collect_variables(r, vars);
  EXPECT_FALSE(vars.count("L"));
  EXPECT_EQ(vars.size(), 2u);
  EXPECT_FALSE(vars.count("X"));
}

TEST(FreshRename, NopOnly) {
  TaskNetwork d;
  d.tasks.emplace("0", task(kNopSymbol));
  NameSupply gen;
  const TaskNetwork r = fresh_rename(d, gen);
  ASSERT_EQ(r.tasks.size(), 1u);
  EXPECT_NE(r.tasks.begin()->first, TaskLabel("0"));
  EXPECT_EQ(r.tasks.begin()->second, task(kNopSymbol));
}

TEST(FreshRename, TwiceIsDisjoint) {
  const Domain D = rover();
  const TaskNetwork& d1 = D.find_method("m1")->body;
  NameSupply gen;
  const LabelSet a = fresh_rename(d1, gen).labels();
  const LabelSet b = fresh_rename(d1, gen).labels();
  for (const auto& n : a) EXPECT_FALSE(b.count(n));
}

TEST(InstantiateMethod, PathDerivedNames) {
  const Domain D = rover();
  const auto body = instantiate_method(*D.find_method("m2"), task("transmitData", {"loc1"}), "A");
  ASSERT_TRUE(body);
  EXPECT_EQ(body->labels(), labels({"6@A", "7@A"}));
  EXPECT_EQ(body->tasks.at("6@A"), task("navigate", {"L@A.m2"}));
  EXPECT_EQ(body->tasks.at("7@A"), task("uploadData", {"loc1"}));
  EXPECT_FALSE(instantiate_method(*D.find_method("m2"), task("navigate", {"lan1"}), "A"));
}

TEST(DomainConstants, Collected) {
  const auto c = domain_constants(rover());
  EXPECT_TRUE(c.empty() || !c.count("L"));
}
