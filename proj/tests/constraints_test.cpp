#include "support.hpp"

using namespace htn;
using namespace htn::test;

TEST(TransitiveClosure, AddsChain) {
  const Formula phi{Constraint::order(L("1"), L("2")), Constraint::order(L("2"), L("3"))};
  const Formula c = transitive_closure(phi);
  EXPECT_TRUE(c.count(Constraint::order(L("1"), L("3"))));
  EXPECT_EQ(c.size(), 3u);
  EXPECT_EQ(transitive_closure(c), c);
}

TEST(TransitiveClosure, Empty) { EXPECT_TRUE(transitive_closure({}).empty()); }

TEST(TransitiveClosure, NoChain) {
  const Formula phi{Constraint::order(L("a"), L("b"))};
  EXPECT_EQ(transitive_closure(phi), phi);
}

TEST(TransitiveClosure, OnlyAddsOrderings) {
  const Formula phi{Constraint::order(L("a"), L("b")), Constraint::order(L("b"), L("c")),
                    Constraint::before(pos("p"), L("a")), Constraint::order(L("c"), L("a"), true)};
  const Formula c = transitive_closure(phi);
  for (const auto& k : c)
    if (!phi.count(k)) {
      EXPECT_EQ(k.kind, Constraint::Kind::order);
    }
  for (const auto& k : phi) EXPECT_TRUE(c.count(k));
}

TEST(RewriteLabels, ExpandsFirstSet) {
  // 11 and 12 replaced by the body {8, 9, 10}
  Formula phi{Constraint::before(pos("lander", {"L"}), TaskRef::first(labels({"11", "12"})))};
  phi = rewrite_labels(phi, "11", labels({"8", "9", "10"}));
  phi = rewrite_labels(phi, "12", labels({"8", "9", "10"}));
  EXPECT_EQ(phi, Formula{Constraint::before(pos("lander", {"L"}), TaskRef::first(labels({"8", "9", "10"})))});
}

TEST(RewriteLabels, Unmentioned) {
  const Formula phi{Constraint::order(L("a"), L("b"))};
  EXPECT_EQ(rewrite_labels(phi, "z", labels({"x"})), phi);
}

TEST(RewriteLabels, DropFromLast) {
  const Formula phi{Constraint::order(TaskRef::last(labels({"11", "12"})), L("7"))};
  EXPECT_EQ(rewrite_labels(phi, "11", {}), Formula{Constraint::order(TaskRef::last(labels({"12"})), L("7"))});
}

TEST(RewriteLabels, PlainLabelsUntouched) {
  const Formula phi{Constraint::order(L("11"), L("7"))};
  EXPECT_EQ(rewrite_labels(phi, "11", labels({"8"})), phi);
}

TEST(Holds, ClosedWorld) {
  const State I{atom("raw"), atom("cali"), atom("didExp", {"loc1"}), atom("lander", {"lan1"})};
  EXPECT_TRUE(holds(pos("cali"), I));
  EXPECT_TRUE(holds(neg("lowCharge"), I));
  EXPECT_TRUE(holds(pos("didExp", {"loc1"}), I));
  EXPECT_FALSE(holds(pos("didExp", {"loc2"}), I));
}

TEST(Holds, Equality) {
  EXPECT_TRUE(holds(pos("=", {"a", "a"}), {}));
  EXPECT_FALSE(holds(pos("=", {"a", "b"}), {}));
  EXPECT_TRUE(holds(neg("=", {"a", "b"}), {}));
}

TEST(Holds, NonGroundIsContractViolation) { EXPECT_THROW(holds(pos("p", {"X"}), {}), ContractViolation); }

TEST(Formula, SetSemantics) {
  Formula a{Constraint::order(L("a"), L("b")), Constraint::before(pos("p"), L("a"))};
  Formula b{Constraint::before(pos("p"), L("a")), Constraint::order(L("a"), L("b")), Constraint::order(L("a"), L("b"))};
  EXPECT_EQ(a, b);
}

TEST(Render, Constraints) {
  EXPECT_EQ(to_string(Constraint::order(TaskRef::last(labels({"8", "9"})), L("10"))), "ord last[8,9] 10");
  EXPECT_EQ(to_string(Constraint::before(neg("cali"), TaskRef::first(labels({"8", "9"})))), "before !cali first[8,9]");
  EXPECT_EQ(to_string(Constraint::between(L("1"), pos("connEst"), L("3"))), "between 1 connEst 3");
  EXPECT_EQ(to_string(Constraint::order(L("2"), L("3"), true)), "not ord 2 3");
}
