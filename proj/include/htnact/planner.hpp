#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "htnact/acting.hpp"

namespace htn {

/// A ground, totally ordered primitive plan. Labels are kept so callers can
/// ask which network tasks a plan came from.
using Plan = std::vector<LabelledTask>;

std::vector<Task> plan_tasks(const Plan& p);
std::string to_string(const Plan& p);

/// comp(d, I, D): every ground total ordering of d that is executable from I
/// and satisfies d's formula. Empty when d has a non-primitive task.
std::set<Plan> completions(const TaskNetwork& d, const State& I, const Domain& D, const Universe& U);

struct OracleStats {
  std::size_t networks = 0;
  std::size_t primitive_networks = 0;
  bool saturated = false;  // the last layer added no new network
};

/// sol_depth(d, I, D): completions of every network reachable with at most
/// depth - 1 reductions (sol_1 = comp).
std::set<Plan> solutions_bounded(const TaskNetwork& d, const State& I, const Domain& D,
                                 const Universe& U, std::size_t depth, OracleStats* stats = nullptr);

/// Runs the reduction frontier until it stops growing. Only terminates for
/// domains without recursion.
std::set<Plan> solutions_fixpoint(const TaskNetwork& d, const State& I, const Domain& D,
                                  const Universe& U, OracleStats* stats = nullptr);

}  // namespace htn
