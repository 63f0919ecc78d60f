#pragma once

#include <string>
#include <vector>

#include "htnact/domain.hpp"

namespace htn {

/// A relevant method-body, remembered with the method it came from.
struct Alternative {
  std::string method;
  TaskNetwork body;

  auto operator<=>(const Alternative&) const = default;
  bool operator==(const Alternative&) const = default;
};

/// rel(t, D) for the task labelled n, in method declaration order. Bodies are
/// renamed per instantiate_method.
std::vector<Alternative> relevant_method_bodies(const Task& t, const TaskLabel& n, const Domain& D);

/// red(d, n, body): n is replaced by body's tasks and every reference to n in
/// d's formula is retargeted to first[]/last[] over the body's labels.
TaskNetwork reduce(const TaskNetwork& d, const TaskLabel& n, const TaskNetwork& body,
                   const Domain& D);

}  // namespace htn
