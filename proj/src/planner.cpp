#include "htnact/planner.hpp"

#include <algorithm>
#include <functional>

namespace htn {

std::vector<Task> plan_tasks(const Plan& p) {
  std::vector<Task> out;
  out.reserve(p.size());
  for (const auto& lt : p) out.push_back(lt.task);
  return out;
}

std::string to_string(const Plan& p) {
  std::string s;
  for (const auto& lt : p) {
    if (!s.empty()) s += " ";
    s += to_string(lt);
  }
  return s;
}

namespace {

struct Indexed {
  Constraint c;
  std::vector<int> from;
  std::vector<int> to;
};

/// Depth-first construction of orderings with incremental constraint checks.
/// Every check fires at the first position where its outcome is decided.
class Orderer {
 public:
  Orderer(const TaskNetwork& d, const State& I, const Domain& D) : I_(I) {
    for (const auto& [n, t] : d.tasks) {
      labels_.push_back({n, t});
      ops_.push_back(D.instantiate(t));
    }
    auto index = [&](const TaskRef& r) {
      std::vector<int> out;
      for (const auto& n : r.labels) {
        auto it = d.tasks.find(n);
        if (it == d.tasks.end()) continue;
        out.push_back(static_cast<int>(std::distance(d.tasks.begin(), it)));
      }
      return out;
    };
    for (const auto& c : d.formula) {
      Indexed x{c, {}, {}};
      if (c.has_from()) x.from = index(c.from);
      if (c.has_to()) x.to = index(c.to);
      cons_.push_back(std::move(x));
    }
    const std::size_t k = labels_.size();
    pos_.assign(k, -1);
    from_left_.resize(cons_.size());
    to_placed_.assign(cons_.size(), 0);
    for (std::size_t c = 0; c < cons_.size(); ++c) from_left_[c] = static_cast<int>(cons_[c].from.size());
    as_from_.resize(k);
    as_to_.resize(k);
    for (std::size_t c = 0; c < cons_.size(); ++c) {
      for (int i : cons_[c].from) as_from_[i].push_back(c);
      for (int i : cons_[c].to) as_to_[i].push_back(c);
    }
  }

  std::set<Plan> run() {
    states_.assign(1, I_);
    dfs();
    return std::move(out_);
  }

 private:
  void dfs() {
    const std::size_t p = plan_.size();
    if (p == labels_.size()) {
      if (final_checks()) out_.insert(plan_);
      return;
    }
    const State s = states_.back();
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (pos_[i] >= 0) continue;
      if (!admissible(i, s)) continue;

      State next = s;
      for (const auto& a : ops_[i].del) next.erase(a);
      for (const auto& a : ops_[i].add) next.insert(a);

      place(i, static_cast<int>(p));
      if (closing_checks(i, next)) {
        states_.push_back(std::move(next));
        plan_.push_back(labels_[i]);
        dfs();
        plan_.pop_back();
        states_.pop_back();
      }
      unplace(i);
    }
  }

  bool admissible(std::size_t i, const State& s) const {
    for (const auto& l : ops_[i].pre)
      if (!holds(l, s)) return false;
    for (std::size_t c : as_to_[i]) {
      const Constraint& k = cons_[c].c;
      if (k.kind == Constraint::Kind::order && !k.negated && from_left_[c] > 0) return false;
      if (k.kind == Constraint::Kind::before && to_placed_[c] == 0) {
        const bool ok = holds(k.literal, s);
        if (ok == k.negated) return false;
      }
    }
    for (std::size_t c : as_from_[i]) {
      const Constraint& k = cons_[c].c;
      if (k.kind == Constraint::Kind::order && k.negated && from_left_[c] == 1 && to_placed_[c] == 0)
        return false;
    }
    return true;
  }

  /// Checks decided by the state produced by i (already placed).
  bool closing_checks(std::size_t i, const State& next) const {
    for (std::size_t c : as_from_[i]) {
      const Constraint& k = cons_[c].c;
      if (k.kind == Constraint::Kind::after && from_left_[c] == 0) {
        const bool ok = holds(k.literal, next);
        if (ok == k.negated) return false;
      }
    }
    for (std::size_t c = 0; c < cons_.size(); ++c) {
      const Constraint& k = cons_[c].c;
      if (k.kind != Constraint::Kind::between || k.negated) continue;
      if (from_left_[c] == 0 && to_placed_[c] == 0 && !holds(k.literal, next)) return false;
    }
    return true;
  }

  bool final_checks() const {
    for (const auto& x : cons_) {
      if (x.c.kind != Constraint::Kind::between || !x.c.negated) continue;
      int q = -1;
      for (int i : x.from) q = std::max(q, pos_[i]);
      int p = static_cast<int>(labels_.size());
      for (int i : x.to) p = std::min(p, pos_[i]);
      if (q + 1 > p) continue;
      bool witnessed = false;
      for (int k = q + 1; k <= p && !witnessed; ++k) witnessed = !holds(x.c.literal, states_[k]);
      if (!witnessed) return false;
    }
    return true;
  }

  void place(std::size_t i, int p) {
    pos_[i] = p;
    for (std::size_t c : as_from_[i]) --from_left_[c];
    for (std::size_t c : as_to_[i]) ++to_placed_[c];
  }

  void unplace(std::size_t i) {
    pos_[i] = -1;
    for (std::size_t c : as_from_[i]) ++from_left_[c];
    for (std::size_t c : as_to_[i]) --to_placed_[c];
  }

  const State& I_;
  std::vector<LabelledTask> labels_;
  std::vector<GroundOperator> ops_;
  std::vector<Indexed> cons_;
  std::vector<std::vector<std::size_t>> as_from_, as_to_;
  std::vector<int> pos_, from_left_, to_placed_;
  std::vector<State> states_;
  Plan plan_;
  std::set<Plan> out_;
};

void ground_instances(const std::vector<std::string>& vars, std::size_t k, Substitution& theta,
                      const Universe& U, const std::function<void(const Substitution&)>& f) {
  if (k == vars.size()) {
    f(theta);
    return;
  }
  for (const auto& c : U) {
    theta[vars[k]] = Term::constant(c);
    ground_instances(vars, k + 1, theta, U, f);
  }
  theta.erase(vars[k]);
}

}  // namespace

std::set<Plan> completions(const TaskNetwork& d, const State& I, const Domain& D, const Universe& U) {
  for (const auto& [n, t] : d.tasks)
    if (!D.is_primitive(t)) return {};
  std::set<std::string> vs;
  collect_variables(d, vs);
  const std::vector<std::string> vars(vs.begin(), vs.end());
  std::set<Plan> out;
  Substitution theta;
  ground_instances(vars, 0, theta, U, [&](const Substitution& th) {
    auto found = Orderer(substitute(d, th), I, D).run();
    out.insert(found.begin(), found.end());
  });
  return out;
}

namespace {

std::set<Plan> explore(const TaskNetwork& d, const State& I, const Domain& D, const Universe& U,
                       std::size_t depth, OracleStats* stats) {
  std::set<TaskNetwork> seen{d};
  std::vector<TaskNetwork> frontier{d};
  std::set<Plan> out;
  OracleStats st;
  bool truncated = false;
  for (std::size_t layer = 1; layer <= depth && !frontier.empty(); ++layer) {
    std::vector<TaskNetwork> next;
    for (const auto& net : frontier) {
      bool primitive = true;
      for (const auto& [n, t] : net.tasks) {
        if (D.is_primitive(t)) continue;
        primitive = false;
        if (layer == depth) {
          truncated = true;
          break;
        }
        for (const auto& alt : relevant_method_bodies(t, n, D)) {
          TaskNetwork r = reduce(net, n, alt.body, D);
          if (seen.insert(r).second) next.push_back(std::move(r));
        }
      }
      if (primitive) {
        ++st.primitive_networks;
        auto c = completions(net, I, D, U);
        out.insert(c.begin(), c.end());
      }
    }
    st.networks = seen.size();
    st.saturated = next.empty() && !truncated;
    frontier = std::move(next);
  }
  if (stats) *stats = st;
  return out;
}

}  // namespace

std::set<Plan> solutions_bounded(const TaskNetwork& d, const State& I, const Domain& D,
                                 const Universe& U, std::size_t depth, OracleStats* stats) {
  if (depth == 0) throw ContractViolation("solutions_bounded: depth must be at least 1");
  return explore(d, I, D, U, depth, stats);
}

std::set<Plan> solutions_fixpoint(const TaskNetwork& d, const State& I, const Domain& D,
                                  const Universe& U, OracleStats* stats) {
  return explore(d, I, D, U, static_cast<std::size_t>(-1), stats);
}

}  // namespace htn
