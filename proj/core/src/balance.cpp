#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "edgealloc/memory_model.hpp"

namespace edgealloc {
namespace {

bool near(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

double sum_squares(const std::vector<double>& loads) {
  double s = 0;
  for (double l : loads) s += l * l;
  return s;
}

/// Continuous water-filling relaxation: the least possible final sum of
/// squares after distributing `remaining` over the given loads.
double waterfill_bound(std::vector<double> loads, double remaining) {
  std::sort(loads.begin(), loads.end());
  const std::size_t n = loads.size();
  // raise the lowest bins to a common level
  double level = loads[0];
  double mass = remaining;
  std::size_t k = 1;
  while (mass > 0 && k < n) {
    const double gap = (loads[k] - level) * static_cast<double>(k);
    if (gap >= mass) break;
    mass -= gap;
    level = loads[k];
    ++k;
  }
  if (mass > 0) level += mass / static_cast<double>(k);
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = i < k ? std::max(loads[i], level) : loads[i];
    s += v * v;
  }
  return s;
}

BalanceResult finish_result(const std::vector<double>& values, int bins,
                            const std::vector<double>& initial,
                            std::vector<int> assignment) {
  BalanceResult r;
  r.assignment = std::move(assignment);
  r.loads = initial;
  for (std::size_t i = 0; i < values.size(); ++i)
    r.loads[static_cast<std::size_t>(r.assignment[i])] += values[i];
  r.sum_squares = sum_squares(r.loads);
  r.max_load = r.loads.empty() ? 0 : *std::max_element(r.loads.begin(), r.loads.end());
  const double total = std::accumulate(r.loads.begin(), r.loads.end(), 0.0);
  const double mean = total / bins;
  for (double l : r.loads) r.variance_term += (l - mean) * (l - mean);
  return r;
}

BalanceResult lpt(const std::vector<double>& values, int bins,
                  const std::vector<double>& initial) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  std::vector<double> loads = initial;
  std::vector<int> assignment(values.size(), 0);
  for (std::size_t idx : order) {
    int best = 0;
    for (int b = 1; b < bins; ++b)
      if (loads[b] < loads[best]) best = b;
    assignment[idx] = best;
    loads[best] += values[idx];
  }
  return finish_result(values, bins, initial, std::move(assignment));
}

struct ObjectiveValue {
  double sum_squares;
  double max_load;
  bool better_than(const ObjectiveValue& o) const {
    if (!near(sum_squares, o.sum_squares)) return sum_squares < o.sum_squares;
    if (!near(max_load, o.max_load)) return max_load < o.max_load;
    return false;
  }
  bool ties(const ObjectiveValue& o) const {
    return near(sum_squares, o.sum_squares) && near(max_load, o.max_load);
  }
};

/// Optimal (sum of squares, max load) over all assignments. Items are
/// branched largest first; bins with identical loads are interchangeable
/// for the objective, so only the first of each load value is tried.
ObjectiveValue best_objective(const std::vector<double>& values, int bins,
                              const std::vector<double>& initial,
                              ObjectiveValue incumbent) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  std::vector<double> suffix(values.size() + 1, 0);
  for (std::size_t i = values.size(); i-- > 0;)
    suffix[i] = suffix[i + 1] + values[order[i]];

  std::vector<double> loads = initial;
  std::function<void(std::size_t, double)> rec = [&](std::size_t t,
                                                     double max_so_far) {
    if (t == order.size()) {
      const ObjectiveValue leaf{sum_squares(loads), max_so_far};
      if (leaf.better_than(incumbent)) incumbent = leaf;
      return;
    }
    const double bound = waterfill_bound(loads, suffix[t]);
    if (bound > incumbent.sum_squares && !near(bound, incumbent.sum_squares))
      return;
    const double v = values[order[t]];
    for (int b = 0; b < bins; ++b) {
      bool duplicate = false;
      for (int b2 = 0; b2 < b; ++b2)
        if (loads[b2] == loads[b]) {
          duplicate = true;
          break;
        }
      if (duplicate) continue;
      loads[b] += v;
      rec(t + 1, std::max(max_so_far, loads[b]));
      loads[b] -= v;
    }
  };
  const double init_max =
      initial.empty() ? 0 : *std::max_element(initial.begin(), initial.end());
  rec(0, init_max);
  return incumbent;
}

/// Walks assignments in lexicographic order (input item order, ascending
/// bin) and reports those achieving the target objective; the first hit
/// is the canonical assignment.
void enumerate_optima(const std::vector<double>& values, int bins,
                      const std::vector<double>& initial,
                      const ObjectiveValue& target, std::size_t max_results,
                      std::vector<BalanceResult>& out) {
  std::vector<double> suffix(values.size() + 1, 0);
  for (std::size_t i = values.size(); i-- > 0;) suffix[i] = suffix[i + 1] + values[i];

  std::vector<double> loads = initial;
  std::vector<int> assignment(values.size(), 0);
  std::function<void(std::size_t, double)> rec = [&](std::size_t t,
                                                     double max_so_far) {
    if (out.size() >= max_results) return;
    if (max_so_far > target.max_load && !near(max_so_far, target.max_load))
      return;
    if (t == values.size()) {
      const ObjectiveValue leaf{sum_squares(loads), max_so_far};
      if (leaf.ties(target))
        out.push_back(finish_result(values, bins, initial, assignment));
      return;
    }
    const double bound = waterfill_bound(loads, suffix[t]);
    if (bound > target.sum_squares && !near(bound, target.sum_squares)) return;
    for (int b = 0; b < bins; ++b) {
      loads[b] += values[t];
      assignment[t] = b;
      rec(t + 1, std::max(max_so_far, loads[b]));
      loads[b] -= values[t];
      if (out.size() >= max_results) return;
    }
  };
  const double init_max =
      initial.empty() ? 0 : *std::max_element(initial.begin(), initial.end());
  rec(0, init_max);
}

std::vector<double> checked_initial(const std::vector<double>& initial,
                                    int bins) {
  if (bins < 1) fail(Errc::ConfigError, "balance requires at least one bin");
  if (initial.empty()) return std::vector<double>(bins, 0.0);
  if (static_cast<int>(initial.size()) != bins)
    fail(Errc::ConfigError, "initial_loads size must equal the bin count");
  return initial;
}

}  // namespace

BalanceResult balance(const std::vector<double>& values, int bins,
                      const std::vector<double>& initial_loads,
                      BalanceMethod method) {
  const std::vector<double> initial = checked_initial(initial_loads, bins);
  if (method == BalanceMethod::Lpt) return lpt(values, bins, initial);

  const BalanceResult greedy = lpt(values, bins, initial);
  if (values.empty()) return greedy;
  ObjectiveValue best = best_objective(
      values, bins, initial, ObjectiveValue{greedy.sum_squares, greedy.max_load});
  std::vector<BalanceResult> first;
  enumerate_optima(values, bins, initial, best, 1, first);
  // the greedy incumbent is only a starting bound; the enumeration target
  // always has at least one witness
  return first.empty() ? greedy : first.front();
}

std::vector<BalanceResult> balance_optima(const std::vector<double>& values,
                                          int bins,
                                          const std::vector<double>& initial_loads,
                                          std::size_t max_results) {
  const std::vector<double> initial = checked_initial(initial_loads, bins);
  std::vector<BalanceResult> out;
  if (values.empty()) {
    out.push_back(finish_result(values, bins, initial, {}));
    return out;
  }
  const BalanceResult greedy = lpt(values, bins, initial);
  ObjectiveValue best = best_objective(
      values, bins, initial, ObjectiveValue{greedy.sum_squares, greedy.max_load});
  enumerate_optima(values, bins, initial, best, max_results, out);
  return out;
}

std::map<AlgorithmId, NodeId> balance_restricted(
    const MemoryProfile& profile, const RobotPartition& partition,
    const std::set<AlgorithmId>& restricted,
    const std::set<AlgorithmId>& unrestricted, BalanceMethod method) {
  if (!restricted.empty() && partition.tr0.empty())
    fail(Errc::InfeasibleMemoryPlacement,
         "restricted algorithms require a robot with a direct fog link");

  std::vector<NodeId> tr0_bins(partition.tr0.begin(), partition.tr0.end());
  std::vector<NodeId> all_bins = tr0_bins;
  all_bins.insert(all_bins.end(), partition.tr_inf.begin(),
                  partition.tr_inf.end());
  std::sort(all_bins.begin(), all_bins.end());
  if (all_bins.empty())
    fail(Errc::InfeasibleMemoryPlacement, "no edge nodes to balance over");

  std::map<AlgorithmId, NodeId> result;
  std::map<NodeId, double> bin_load;
  for (NodeId b : all_bins) bin_load[b] = 0;

  if (!restricted.empty()) {
    std::vector<AlgorithmId> items(restricted.begin(), restricted.end());
    std::vector<double> values;
    for (AlgorithmId id : items) values.push_back(profile.placement_bytes(id));
    const BalanceResult stage1 = balance(
        values, static_cast<int>(tr0_bins.size()), {}, method);
    for (std::size_t i = 0; i < items.size(); ++i) {
      const NodeId bin = tr0_bins[static_cast<std::size_t>(stage1.assignment[i])];
      result[items[i]] = bin;
      bin_load[bin] += values[i];
    }
  }

  if (!unrestricted.empty()) {
    std::vector<AlgorithmId> items(unrestricted.begin(), unrestricted.end());
    std::vector<double> values;
    for (AlgorithmId id : items) values.push_back(profile.placement_bytes(id));
    std::vector<double> priors;
    for (NodeId b : all_bins) priors.push_back(bin_load[b]);
    const BalanceResult stage2 = balance(
        values, static_cast<int>(all_bins.size()), priors, method);
    for (std::size_t i = 0; i < items.size(); ++i)
      result[items[i]] = all_bins[static_cast<std::size_t>(stage2.assignment[i])];
  }
  return result;
}

}  // namespace edgealloc
