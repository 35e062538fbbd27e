// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "cyclosched/errors.hpp"
#include "cyclosched/objective.hpp"
#include "cyclosched/rational.hpp"
#include "cyclosched/task_model.hpp"

namespace cyclosched {

enum class Method { BruteForce, BranchAndBound };

inline const char* method_name(Method m)
{
    return m == Method::BruteForce ? "oracle" : "bnb";
}

/// The per-task growth terms wcet_i/T'_i(L) - wcet_i/T_i for one candidate
/// base period, sorted descending so partial sums stay valid lower bounds
/// under largest-first consumption. Original task indices are retained.
struct HSubset {
    struct Element {
        Rat value;      // >= 0
        int task_index; // position in the validated task order
    };

    std::int64_t base_period = 0;
    std::vector<Element> elements; // descending by value

    Rat sum() const
    {
        Rat s = 0;
        for (const Element& e : elements)
            s += e.value;
        return s;
    }
};

/// Switching-cost decomposition: v1 = M*p/T1 plus per-step increments
/// delta(L) = M*p/(L*(L-1)) applied when moving from base period L down
/// to L-1. Telescoping reproduces M*p/L exactly for every L.
struct VChain {
    std::int64_t t1 = 0;
    Rat v1;
    std::vector<Rat> deltas; // deltas[0] = delta(T1), ..., back() = delta(2)

    /// Increment applied when stepping from L to L-1 (2 <= L <= T1).
    const Rat& delta(std::int64_t base_period) const
    {
        return deltas[static_cast<std::size_t>(t1 - base_period)];
    }
};

/// One open node of the best-first search. A spine node at L stands for
/// every candidate base period <= L and carries cost M*p/L; a candidate
/// node at L has consumed a prefix of H(L) in descending order. Either
/// way the cost is a lower bound on F of any completion below the node.
struct SearchNode {
    enum class Kind { Spine, Candidate };

    Kind kind = Kind::Spine;
    std::int64_t base_period = 0;
    int consumed = 0;    // candidates: H elements already summed
    Rat cost;            // v1 + spine deltas (+ consumed H prefix)
    Rat growth_partial;  // candidates: consumed H prefix sum (partial F1)
};

/// Optional instrumentation for bnb_optimize, used by tests and
/// diagnostics; the search itself never reads it. The counters are also
/// filled on the no-feasible-solution path, where the exception would
/// otherwise lose them.
struct SearchTrace {
    struct PrunedNode {
        SearchNode::Kind kind;
        std::int64_t base_period;
        Rat cost;
        bool infeasible_utilization; // true: partial F1 > 1-U, false: cost >= 1
    };
    std::vector<PrunedNode> pruned;
    std::uint64_t steps = 0;
    std::size_t max_frontier = 0;
};

struct OptimizationResult {
    std::int64_t best_L = 0;
    ObjectiveBreakdown best;
    std::vector<ObjectiveBreakdown> table; // descending L, the ones evaluated
    std::uint64_t steps = 0;               // scalar term additions
    Method method = Method::BruteForce;
    std::uint64_t pruned = 0;
    std::size_t max_frontier = 0; // peak open-node count (B&B only)
    // The ordering rule in force, carried so serialized results are
    // self-describing about how equal-valued alternatives resolved.
    const char* tie_rule = "";
};

inline constexpr const char* kOracleTieRule =
    "equal objective keeps the larger base period";
inline constexpr const char* kBnbTieRule =
    "equal-cost candidates expand before spines, smaller base periods last; "
    "equal objective keeps the larger base period";

/// One H subset, built on demand.
inline HSubset build_h_subset(const TaskSet& set, std::int64_t base_period)
{
    HSubset h;
    h.base_period = base_period;
    int index = 0;
    for (const Task& t : set.tasks()) {
        std::int64_t quantized = quantize_period(t.period, base_period);
        h.elements.push_back({Rat(t.wcet, quantized) - Rat(t.wcet, t.period), index});
        ++index;
    }
    std::stable_sort(h.elements.begin(), h.elements.end(),
                     [](const HSubset::Element& a, const HSubset::Element& b) {
                         return a.value > b.value;
                     });
    return h;
}

/// All H subsets for L = 1..T1; result[L-1] belongs to base period L.
inline std::vector<HSubset> build_h_sets(const TaskSet& set)
{
    std::vector<HSubset> sets;
    sets.reserve(static_cast<std::size_t>(set.min_period()));
    for (std::int64_t l = 1; l <= set.min_period(); ++l)
        sets.push_back(build_h_subset(set, l));
    return sets;
}

inline VChain build_v_chain(const TaskSet& set)
{
    VChain v;
    v.t1 = set.min_period();
    Rat mp = Rat(set.size()) * set.overhead();
    v.v1 = mp / v.t1;
    for (std::int64_t l = v.t1; l >= 2; --l)
        v.deltas.push_back(mp / (Rat(l) * (l - 1)));
    return v;
}

/// Exhaustive reference optimizer: evaluates the objective at every
/// L in [1, T1] and keeps the feasible minimum, ties toward larger L.
inline OptimizationResult brute_force_optimize(const TaskSet& set)
{
    OptimizationResult res;
    res.method = Method::BruteForce;
    res.tie_rule = kOracleTieRule;
    std::int64_t t1 = set.min_period();

    std::optional<std::size_t> best_row;
    for (std::int64_t l = t1; l >= 1; --l) {
        ObjectiveBreakdown b = objective(set, l);
        if (!b.feasible)
            ++res.pruned;
        else if (!best_row || b.total < res.table[*best_row].total)
            best_row = res.table.size(); // strict '<' keeps the larger L on ties
        res.table.push_back(std::move(b));
    }
    res.steps = static_cast<std::uint64_t>(t1)
                * (static_cast<std::uint64_t>(set.size()) + 1);
    if (!best_row)
        throw NoFeasibleBasePeriod();
    res.best = res.table[*best_row];
    res.best_L = res.best.base_period;
    return res;
}

namespace detail {

// Frontier ordering: smallest cost first; on ties candidates before
// spines, then larger base period. This makes the first completed
// extraction the largest L among equal-cost optima, matching the
// brute-force tie rule.
struct NodeAfter {
    bool operator()(const SearchNode& a, const SearchNode& b) const
    {
        if (a.cost != b.cost)
            return a.cost > b.cost;
        if (a.kind != b.kind)
            return a.kind == SearchNode::Kind::Spine;
        return a.base_period < b.base_period;
    }
};

} // namespace detail

/// Best-first branch-and-bound over the H/V decomposition.
///
/// The frontier starts with the spine node for L = T1 (cost v1, which is
/// always accounted). Expanding a spine at L materializes H(L), creates
/// the candidate for L with its largest element consumed, and the spine
/// for L-1 with cost raised by delta(L). Expanding a candidate consumes
/// its next descending H element. Because every added term is
/// non-negative, node costs are lower bounds and the first fully
/// consumed candidate extracted from the frontier is optimal.
///
/// Nodes reaching cost >= 1 are cut (no schedule exists beyond F = 1);
/// candidates whose partial growth exceeds 1 - U are cut as quantized
/// overutilization (U' > 1). `steps` counts scalar term additions, one
/// per node created, the same unit the brute-force count uses.
inline OptimizationResult bnb_optimize(const TaskSet& set, SearchTrace* trace = nullptr)
{
    OptimizationResult res;
    res.method = Method::BranchAndBound;
    res.tie_rule = kBnbTieRule;

    const std::int64_t t1 = set.min_period();
    const int task_count = set.size();
    const Rat growth_budget = 1 - baseline_utilization(set); // F1 above this => U' > 1
    const VChain chain = build_v_chain(set);

    std::vector<std::optional<HSubset>> h_cache(static_cast<std::size_t>(t1) + 1);
    std::priority_queue<SearchNode, std::vector<SearchNode>, detail::NodeAfter> frontier;

    auto reject = [&](const SearchNode& node, bool infeasible) {
        ++res.pruned;
        if (trace)
            trace->pruned.push_back({node.kind, node.base_period, node.cost, infeasible});
    };

    // Admits a node to the frontier unless a bound cuts it first.
    auto offer = [&](SearchNode node) {
        if (node.cost >= 1) {
            reject(node, false);
            return;
        }
        if (node.kind == SearchNode::Kind::Candidate
            && node.growth_partial > growth_budget) {
            reject(node, true);
            return;
        }
        frontier.push(std::move(node));
        res.max_frontier = std::max(res.max_frontier, frontier.size());
    };

    SearchNode root;
    root.kind = SearchNode::Kind::Spine;
    root.base_period = t1;
    root.cost = chain.v1;
    res.steps = 1; // v1 is always taken into account
    offer(std::move(root));

    while (!frontier.empty()) {
        SearchNode node = frontier.top();
        frontier.pop();

        if (node.kind == SearchNode::Kind::Candidate) {
            if (node.consumed == task_count) {
                res.best_L = node.base_period;
                res.best = objective(set, node.base_period);
                // Completion cost is exactly F1 + M*p/L; keep the table in
                // descending-L order over everything the search touched.
                for (std::int64_t l = t1; l >= 1; --l)
                    if (h_cache[static_cast<std::size_t>(l)])
                        res.table.push_back(objective(set, l));
                if (trace) {
                    trace->steps = res.steps;
                    trace->max_frontier = res.max_frontier;
                }
                return res;
            }
            const HSubset& h = *h_cache[static_cast<std::size_t>(node.base_period)];
            const Rat& next = h.elements[static_cast<std::size_t>(node.consumed)].value;
            node.cost += next;
            node.growth_partial += next;
            ++node.consumed;
            ++res.steps;
            offer(std::move(node));
            continue;
        }

        // Spine expansion: branch into "schedule at exactly L" and
        // "some L' < L".
        std::int64_t l = node.base_period;
        auto& slot = h_cache[static_cast<std::size_t>(l)];
        if (!slot)
            slot = build_h_subset(set, l);

        SearchNode candidate;
        candidate.kind = SearchNode::Kind::Candidate;
        candidate.base_period = l;
        candidate.consumed = 1;
        candidate.growth_partial = slot->elements.front().value;
        candidate.cost = node.cost + candidate.growth_partial;
        ++res.steps;
        offer(std::move(candidate));

        if (l > 1) {
            SearchNode next_spine;
            next_spine.kind = SearchNode::Kind::Spine;
            next_spine.base_period = l - 1;
            next_spine.cost = node.cost + chain.delta(l);
            ++res.steps;
            offer(std::move(next_spine));
        }
    }
    if (trace) {
        trace->steps = res.steps;
        trace->max_frontier = res.max_frontier;
    }
    throw NoFeasibleBasePeriod();
}

inline OptimizationResult optimize(const TaskSet& set, Method method)
{
    return method == Method::BruteForce ? brute_force_optimize(set)
                                        : bnb_optimize(set);
}

/// Search work in scalar term additions. Brute force evaluates M growth
/// terms plus one switching term for each of the T1 candidates; the
/// branch-and-bound count comes from an actual run.
inline std::uint64_t count_steps(Method method, const TaskSet& set)
{
    if (method == Method::BruteForce)
        return static_cast<std::uint64_t>(set.min_period())
               * (static_cast<std::uint64_t>(set.size()) + 1);
    SearchTrace trace;
    try {
        return bnb_optimize(set, &trace).steps;
    } catch (const NoFeasibleBasePeriod&) {
        return trace.steps; // the exhausted search still did this much work
    }
}

} // namespace cyclosched
