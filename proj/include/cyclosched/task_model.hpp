// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "cyclosched/errors.hpp"
#include "cyclosched/rational.hpp"

namespace cyclosched {

/// One periodic task: worst-case execution time and period, in integer
/// time units.
struct Task {
    std::int64_t wcet = 0;
    std::int64_t period = 0;

    friend bool operator==(const Task&, const Task&) = default;
};

/// A validated set of periodic tasks, sorted by non-decreasing period,
/// plus the average per-switch overhead p. Construction goes through
/// validate_task_set(); instances are immutable values.
class TaskSet {
public:
    const std::vector<Task>& tasks() const { return tasks_; }
    int size() const { return static_cast<int>(tasks_.size()); }

    /// T1, the shortest period. Candidate base periods live in [1, T1].
    std::int64_t min_period() const { return tasks_.front().period; }

    /// Average per-switch overhead p (exact, non-negative).
    const Rat& overhead() const { return overhead_; }

    /// True when M*p/T1 > 1 - F1(T1), i.e. the per-switch overhead alone
    /// rules out the largest candidate base period. Advisory, not fatal.
    bool overhead_bound_exceeded() const { return overhead_warning_; }

    friend bool operator==(const TaskSet& a, const TaskSet& b)
    {
        return a.tasks_ == b.tasks_ && a.overhead_ == b.overhead_;
    }

private:
    TaskSet(std::vector<Task> tasks, Rat overhead, bool warn)
        : tasks_(std::move(tasks)), overhead_(std::move(overhead)),
          overhead_warning_(warn)
    {
    }

    friend TaskSet validate_task_set(std::vector<Task>, Rat);

    std::vector<Task> tasks_;
    Rat overhead_;
    bool overhead_warning_;
};

/// Sum of wcet/period over the raw task list.
inline Rat utilization_of(const std::vector<Task>& tasks)
{
    Rat u = 0;
    for (const Task& t : tasks)
        u += Rat(t.wcet, t.period);
    return u;
}

/// Validates and normalizes a raw task list: sorts by (period, input
/// order), rejects non-positive timings, wcet > period, and total
/// utilization above 1. Sets the overhead warning flag when the
/// per-switch cost cannot fit even at the largest base period.
inline TaskSet validate_task_set(std::vector<Task> tasks, Rat overhead = Rat(0))
{
    if (tasks.empty())
        throw EmptySet();
    for (const Task& t : tasks) {
        if (t.wcet < 1 || t.period < 1)
            throw NonPositiveTiming("task (" + std::to_string(t.wcet) + ", "
                                    + std::to_string(t.period)
                                    + "): wcet and period must be >= 1");
        if (t.wcet > t.period)
            throw WcetExceedsPeriod("task (" + std::to_string(t.wcet) + ", "
                                    + std::to_string(t.period)
                                    + "): wcet exceeds period");
    }
    if (overhead < 0)
        throw NonPositiveTiming("overhead p must be >= 0");

    std::stable_sort(tasks.begin(), tasks.end(),
                     [](const Task& a, const Task& b) { return a.period < b.period; });

    Rat u = utilization_of(tasks);
    if (u > 1)
        throw Overutilized("utilization " + to_decimal(u) + " ("
                           + numerator(u).str() + "/" + denominator(u).str()
                           + ") exceeds 1");

    // Admissibility bound on p at L = T1: M*p/T1 <= 1 - F1(T1), where
    // F1(T1) is the utilization growth after quantizing every period to a
    // multiple of T1. Violation is reported, not rejected.
    std::int64_t t1 = tasks.front().period;
    Rat growth_at_t1 = 0;
    for (const Task& t : tasks) {
        std::int64_t quantized = (t.period / t1) * t1;
        growth_at_t1 += Rat(t.wcet, quantized) - Rat(t.wcet, t.period);
    }
    int m = static_cast<int>(tasks.size());
    bool warn = Rat(m) * overhead / t1 > 1 - growth_at_t1;

    return TaskSet(std::move(tasks), std::move(overhead), warn);
}

/// Exact baseline utilization U = sum wcet_i/period_i.
inline Rat baseline_utilization(const TaskSet& set)
{
    return utilization_of(set.tasks());
}

/// GCD of all periods: the pre-optimization base period choice.
inline std::int64_t gcd_base_period(const TaskSet& set)
{
    std::int64_t g = 0;
    for (const Task& t : set.tasks())
        g = std::gcd(g, t.period);
    return g;
}

} // namespace cyclosched
