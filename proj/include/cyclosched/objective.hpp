// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyclosched/errors.hpp"
#include "cyclosched/rational.hpp"
#include "cyclosched/task_model.hpp"

namespace cyclosched {

/// Everything the objective knows about one candidate base period L.
///
/// growth (F1) is the extra CPU demand caused by rounding each period
/// down to a multiple of L; switching (F2) is the amortized context
/// switch cost M*p/L; total = F1 + F2 is the value being minimized.
struct ObjectiveBreakdown {
    std::int64_t base_period = 0;                 // L
    std::vector<std::int64_t> quantized_periods;  // T'_i = floor(T_i/L)*L
    std::vector<std::int64_t> blocks_per_period;  // k_i = T'_i / L
    Rat growth;                 // F1 >= 0, zero iff every T'_i == T_i
    Rat switching;              // F2 = M*p/L
    Rat total;                  // F  = F1 + F2
    Rat quantized_utilization;  // U' = sum wcet_i/T'_i = U + F1
    bool feasible = false;      // U' <= 1 and F < 1
};

/// Rounds `period` down to the nearest multiple of `base`.
inline std::int64_t quantize_period(std::int64_t period, std::int64_t base)
{
    if (base < 1)
        throw BasePeriodOutOfRange("base period must be >= 1");
    if (base > period)
        throw BasePeriodExceedsPeriod(
            "base period " + std::to_string(base) + " exceeds period "
            + std::to_string(period));
    return (period / base) * base;
}

/// F1: exact utilization growth sum over all tasks at base period L.
inline Rat utilization_growth(const TaskSet& set, std::int64_t base_period)
{
    Rat growth = 0;
    for (const Task& t : set.tasks()) {
        std::int64_t quantized = quantize_period(t.period, base_period);
        growth += Rat(t.wcet, quantized) - Rat(t.wcet, t.period);
    }
    return growth;
}

/// F2: per-cycle switching overhead M*p/L.
inline Rat switch_overhead(const TaskSet& set, std::int64_t base_period)
{
    if (base_period < 1)
        throw BasePeriodOutOfRange("base period must be >= 1");
    return Rat(set.size()) * set.overhead() / base_period;
}

/// Full objective evaluation at one candidate base period.
inline ObjectiveBreakdown objective(const TaskSet& set, std::int64_t base_period)
{
    if (base_period < 1)
        throw BasePeriodOutOfRange("base period must be >= 1");
    if (base_period > set.min_period())
        throw BasePeriodExceedsPeriod(
            "base period " + std::to_string(base_period)
            + " exceeds the smallest period "
            + std::to_string(set.min_period()));

    ObjectiveBreakdown b;
    b.base_period = base_period;
    b.growth = 0;
    b.quantized_utilization = 0;
    for (const Task& t : set.tasks()) {
        std::int64_t quantized = quantize_period(t.period, base_period);
        b.quantized_periods.push_back(quantized);
        b.blocks_per_period.push_back(quantized / base_period);
        b.growth += Rat(t.wcet, quantized) - Rat(t.wcet, t.period);
        b.quantized_utilization += Rat(t.wcet, quantized);
    }
    b.switching = switch_overhead(set, base_period);
    b.total = b.growth + b.switching;
    b.feasible = b.quantized_utilization <= 1 && b.total < 1;
    return b;
}

} // namespace cyclosched
