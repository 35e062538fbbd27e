// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "cyclosched/errors.hpp"
#include "cyclosched/objective.hpp"
#include "cyclosched/rational.hpp"
#include "cyclosched/task_model.hpp"

namespace cyclosched {

/// How one task is sliced: k equal blocks per quantized period, one
/// block per RT cycle, each block wcet/k long.
struct BlockPlan {
    int task_index = 0;
    std::int64_t blocks_per_period = 0; // k = floor(T/L)
    Rat slice;                          // 1/k of the job per cycle
    Rat block_len;                      // wcet/k
};

/// One occupied slot inside a cycle, offsets relative to cycle start.
struct CycleSlot {
    int task_index = 0;
    Rat start;
    Rat end;
};

/// Static cyclic timetable: the same block layout repeats every cycle;
/// the whole table repeats every hyperperiod.
struct CyclicSchedule {
    std::int64_t base_period = 0;  // L
    std::vector<Task> tasks;       // the validated task order this was built from
    Rat overhead;                  // p, carried for round-tripping
    std::vector<BlockPlan> plans;  // indexed like tasks
    std::vector<CycleSlot> cycle_order;
    Rat free_interval;             // L - sum of block lengths, >= 0
    std::int64_t hyperperiod = 0;  // Tc = lcm(k_i) * L
    std::int64_t cycle_count = 0;  // Tc / L
    bool integer_blocks = true;    // false when some wcet is not divisible by k
};

/// A block instance placed on the absolute timeline.
struct TimedBlock {
    std::int64_t cycle = 0;
    int task_index = 0;
    Rat start;
    Rat end;
};

/// lcm(ks) * base_period with explicit overflow detection.
inline std::int64_t hyperperiod(const std::vector<std::int64_t>& ks,
                                std::int64_t base_period)
{
    if (ks.empty())
        throw Error("hyperperiod of an empty block-count list");
    std::int64_t acc = 1;
    auto checked_mul = [](std::int64_t a, std::int64_t b) {
        std::int64_t out;
        if (__builtin_mul_overflow(a, b, &out))
            throw HyperperiodOverflow("hyperperiod exceeds 64-bit range");
        return out;
    };
    for (std::int64_t k : ks) {
        if (k < 1)
            throw Error("block counts must be positive");
        acc = checked_mul(acc / std::gcd(acc, k), k);
    }
    if (base_period < 1)
        throw BasePeriodOutOfRange("base period must be >= 1");
    return checked_mul(acc, base_period);
}

/// Builds the cyclic timetable for a feasible base period: every task
/// contributes one block per cycle, blocks are ordered by ascending
/// quantized period (ties by task order) and packed from the cycle
/// start, leaving the free interval at the tail.
inline CyclicSchedule build_schedule(const TaskSet& set, std::int64_t base_period)
{
    ObjectiveBreakdown b = objective(set, base_period); // also range-checks L
    if (b.quantized_utilization > 1)
        throw InfeasibleBasePeriod(
            "quantized utilization " + to_decimal(b.quantized_utilization)
            + " exceeds 1 at base period " + std::to_string(base_period));

    CyclicSchedule sched;
    sched.base_period = base_period;
    sched.tasks = set.tasks();
    sched.overhead = set.overhead();

    Rat occupied = 0;
    for (int i = 0; i < set.size(); ++i) {
        BlockPlan plan;
        plan.task_index = i;
        plan.blocks_per_period = b.blocks_per_period[static_cast<std::size_t>(i)];
        plan.slice = Rat(1, plan.blocks_per_period);
        plan.block_len = Rat(set.tasks()[static_cast<std::size_t>(i)].wcet,
                             plan.blocks_per_period);
        occupied += plan.block_len;
        if (denominator(plan.block_len) != 1)
            sched.integer_blocks = false;
        sched.plans.push_back(std::move(plan));
    }
    sched.free_interval = Rat(base_period) - occupied;

    std::vector<int> order(sched.plans.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b_) {
        return b.quantized_periods[static_cast<std::size_t>(a)]
               < b.quantized_periods[static_cast<std::size_t>(b_)];
    });

    Rat cursor = 0;
    for (int i : order) {
        CycleSlot slot;
        slot.task_index = i;
        slot.start = cursor;
        cursor += sched.plans[static_cast<std::size_t>(i)].block_len;
        slot.end = cursor;
        sched.cycle_order.push_back(std::move(slot));
    }

    sched.hyperperiod = hyperperiod(b.blocks_per_period, base_period);
    sched.cycle_count = sched.hyperperiod / base_period;
    return sched;
}

/// Unrolls the cycle layout over the whole hyperperiod: cycle j is the
/// in-cycle layout shifted by j*L.
inline std::vector<TimedBlock> expand_timeline(const CyclicSchedule& sched)
{
    std::vector<TimedBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(sched.cycle_count)
                   * sched.cycle_order.size());
    for (std::int64_t j = 0; j < sched.cycle_count; ++j) {
        Rat shift = Rat(j) * sched.base_period;
        for (const CycleSlot& slot : sched.cycle_order)
            blocks.push_back({j, slot.task_index, slot.start + shift, slot.end + shift});
    }
    return blocks;
}

/// Plain-text timetable, one line per cycle, absolute times.
inline std::string render_gantt(const CyclicSchedule& sched)
{
    std::string out;
    out += "base period " + std::to_string(sched.base_period) + ", hyperperiod "
           + std::to_string(sched.hyperperiod) + ", "
           + std::to_string(sched.cycle_count) + " cycles\n";
    for (std::int64_t j = 0; j < sched.cycle_count; ++j) {
        Rat shift = Rat(j) * sched.base_period;
        out += "cycle " + std::to_string(j) + ":";
        for (const CycleSlot& slot : sched.cycle_order) {
            out += " t" + std::to_string(slot.task_index) + "["
                   + to_decimal_trim(slot.start + shift) + ","
                   + to_decimal_trim(slot.end + shift) + ")";
        }
        if (sched.free_interval > 0) {
            Rat tail = sched.cycle_order.empty() ? shift
                                                 : sched.cycle_order.back().end + shift;
            out += " free[" + to_decimal_trim(tail) + ","
                   + to_decimal_trim(Rat(sched.base_period) + shift) + ")";
        }
        out += "\n";
    }
    return out;
}

} // namespace cyclosched
