// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <vector>

#include "cyclosched/objective.hpp"

using namespace cyclosched;

namespace {
TaskSet reference_set()
{
    return validate_task_set({{1, 5}, {3, 16}, {3, 19}, {4, 22}}, Rat(1, 5));
}
} // namespace

TEST_CASE("period quantization rounds down to a multiple of the base period")
{
    CHECK(quantize_period(22, 5) == 20);
    CHECK(quantize_period(19, 5) == 15);
    CHECK(quantize_period(16, 5) == 15);
    CHECK(quantize_period(5, 5) == 5);
    CHECK(quantize_period(16, 1) == 16);

    for (std::int64_t period = 1; period <= 40; ++period)
        for (std::int64_t base = 1; base <= period; ++base) {
            std::int64_t q = quantize_period(period, base);
            CHECK(q % base == 0);
            CHECK(q <= period);
            CHECK(q > period - base);
            CHECK(quantize_period(q, base) == q); // idempotent
        }
}

TEST_CASE("quantization rejects out-of-range base periods")
{
    CHECK_THROWS_AS(quantize_period(10, 0), BasePeriodOutOfRange);
    CHECK_THROWS_AS(quantize_period(10, -2), BasePeriodOutOfRange);
    CHECK_THROWS_AS(quantize_period(4, 5), BasePeriodExceedsPeriod);
}

TEST_CASE("objective values for the reference instance are exact")
{
    TaskSet set = reference_set();
    // Frozen expectations, computed independently with exact arithmetic.
    const std::vector<std::pair<std::int64_t, Rat>> expected = {
        {5, Rat(19461, 83600)},  // ~0.232787
        {4, Rat(4979, 16720)},   // ~0.297787
        {3, Rat(150957, 351120)}, // ~0.429930
        {2, Rat(523, 1140)},     // ~0.458772
        {1, Rat(4, 5)},          // 0.8
    };
    for (const auto& [base, total] : expected) {
        ObjectiveBreakdown b = objective(set, base);
        CHECK(b.total == total);
        CHECK(b.feasible);
        CHECK(b.total == b.growth + b.switching);
    }
}

TEST_CASE("breakdown details at the reference optimum")
{
    ObjectiveBreakdown b = objective(reference_set(), 5);
    CHECK(b.base_period == 5);
    CHECK(b.quantized_periods == std::vector<std::int64_t>{5, 15, 15, 20});
    CHECK(b.blocks_per_period == std::vector<std::int64_t>{1, 3, 3, 4});
    CHECK(b.growth == Rat(1217, 16720));
    CHECK(b.switching == Rat(4, 25));
    CHECK(b.quantized_utilization == Rat(4, 5));
}

TEST_CASE("growth vanishes when every period is a multiple of the base")
{
    TaskSet set = validate_task_set({{1, 4}, {2, 8}, {3, 12}});
    for (std::int64_t base : {1, 2, 4}) {
        ObjectiveBreakdown b = objective(set, base);
        CHECK(b.growth == 0);
        CHECK(b.quantized_utilization == baseline_utilization(set));
    }
}

TEST_CASE("switching overhead is M*p/L")
{
    TaskSet set = reference_set();
    for (std::int64_t base = 1; base <= 5; ++base)
        CHECK(switch_overhead(set, base) == Rat(4) * Rat(1, 5) / base);
}

TEST_CASE("quantized utilization decomposes as U + growth")
{
    TaskSet set = reference_set();
    Rat u = baseline_utilization(set);
    for (std::int64_t base = 1; base <= set.min_period(); ++base) {
        ObjectiveBreakdown b = objective(set, base);
        CHECK(b.quantized_utilization == u + b.growth);
    }
}

TEST_CASE("feasibility flag distinguishes both failure modes")
{
    // Objective reaches 1 through switching cost alone: F = 1*2/2 = 1.
    TaskSet costly = validate_task_set({{1, 2}}, Rat(2));
    CHECK_FALSE(objective(costly, 2).feasible);

    // Quantization pushes utilization above 1 while F stays below 1.
    TaskSet dense = validate_task_set({{1, 2}, {1, 3}, {1, 7}});
    ObjectiveBreakdown b = objective(dense, 2);
    CHECK(b.quantized_utilization > 1);
    CHECK(b.total < 1);
    CHECK_FALSE(b.feasible);
}
