// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cyclosched/rational.hpp"
#include "cyclosched/schedule.hpp"
#include "cyclosched/task_model.hpp"

namespace cyclosched {

/// Deterministic replay of a cyclic schedule over its hyperperiod.
/// Events carry absolute start/end times; the trace is what the
/// verification checks inspect, independent of how the schedule was
/// constructed.
struct SimulationTrace {
    std::int64_t base_period = 0;
    std::int64_t hyperperiod = 0;
    std::int64_t cycle_count = 0;
    int task_count = 0;
    std::vector<TimedBlock> events;  // sorted by (start, end, task)
    std::vector<Rat> cycle_last_end; // latest completion per cycle, absolute
    Rat utilization_observed;        // total busy time / hyperperiod
};

struct ConditionResult {
    bool pass = true;
    std::string counterexample; // empty when the condition holds
};

/// Outcome of the five cyclic-schedule existence checks plus deadline
/// accounting. Failures are data, not exceptions: any well-formed
/// schedule gets a report.
struct VerificationReport {
    // conditions[0]..[4]:
    //   1. every cycle runs the same block lengths per task
    //   2. in-cycle start offsets are cycle-invariant (requests at cycle starts)
    //   3. absolute starts advance by exactly L per cycle
    //   4. no two blocks overlap
    //   5. the last block ends no later than the hyperperiod
    std::array<ConditionResult, 5> conditions;
    // Advisory, stricter per-cycle form of condition 5: every cycle's
    // blocks end by that cycle's own boundary. Construction guarantees
    // it; it is reported but not part of pass().
    ConditionResult per_cycle_horizon;
    bool deadlines_met = false;
    std::vector<Rat> min_slack; // per task, worst window slack
    Rat utilization_observed;

    bool conditions_pass() const
    {
        for (const ConditionResult& c : conditions)
            if (!c.pass)
                return false;
        return true;
    }
    bool pass() const { return conditions_pass() && deadlines_met; }

    /// Tightest slack across all tasks (0 for an empty report).
    Rat worst_slack() const
    {
        Rat worst = 0;
        bool first = true;
        for (const Rat& s : min_slack) {
            if (first || s < worst)
                worst = s;
            first = false;
        }
        return worst;
    }
};

struct DeadlineReport {
    bool all_met = false;
    std::vector<Rat> min_slack; // per task
    std::string violation;     // first failure, empty when all_met
};

inline SimulationTrace simulate(const CyclicSchedule& sched)
{
    SimulationTrace trace;
    trace.base_period = sched.base_period;
    trace.hyperperiod = sched.hyperperiod;
    trace.cycle_count = sched.cycle_count;
    trace.task_count = static_cast<int>(sched.tasks.size());
    trace.events = expand_timeline(sched);
    std::sort(trace.events.begin(), trace.events.end(),
              [](const TimedBlock& a, const TimedBlock& b) {
                  if (a.start != b.start)
                      return a.start < b.start;
                  if (a.end != b.end)
                      return a.end < b.end;
                  return a.task_index < b.task_index;
              });

    trace.cycle_last_end.assign(static_cast<std::size_t>(sched.cycle_count), Rat(0));
    Rat busy = 0;
    for (const TimedBlock& e : trace.events) {
        busy += e.end - e.start;
        auto j = static_cast<std::size_t>(e.cycle);
        if (j < trace.cycle_last_end.size())
            trace.cycle_last_end[j] = std::max(trace.cycle_last_end[j], e.end);
    }
    trace.utilization_observed =
        sched.hyperperiod > 0 ? busy / sched.hyperperiod : Rat(0);
    return trace;
}

namespace detail {

inline std::string rat_str(const Rat& r)
{
    return numerator(r).str() + "/" + denominator(r).str();
}

} // namespace detail

/// Checks the five existence conditions against the trace, exact
/// rational arithmetic throughout.
inline VerificationReport verify_conditions(const CyclicSchedule& sched,
                                            const SimulationTrace& trace)
{
    VerificationReport report;
    report.utilization_observed = trace.utilization_observed;

    const std::int64_t cycles = trace.cycle_count;
    const Rat period(sched.base_period);

    // Group events per task, ordered by cycle.
    std::map<int, std::vector<const TimedBlock*>> per_task;
    for (const TimedBlock& e : trace.events)
        per_task[e.task_index].push_back(&e);

    auto& c1 = report.conditions[0];
    auto& c2 = report.conditions[1];
    auto& c3 = report.conditions[2];

    for (auto& [task, events] : per_task) {
        std::sort(events.begin(), events.end(),
                  [](const TimedBlock* a, const TimedBlock* b) {
                      return a->cycle < b->cycle;
                  });
        if (static_cast<std::int64_t>(events.size()) != cycles && c1.pass) {
            c1.pass = false;
            c1.counterexample = "task " + std::to_string(task) + " has "
                                + std::to_string(events.size()) + " blocks over "
                                + std::to_string(cycles) + " cycles";
        }
        if (events.empty())
            continue;

        const Rat ref_len = events.front()->end - events.front()->start;
        const Rat ref_offset = events.front()->start
                               - Rat(events.front()->cycle) * period;
        const TimedBlock* prev = nullptr;
        for (const TimedBlock* e : events) {
            Rat len = e->end - e->start;
            if (len != ref_len && c1.pass) {
                c1.pass = false;
                c1.counterexample = "task " + std::to_string(task) + " cycle "
                                    + std::to_string(e->cycle) + ": block length "
                                    + detail::rat_str(len) + " != "
                                    + detail::rat_str(ref_len);
            }
            Rat offset = e->start - Rat(e->cycle) * period;
            if (offset != ref_offset && c2.pass) {
                c2.pass = false;
                c2.counterexample = "task " + std::to_string(task) + " cycle "
                                    + std::to_string(e->cycle) + ": start offset "
                                    + detail::rat_str(offset) + " != "
                                    + detail::rat_str(ref_offset);
            }
            if (prev) {
                Rat expected = prev->start + Rat(e->cycle - prev->cycle) * period;
                if (e->start != expected && c3.pass) {
                    c3.pass = false;
                    c3.counterexample = "task " + std::to_string(task) + " cycle "
                                        + std::to_string(e->cycle) + ": start "
                                        + detail::rat_str(e->start) + " != "
                                        + detail::rat_str(expected);
                }
            }
            prev = e;
        }
    }

    // 4: events are time-sorted, so overlap shows up between neighbours.
    auto& c4 = report.conditions[3];
    for (std::size_t i = 1; i < trace.events.size(); ++i) {
        const TimedBlock& a = trace.events[i - 1];
        const TimedBlock& b = trace.events[i];
        if (b.start < a.end) {
            c4.pass = false;
            c4.counterexample = "task " + std::to_string(a.task_index) + " ["
                                + detail::rat_str(a.start) + ","
                                + detail::rat_str(a.end) + ") overlaps task "
                                + std::to_string(b.task_index) + " ["
                                + detail::rat_str(b.start) + ","
                                + detail::rat_str(b.end) + ")";
            break;
        }
    }

    auto& c5 = report.conditions[4];
    for (const TimedBlock& e : trace.events) {
        if (e.end > trace.hyperperiod && c5.pass) {
            c5.pass = false;
            c5.counterexample = "block ends at " + detail::rat_str(e.end)
                                + " past hyperperiod "
                                + std::to_string(trace.hyperperiod);
        }
        Rat cycle_end = Rat(e.cycle + 1) * period;
        if (e.end > cycle_end && report.per_cycle_horizon.pass) {
            report.per_cycle_horizon.pass = false;
            report.per_cycle_horizon.counterexample =
                "cycle " + std::to_string(e.cycle) + " block ends at "
                + detail::rat_str(e.end) + " past the cycle boundary "
                + detail::rat_str(cycle_end);
        }
    }
    return report;
}

/// Exact service accounting: every task must receive exactly its wcet
/// inside every quantized-period window of the hyperperiod. Because
/// T'_i <= T_i, this certifies the original deadlines.
inline DeadlineReport check_deadlines(const TaskSet& set, const SimulationTrace& trace)
{
    DeadlineReport report;
    report.all_met = true;
    const int task_count = set.size();

    std::vector<std::int64_t> quantized(static_cast<std::size_t>(task_count));
    std::vector<std::vector<Rat>> service(static_cast<std::size_t>(task_count));
    std::vector<std::vector<Rat>> last_end(static_cast<std::size_t>(task_count));
    for (int i = 0; i < task_count; ++i) {
        std::int64_t t = set.tasks()[static_cast<std::size_t>(i)].period;
        std::int64_t q = (t / trace.base_period) * trace.base_period;
        quantized[static_cast<std::size_t>(i)] = q;
        auto windows = static_cast<std::size_t>(trace.hyperperiod / q);
        service[static_cast<std::size_t>(i)].assign(windows, Rat(0));
        last_end[static_cast<std::size_t>(i)].assign(windows, Rat(0));
    }

    auto fail = [&](const std::string& why) {
        if (report.all_met) {
            report.all_met = false;
            report.violation = why;
        }
    };

    for (const TimedBlock& e : trace.events) {
        if (e.task_index < 0 || e.task_index >= task_count) {
            fail("event names unknown task " + std::to_string(e.task_index));
            continue;
        }
        auto i = static_cast<std::size_t>(e.task_index);
        std::int64_t q = quantized[i];
        Rat window_pos = e.start / q;
        BigInt window_idx = numerator(window_pos) / denominator(window_pos);
        auto m = static_cast<std::size_t>(window_idx.convert_to<std::int64_t>());
        if (m >= service[i].size())
            continue; // past the last complete window
        Rat window_end = Rat(static_cast<std::int64_t>(m) + 1) * q;
        if (e.end > window_end) {
            fail("task " + std::to_string(e.task_index) + " block ["
                 + detail::rat_str(e.start) + "," + detail::rat_str(e.end)
                 + ") crosses window boundary " + detail::rat_str(window_end));
            continue;
        }
        service[i][m] += e.end - e.start;
        last_end[i][m] = std::max(last_end[i][m], e.end);
    }

    report.min_slack.assign(static_cast<std::size_t>(task_count), Rat(0));
    for (int i = 0; i < task_count; ++i) {
        auto idx = static_cast<std::size_t>(i);
        const Rat wcet(set.tasks()[idx].wcet);
        bool first = true;
        for (std::size_t m = 0; m < service[idx].size(); ++m) {
            if (service[idx][m] != wcet)
                fail("task " + std::to_string(i) + " window "
                     + std::to_string(m) + ": service "
                     + detail::rat_str(service[idx][m]) + " != wcet "
                     + detail::rat_str(wcet));
            Rat window_end = Rat(static_cast<std::int64_t>(m) + 1) * quantized[idx];
            Rat slack = window_end - last_end[idx][m];
            if (first || slack < report.min_slack[idx]) {
                report.min_slack[idx] = slack;
                first = false;
            }
        }
    }
    return report;
}

/// Conditions 1-5 plus deadline accounting in one report.
inline VerificationReport verify_schedule(const TaskSet& set,
                                          const CyclicSchedule& sched,
                                          const SimulationTrace& trace)
{
    VerificationReport report = verify_conditions(sched, trace);
    DeadlineReport deadlines = check_deadlines(set, trace);
    report.deadlines_met = deadlines.all_met;
    report.min_slack = deadlines.min_slack;
    return report;
}

} // namespace cyclosched
