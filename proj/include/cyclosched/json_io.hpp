// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclosched/benchmark.hpp"
#include "cyclosched/errors.hpp"
#include "cyclosched/objective.hpp"
#include "cyclosched/optimizer.hpp"
#include "cyclosched/rational.hpp"
#include "cyclosched/schedule.hpp"
#include "cyclosched/simulator.hpp"
#include "cyclosched/task_model.hpp"

namespace cyclosched {

using ojson = nlohmann::ordered_json;

namespace detail {

inline ojson bigint_to_json(const BigInt& v)
{
    // Plain integer while it fits; decimal string beyond that so no
    // JSON reader ever sees a lossy double.
    if (v >= std::numeric_limits<std::int64_t>::min()
        && v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return v.str();
}

inline void expect_keys(const ojson& j, std::initializer_list<const char*> allowed,
                        const std::string& path)
{
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw ParseError(path + ": unknown field \"" + item.key() + "\"");
    }
}

inline const ojson& expect_field(const ojson& j, const char* key, const std::string& path)
{
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(path + ": missing field \"" + key + "\"");
    return *it;
}

inline std::int64_t int_from_json(const ojson& j, const std::string& path)
{
    if (!j.is_number_integer())
        throw ParseError(path + ": expected an integer");
    return j.get<std::int64_t>();
}

inline BigInt bigint_from_json(const ojson& j, const std::string& path)
{
    if (j.is_number_integer())
        return BigInt(j.get<std::int64_t>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        try {
            return BigInt(s);
        } catch (const std::exception&) {
            throw ParseError(path + ": \"" + s + "\" is not an integer");
        }
    }
    throw ParseError(path + ": expected an integer or integer string");
}

} // namespace detail

inline ojson rational_to_json(const Rat& r)
{
    ojson j = ojson::object();
    j["num"] = detail::bigint_to_json(numerator(r));
    j["den"] = detail::bigint_to_json(denominator(r));
    j["decimal"] = to_decimal(r, 6);
    return j;
}

/// Accepts an integer, a decimal or "n/d" string, or a {num, den}
/// object (a stray "decimal" member from our own output is ignored).
/// Bare floating-point numbers are rejected: they cannot round-trip
/// exactly, and exactness is the point.
inline Rat rational_from_json(const ojson& j, const std::string& path)
{
    if (j.is_number_integer())
        return Rat(BigInt(j.get<std::int64_t>()));
    if (j.is_number_float())
        throw ParseError(path + ": floating-point numbers are not exact; "
                                "use a decimal string or {num, den}");
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        auto slash = s.find('/');
        try {
            if (slash != std::string::npos) {
                BigInt num(s.substr(0, slash));
                BigInt den(s.substr(slash + 1));
                if (den == 0)
                    throw ParseError(path + ": zero denominator");
                return Rat(num, den);
            }
            return parse_decimal(s);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(path + ": \"" + s + "\" is not a number");
        }
    }
    if (j.is_object()) {
        detail::expect_keys(j, {"num", "den", "decimal"}, path);
        BigInt num = detail::bigint_from_json(detail::expect_field(j, "num", path),
                                              path + ".num");
        BigInt den = detail::bigint_from_json(detail::expect_field(j, "den", path),
                                              path + ".den");
        if (den == 0)
            throw ParseError(path + ": zero denominator");
        return Rat(num, den);
    }
    throw ParseError(path + ": expected a number");
}

inline ojson task_set_to_json(const TaskSet& set)
{
    ojson j = ojson::object();
    j["tasks"] = ojson::array();
    for (const Task& t : set.tasks())
        j["tasks"].push_back({{"wcet", t.wcet}, {"period", t.period}});
    j["overhead"] = rational_to_json(set.overhead());
    return j;
}

inline TaskSet task_set_from_json(const ojson& j)
{
    if (!j.is_object())
        throw ParseError("top level: expected an object");
    detail::expect_keys(j, {"tasks", "overhead"}, "top level");
    const ojson& jt = detail::expect_field(j, "tasks", "top level");
    if (!jt.is_array())
        throw ParseError("tasks: expected an array");
    std::vector<Task> tasks;
    tasks.reserve(jt.size());
    for (std::size_t i = 0; i < jt.size(); ++i) {
        const std::string path = "tasks[" + std::to_string(i) + "]";
        const ojson& item = jt[i];
        if (!item.is_object())
            throw ParseError(path + ": expected an object");
        detail::expect_keys(item, {"wcet", "period"}, path);
        Task t;
        t.wcet = detail::int_from_json(detail::expect_field(item, "wcet", path),
                                       path + ".wcet");
        t.period = detail::int_from_json(detail::expect_field(item, "period", path),
                                         path + ".period");
        tasks.push_back(t);
    }
    Rat overhead = 0;
    if (auto it = j.find("overhead"); it != j.end())
        overhead = rational_from_json(*it, "overhead");
    if (overhead < 0)
        throw ParseError("overhead: must be nonnegative");
    return validate_task_set(std::move(tasks), overhead);
}

/// Parses a task-set document, mapping syntax errors to line numbers.
inline TaskSet load_task_set(const std::string& text)
{
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
            if (text[i] == '\n')
                ++line;
        throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    return task_set_from_json(j);
}

inline ojson breakdown_to_json(const ObjectiveBreakdown& b)
{
    ojson j = ojson::object();
    j["base_period"] = b.base_period;
    j["feasible"] = b.feasible;
    j["growth"] = rational_to_json(b.growth);
    j["switching"] = rational_to_json(b.switching);
    j["total"] = rational_to_json(b.total);
    j["quantized_utilization"] = rational_to_json(b.quantized_utilization);
    j["quantized_periods"] = b.quantized_periods;
    j["blocks_per_period"] = b.blocks_per_period;
    return j;
}

inline ojson result_to_json(const OptimizationResult& r, bool include_table = true)
{
    ojson j = ojson::object();
    j["method"] = method_name(r.method);
    j["tie_rule"] = r.tie_rule;
    j["best_base_period"] = r.best_L;
    j["objective"] = breakdown_to_json(r.best);
    j["steps"] = r.steps;
    j["pruned"] = r.pruned;
    j["max_frontier"] = r.max_frontier;
    if (include_table) {
        j["table"] = ojson::array();
        for (const ObjectiveBreakdown& b : r.table)
            j["table"].push_back(breakdown_to_json(b));
    }
    return j;
}

inline ojson schedule_to_json(const CyclicSchedule& s)
{
    ojson j = ojson::object();
    j["base_period"] = s.base_period;
    j["hyperperiod"] = s.hyperperiod;
    j["cycle_count"] = s.cycle_count;
    j["integer_blocks"] = s.integer_blocks;
    j["free_interval"] = rational_to_json(s.free_interval);
    j["tasks"] = ojson::array();
    for (const Task& t : s.tasks)
        j["tasks"].push_back({{"wcet", t.wcet}, {"period", t.period}});
    j["overhead"] = rational_to_json(s.overhead);
    j["plans"] = ojson::array();
    for (const BlockPlan& p : s.plans)
        j["plans"].push_back({{"task", p.task_index},
                              {"blocks_per_period", p.blocks_per_period},
                              {"slice", rational_to_json(p.slice)},
                              {"block_length", rational_to_json(p.block_len)}});
    j["cycle"] = ojson::array();
    for (const CycleSlot& c : s.cycle_order)
        j["cycle"].push_back({{"task", c.task_index},
                              {"start", rational_to_json(c.start)},
                              {"end", rational_to_json(c.end)}});
    return j;
}

/// Rebuilds a schedule from its document. The task set and base period
/// are authoritative; every derived field present in the document is
/// recomputed and cross-checked, so a hand-edited inconsistent file is
/// rejected rather than trusted.
inline CyclicSchedule schedule_from_json(const ojson& j)
{
    if (!j.is_object())
        throw ParseError("top level: expected an object");
    detail::expect_keys(j,
                        {"base_period", "hyperperiod", "cycle_count", "integer_blocks",
                         "free_interval", "tasks", "overhead", "plans", "cycle"},
                        "top level");

    ojson jset = ojson::object();
    jset["tasks"] = detail::expect_field(j, "tasks", "top level");
    if (auto it = j.find("overhead"); it != j.end())
        jset["overhead"] = *it;
    TaskSet set = task_set_from_json(jset);

    std::int64_t base =
        detail::int_from_json(detail::expect_field(j, "base_period", "top level"),
                              "base_period");
    CyclicSchedule rebuilt = build_schedule(set, base);

    auto check = [&](const char* field, bool ok) {
        if (!ok)
            throw ParseError(std::string(field)
                             + ": inconsistent with the task set and base period");
    };
    if (auto it = j.find("hyperperiod"); it != j.end())
        check("hyperperiod",
              detail::int_from_json(*it, "hyperperiod") == rebuilt.hyperperiod);
    if (auto it = j.find("cycle_count"); it != j.end())
        check("cycle_count",
              detail::int_from_json(*it, "cycle_count") == rebuilt.cycle_count);
    if (auto it = j.find("free_interval"); it != j.end())
        check("free_interval",
              rational_from_json(*it, "free_interval") == rebuilt.free_interval);
    if (auto it = j.find("cycle"); it != j.end()) {
        if (!it->is_array() || it->size() != rebuilt.cycle_order.size())
            throw ParseError("cycle: inconsistent with the task set and base period");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string path = "cycle[" + std::to_string(i) + "]";
            const ojson& slot = (*it)[i];
            if (!slot.is_object())
                throw ParseError(path + ": expected an object");
            detail::expect_keys(slot, {"task", "start", "end"}, path);
            const CycleSlot& want = rebuilt.cycle_order[i];
            check("cycle",
                  detail::int_from_json(detail::expect_field(slot, "task", path),
                                        path + ".task")
                          == want.task_index
                      && rational_from_json(detail::expect_field(slot, "start", path),
                                            path + ".start")
                             == want.start
                      && rational_from_json(detail::expect_field(slot, "end", path),
                                            path + ".end")
                             == want.end);
        }
    }
    return rebuilt;
}

inline CyclicSchedule load_schedule(const std::string& text)
{
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
            if (text[i] == '\n')
                ++line;
        throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    return schedule_from_json(j);
}

inline ojson verification_to_json(const CyclicSchedule& sched,
                                  const SimulationTrace& trace,
                                  const VerificationReport& report)
{
    static const char* names[5] = {"blocks-per-cycle", "cycle-invariant-offsets",
                                   "stride-equals-base-period", "no-overlap",
                                   "fits-in-hyperperiod"};
    ojson j = ojson::object();
    j["base_period"] = sched.base_period;
    j["hyperperiod"] = sched.hyperperiod;
    j["cycle_count"] = sched.cycle_count;
    j["conditions"] = ojson::array();
    for (int i = 0; i < 5; ++i) {
        const ConditionResult& c = report.conditions[static_cast<std::size_t>(i)];
        ojson jc = ojson::object();
        jc["id"] = i + 1;
        jc["name"] = names[i];
        jc["pass"] = c.pass;
        if (!c.pass)
            jc["counterexample"] = c.counterexample;
        j["conditions"].push_back(jc);
    }
    {
        ojson jc = ojson::object();
        jc["pass"] = report.per_cycle_horizon.pass;
        if (!report.per_cycle_horizon.pass)
            jc["counterexample"] = report.per_cycle_horizon.counterexample;
        j["per_cycle_horizon"] = jc;
    }
    j["deadlines_met"] = report.deadlines_met;
    j["min_slack"] = rational_to_json(report.worst_slack());
    j["utilization_observed"] = rational_to_json(trace.utilization_observed);
    j["pass"] = report.pass();
    return j;
}

inline ojson report_to_json(const EfficiencyReport& r, bool include_runs = true)
{
    ojson j = ojson::object();
    ojson g = ojson::object();
    g["kind"] = gen_kind_name(r.config.kind);
    g["tasks"] = r.config.tasks;
    if (r.config.kind == GenKind::Random) {
        g["period_min"] = r.config.period_min;
        g["period_max"] = r.config.period_max;
    } else {
        g["start_index"] = r.config.start_index;
    }
    g["seed"] = r.config.seed;
    g["runs"] = r.config.runs;
    g["overhead"] = rational_to_json(r.config.overhead);
    j["generator"] = g;
    j["wcet_policy"] = r.wcet_policy;
    j["mean_efficiency"] = rational_to_json(r.mean_efficiency);
    j["coprime_pair_fraction"] =
        r.has_coprime_stat ? rational_to_json(r.coprime_pair_fraction) : ojson(nullptr);
    j["mismatches"] = r.mismatches;
    if (include_runs) {
        j["runs"] = ojson::array();
        for (const RunRecord& rec : r.runs) {
            ojson jr = ojson::object();
            jr["seed"] = rec.seed;
            jr["digest"] = rec.digest;
            jr["M"] = rec.tasks;
            jr["T1"] = rec.t1;
            jr["best_L"] = rec.best_L;
            jr["feasible"] = rec.feasible;
            jr["steps_bf"] = rec.steps_bf;
            jr["steps_bnb"] = rec.steps_bnb;
            jr["efficiency"] = rational_to_json(rec.efficiency);
            j["runs"].push_back(jr);
        }
    }
    return j;
}

} // namespace cyclosched
