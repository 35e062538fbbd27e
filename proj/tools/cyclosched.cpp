// SPDX-License-Identifier: Apache-2.0
//
// cyclosched — command-line front end.
//
// Subcommands:
//   optimize   pick the best base period for a task set
//   table      print the objective for every candidate base period
//   schedule   synthesize the block timetable at a base period
//   simulate   replay a schedule document and verify it
//   bench      compare the two optimizers over generated instances
//
// Exit codes: 0 success, 1 no feasible base period (or verification
// failure), 2 invalid input, 3 internal consistency failure.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cyclosched/benchmark.hpp"
#include "cyclosched/json_io.hpp"
#include "cyclosched/optimizer.hpp"
#include "cyclosched/schedule.hpp"
#include "cyclosched/simulator.hpp"

namespace {

using namespace cyclosched;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError("cannot write " + path);
    out << text;
}

void write_json(const std::string& path, const ojson& j)
{
    write_file(path, j.dump(2) + "\n");
}

TaskSet load_input(const std::string& path)
{
    TaskSet set = load_task_set(read_file(path));
    if (set.overhead_bound_exceeded())
        std::cerr << "warning: switching overhead alone exceeds the idle budget "
                     "at the largest base period; the feasible range may be "
                     "small or empty\n";
    return set;
}

Rat parse_rat_arg(const std::string& s)
{
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        try {
            BigInt num(s.substr(0, slash));
            BigInt den(s.substr(slash + 1));
            if (den == 0)
                throw ParseError("zero denominator in \"" + s + "\"");
            return Rat(num, den);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("\"" + s + "\" is not a number");
        }
    }
    return parse_decimal(s);
}

void print_summary(const OptimizationResult& r)
{
    std::cout << "best base period: " << r.best_L << "\n"
              << "objective: " << to_decimal(r.best.total, 6) << " (growth "
              << to_decimal(r.best.growth, 6) << ", switching "
              << to_decimal(r.best.switching, 6) << ")\n"
              << "quantized utilization: "
              << to_decimal(r.best.quantized_utilization, 6) << "\n"
              << "steps: " << r.steps << " (method " << method_name(r.method)
              << ", pruned " << r.pruned << ", peak frontier " << r.max_frontier
              << ")\n";
}

int cmd_optimize(const std::string& input, const std::string& output, bool oracle,
                 bool check)
{
    TaskSet set = load_input(input);
    OptimizationResult result =
        optimize(set, oracle ? Method::BruteForce : Method::BranchAndBound);
    if (check) {
        OptimizationResult other =
            optimize(set, oracle ? Method::BranchAndBound : Method::BruteForce);
        if (other.best_L != result.best_L || other.best.total != result.best.total)
            throw OracleMismatch("optimizers disagree: " + std::to_string(result.best_L)
                                 + " vs " + std::to_string(other.best_L));
        std::cout << "check: both optimizers agree\n";
    }
    print_summary(result);
    if (!output.empty())
        write_json(output, result_to_json(result));
    return 0;
}

int cmd_table(const std::string& input, const std::string& output, bool as_json)
{
    TaskSet set = load_input(input);
    OptimizationResult result = optimize(set, Method::BruteForce);
    if (as_json || !output.empty()) {
        ojson j = result_to_json(result);
        if (!output.empty())
            write_json(output, j);
        if (as_json)
            std::cout << j.dump(2) << "\n";
        if (as_json)
            return 0;
    }

    std::ostringstream top, bottom;
    top << std::left << std::setw(14) << "base period";
    bottom << std::left << std::setw(14) << "objective";
    for (auto it = result.table.rbegin(); it != result.table.rend(); ++it) {
        std::string mark = it->feasible ? "" : "*";
        top << std::left << std::setw(10) << (std::to_string(it->base_period) + mark);
        bottom << std::left << std::setw(10) << (to_decimal(it->total, 4) + mark);
    }
    std::cout << top.str() << "\n" << bottom.str() << "\n";
    bool any_infeasible = false;
    for (const ObjectiveBreakdown& b : result.table)
        any_infeasible = any_infeasible || !b.feasible;
    if (any_infeasible)
        std::cout << "* infeasible (objective >= 1 or quantized utilization > 1)\n";
    std::cout << "best base period: " << result.best_L << " (objective "
              << to_decimal(result.best.total, 6) << ")\n";
    return 0;
}

int cmd_schedule(const std::string& input, const std::string& output,
                 std::optional<std::int64_t> base, bool gantt)
{
    TaskSet set = load_input(input);
    std::int64_t chosen =
        base ? *base : optimize(set, Method::BranchAndBound).best_L;
    CyclicSchedule sched = build_schedule(set, chosen);
    std::cout << "base period: " << sched.base_period
              << (base ? "" : " (optimized)") << "\n"
              << "hyperperiod: " << sched.hyperperiod << " (" << sched.cycle_count
              << " cycles)\n"
              << "free interval per cycle: " << to_decimal(sched.free_interval, 6)
              << "\n";
    if (gantt)
        std::cout << render_gantt(sched);
    if (!output.empty())
        write_json(output, schedule_to_json(sched));
    return 0;
}

int cmd_simulate(const std::string& input, const std::string& output)
{
    CyclicSchedule sched = load_schedule(read_file(input));
    TaskSet set = validate_task_set(sched.tasks, sched.overhead);
    SimulationTrace trace = simulate(sched);
    VerificationReport report = verify_schedule(set, sched, trace);

    static const char* names[5] = {"same blocks every cycle",
                                   "cycle-invariant start offsets",
                                   "starts advance by the base period",
                                   "no overlapping blocks",
                                   "fits inside the hyperperiod"};
    for (int i = 0; i < 5; ++i) {
        const ConditionResult& c = report.conditions[static_cast<std::size_t>(i)];
        std::cout << "condition " << (i + 1) << " (" << names[i] << "): "
                  << (c.pass ? "pass" : "FAIL") << "\n";
        if (!c.pass)
            std::cout << "  " << c.counterexample << "\n";
    }
    std::cout << "deadlines: " << (report.deadlines_met ? "pass" : "FAIL")
              << " (worst slack " << to_decimal(report.worst_slack(), 6) << ")\n"
              << "observed utilization: "
              << to_decimal(trace.utilization_observed, 6) << "\n"
              << "verdict: " << (report.pass() ? "pass" : "FAIL") << "\n";
    if (!output.empty())
        write_json(output, verification_to_json(sched, trace, report));
    return report.pass() ? 0 : 1;
}

int cmd_bench(GeneratorConfig cfg, const std::string& output, const std::string& csv)
{
    if (const char* env = std::getenv("CYCLOSCHED_SEED")) {
        std::string s(env);
        try {
            std::size_t pos = 0;
            cfg.seed = std::stoull(s, &pos);
            if (pos != s.size())
                throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw ParseError("CYCLOSCHED_SEED: \"" + s + "\" is not an integer");
        }
    }
    EfficiencyReport report = efficiency_experiment(cfg);
    std::cout << "generator: " << gen_kind_name(cfg.kind) << ", " << cfg.runs
              << " runs, " << cfg.tasks << " tasks, seed " << cfg.seed << "\n"
              << "mean efficiency: " << to_decimal(report.mean_efficiency, 4)
              << " (step savings of branch and bound vs exhaustive)\n";
    if (report.has_coprime_stat)
        std::cout << "coprime period pairs: "
                  << to_decimal(report.coprime_pair_fraction, 4) << "\n";
    if (!output.empty())
        write_json(output, report_to_json(report));
    if (!csv.empty())
        write_file(csv, report_csv(report));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"schedule optimization for hard-real-time cyclic executives"};
    app.require_subcommand(1);

    std::string input, output, csv;
    bool oracle = false, check = false, as_json = false, gantt = false;
    std::optional<std::int64_t> base;
    GeneratorConfig cfg;
    std::string kind_name = "random", overhead_arg = "0.2";

    CLI::App* opt = app.add_subcommand("optimize", "pick the best base period");
    opt->add_option("-i,--input", input, "task-set document")->required();
    opt->add_option("-o,--output", output, "write the result as JSON");
    opt->add_flag("--oracle", oracle, "use exhaustive search instead");
    opt->add_flag("--check", check, "run both optimizers and compare");

    CLI::App* tab = app.add_subcommand("table", "objective for every base period");
    tab->add_option("-i,--input", input, "task-set document")->required();
    tab->add_option("-o,--output", output, "write the table as JSON");
    tab->add_flag("--json", as_json, "print JSON instead of text");

    CLI::App* sch = app.add_subcommand("schedule", "synthesize the block timetable");
    sch->add_option("-i,--input", input, "task-set document")->required();
    sch->add_option("-o,--output", output, "write the schedule as JSON");
    sch->add_option("-L,--base-period", base,
                    "base period (default: optimized choice)");
    sch->add_flag("--gantt", gantt, "print the cycle-by-cycle timetable");

    CLI::App* sim = app.add_subcommand("simulate", "replay and verify a schedule");
    sim->add_option("-i,--input", input, "schedule document")->required();
    sim->add_option("-o,--output", output, "write the verification report as JSON");

    CLI::App* ben = app.add_subcommand("bench", "compare optimizers on generated sets");
    ben->add_option("--kind", kind_name, "random | prime | fibonacci")
        ->check(CLI::IsMember({"random", "prime", "fibonacci"}));
    ben->add_option("--runs", cfg.runs, "instances to generate");
    ben->add_option("--tasks", cfg.tasks, "tasks per instance");
    ben->add_option("--period-min", cfg.period_min, "smallest period (random)");
    ben->add_option("--period-max", cfg.period_max, "largest period (random)");
    ben->add_option("--start-index", cfg.start_index,
                    "1-based series start (prime/fibonacci)");
    ben->add_option("--seed", cfg.seed,
                    "base seed (CYCLOSCHED_SEED overrides)");
    ben->add_option("--overhead", overhead_arg, "per-switch cost");
    ben->add_option("-o,--output", output, "write the report as JSON");
    ben->add_option("--csv", csv, "write one CSV row per run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(opt))
            return cmd_optimize(input, output, oracle, check);
        if (app.got_subcommand(tab))
            return cmd_table(input, output, as_json);
        if (app.got_subcommand(sch))
            return cmd_schedule(input, output, base, gantt);
        if (app.got_subcommand(sim))
            return cmd_simulate(input, output);
        if (app.got_subcommand(ben)) {
            if (kind_name == "prime")
                cfg.kind = GenKind::Prime;
            else if (kind_name == "fibonacci")
                cfg.kind = GenKind::Fibonacci;
            if (cfg.kind == GenKind::Fibonacci && !ben->count("--start-index"))
                cfg.start_index = 3;
            cfg.overhead = parse_rat_arg(overhead_arg);
            return cmd_bench(cfg, output, csv);
        }
    } catch (const NoFeasibleBasePeriod& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InfeasibleBasePeriod& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const OracleMismatch& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2; // unreachable: require_subcommand(1)
}
