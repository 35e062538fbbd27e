// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cyclosched/errors.hpp"
#include "cyclosched/optimizer.hpp"
#include "cyclosched/rational.hpp"
#include "cyclosched/task_model.hpp"

namespace cyclosched {

enum class GenKind { Random, Prime, Fibonacci };

inline const char* gen_kind_name(GenKind k)
{
    switch (k) {
    case GenKind::Random: return "random";
    case GenKind::Prime: return "prime";
    default: return "fibonacci";
    }
}

struct GeneratorConfig {
    GenKind kind = GenKind::Random;
    int tasks = 4;                  // M
    std::int64_t period_min = 5;    // random kind
    std::int64_t period_max = 200;  // random kind
    int start_index = 2;            // prime/fibonacci kinds, 1-based
    std::uint64_t seed = 1;
    int runs = 100;
    Rat overhead = Rat(1, 5);       // per-switch cost p
};

struct RunRecord {
    std::uint64_t seed = 0;     // per-run derived seed
    std::string digest;         // instance fingerprint
    int tasks = 0;              // M
    std::int64_t t1 = 0;
    std::int64_t best_L = 0;    // 0 when no feasible base period exists
    std::uint64_t steps_bf = 0;
    std::uint64_t steps_bnb = 0;
    Rat efficiency;             // 1 - steps_bnb/steps_bf
    bool feasible = true;
};

struct EfficiencyReport {
    GeneratorConfig config;
    std::vector<RunRecord> runs;
    Rat mean_efficiency;
    Rat coprime_pair_fraction; // meaningful only when has_coprime_stat
    bool has_coprime_stat = false;
    int mismatches = 0; // kept for the record; a mismatch aborts instead
    std::string wcet_policy = "uniform [1, max(1, floor(T/M))], redrawn until U <= 1";
};

namespace detail {

// splitmix64 step; decorrelates per-run seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform draw in [lo, hi] by masked rejection; avoids the
// implementation-defined layout of std::uniform_int_distribution so
// seeded runs reproduce everywhere.
inline std::int64_t bounded(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi)
{
    if (lo == hi)
        return lo;
    auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t mask = 1;
    while (mask < range - 1)
        mask = (mask << 1) | 1;
    for (;;) {
        std::uint64_t v = rng() & mask;
        if (v < range)
            return lo + static_cast<std::int64_t>(v);
    }
}

inline bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

inline std::int64_t nth_prime(int n) // 1-based: nth_prime(1) == 2
{
    std::int64_t candidate = 1;
    for (int found = 0; found < n;) {
        ++candidate;
        if (is_prime(candidate))
            ++found;
    }
    return candidate;
}

inline std::int64_t fibonacci(int n) // 1-based: 1, 1, 2, 3, 5, ...
{
    std::int64_t a = 1, b = 1;
    for (int i = 3; i <= n; ++i) {
        std::int64_t c = a + b;
        a = b;
        b = c;
    }
    return b;
}

inline std::string digest_hex(const std::vector<Task>& tasks, const Rat& overhead)
{
    std::string bytes;
    for (const Task& t : tasks)
        bytes += std::to_string(t.wcet) + "," + std::to_string(t.period) + ";";
    bytes += numerator(overhead).str() + "/" + denominator(overhead).str();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* hexdig = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hexdig[h & 0xf];
        h >>= 4;
    }
    return out;
}

// Draws wcets for fixed periods, redrawing until utilization fits.
// The per-task bound floor(T/M) makes U <= 1 automatic whenever every
// period is at least M; the redraw covers the clamped small-period case.
inline TaskSet finish_instance(std::mt19937_64& rng,
                               const std::vector<std::int64_t>& periods,
                               const Rat& overhead)
{
    const int m = static_cast<int>(periods.size());
    Rat min_u = 0;
    for (std::int64_t t : periods)
        min_u += Rat(1, t);
    if (min_u > 1)
        throw RangeTooSmall("periods admit no feasible wcets (sum 1/T > 1)");

    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Task> tasks;
        tasks.reserve(periods.size());
        for (std::int64_t t : periods) {
            std::int64_t hi = std::max<std::int64_t>(1, t / m);
            tasks.push_back({bounded(rng, 1, hi), t});
        }
        if (utilization_of(tasks) <= 1)
            return validate_task_set(std::move(tasks), overhead);
    }
    throw RangeTooSmall("could not draw a feasible wcet vector");
}

} // namespace detail

/// M distinct periods uniform in [period_min, period_max], wcets
/// uniform in [1, max(1, floor(T/M))]. Deterministic for a given seed.
inline TaskSet gen_random_instance(const GeneratorConfig& cfg)
{
    if (cfg.tasks < 1 || cfg.period_min < 1 || cfg.period_max < cfg.period_min)
        throw RangeTooSmall("invalid generator range");
    if (cfg.period_max - cfg.period_min + 1 < cfg.tasks)
        throw RangeTooSmall("fewer than M distinct periods available");

    std::mt19937_64 rng(cfg.seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::set<std::int64_t> chosen;
        while (static_cast<int>(chosen.size()) < cfg.tasks)
            chosen.insert(detail::bounded(rng, cfg.period_min, cfg.period_max));
        std::vector<std::int64_t> periods(chosen.begin(), chosen.end());
        Rat min_u = 0;
        for (std::int64_t t : periods)
            min_u += Rat(1, t);
        if (min_u > 1)
            continue; // only possible when periods below M were drawn
        return detail::finish_instance(rng, periods, cfg.overhead);
    }
    throw RangeTooSmall("range does not admit a feasible instance");
}

/// Periods are M consecutive primes starting at the start_index-th prime.
inline TaskSet gen_prime_instance(const GeneratorConfig& cfg)
{
    if (cfg.tasks < 1 || cfg.start_index < 1)
        throw RangeTooSmall("invalid prime generator config");
    std::vector<std::int64_t> periods;
    std::int64_t p = detail::nth_prime(cfg.start_index);
    for (int i = 0; i < cfg.tasks; ++i) {
        periods.push_back(p);
        do
            ++p;
        while (!detail::is_prime(p));
    }
    std::mt19937_64 rng(cfg.seed);
    return detail::finish_instance(rng, periods, cfg.overhead);
}

/// Periods are M consecutive Fibonacci numbers from F(start_index);
/// start_index >= 3 keeps them distinct and >= 2.
inline TaskSet gen_fibonacci_instance(const GeneratorConfig& cfg)
{
    if (cfg.tasks < 1 || cfg.start_index < 3)
        throw RangeTooSmall("fibonacci start_index must be >= 3");
    if (cfg.start_index + cfg.tasks - 1 > 90)
        throw RangeTooSmall("fibonacci periods exceed 64-bit range");
    std::vector<std::int64_t> periods;
    for (int i = 0; i < cfg.tasks; ++i)
        periods.push_back(detail::fibonacci(cfg.start_index + i));
    std::mt19937_64 rng(cfg.seed);
    return detail::finish_instance(rng, periods, cfg.overhead);
}

inline TaskSet generate_instance(const GeneratorConfig& cfg)
{
    switch (cfg.kind) {
    case GenKind::Random: return gen_random_instance(cfg);
    case GenKind::Prime: return gen_prime_instance(cfg);
    default: return gen_fibonacci_instance(cfg);
    }
}

/// Fraction of coprime pairs among `samples` independent uniform pairs
/// from [lo, hi]. Number-theoretic expectation is 6/pi^2 ~ 0.6079.
inline Rat coprime_fraction_sample(std::int64_t lo, std::int64_t hi, int samples,
                                   std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::int64_t coprime = 0;
    for (int i = 0; i < samples; ++i) {
        std::int64_t a = detail::bounded(rng, lo, hi);
        std::int64_t b = detail::bounded(rng, lo, hi);
        if (std::gcd(a, b) == 1)
            ++coprime;
    }
    return Rat(coprime, samples);
}

/// Runs both optimizers on one fixed instance and reports the head-to-head
/// outcome as a single record. Throws OracleMismatch if they disagree on
/// feasibility, the best base period, or its objective value. The record's
/// seed field is left 0 because the instance was supplied, not generated.
inline RunRecord run_comparison(const TaskSet& instance)
{
    RunRecord rec;
    rec.digest = detail::digest_hex(instance.tasks(), instance.overhead());
    rec.tasks = instance.size();
    rec.t1 = instance.min_period();
    rec.steps_bf = count_steps(Method::BruteForce, instance);

    SearchTrace trace;
    bool oracle_feasible = true;
    OptimizationResult oracle;
    try {
        oracle = brute_force_optimize(instance);
    } catch (const NoFeasibleBasePeriod&) {
        oracle_feasible = false;
    }
    bool bnb_feasible = true;
    OptimizationResult bnb;
    try {
        bnb = bnb_optimize(instance, &trace);
    } catch (const NoFeasibleBasePeriod&) {
        bnb_feasible = false;
    }

    if (oracle_feasible != bnb_feasible
        || (oracle_feasible
            && (oracle.best_L != bnb.best_L || oracle.best.total != bnb.best.total)))
        throw OracleMismatch("optimizers disagree on instance " + rec.digest);

    rec.feasible = oracle_feasible;
    rec.best_L = oracle_feasible ? oracle.best_L : 0;
    rec.steps_bnb = oracle_feasible ? bnb.steps : trace.steps;
    rec.efficiency = 1 - Rat(rec.steps_bnb) / Rat(rec.steps_bf);
    return rec;
}

/// Runs both optimizers over `runs` generated instances, checks they
/// agree exactly, and aggregates the step-saving statistics. For the
/// prime and Fibonacci kinds the start index walks forward per run
/// (skipping starts whose periods cannot fit any wcet vector) so runs
/// differ in both periods and wcets. Fully reproducible from the seed.
inline EfficiencyReport efficiency_experiment(const GeneratorConfig& cfg)
{
    if (cfg.runs < 1)
        throw RangeTooSmall("experiment needs at least one run");

    EfficiencyReport report;
    report.config = cfg;
    Rat efficiency_sum = 0;
    std::int64_t coprime_pairs = 0;
    std::int64_t total_pairs = 0;

    for (int r = 0; r < cfg.runs; ++r) {
        GeneratorConfig run_cfg = cfg;
        run_cfg.seed = detail::mix_seed(cfg.seed, static_cast<std::uint64_t>(r));
        if (cfg.kind == GenKind::Prime)
            run_cfg.start_index = cfg.start_index + (r % 64);
        else if (cfg.kind == GenKind::Fibonacci)
            run_cfg.start_index = std::max(cfg.start_index, 3) + (r % 12);

        TaskSet instance = [&] {
            for (;;) {
                try {
                    return generate_instance(run_cfg);
                } catch (const RangeTooSmall&) {
                    if (cfg.kind == GenKind::Random)
                        throw;
                    ++run_cfg.start_index; // small primes/fibs can be too dense
                }
            }
        }();

        RunRecord rec = [&] {
            try {
                return run_comparison(instance);
            } catch (const OracleMismatch& e) {
                throw OracleMismatch(std::string(e.what()) + " (seed "
                                     + std::to_string(run_cfg.seed) + ")");
            }
        }();
        rec.seed = run_cfg.seed;
        efficiency_sum += rec.efficiency;

        if (cfg.kind == GenKind::Random) {
            const auto& tasks = instance.tasks();
            for (std::size_t i = 0; i < tasks.size(); ++i)
                for (std::size_t j = i + 1; j < tasks.size(); ++j) {
                    ++total_pairs;
                    if (std::gcd(tasks[i].period, tasks[j].period) == 1)
                        ++coprime_pairs;
                }
        }
        report.runs.push_back(std::move(rec));
    }

    report.mean_efficiency = efficiency_sum / cfg.runs;
    if (total_pairs > 0) {
        report.coprime_pair_fraction = Rat(coprime_pairs, total_pairs);
        report.has_coprime_stat = true;
    }
    return report;
}

/// CSV view: one row per run.
inline std::string report_csv(const EfficiencyReport& report)
{
    std::string out = "seed,M,T1,best_L,steps_bf,steps_bnb,efficiency\n";
    for (const RunRecord& r : report.runs) {
        out += std::to_string(r.seed) + "," + std::to_string(r.tasks) + ","
               + std::to_string(r.t1) + "," + std::to_string(r.best_L) + ","
               + std::to_string(r.steps_bf) + "," + std::to_string(r.steps_bnb)
               + "," + to_decimal(r.efficiency, 6) + "\n";
    }
    return out;
}

} // namespace cyclosched
