// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "cyclosched/benchmark.hpp"

using namespace cyclosched;

TEST_CASE("seed mixing separates nearby salts")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t salt = 0; salt < 256; ++salt)
        seen.insert(detail::mix_seed(12345, salt));
    CHECK(seen.size() == 256);
}

TEST_CASE("bounded draws stay in range and reach both endpoints")
{
    std::mt19937_64 rng(7);
    bool lo_hit = false, hi_hit = false;
    for (int i = 0; i < 2000; ++i) {
        std::int64_t v = detail::bounded(rng, 3, 9);
        CHECK(v >= 3);
        CHECK(v <= 9);
        lo_hit = lo_hit || v == 3;
        hi_hit = hi_hit || v == 9;
    }
    CHECK(lo_hit);
    CHECK(hi_hit);
    CHECK(detail::bounded(rng, 4, 4) == 4);
}

TEST_CASE("prime and fibonacci series")
{
    CHECK(detail::nth_prime(1) == 2);
    CHECK(detail::nth_prime(5) == 11);
    CHECK(detail::nth_prime(10) == 29);
    CHECK(detail::fibonacci(1) == 1);
    CHECK(detail::fibonacci(2) == 1);
    CHECK(detail::fibonacci(7) == 13);
    CHECK(detail::fibonacci(16) == 987);
}

TEST_CASE("random instances are valid and reproducible")
{
    GeneratorConfig cfg;
    cfg.tasks = 5;
    cfg.period_min = 5;
    cfg.period_max = 40;
    cfg.seed = 99;
    TaskSet a = gen_random_instance(cfg);
    TaskSet b = gen_random_instance(cfg);
    CHECK(a == b);

    cfg.seed = 100;
    TaskSet c = gen_random_instance(cfg);
    CHECK_FALSE(a == c);

    REQUIRE(a.size() == 5);
    std::set<std::int64_t> periods;
    for (const Task& t : a.tasks()) {
        CHECK(t.period >= 5);
        CHECK(t.period <= 40);
        CHECK(t.wcet >= 1);
        CHECK(t.wcet <= std::max<std::int64_t>(1, t.period / 5));
        periods.insert(t.period);
    }
    CHECK(periods.size() == 5); // distinct
    CHECK(baseline_utilization(a) <= 1);
}

TEST_CASE("series-based instances use consecutive primes and fibonacci numbers")
{
    GeneratorConfig cfg;
    cfg.kind = GenKind::Prime;
    cfg.tasks = 4;
    cfg.start_index = 5;
    cfg.seed = 3;
    TaskSet primes = gen_prime_instance(cfg);
    std::vector<std::int64_t> got;
    for (const Task& t : primes.tasks())
        got.push_back(t.period);
    CHECK(got == std::vector<std::int64_t>{11, 13, 17, 19});

    cfg.kind = GenKind::Fibonacci;
    cfg.start_index = 5;
    TaskSet fib = gen_fibonacci_instance(cfg);
    got.clear();
    for (const Task& t : fib.tasks())
        got.push_back(t.period);
    CHECK(got == std::vector<std::int64_t>{5, 8, 13, 21});
    CHECK(baseline_utilization(fib) <= 1);
}

TEST_CASE("prime periods can start low when utilization allows")
{
    GeneratorConfig cfg;
    cfg.kind = GenKind::Prime;
    cfg.tasks = 4;
    cfg.start_index = 2; // 1/3+1/5+1/7+1/11 < 1
    cfg.seed = 11;
    TaskSet primes = gen_prime_instance(cfg);
    std::vector<std::int64_t> got;
    for (const Task& t : primes.tasks())
        got.push_back(t.period);
    CHECK(got == std::vector<std::int64_t>{3, 5, 7, 11});

    cfg.tasks = 2;
    cfg.start_index = 1; // 1/2+1/3 < 1
    TaskSet small = gen_prime_instance(cfg);
    got.clear();
    for (const Task& t : small.tasks())
        got.push_back(t.period);
    CHECK(got == std::vector<std::int64_t>{2, 3});
}

TEST_CASE("prime instances have pairwise coprime periods")
{
    GeneratorConfig cfg;
    cfg.kind = GenKind::Prime;
    cfg.tasks = 5;
    for (int start = 2; start <= 20; ++start) {
        cfg.start_index = start;
        cfg.seed = static_cast<std::uint64_t>(start);
        TaskSet set = gen_prime_instance(cfg);
        const auto& tasks = set.tasks();
        for (std::size_t i = 0; i < tasks.size(); ++i)
            for (std::size_t j = i + 1; j < tasks.size(); ++j)
                CHECK(std::gcd(tasks[i].period, tasks[j].period) == 1);
    }
}

TEST_CASE("impossible generator ranges are rejected")
{
    GeneratorConfig cfg;
    cfg.tasks = 5;
    cfg.period_min = 10;
    cfg.period_max = 12; // only three distinct periods available
    CHECK_THROWS_AS(gen_random_instance(cfg), RangeTooSmall);

    GeneratorConfig prime;
    prime.kind = GenKind::Prime;
    prime.tasks = 5;
    prime.start_index = 1; // 1/2+1/3+1/5+1/7+1/11 > 1
    CHECK_THROWS_AS(gen_prime_instance(prime), RangeTooSmall);

    GeneratorConfig fib;
    fib.kind = GenKind::Fibonacci;
    fib.tasks = 3;
    fib.start_index = 3; // 1/2+1/3+1/5 > 1
    CHECK_THROWS_AS(gen_fibonacci_instance(fib), RangeTooSmall);
    fib.start_index = 2; // F(2) = 1 would repeat F(1)
    CHECK_THROWS_AS(gen_fibonacci_instance(fib), RangeTooSmall);
}

TEST_CASE("the experiment is deterministic and internally consistent")
{
    GeneratorConfig cfg;
    cfg.tasks = 4;
    cfg.period_min = 5;
    cfg.period_max = 50;
    cfg.runs = 30;
    cfg.seed = 2024;
    EfficiencyReport a = efficiency_experiment(cfg);
    EfficiencyReport b = efficiency_experiment(cfg);
    REQUIRE(a.runs.size() == 30);
    REQUIRE(b.runs.size() == 30);
    CHECK(report_csv(a) == report_csv(b));

    Rat sum = 0;
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        const RunRecord& r = a.runs[i];
        CHECK(r.digest == b.runs[i].digest);
        CHECK(r.digest.size() == 16);
        CHECK(r.steps_bnb <= r.steps_bf);
        CHECK(r.steps_bf == static_cast<std::uint64_t>(r.t1) * (r.tasks + 1));
        CHECK(r.efficiency == 1 - Rat(r.steps_bnb) / Rat(r.steps_bf));
        CHECK(r.efficiency >= 0);
        CHECK(r.efficiency < 1);
        sum += r.efficiency;
    }
    CHECK(a.mean_efficiency == sum / 30);
    CHECK(a.mean_efficiency > 0);
    CHECK(a.has_coprime_stat);
    CHECK(a.coprime_pair_fraction >= 0);
    CHECK(a.coprime_pair_fraction <= 1);
    CHECK(a.mismatches == 0);
}

TEST_CASE("a single fixed instance can be compared head to head")
{
    TaskSet set = validate_task_set({{1, 5}, {3, 16}, {3, 19}, {4, 22}}, Rat(1, 5));
    RunRecord rec = run_comparison(set);
    CHECK(rec.seed == 0);
    CHECK(rec.digest.size() == 16);
    CHECK(rec.tasks == 4);
    CHECK(rec.t1 == 5);
    CHECK(rec.feasible);
    CHECK(rec.best_L == 5);
    CHECK(rec.steps_bf == 25);
    CHECK(rec.steps_bnb == 8);
    CHECK(rec.efficiency == 1 - Rat(8, 25));

    TaskSet hopeless = validate_task_set({{1, 1}}, Rat(1));
    RunRecord none = run_comparison(hopeless);
    CHECK_FALSE(none.feasible);
    CHECK(none.best_L == 0);
    CHECK(none.steps_bnb <= none.steps_bf);
}

TEST_CASE("an experiment with no runs is rejected")
{
    GeneratorConfig cfg;
    cfg.runs = 0;
    CHECK_THROWS_AS(efficiency_experiment(cfg), RangeTooSmall);
    cfg.runs = -3;
    CHECK_THROWS_AS(efficiency_experiment(cfg), RangeTooSmall);
}

TEST_CASE("series experiments vary the start index and skip dense prefixes")
{
    GeneratorConfig cfg;
    cfg.kind = GenKind::Prime;
    cfg.tasks = 5;
    cfg.start_index = 1; // the first usable start is adjusted upward
    cfg.runs = 8;
    cfg.seed = 11;
    EfficiencyReport primes = efficiency_experiment(cfg);
    REQUIRE(primes.runs.size() == 8);
    CHECK_FALSE(primes.has_coprime_stat);
    std::set<std::string> digests;
    for (const RunRecord& r : primes.runs) {
        CHECK(r.steps_bnb <= r.steps_bf);
        digests.insert(r.digest);
    }
    CHECK(digests.size() > 1); // runs actually differ

    cfg.kind = GenKind::Fibonacci;
    cfg.start_index = 3;
    EfficiencyReport fib = efficiency_experiment(cfg);
    REQUIRE(fib.runs.size() == 8);
    for (const RunRecord& r : fib.runs)
        CHECK(r.efficiency >= 0);
}

TEST_CASE("zero overhead still never does more work than the oracle")
{
    GeneratorConfig cfg;
    cfg.tasks = 3;
    cfg.period_min = 5;
    cfg.period_max = 30;
    cfg.runs = 20;
    cfg.seed = 5;
    cfg.overhead = Rat(0);
    EfficiencyReport report = efficiency_experiment(cfg);
    for (const RunRecord& r : report.runs) {
        CHECK(r.steps_bnb <= r.steps_bf);
        CHECK(r.feasible); // with p = 0, L = 1 is always feasible
        CHECK(r.best_L >= 1);
    }
}

TEST_CASE("coprime sampling is deterministic and near the analytic density")
{
    Rat a = coprime_fraction_sample(5, 10000, 4000, 77);
    Rat b = coprime_fraction_sample(5, 10000, 4000, 77);
    CHECK(a == b);
    CHECK(a > Rat(1, 2));
    CHECK(a < Rat(7, 10));
}

TEST_CASE("CSV rendering has a header and one line per run")
{
    GeneratorConfig cfg;
    cfg.runs = 4;
    cfg.seed = 9;
    EfficiencyReport report = efficiency_experiment(cfg);
    std::string csv = report_csv(report);
    CHECK(csv.rfind("seed,M,T1,best_L,steps_bf,steps_bnb,efficiency\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.back() == '\n');
}
