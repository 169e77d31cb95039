#include <doctest.h>

#include <cmath>
#include <vector>

#include "levyrate/ratesearch.hpp"
#include "levyrate/sim.hpp"
#include "levyrate/steady_state.hpp"
#include "oracles.hpp"

using namespace levyrate;

namespace {

LevyExponent mm1() { return LevyExponent(0.0, 1.0, JumpDist::exponential(1.0)); }

LevyExponent unit_jumps() {
    return LevyExponent(0.0, 1.0, JumpDist::deterministic(1.0));
}

SimConfig base_config(LevyExponent input, RatePolicy policy,
                      OffPeriodSpec off = {1.0, 0.0, FirstJump{}},
                      CostParams costs = {1.0, 1.0, 1.0, 2.0, {}}) {
    return SimConfig{std::move(input), off, std::move(policy), costs,
                     100000,          1,   32,                {0.5, 1.0, 2.0},
                     1};
}

double se_of(const Estimate& e, int batches) {
    return e.half_width / t_quantile_975(batches - 1);
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("event stepping reproduces an independent trajectory replay") {
    // deterministic jumps consume no randomness, so the test can replay the
    // exact same draw sequence and integrate the trajectory on its own
    const LevyExponent input = unit_jumps();
    const OffPeriodSpec off{1.0, 0.0, FirstJump{}};
    const RatePolicy policy = RatePolicy::constant(2.0);
    const CostParams costs{1.0, 1.0, 1.0, 2.0, {}};

    Rng sim_rng(424242, 0);
    Rng replay_rng(424242, 0);
    for (int cycle = 0; cycle < 500; ++cycle) {
        double lst_acc[1] = {0};
        const double alphas[1] = {1.0};
        const CycleStats cs = simulate_cycle(input, off, policy, costs, alphas,
                                             lst_acc, sim_rng);

        const double tau = replay_rng.exponential(1.0);
        double v = 1.0;  // first deterministic jump, no drift
        double t_on = 0, area = 0, w = v;
        for (;;) {
            const double gap = replay_rng.exponential(1.0);
            const double hit = w / 2.0;
            if (hit <= gap) {
                area += 0.5 * w * hit;
                t_on += hit;
                break;
            }
            area += (w - gap) * gap;  // trapezoid from w to w - 2*gap
            w += 1.0 - 2.0 * gap;
            t_on += gap;
        }
        CHECK(cs.tau == tau);
        CHECK(cs.v == v);
        CHECK(cs.t_on == doctest::Approx(t_on).epsilon(1e-15));
        CHECK(cs.off_area == 0.0);
        CHECK(cs.on_area == doctest::Approx(area).epsilon(1e-13));
        CHECK(cs.cost ==
              doctest::Approx(1.0 + area + 2.0 * t_on).epsilon(1e-13));
    }
}

TEST_CASE("mean on-period length is V over the rate gap") {
    // unit deterministic first jump: E[T | V, R] = V / (R - rho) = 1
    const SimConfig config =
        base_config(unit_jumps(), RatePolicy::constant(2.0));
    Rng rng(5, 0);
    std::vector<double> t_on(20000);
    double lst_acc[1];
    const double alphas[1] = {1.0};
    for (auto& t : t_on) {
        lst_acc[0] = 0;
        t = simulate_cycle(config.input, config.off, config.policy, config.costs,
                           alphas, lst_acc, rng)
                .t_on;
    }
    const auto ms = oracles::mean_se(t_on);
    CHECK(std::abs(ms.mean - 1.0) <= 3.0 * ms.se);
}

TEST_CASE("renewal-reward cost of the unit exponential model") {
    const SimConfig config = base_config(mm1(), RatePolicy::constant(2.0));
    const SimReport report = run(config);
    CHECK(std::abs(report.avg_cost.value - 2.5) <=
          3.0 * se_of(report.avg_cost, config.batch_count));

    // on fraction = E[V/(R-rho)] / (E tau + E[V/(R-rho)]) = 1/2
    CHECK(std::abs(report.on_fraction.value - 0.5) <=
          3.0 * se_of(report.on_fraction, config.batch_count));
    CHECK(std::abs(report.mean_v.value - 1.0) <=
          3.0 * se_of(report.mean_v, config.batch_count));
    CHECK(report.mean_off_area == 0.0);  // off workload identically zero here
    CHECK(std::abs(report.cost_jackknife_bias) <
          se_of(report.avg_cost, config.batch_count));
}

TEST_CASE("time-average transform matches the cycle mixture") {
    const WorkloadDist v = WorkloadDist::exponential(1.0);
    const RatePolicy policy = RatePolicy::constant(2.0);
    const SimConfig config = base_config(mm1(), policy);
    const SimReport report = run(config);
    for (const auto& [alpha, est] : report.lst) {
        const double analytic = workload_lst(
            mm1(), v, policy, config.off, [](double) { return 1.0; }, alpha);
        CHECK(std::abs(est.value - analytic) <=
              3.0 * se_of(est, config.batch_count));
    }
}

TEST_CASE("on-period workload average against the closed form") {
    const WorkloadDist v = WorkloadDist::exponential(1.0);
    struct Case {
        RatePolicy policy;
    };
    const RatePolicy policies[] = {
        RatePolicy::constant(2.0),
        RatePolicy::waterfill(0.9, 2.0, 1.0),
    };
    for (const auto& policy : policies) {
        const SimConfig config = base_config(mm1(), policy);
        const Estimate est = estimate_busy_mean(config);
        const double analytic = busy_mean(mm1(), v, policy);
        CHECK(std::abs(est.value - analytic) <=
              3.0 * se_of(est, config.batch_count));
    }
    // affine policy with a workload law that keeps E[1/V] finite
    const LevyExponent input(0.0, 1.0, JumpDist::uniform(1.0, 2.0));
    const SimConfig config = base_config(input, RatePolicy::affine(1.0));
    const Estimate est = estimate_busy_mean(config);
    const double analytic =
        busy_mean(input, WorkloadDist::uniform(1.0, 2.0), RatePolicy::affine(1.0));
    CHECK(std::abs(est.value - analytic) <= 3.0 * se_of(est, config.batch_count));
}

TEST_CASE("renewal-reward cost under an affine rule") {
    const LevyExponent input(0.0, 1.0, JumpDist::uniform(1.0, 2.0));
    const WorkloadDist v = WorkloadDist::uniform(1.0, 2.0);
    const RatePolicy policy = RatePolicy::affine(1.5);
    const CostParams costs{1.0, 1.0, 1.0, 6.0, {}};
    const SimConfig config = base_config(input, policy, {1.0, 0.0, FirstJump{}},
                                         costs);
    const SimReport report = run(config);
    const double analytic =
        steady_cost(input, v, policy, config.off, costs);
    CHECK(std::abs(report.avg_cost.value - analytic) <=
          3.0 * se_of(report.avg_cost, config.batch_count));
}

TEST_CASE("exponential-timer off periods accrue holding cost") {
    // unit jumps at rate 1, timer at rate 1: E tau = 1, EV = 1, EV^2 = 3,
    // off area mean = 1, so the average cost is (1+1+2+2)/2 + h*1/2 = 3
    SimConfig config = base_config(unit_jumps(), RatePolicy::constant(2.0),
                                   {1.0, 1.0, ExpTimer{1.0}});
    const SimReport report = run(config);
    CHECK(std::abs(report.avg_cost.value - 3.0) <=
          3.0 * se_of(report.avg_cost, config.batch_count));
    CHECK(std::abs(report.mean_v.value - 1.0) <=
          3.0 * se_of(report.mean_v, config.batch_count));
    CHECK(report.mean_off_area == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("fixed-horizon off periods: compound-Poisson workload moments") {
    // unit jumps over a horizon of 2: V ~ Poisson(2), EV = 2, EV^2 = 6;
    // busy mean = EV^2/(2 EV) + mu rho/(R - rho) = 1.5 + 0.5 = 2, and
    // the average cost is (h*2 + K + d*2 + d*2 + h*(3+1)) / 4 = 2.75
    SimConfig config = base_config(unit_jumps(), RatePolicy::constant(2.0),
                                   {2.0, 2.0, FixedTime{2.0}});
    const SimReport report = run(config);
    CHECK(std::abs(report.busy_mean.value - 2.0) <=
          3.0 * se_of(report.busy_mean, config.batch_count));
    CHECK(std::abs(report.avg_cost.value - 2.75) <=
          3.0 * se_of(report.avg_cost, config.batch_count));
    CHECK(report.mean_off_area == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("optimized policy simulates to the predicted minimum") {
    const WorkloadDist v = WorkloadDist::exponential(1.0);
    const OffPeriodSpec off{1.0, 0.0, FirstJump{}};
    const CostParams costs{1.0, 5.0, 1.0, 2.0, {}};
    const SolveResult solved = solve_model(mm1(), v, off, costs);

    SimConfig config = base_config(mm1(), solved.policy, off, costs);
    const SimReport report = run(config);
    CHECK(std::abs(report.avg_cost.value - solved.search.g_min) <=
          3.0 * se_of(report.avg_cost, config.batch_count));

    // and the maximal constant rate simulates to a strictly larger cost
    SimConfig at_max = base_config(mm1(), RatePolicy::constant(2.0), off, costs);
    const SimReport max_report = run(at_max);
    CHECK(max_report.avg_cost.value - report.avg_cost.value >
          -3.0 * (se_of(max_report.avg_cost, 32) + se_of(report.avg_cost, 32)));
}

TEST_CASE("pure drift with a fixed horizon is exactly reproducible") {
    // no jumps: every cycle is identical, V = 2, T_on = 2, areas 2 and 2,
    // so all estimates are exact and all half widths vanish
    SimConfig config = base_config(LevyExponent::pure_drift(1.0),
                                   RatePolicy::constant(2.0),
                                   {2.0, 0.0, FixedTime{2.0}},
                                   CostParams{1.0, 1.0, 1.0, 3.0, {}});
    config.n_cycles = 320;
    const SimReport report = run(config);
    CHECK(report.mean_v.value == 2.0);
    CHECK(report.mean_t_on == 2.0);
    CHECK(report.on_fraction.value == 0.5);
    CHECK(report.mean_off_area == 2.0);
    CHECK(report.avg_cost.value == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(report.avg_cost.half_width == 0.0);
    CHECK(report.busy_mean.value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("reports are identical for any worker count") {
    SimConfig config = base_config(mm1(), RatePolicy::constant(2.0));
    config.n_cycles = 20000;
    SimReport reports[3];
    int idx = 0;
    for (int threads : {1, 2, 8}) {
        config.max_threads = threads;
        reports[idx++] = run(config);
    }
    for (int i = 1; i < 3; ++i) {
        CHECK(reports[i].avg_cost.value == reports[0].avg_cost.value);
        CHECK(reports[i].avg_cost.half_width == reports[0].avg_cost.half_width);
        CHECK(reports[i].mean_workload.value == reports[0].mean_workload.value);
        CHECK(reports[i].busy_mean.value == reports[0].busy_mean.value);
        CHECK(reports[i].mean_off_area == reports[0].mean_off_area);
        for (std::size_t a = 0; a < reports[0].lst.size(); ++a)
            CHECK(reports[i].lst[a].second.value == reports[0].lst[a].second.value);
    }
}

TEST_CASE("half widths shrink like the square root of the sample size") {
    SimConfig config = base_config(mm1(), RatePolicy::constant(2.0));
    config.n_cycles = 10000;
    const double hw_small = run(config).avg_cost.half_width;
    config.n_cycles = 90000;
    const double hw_large = run(config).avg_cost.half_width;
    CHECK(hw_small / hw_large > 1.8);
    CHECK(hw_small / hw_large < 5.0);
}

TEST_CASE("invalid configurations are rejected") {
    SimConfig config = base_config(mm1(), RatePolicy::constant(0.9));
    CHECK_THROWS_AS(run(config), UnstablePolicy);  // rate below rho

    SimConfig tiny = base_config(mm1(), RatePolicy::constant(2.0));
    tiny.n_cycles = 100;
    CHECK_THROWS_AS(run(tiny), std::invalid_argument);

    SimConfig drifty = base_config(LevyExponent::pure_drift(1.0),
                                   RatePolicy::constant(2.0));
    CHECK_THROWS_AS(run(drifty), std::invalid_argument);  // first jump never comes
}

}  // TEST_SUITE
