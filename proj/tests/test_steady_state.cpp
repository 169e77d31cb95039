#include <doctest.h>

#include <cmath>
#include <vector>

#include "levyrate/steady_state.hpp"
#include "oracles.hpp"

using namespace levyrate;

namespace {

LevyExponent mm1() { return LevyExponent(0.0, 1.0, JumpDist::exponential(1.0)); }

std::vector<double> busy_draws(const LevyExponent& e, const WorkloadDist& v,
                               const RatePolicy& p, int n, std::uint64_t seed) {
    BusyWorkloadSampler sampler(e, v, p);
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& d : out) d = sampler.sample(rng);
    return out;
}

}  // namespace

TEST_SUITE("steady_state") {

TEST_CASE("busy LST: unit atom, constant rate") {
    const LevyExponent e = mm1();
    const WorkloadDist v = WorkloadDist::single_atom(1.0);
    const RatePolicy p = RatePolicy::constant(2.0);
    // direct evaluation: (1 - e^{-1}) / (2 - 1/2) over E[V/(R-rho)] = 1
    CHECK(busy_lst(e, v, p, 1.0) ==
          doctest::Approx(0.4214137058857051).epsilon(1e-12));
    // LST tends to 1 at the origin
    CHECK(busy_lst(e, v, p, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("busy LST is completely monotone on a grid (spot checks)") {
    const LevyExponent e = mm1();
    const WorkloadDist vs[] = {WorkloadDist::exponential(1.0),
                               WorkloadDist::uniform(0.5, 1.5)};
    const RatePolicy ps[] = {RatePolicy::constant(2.0), RatePolicy::affine(1.0)};
    for (const auto& v : vs) {
        for (const auto& p : ps) {
            double prev = 1.0;
            std::vector<double> logs;
            for (double a = 0.25; a <= 4.0; a += 0.25) {
                const double val = busy_lst(e, v, p, a);
                CHECK(val > 0);
                CHECK(val <= prev + 1e-12);  // nonincreasing
                prev = val;
                logs.push_back(std::log(val));
            }
            for (std::size_t i = 0; i + 2 < logs.size(); ++i)  // log-convex
                CHECK(logs[i] + logs[i + 2] - 2 * logs[i + 1] >= -1e-10);
        }
    }
}

TEST_CASE("geometric-sum sampler agrees with the closed-form LST") {
    const LevyExponent e = mm1();
    struct Combo {
        WorkloadDist v;
        RatePolicy p;
    };
    const Combo combos[] = {
        {WorkloadDist::single_atom(1.0), RatePolicy::constant(2.0)},
        {WorkloadDist::exponential(1.0), RatePolicy::affine(1.0)},
        {WorkloadDist::uniform(0.0, 2.0), RatePolicy::waterfill(1.0, 2.0, 1.0)},
        {WorkloadDist::exponential(1.0), RatePolicy::waterfill(1.2, 3.0, 1.0, 1.5)},
    };
    std::uint64_t seed = 11;
    for (const auto& [v, p] : combos) {
        const auto draws = busy_draws(e, v, p, 100000, seed++);
        for (double alpha : {0.5, 1.0, 2.0}) {
            std::vector<double> lst(draws.size());
            for (std::size_t i = 0; i < draws.size(); ++i)
                lst[i] = std::exp(-alpha * draws[i]);
            const auto ms = oracles::mean_se(lst);
            CHECK(std::abs(ms.mean - busy_lst(e, v, p, alpha)) <= 3.0 * ms.se);
        }
    }
}

TEST_CASE("huge rate degenerates the sampler to U*V") {
    const LevyExponent e = mm1();
    const WorkloadDist v = WorkloadDist::single_atom(1.0);
    const auto draws = busy_draws(e, v, RatePolicy::constant(1e9), 20000, 5);
    const double d = oracles::ks_statistic(
        draws, [](double x) { return std::clamp(x, 0.0, 1.0); });
    CHECK(d < 1.358 / std::sqrt(20000.0));
}

TEST_CASE("geometric count has mean rho/(R-rho)") {
    Rng rng(3);
    double sum = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
        sum += static_cast<double>(rng.geometric_failures(0.5));  // rho/R = 1/2
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("busy mean: closed forms") {
    const LevyExponent e = mm1();
    CHECK(busy_mean(e, WorkloadDist::single_atom(1.0), RatePolicy::constant(2.0)) ==
          doctest::Approx(1.5).epsilon(1e-12));

    // affine rule R = rho + s V: mean = EV/2 + (mu rho / s) E[1/V]
    const WorkloadDist v = WorkloadDist::uniform(1.0, 2.0);
    CHECK(busy_mean(e, v, RatePolicy::affine(10.0)) ==
          doctest::Approx(0.75 + std::log(2.0) / 10.0).epsilon(1e-9));

    // quadrature oracle of the defining ratio
    const double numer = oracles::integrate(
        [](double w) {
            const double ig = 1.0 / (10.0 * w);
            return (0.5 * w * w * ig + w * ig * ig) * 1.0;
        },
        1.0, 2.0);
    const double denom = oracles::integrate(
        [](double w) { return w / (10.0 * w); }, 1.0, 2.0);
    CHECK(busy_mean(e, v, RatePolicy::affine(10.0)) ==
          doctest::Approx(numer / denom).epsilon(1e-9));

    // steep affine rules approach EV/2, which never exceeds EV^2/(2EV)
    const double steep = busy_mean(e, v, RatePolicy::affine(1e7));
    CHECK(steep == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(steep <= v.second_moment() / (2.0 * v.mean()) + 1e-9);
}

TEST_CASE("busy mean reports divergence for affine rules with E[1/V] infinite") {
    const LevyExponent e = mm1();
    CHECK_THROWS_AS(busy_mean(e, WorkloadDist::exponential(1.0), RatePolicy::affine(1.0)),
                    std::domain_error);
    CHECK_THROWS_AS(busy_mean(e, WorkloadDist::uniform(0.0, 1.0), RatePolicy::affine(1.0)),
                    std::domain_error);
}

TEST_CASE("busy mean equals the LST slope at the origin") {
    const LevyExponent e = mm1();
    struct Combo {
        WorkloadDist v;
        RatePolicy p;
    };
    const Combo combos[] = {
        {WorkloadDist::exponential(1.0), RatePolicy::constant(1.5)},
        {WorkloadDist::uniform(1.0, 2.0), RatePolicy::affine(2.0)},
        {WorkloadDist::atoms({{0.5, 0.3}, {2.0, 0.7}}),
         RatePolicy::waterfill(0.8, 3.0, 1.0)},
    };
    for (const auto& [v, p] : combos) {
        // secant through alpha = h and 2h approximates -LST'(0)
        const double h = 1e-5;
        const double slope = (busy_lst(e, v, p, h) - busy_lst(e, v, p, 2 * h)) / h;
        CHECK(busy_mean(e, v, p) == doctest::Approx(slope).epsilon(1e-3));
    }
}

TEST_CASE("cycle mixture of the off and on laws") {
    const LevyExponent e = mm1();
    const WorkloadDist v = WorkloadDist::exponential(1.0);
    const RatePolicy p = RatePolicy::constant(2.0);
    OffPeriodSpec off;
    off.mean_tau = expected_v_over_gap(e, v, p);  // equal weights
    const auto one = [](double) { return 1.0; };
    for (double alpha : {0.5, 1.0, 2.0}) {
        CHECK(workload_lst(e, v, p, off, one, alpha) ==
              doctest::Approx(0.5 * (1.0 + busy_lst(e, v, p, alpha))).epsilon(1e-12));
    }
    // at the origin the mixture is an LST again
    CHECK(workload_lst(e, v, p, off, one, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("tilted sampler reproduces untilted expectations") {
    const LevyExponent e = mm1();
    struct Combo {
        WorkloadDist v;
        RatePolicy p;
    };
    const Combo combos[] = {
        {WorkloadDist::exponential(1.0), RatePolicy::constant(2.0)},      // rejection
        {WorkloadDist::uniform(0.0, 2.0), RatePolicy::waterfill(1.0, 2.5, 1.0)},
        {WorkloadDist::uniform(0.2, 2.5), RatePolicy::waterfill(1.1, 3.0, 1.0, 1.4)},
        {WorkloadDist::atoms({{1.0, 0.25}, {2.0, 0.75}}), RatePolicy::constant(3.0)},
    };
    std::uint64_t seed = 21;
    for (const auto& [v, p] : combos) {
        TiltedSampler sampler(e, v, p);
        Rng rng(seed++);
        const int n = 100000;
        std::vector<double> unit(n), value(n);
        for (int i = 0; i < n; ++i) {
            const auto [w, r] = sampler.sample(rng);
            const double inv_weight = (r - 1.0) / w;  // rho = 1
            unit[i] = inv_weight;
            value[i] = inv_weight * w;
        }
        const double m = expected_v_over_gap(e, v, p);
        const auto u = oracles::mean_se(unit);
        CHECK(std::abs(u.mean * m - 1.0) <= 3.0 * u.se * m);
        const auto w = oracles::mean_se(value);
        CHECK(std::abs(w.mean * m - v.mean()) <= 3.0 * w.se * m);
    }
}

}  // TEST_SUITE
