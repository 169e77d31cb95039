#include "levyrate/sim.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace levyrate {

// Exact table to df 30, then linear in 1/df down to the normal value.
double t_quantile_975(int df) {
    static const double table[31] = {
        0,      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
        2.306,  2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
        2.120,  2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069,
        2.064,  2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (df < 1) return std::numeric_limits<double>::infinity();
    if (df <= 30) return table[df];
    const std::pair<double, double> knots[] = {
        {30, 2.042}, {40, 2.021}, {60, 2.000}, {120, 1.980}};
    for (int i = 0; i < 3; ++i) {
        const auto [d0, t0] = knots[i];
        const auto [d1, t1] = knots[i + 1];
        if (df <= d1) {
            const double x = (1.0 / df - 1.0 / d0) / (1.0 / d1 - 1.0 / d0);
            return t0 + x * (t1 - t0);
        }
    }
    return 1.960 + (120.0 / df) * (1.980 - 1.960);
}

namespace {

// integral of e^{-alpha W} over a linear segment from w0 to w1 lasting s
double lst_segment(double w0, double w1, double s, double alpha) {
    if (s <= 0) return 0.0;
    if (w0 == w1) return s * std::exp(-alpha * w0);
    return s * (std::exp(-alpha * w1) - std::exp(-alpha * w0)) /
           (alpha * (w0 - w1));
}

double area_segment(double w0, double w1, double s) {
    return 0.5 * (w0 + w1) * s;
}

struct BatchAccum {
    std::uint64_t n = 0;
    double tau = 0, t_on = 0, len = 0, v = 0;
    double off_area = 0, on_area = 0, cost = 0;
    std::vector<double> lst;
};

struct RatioEstimate {
    Estimate est;
    double jackknife_bias = 0;
};

RatioEstimate ratio_estimate(const std::vector<double>& num,
                             const std::vector<double>& den) {
    const int nb = static_cast<int>(num.size());
    double total_num = 0, total_den = 0;
    for (int i = 0; i < nb; ++i) {
        total_num += num[i];
        total_den += den[i];
    }
    const double grand = total_num / total_den;

    double mean_r = 0, mean_jack = 0;
    std::vector<double> r(num.size());
    for (int i = 0; i < nb; ++i) {
        r[i] = num[i] / den[i];
        mean_r += r[i];
        mean_jack += (total_num - num[i]) / (total_den - den[i]);
    }
    mean_r /= nb;
    mean_jack /= nb;

    double var = 0;
    for (double ri : r) var += (ri - mean_r) * (ri - mean_r);
    var /= (nb - 1);

    RatioEstimate out;
    out.est.value = grand;
    out.est.half_width = t_quantile_975(nb - 1) * std::sqrt(var / nb);
    out.jackknife_bias = (nb - 1) * (mean_jack - grand);
    return out;
}

}  // namespace

void SimConfig::validate() const {
    costs.validate();
    off.validate();
    if (batch_count < 2) throw std::invalid_argument("sim: batch_count must be >= 2");
    if (n_cycles < static_cast<std::uint64_t>(batch_count) * 10)
        throw std::invalid_argument("sim: need n_cycles >= 10 * batch_count");
    if (std::holds_alternative<FirstJump>(off.rule) && !input.has_jumps())
        throw std::invalid_argument("sim: first_jump rule needs a jump component");
    const double rho = input.mean_rate();
    if (const auto* c = std::get_if<RatePolicy::Constant>(&policy.spec())) {
        if (!(c->rate > std::max(rho, input.drift())))
            throw UnstablePolicy("sim: constant rate must exceed max(rho, drift)");
    }
    policy.validate(rho);
}

CycleStats simulate_cycle(const LevyExponent& input, const OffPeriodSpec& off,
                          const RatePolicy& policy, const CostParams& costs,
                          std::span<const double> alphas,
                          std::span<double> lst_acc, Rng& rng) {
    const double drift = input.drift();
    const double nu = input.jump_rate();
    const double rho = input.mean_rate();
    CycleStats out;

    const auto accrue = [&](double w0, double w1, double s) {
        for (std::size_t i = 0; i < alphas.size(); ++i)
            lst_acc[i] += lst_segment(w0, w1, s, alphas[i]);
        return area_segment(w0, w1, s);
    };

    // off period: workload rises at the drift rate, jumps arrive at rate nu
    double w = 0;
    if (std::holds_alternative<FirstJump>(off.rule)) {
        const double gap = rng.exponential(nu);
        out.tau = gap;
        out.off_area = accrue(0, drift * gap, gap);
        w = drift * gap + input.jumps().sample(rng);
    } else {
        const double horizon = std::holds_alternative<FixedTime>(off.rule)
                                   ? std::get<FixedTime>(off.rule).horizon
                                   : rng.exponential(std::get<ExpTimer>(off.rule).rate);
        out.tau = horizon;
        double t = 0;
        for (;;) {
            const double gap = nu > 0 ? rng.exponential(nu)
                                      : std::numeric_limits<double>::infinity();
            if (t + gap >= horizon) {
                const double step = horizon - t;
                out.off_area += accrue(w, w + drift * step, step);
                w += drift * step;
                break;
            }
            out.off_area += accrue(w, w + drift * gap, gap);
            w += drift * gap + input.jumps().sample(rng);
            t += gap;
        }
    }
    out.v = w;

    // on period: net fall rate R - drift between jumps, exact hitting times
    if (out.v > 0) {
        const double r = policy.rate(out.v, rho);
        if (std::isfinite(r)) {
            if (!(r > drift))
                throw UnstablePolicy("sim: on-period rate must exceed the drift");
            const double fall = r - drift;
            while (w > 0) {
                const double gap = nu > 0 ? rng.exponential(nu)
                                          : std::numeric_limits<double>::infinity();
                const double hit = w / fall;
                if (hit <= gap) {
                    out.on_area += accrue(w, 0, hit);
                    out.t_on += hit;
                    w = 0;
                } else {
                    out.on_area += accrue(w, w - fall * gap, gap);
                    out.t_on += gap;
                    w += input.jumps().sample(rng) - fall * gap;
                }
            }
            out.cost = costs.capacity * out.t_on * r;
        }
        // an infinite rate clears instantly; capacity cost requires a finite
        // rate (CostParams enforces capacity = 0 with r = infinity)
    }

    out.cost += costs.setup + costs.holding * (out.off_area + out.on_area);
    return out;
}

SimReport run(const SimConfig& config) {
    config.validate();
    const int nb = config.batch_count;
    std::vector<BatchAccum> batches(nb);
    const std::uint64_t base = config.n_cycles / nb;
    const std::uint64_t extra = config.n_cycles % nb;

    const auto run_batch = [&](int b) {
        BatchAccum acc;
        acc.lst.assign(config.lst_alphas.size(), 0.0);
        Rng rng(config.seed, static_cast<std::uint64_t>(b));
        const std::uint64_t n =
            base + (static_cast<std::uint64_t>(b) < extra ? 1 : 0);
        for (std::uint64_t i = 0; i < n; ++i) {
            const CycleStats cs =
                simulate_cycle(config.input, config.off, config.policy,
                               config.costs, config.lst_alphas, acc.lst, rng);
            ++acc.n;
            acc.tau += cs.tau;
            acc.t_on += cs.t_on;
            acc.len += cs.tau + cs.t_on;
            acc.v += cs.v;
            acc.off_area += cs.off_area;
            acc.on_area += cs.on_area;
            acc.cost += cs.cost;
        }
        batches[b] = std::move(acc);
    };

    int threads = config.max_threads > 0
                      ? config.max_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, nb));
    if (threads == 1) {
        for (int b = 0; b < nb; ++b) run_batch(b);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (int b = next.fetch_add(1); b < nb; b = next.fetch_add(1))
                    run_batch(b);
            });
        }
        for (auto& th : pool) th.join();
    }

    const auto column = [&](auto getter) {
        std::vector<double> col(batches.size());
        for (std::size_t i = 0; i < batches.size(); ++i) col[i] = getter(batches[i]);
        return col;
    };
    const auto len = column([](const BatchAccum& b) { return b.len; });
    const auto count =
        column([](const BatchAccum& b) { return static_cast<double>(b.n); });

    SimReport report;
    report.cycles = config.n_cycles;

    const auto cost_ratio =
        ratio_estimate(column([](const BatchAccum& b) { return b.cost; }), len);
    report.avg_cost = cost_ratio.est;
    report.cost_jackknife_bias = cost_ratio.jackknife_bias;
    report.mean_workload = ratio_estimate(
        column([](const BatchAccum& b) { return b.off_area + b.on_area; }), len).est;
    report.on_fraction = ratio_estimate(
        column([](const BatchAccum& b) { return b.t_on; }), len).est;
    report.busy_mean = ratio_estimate(
        column([](const BatchAccum& b) { return b.on_area; }),
        column([](const BatchAccum& b) { return b.t_on; })).est;

    for (std::size_t i = 0; i < config.lst_alphas.size(); ++i) {
        report.lst.emplace_back(
            config.lst_alphas[i],
            ratio_estimate(column([i](const BatchAccum& b) { return b.lst[i]; }),
                           len).est);
    }

    report.mean_cycle_length = ratio_estimate(len, count).est;
    report.mean_v = ratio_estimate(
        column([](const BatchAccum& b) { return b.v; }), count).est;

    double n_total = 0, t_on_total = 0, off_total = 0;
    for (const auto& b : batches) {
        n_total += static_cast<double>(b.n);
        t_on_total += b.t_on;
        off_total += b.off_area;
    }
    report.mean_t_on = t_on_total / n_total;
    report.mean_off_area = off_total / n_total;
    return report;
}

Estimate estimate_busy_mean(const SimConfig& config) {
    return run(config).busy_mean;
}

}  // namespace levyrate
