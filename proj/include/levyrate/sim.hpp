#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "levyrate/cost_model.hpp"
#include "levyrate/levy_exponent.hpp"
#include "levyrate/off_period.hpp"
#include "levyrate/rate_policy.hpp"

namespace levyrate {

struct UnstablePolicy : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two-sided 97.5% Student t quantile (for turning half widths back into
// standard errors).
double t_quantile_975(int df);

struct SimConfig {
    LevyExponent input;
    OffPeriodSpec off;
    RatePolicy policy;
    CostParams costs;
    std::uint64_t n_cycles = 100000;
    std::uint64_t seed = 1;
    int batch_count = 32;                      // batch-means confidence intervals
    std::vector<double> lst_alphas = {0.5, 1.0, 2.0};
    int max_threads = 0;                       // 0 = hardware concurrency

    void validate() const;
};

struct Estimate {
    double value = 0;
    double half_width = 0;  // 95% batch-means half width
};

struct SimReport {
    Estimate avg_cost;
    Estimate mean_workload;   // time average over the whole cycle
    Estimate on_fraction;
    Estimate busy_mean;       // time average restricted to on periods
    std::vector<std::pair<double, Estimate>> lst;  // time average of e^{-a W}
    Estimate mean_cycle_length;
    Estimate mean_v;
    double mean_t_on = 0;
    double mean_off_area = 0;          // estimates E of the off-period workload area
    double cost_jackknife_bias = 0;    // ratio-estimator bias check
    std::uint64_t cycles = 0;
};

// Totals of one regenerative cycle; every segment integral is closed form,
// so the only error anywhere is Monte Carlo.
struct CycleStats {
    double tau = 0;
    double v = 0;
    double t_on = 0;
    double off_area = 0;
    double on_area = 0;
    double cost = 0;
};

// Simulates one cycle; per-alpha integrals of e^{-alpha W} over the cycle are
// accumulated into lst_acc (same length as alphas).
CycleStats simulate_cycle(const LevyExponent& input, const OffPeriodSpec& off,
                          const RatePolicy& policy, const CostParams& costs,
                          std::span<const double> alphas,
                          std::span<double> lst_acc, Rng& rng);

// Renewal-reward estimates over n_cycles cycles. Cycle batches carry
// deterministically seeded streams and are reduced in index order, so the
// report is identical for any thread count.
SimReport run(const SimConfig& config);

Estimate estimate_busy_mean(const SimConfig& config);

}  // namespace levyrate
