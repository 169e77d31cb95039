#include "levyrate/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levyrate {

double expected_v_over_gap(const LevyExponent& input, const WorkloadDist& v,
                           const RatePolicy& policy) {
    const double rho = input.mean_rate();
    return v.expectation([&](double w) { return w * policy.inv_gap(w, rho); });
}

double busy_lst(const LevyExponent& input, const WorkloadDist& v,
                const RatePolicy& policy, double alpha) {
    if (!(alpha > 0)) throw std::invalid_argument("busy_lst: alpha must be > 0");
    const double rho = input.mean_rate();
    const double eta = input.exponent(alpha);
    const double numer = v.expectation([&](double w) {
        const double ig = policy.inv_gap(w, rho);
        if (ig <= 0) return 0.0;  // infinite rate: zero on-period time
        const double denom = (alpha * rho - eta) + alpha / ig;
        return -std::expm1(-alpha * w) / denom;
    });
    const double denom = expected_v_over_gap(input, v, policy);
    return numer / denom;
}

double busy_mean(const LevyExponent& input, const WorkloadDist& v,
                 const RatePolicy& policy) {
    if (std::holds_alternative<RatePolicy::AffineInV>(policy.spec()) &&
        !std::isfinite(v.mean_inverse())) {
        throw std::domain_error(
            "busy_mean diverges: affine policy needs E[1/V] < infinity");
    }
    const double rho = input.mean_rate();
    const double mu_rho = input.mu_rho();
    const double numer = v.expectation([&](double w) {
        const double ig = policy.inv_gap(w, rho);
        return 0.5 * w * w * ig + mu_rho * w * ig * ig;
    });
    return numer / expected_v_over_gap(input, v, policy);
}

double workload_lst(const LevyExponent& input, const WorkloadDist& v,
                    const RatePolicy& policy, const OffPeriodSpec& off,
                    const std::function<double(double)>& off_lst, double alpha) {
    const double on_weight = expected_v_over_gap(input, v, policy);
    const double total = off.mean_tau + on_weight;
    return (off.mean_tau * off_lst(alpha) +
            on_weight * busy_lst(input, v, policy, alpha)) /
           total;
}

TiltedSampler::TiltedSampler(const LevyExponent& input, const WorkloadDist& v,
                             const RatePolicy& policy)
    : input_(input), v_(v), policy_(policy), rho_(input.mean_rate()) {
    const auto weight = [&](double w) { return w * policy_.inv_gap(w, rho_); };

    if (v_.is_discrete()) {
        double acc = 0;
        for (const auto& [val, p] : v_.atom_view()) {
            acc += p * weight(val);
            atom_values_.push_back(val);
            cum_weight_.push_back(acc);
        }
        return;
    }

    truncation_ = v_.quantile(1.0 - 1e-9);

    // The weight is piecewise quadratic in v for every policy family; its
    // maximum over [0, truncation] is at a piece boundary or at the interior
    // vertex of the quadratic piece.
    std::vector<double> candidates = {truncation_};
    if (const auto* wf = std::get_if<RatePolicy::WaterFill>(&policy_.spec())) {
        const double base =
            std::isfinite(wf->max_rate) ? 1.0 / (wf->max_rate - rho_) : 0.0;
        candidates.push_back(std::clamp(2.0 * wf->level, 0.0, truncation_));
        candidates.push_back(
            std::clamp(wf->level + 2.0 * wf->mu_rho * base, 0.0, truncation_));
        if (wf->min_rate) {
            const double cap = 1.0 / (*wf->min_rate - rho_) - base;
            candidates.push_back(std::clamp(
                2.0 * (wf->level - 2.0 * wf->mu_rho * cap), 0.0, truncation_));
        }
    }
    for (double c : candidates) weight_bound_ = std::max(weight_bound_, weight(c));
    weight_bound_ *= 1.0 + 1e-9;
}

std::pair<double, double> TiltedSampler::sample(Rng& rng) const {
    if (!atom_values_.empty()) {
        const std::size_t i = rng.categorical_from_cumulative(
            cum_weight_.data(), cum_weight_.size());
        const double v = atom_values_[i];
        return {v, policy_.rate(v, rho_)};
    }
    for (;;) {
        const double v = v_.sample(rng);
        if (v > truncation_) continue;
        const double w = v * policy_.inv_gap(v, rho_);
        if (rng.uniform01() * weight_bound_ < w) return {v, policy_.rate(v, rho_)};
    }
}

BusyWorkloadSampler::BusyWorkloadSampler(const LevyExponent& input,
                                         const WorkloadDist& v,
                                         const RatePolicy& policy)
    : input_(input),
      policy_(policy),
      tilted_(input, v, policy),
      rho_(input.mean_rate()) {}

double BusyWorkloadSampler::sample(Rng& rng) const {
    const auto [v, r] = tilted_.sample(rng);
    const double p = std::isfinite(r) ? rho_ / r : 0.0;
    double total = rng.uniform01() * v;
    const std::uint64_t n = rng.geometric_failures(p);
    for (std::uint64_t i = 0; i < n; ++i) total += input_.sample_equilibrium(rng);
    return total;
}

}  // namespace levyrate
