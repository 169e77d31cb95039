#include "levyrate/waterfill.hpp"

#include <cmath>
#include <limits>

namespace levyrate {
namespace {

constexpr double kLevelTol = 1e-10;
constexpr double kBudgetTol = 1e-12;
constexpr int kMaxIter = 200;

// Workload threshold below which the cap binds: x(v, level) >= slope*v
// exactly when v <= 2 (level - 2 mu_rho slope).
double cap_threshold(double level, double mu_rho, const AllocationCap& cap) {
    return 2.0 * (level - 2.0 * mu_rho * cap.slope);
}

}  // namespace

double allocation(double v, double level, double mu_rho) {
    return v * std::max(level - 0.5 * v, 0.0) / (2.0 * mu_rho);
}

double expected_allocation(const WorkloadDist& v, double level, double mu_rho,
                           std::optional<AllocationCap> cap) {
    if (!(level > 0)) return 0.0;
    if (!std::isfinite(level)) {
        return cap ? cap->slope * v.mean()
                   : std::numeric_limits<double>::infinity();
    }
    double lo = 0.0;
    double capped_part = 0.0;
    if (cap) {
        const double vc = cap_threshold(level, mu_rho, *cap);
        if (vc > 0) {
            capped_part = cap->slope * v.partial_moment(1, 0, vc);
            lo = vc;
        }
    }
    const double free_part = (level * v.partial_moment(1, lo, 2.0 * level) -
                              0.5 * v.partial_moment(2, lo, 2.0 * level)) /
                             (2.0 * mu_rho);
    return capped_part + free_part;
}

double phase1_value(const WorkloadDist& v, double budget, double mu_rho,
                    std::optional<AllocationCap> cap) {
    if (!(budget >= 0))
        throw std::invalid_argument("phase1_value: budget must be >= 0");
    if (budget == 0) return 0.0;
    const double level = level_for_budget(v, budget, mu_rho, cap);

    if (!std::isfinite(level)) {
        // fully saturated allocation x = slope * V
        const double s = cap->slope;
        return 0.5 * s * v.second_moment() + mu_rho * s * s * v.mean();
    }
    double lo = 0.0;
    double capped_part = 0.0;
    if (cap) {
        const double vc = cap_threshold(level, mu_rho, *cap);
        if (vc > 0) {
            const double s = cap->slope;
            capped_part = 0.5 * s * v.partial_moment(2, 0, vc) +
                          mu_rho * s * s * v.partial_moment(1, 0, vc);
            lo = vc;
        }
    }
    // E[V x/2 + mu rho x^2/V] at x = x(V,level) collapses to
    // E V [level^2 - (V/2)^2]^+ / (4 mu rho).
    const double free_part =
        (level * level * v.partial_moment(1, lo, 2.0 * level) -
         0.25 * v.partial_moment(3, lo, 2.0 * level)) /
        (4.0 * mu_rho);
    return capped_part + free_part;
}

double level_for_budget(const WorkloadDist& v, double budget, double mu_rho,
                        std::optional<AllocationCap> cap) {
    if (!(budget > 0))
        throw std::invalid_argument("level_for_budget: budget must be > 0");

    if (cap) {
        const double budget_max = cap->slope * v.mean();
        if (budget > budget_max * (1.0 + 1e-12))
            throw InfeasibleBudget(
                "budget exceeds the saturated allocation slope*EV");
        if (budget >= budget_max * (1.0 - 1e-12))
            return std::numeric_limits<double>::infinity();
    }

    const auto xi = [&](double lam) {
        return expected_allocation(v, lam, mu_rho, cap);
    };

    double lo = 0.5 * v.essential_inf();  // xi vanishes up to here
    double hi = std::max(lo, 1e-6);
    if (hi == lo) hi = lo + 1e-6;
    int guard = 0;
    while (xi(hi) < budget) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 2048)
            throw std::runtime_error("level_for_budget: bracket expansion failed");
    }

    // bisection on the predicate xi(level) >= budget -> smallest root
    for (int i = 0; i < kMaxIter && hi - lo > kLevelTol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double val = xi(mid);
        if (std::abs(val - budget) <= kBudgetTol) return mid;
        (val >= budget ? hi : lo) = mid;
    }
    return hi;
}

Phase1Solution solve_phase1(const WorkloadDist& v, double budget, double mu_rho,
                            std::optional<AllocationCap> cap) {
    Phase1Solution s;
    s.budget = budget;
    s.level = budget > 0 ? level_for_budget(v, budget, mu_rho, cap) : 0.0;
    s.value = phase1_value(v, budget, mu_rho, cap);
    s.cap_active = cap.has_value();
    return s;
}

double optimal_rate(double v, double level, double mu_rho, double rho,
                    double max_rate) {
    const double base = std::isfinite(max_rate) ? 1.0 / (max_rate - rho) : 0.0;
    const double inv_gap = base + std::max(level - 0.5 * v, 0.0) / (2.0 * mu_rho);
    if (inv_gap == 0.0) return std::numeric_limits<double>::infinity();
    return rho + 1.0 / inv_gap;
}

}  // namespace levyrate
