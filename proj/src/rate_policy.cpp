#include "levyrate/rate_policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace levyrate {

double RatePolicy::inv_gap(double v, double rho) const {
    return std::visit(
        [v, rho](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Constant>) return 1.0 / (p.rate - rho);
            if constexpr (std::is_same_v<T, AffineInV>) return 1.0 / (p.slope * v);
            if constexpr (std::is_same_v<T, WaterFill>) {
                const double base =
                    std::isfinite(p.max_rate) ? 1.0 / (p.max_rate - rho) : 0.0;
                double extra = std::max(p.level - 0.5 * v, 0.0) / (2.0 * p.mu_rho);
                if (p.min_rate) {
                    const double cap = 1.0 / (*p.min_rate - rho) - base;
                    extra = std::min(extra, cap);
                }
                return base + extra;
            }
        },
        spec_);
}

double RatePolicy::rate(double v, double rho) const {
    if (const auto* c = std::get_if<Constant>(&spec_)) return c->rate;
    const double ig = inv_gap(v, rho);
    if (ig == 0.0) return std::numeric_limits<double>::infinity();
    return rho + 1.0 / ig;
}

void RatePolicy::validate(double rho) const {
    std::visit(
        [rho](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Constant>) {
                if (!(p.rate > rho))
                    throw std::invalid_argument("policy: constant rate must exceed the mean input rate");
            }
            if constexpr (std::is_same_v<T, AffineInV>) {
                if (!(p.slope > 0))
                    throw std::invalid_argument("policy: affine slope must be > 0");
            }
            if constexpr (std::is_same_v<T, WaterFill>) {
                if (!(p.level >= 0)) throw std::invalid_argument("policy: level must be >= 0");
                if (!(p.mu_rho > 0)) throw std::invalid_argument("policy: mu*rho must be > 0");
                if (!(p.max_rate > rho))
                    throw std::invalid_argument("policy: max rate must exceed the mean input rate");
                if (p.min_rate && (!(*p.min_rate > rho) || !(*p.min_rate <= p.max_rate)))
                    throw std::invalid_argument("policy: need rho < min rate <= max rate");
            }
        },
        spec_);
}

}  // namespace levyrate
