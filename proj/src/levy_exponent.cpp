#include "levyrate/levy_exponent.hpp"

#include <stdexcept>

namespace levyrate {

LevyExponent::LevyExponent(double drift, double jump_rate,
                           std::optional<JumpDist> jumps)
    : drift_(drift), jump_rate_(jump_rate), jumps_(std::move(jumps)) {
    if (!(drift_ >= 0)) throw std::invalid_argument("input: drift must be >= 0");
    if (jumps_) {
        if (!(jump_rate_ > 0))
            throw std::invalid_argument("input: jump rate must be > 0");
    } else {
        if (!(drift_ > 0))
            throw std::invalid_argument("input: need drift > 0 when there are no jumps");
        jump_rate_ = 0;
    }
}

LevyExponent::LevyExponent(double drift, double jump_rate, JumpDist jumps)
    : LevyExponent(drift, jump_rate, std::optional<JumpDist>(std::move(jumps))) {}

LevyExponent LevyExponent::pure_drift(double drift) {
    return LevyExponent(drift, 0.0, std::nullopt);
}

double LevyExponent::exponent(double alpha) const {
    if (!(alpha >= 0)) throw std::invalid_argument("exponent: alpha must be >= 0");
    double value = drift_ * alpha;
    if (jumps_) value += jump_rate_ * jumps_->one_minus_lst(alpha);
    return value;
}

double LevyExponent::mean_rate() const {
    return drift_ + (jumps_ ? jump_rate_ * jumps_->mean() : 0.0);
}

double LevyExponent::equilibrium_mean() const {
    if (!jumps_) return 0.0;
    return jump_rate_ * jumps_->second_moment() / (2.0 * mean_rate());
}

double LevyExponent::sample_equilibrium(Rng& rng) const {
    const double rho = mean_rate();
    if (jumps_) {
        const double atom_weight = drift_ / rho;
        if (atom_weight > 0 && rng.uniform01() < atom_weight) return 0.0;
        return rng.uniform01() * jumps_->sample_size_biased(rng);
    }
    return 0.0;  // pure drift: the equilibrium law is the point mass at 0
}

}  // namespace levyrate
