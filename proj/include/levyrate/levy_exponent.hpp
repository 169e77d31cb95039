#pragma once

#include <optional>

#include "levyrate/jump_dist.hpp"
#include "levyrate/rng.hpp"

namespace levyrate {

// Nondecreasing Levy input: deterministic drift plus compound-Poisson jumps.
// Immutable after construction; sampling takes a caller-owned stream.
class LevyExponent {
public:
    // drift >= 0; jumps may be absent only when drift > 0.
    LevyExponent(double drift, double jump_rate, JumpDist jumps);
    static LevyExponent pure_drift(double drift);

    // Laplace exponent: drift*alpha + jump_rate * E[1 - e^{-alpha J}].
    double exponent(double alpha) const;

    // Mean input rate per unit time (the exponent's slope at 0).
    double mean_rate() const;

    // Mean of the one-jump equilibrium (stationary-excess) law,
    // jump_rate * E[J^2] / (2 * mean_rate). Zero for pure drift.
    double equilibrium_mean() const;

    double mu_rho() const { return equilibrium_mean() * mean_rate(); }

    // Draw from the law with LST exponent(a) / (mean_rate * a): a point mass
    // at 0 with weight drift/mean_rate mixed with the stationary excess of
    // the jump law (uniform fraction of a size-biased jump).
    double sample_equilibrium(Rng& rng) const;

    double drift() const { return drift_; }
    double jump_rate() const { return jump_rate_; }
    bool has_jumps() const { return jumps_.has_value(); }
    const JumpDist& jumps() const { return *jumps_; }

private:
    LevyExponent(double drift, double jump_rate, std::optional<JumpDist> jumps);

    double drift_;
    double jump_rate_;
    std::optional<JumpDist> jumps_;
};

}  // namespace levyrate
