#pragma once

#include <optional>
#include <variant>

namespace levyrate {

// Output-rate rule chosen at the start of an on period from the initial
// workload v. Validity contract: R(v) > rho on the support of V.
class RatePolicy {
public:
    struct Constant {
        double rate;
    };
    struct AffineInV {
        double slope;  // R(v) = rho + slope * v
    };
    // R(v) = rho + [ 1/(max_rate - rho) + min((level - v/2)^+ / (2 mu_rho), cap) ]^{-1}
    // where cap = 1/(min_rate - rho) - 1/(max_rate - rho) when min_rate is set.
    struct WaterFill {
        double level;     // the common multiplier
        double max_rate;  // may be +infinity (then the uncovered region clears instantly)
        double mu_rho;
        std::optional<double> min_rate;
    };
    using Spec = std::variant<Constant, AffineInV, WaterFill>;

    static RatePolicy constant(double rate) { return RatePolicy(Constant{rate}); }
    static RatePolicy affine(double slope) { return RatePolicy(AffineInV{slope}); }
    static RatePolicy waterfill(double level, double max_rate, double mu_rho,
                                std::optional<double> min_rate = {}) {
        return RatePolicy(WaterFill{level, max_rate, mu_rho, min_rate});
    }

    double rate(double v, double rho) const;

    // 1/(R(v) - rho), computed without subtracting rho (exact for WaterFill).
    double inv_gap(double v, double rho) const;

    // Throws std::invalid_argument unless R(v) > rho a.s. for v > 0.
    void validate(double rho) const;

    const Spec& spec() const { return spec_; }

private:
    explicit RatePolicy(Spec spec) : spec_(spec) {}

    Spec spec_;
};

}  // namespace levyrate
