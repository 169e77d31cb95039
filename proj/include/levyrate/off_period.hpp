#pragma once

#include <stdexcept>
#include <variant>

namespace levyrate {

// How the off period ends. FirstJump stops at the first jump epoch (the off
// workload is then pure drift, identically 0 when drift = 0). FixedTime and
// ExpTimer accrue genuine off-period workload.
struct FirstJump {};
struct FixedTime {
    double horizon;
};
struct ExpTimer {
    double rate;
};
using TauRule = std::variant<FirstJump, FixedTime, ExpTimer>;

struct OffPeriodSpec {
    double mean_tau = 1.0;
    // E[integral of the workload over one off period] = E tau * E Ztilde.
    // Injected, not computed; zero whenever the off workload is identically 0.
    double mean_off_area = 0.0;
    TauRule rule = FirstJump{};

    void validate() const {
        if (!(mean_tau > 0)) throw std::invalid_argument("off period: mean_tau must be > 0");
        if (!(mean_off_area >= 0))
            throw std::invalid_argument("off period: mean_off_area must be >= 0");
        if (const auto* ft = std::get_if<FixedTime>(&rule)) {
            if (!(ft->horizon > 0))
                throw std::invalid_argument("off period: fixed_time horizon must be > 0");
        } else if (const auto* et = std::get_if<ExpTimer>(&rule)) {
            if (!(et->rate > 0))
                throw std::invalid_argument("off period: exp_timer rate must be > 0");
        }
    }
};

}  // namespace levyrate
