#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyrate/cost_model.hpp"
#include "levyrate/levy_exponent.hpp"
#include "levyrate/off_period.hpp"
#include "levyrate/ratesearch.hpp"
#include "levyrate/sim.hpp"
#include "levyrate/workload_dist.hpp"

namespace levyrate {

// Thrown on any malformed model file: bad JSON, unknown keys, wrong types,
// out-of-range parameter values. Carries a key-path diagnostic.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VGridSpec {
    double lo, hi;
    int count;
};

struct ConstantsOverride {
    double k1, k2, k3, mu, rho;
};

struct SolverOptions {
    double rel_width_tol = 1e-8;
    std::optional<Backend> backend;  // set only by "backend": "quadrature"
    std::optional<VGridSpec> v_grid;
    std::optional<ConstantsOverride> constants_override;
};

struct SimOptions {
    std::uint64_t n_cycles = 100000;
    std::uint64_t seed = 1;
    int batch_count = 32;
    std::vector<double> lst_alphas = {0.5, 1.0, 2.0};
};

struct PartialInfoSection {
    std::vector<double> count_probs;  // P(N = 1), P(N = 2), ...
    double delta = 0;
    double sigma2 = 0;
};

struct ModelFile {
    std::optional<LevyExponent> input;
    std::optional<WorkloadDist> workload;  // empty when taken from the input's first jump
    bool workload_from_first_jump = false;
    std::optional<OffPeriodSpec> off;
    CostParams costs;
    SolverOptions solver;
    std::optional<SimOptions> sim;
    std::optional<PartialInfoSection> partial;
};

ModelFile load_model(const std::string& path);

// The workload law the commands operate on; for "from_input_first_jump" it
// is the jump law itself (requires zero drift).
WorkloadDist resolved_workload(const ModelFile& model);

// Constants from the override when present, otherwise derived from the
// primitives (requires input and off sections).
ProblemConstants resolved_constants(const ModelFile& model);

}  // namespace levyrate
