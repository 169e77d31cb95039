#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levyrate/model_io.hpp"

namespace levyrate {

struct LambdaGrid {
    double lo, hi;
    int count;
};

// CSV-emitting command bodies. Throw SchemaError / InfeasibleModel /
// UnstablePolicy; the CLI maps those to exit codes 2 / 3 / 4.
void cmd_solve(const ModelFile& model, const std::string& out_path);

void cmd_sweep(const ModelFile& model, const std::string& param,
               const std::vector<double>& values,
               std::optional<LambdaGrid> grid, const std::string& out_path);

void cmd_simulate(const ModelFile& model, const std::string& policy_spec,
                  const std::string& out_path, int max_threads);

void cmd_partial(const ModelFile& model, const std::string& out_path);

// Shortest round-trip decimal formatting used for every CSV number.
std::string format_double(double x);

}  // namespace levyrate
