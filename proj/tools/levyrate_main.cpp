#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levyrate/commands.hpp"

namespace {

int env_threads() {
    const char* raw = std::getenv("LEVYRATE_THREADS");
    if (!raw) return 0;
    const int n = std::atoi(raw);
    return n > 0 ? n : 0;
}

std::optional<levyrate::LambdaGrid> parse_lambda_grid(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    levyrate::LambdaGrid g;
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw levyrate::SchemaError("--lambda-grid: expected lo:hi:count");
    try {
        g.lo = std::stod(spec.substr(0, c1));
        g.hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
        g.count = std::stoi(spec.substr(c2 + 1));
    } catch (const std::exception&) {
        throw levyrate::SchemaError("--lambda-grid: expected lo:hi:count");
    }
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state solver and simulator for storage processes "
                 "with intermittent, workload-dependent output"};
    app.require_subcommand(1);

    std::string model_path, out_path;
    std::string param, values_spec, lambda_grid_spec, policy_spec = "optimal";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("model", model_path, "model JSON file")->required();
        sub->add_option("--out", out_path, "output CSV path")->required();
    };

    CLI::App* solve = app.add_subcommand("solve", "optimal rate rule and G minimum");
    add_common(solve);

    CLI::App* sweep = app.add_subcommand("sweep", "G curves over a cost parameter");
    add_common(sweep);
    sweep->add_option("--param", param, "swept parameter: K, h or d")->required();
    sweep->add_option("--values", values_spec, "comma-separated parameter values")
        ->required();
    sweep->add_option("--lambda-grid", lambda_grid_spec, "lambda grid lo:hi:count");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo validation run");
    add_common(simulate);
    simulate->add_option("--policy", policy_spec,
                         "constant:<R>, affine:<s> or optimal (default)");

    CLI::App* partial = app.add_subcommand("partial",
                                           "count-only information: exact solve");
    add_common(partial);

    CLI11_PARSE(app, argc, argv);

    try {
        const levyrate::ModelFile model = levyrate::load_model(model_path);
        if (solve->parsed()) {
            levyrate::cmd_solve(model, out_path);
        } else if (sweep->parsed()) {
            std::vector<double> values;
            std::size_t pos = 0;
            while (pos <= values_spec.size()) {
                const auto comma = values_spec.find(',', pos);
                const std::string tok = values_spec.substr(
                    pos, comma == std::string::npos ? std::string::npos : comma - pos);
                if (!tok.empty()) values.push_back(std::stod(tok));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            levyrate::cmd_sweep(model, param, values,
                                parse_lambda_grid(lambda_grid_spec), out_path);
        } else if (simulate->parsed()) {
            levyrate::cmd_simulate(model, policy_spec, out_path, env_threads());
        } else if (partial->parsed()) {
            levyrate::cmd_partial(model, out_path);
        }
    } catch (const levyrate::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return 2;
    } catch (const levyrate::InfeasibleModel& e) {
        std::cerr << "infeasible model: " << e.what() << '\n';
        return 3;
    } catch (const levyrate::UnstablePolicy& e) {
        std::cerr << "unstable policy: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
