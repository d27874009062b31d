#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamlock/model.hpp"
#include "hamlock/mountainpass.hpp"
#include "hamlock/multibump.hpp"

namespace hamlock {

/// Batch-run configuration, loaded from a JSON document. Every report
/// embeds the resolved form so runs are reproducible from the report
/// alone.
struct RunConfig {
    // model: a gallery name with parameters, or a custom table of L
    // matrices with a power-law potential.
    std::string model_name = "scalar_power";
    std::vector<double> model_params = {1.0, 4.0};
    struct CustomModel {
        int dim = 1;
        int period = 1;
        std::vector<Eigen::MatrixXd> L;
        double beta = 4.0;
        double alpha = 0.5;
        long witness_t0 = 0;
        Eigen::VectorXd witness_x0;
    };
    std::optional<CustomModel> custom;

    long window = 80;  // halfwidth of the bounding window
    long seed = 0;

    NewtonOptions newton;
    double descent_tol = 1e-8;
    double r0 = 0.1;  // small-window audit radius for solved orbits

    int path_nodes = 64;
    int max_rounds = 400;
    int steps_per_node = 3;
    double delta_path = 0.05;
    double plateau_tol = 1e-8;
    int plateau_rounds = 5;

    struct Multibump {
        int k = 2;
        int N = 4;
        long spacing = 48;
        double r = 0.1;
        double eps = -1;         // <= 0: default 1e-10 * ||v||_*^2
        double tol_level = 1e-6;
    } multibump;

    struct Flow {
        int steps = 200;
        double seed_scale = 0.8;         // start from seed_scale * the one-bump orbit
        std::string seed_csv;            // overrides seed_scale when nonempty
    } flow;

    struct Diagnose {
        std::string solution_csv;
        std::string profiles_csv;
        long sep = 3;
        double thresh = 1e-3;
    } diagnose;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::filesystem::path& p);
    nlohmann::json to_json() const;

    SystemModel make_model() const;
    void validate(const std::string& command) const;  // throws ConfigError
};

/// Executes one command ("check-model", "one-bump", "multibump", "flow",
/// "diagnose"), writing report.json and CSV traces into out_dir.
/// Returns 0 when the command's verdict is pass/converged, 1 on a
/// verification or convergence failure, 2 on a configuration error.
int run_command(const std::string& command, const RunConfig& cfg,
                const std::filesystem::path& out_dir, bool quiet);

}  // namespace hamlock
