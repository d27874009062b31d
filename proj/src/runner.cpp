#include "hamlock/runner.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include "hamlock/diagnostics.hpp"
#include "hamlock/io.hpp"

namespace hamlock {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
    json out = json::array();
    for (int r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        out.push_back(row);
    }
    return out;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a nonempty array of rows");
    Eigen::MatrixXd M(j.size(), j[0].size());
    for (size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != j[0].size()) throw ConfigError("ragged matrix rows");
        for (size_t c = 0; c < j[r].size(); ++c) M(r, c) = j[r][c].get<double>();
    }
    return M;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
    RunConfig cfg;
    try {
        if (j.contains("model")) {
            const json& m = j["model"];
            if (m.contains("custom")) {
                const json& c = m["custom"];
                CustomModel cm;
                cm.dim = c.value("dim", 1);
                cm.period = c.value("period", 1);
                if (!c.contains("L")) throw ConfigError("custom model needs L matrices");
                for (const auto& mat : c["L"]) cm.L.push_back(matrix_from_json(mat));
                cm.beta = c.value("beta", 4.0);
                cm.alpha = c.value("alpha", 0.5 * (cm.beta / 2.0 - 1.0));
                if (!c.contains("witness")) throw ConfigError("custom model needs a witness");
                cm.witness_t0 = c["witness"].value("t0", 0L);
                auto x0 = c["witness"]["x0"].get<std::vector<double>>();
                cm.witness_x0 = Eigen::Map<Eigen::VectorXd>(x0.data(), x0.size());
                cfg.custom = std::move(cm);
                cfg.model_name = "custom";
                cfg.model_params.clear();
            } else {
                cfg.model_name = m.value("name", cfg.model_name);
                if (m.contains("params"))
                    cfg.model_params = m["params"].get<std::vector<double>>();
            }
        }
        cfg.window = j.value("window", cfg.window);
        cfg.seed = j.value("seed", cfg.seed);
        if (j.contains("newton")) {
            cfg.newton.tol_res = j["newton"].value("tol_res", cfg.newton.tol_res);
            cfg.newton.max_iter = j["newton"].value("max_iter", cfg.newton.max_iter);
        }
        if (j.contains("descent")) cfg.descent_tol = j["descent"].value("tol", cfg.descent_tol);
        cfg.r0 = j.value("r0", cfg.r0);
        if (j.contains("path")) {
            const json& p = j["path"];
            cfg.path_nodes = p.value("nodes", cfg.path_nodes);
            cfg.max_rounds = p.value("max_rounds", cfg.max_rounds);
            cfg.steps_per_node = p.value("steps_per_node", cfg.steps_per_node);
            cfg.delta_path = p.value("delta_path", cfg.delta_path);
            cfg.plateau_tol = p.value("plateau_tol", cfg.plateau_tol);
            cfg.plateau_rounds = p.value("plateau_rounds", cfg.plateau_rounds);
        }
        if (j.contains("multibump")) {
            const json& mb = j["multibump"];
            cfg.multibump.k = mb.value("k", cfg.multibump.k);
            cfg.multibump.N = mb.value("N", cfg.multibump.N);
            cfg.multibump.spacing = mb.value("spacing", cfg.multibump.spacing);
            cfg.multibump.r = mb.value("r", cfg.multibump.r);
            cfg.multibump.eps = mb.value("eps", cfg.multibump.eps);
            cfg.multibump.tol_level = mb.value("tol_level", cfg.multibump.tol_level);
        }
        if (j.contains("flow")) {
            const json& f = j["flow"];
            cfg.flow.steps = f.value("steps", cfg.flow.steps);
            cfg.flow.seed_scale = f.value("seed_scale", cfg.flow.seed_scale);
            cfg.flow.seed_csv = f.value("seed_csv", cfg.flow.seed_csv);
        }
        if (j.contains("diagnose")) {
            const json& d = j["diagnose"];
            cfg.diagnose.solution_csv = d.value("solution_csv", cfg.diagnose.solution_csv);
            cfg.diagnose.profiles_csv = d.value("profiles_csv", cfg.diagnose.profiles_csv);
            cfg.diagnose.sep = d.value("sep", cfg.diagnose.sep);
            cfg.diagnose.thresh = d.value("thresh", cfg.diagnose.thresh);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& p) {
    std::ifstream is(p);
    if (!is) throw ConfigError("cannot open config: " + p.string());
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

json RunConfig::to_json() const {
    json j;
    if (custom) {
        json L = json::array();
        for (const auto& M : custom->L) L.push_back(matrix_to_json(M));
        j["model"] = {{"custom",
                       {{"dim", custom->dim},
                        {"period", custom->period},
                        {"L", L},
                        {"beta", custom->beta},
                        {"alpha", custom->alpha},
                        {"witness",
                         {{"t0", custom->witness_t0}, {"x0", vector_to_json(custom->witness_x0)}}}}}};
    } else {
        j["model"] = {{"name", model_name}, {"params", model_params}};
    }
    j["window"] = window;
    j["seed"] = seed;
    j["newton"] = {{"tol_res", newton.tol_res}, {"max_iter", newton.max_iter}};
    j["descent"] = {{"tol", descent_tol}};
    j["r0"] = r0;
    j["path"] = {{"nodes", path_nodes},
                 {"max_rounds", max_rounds},
                 {"steps_per_node", steps_per_node},
                 {"delta_path", delta_path},
                 {"plateau_tol", plateau_tol},
                 {"plateau_rounds", plateau_rounds}};
    j["multibump"] = {{"k", multibump.k},     {"N", multibump.N},
                      {"spacing", multibump.spacing}, {"r", multibump.r},
                      {"eps", multibump.eps}, {"tol_level", multibump.tol_level}};
    j["flow"] = {{"steps", flow.steps},
                 {"seed_scale", flow.seed_scale},
                 {"seed_csv", flow.seed_csv}};
    j["diagnose"] = {{"solution_csv", diagnose.solution_csv},
                     {"profiles_csv", diagnose.profiles_csv},
                     {"sep", diagnose.sep},
                     {"thresh", diagnose.thresh}};
    return j;
}

SystemModel RunConfig::make_model() const {
    if (custom) {
        const CustomModel& c = *custom;
        double beta = c.beta;
        auto V = [beta](int, const Eigen::VectorXd& x) {
            return std::pow(x.norm(), beta) / beta;
        };
        auto Vx = [beta](int, const Eigen::VectorXd& x) -> Eigen::VectorXd {
            double r = x.norm();
            if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
            return std::pow(r, beta - 2.0) * x;
        };
        Witness w{c.witness_t0, c.witness_x0};
        return SystemModel(c.dim, c.period, c.L, V, Vx, std::nullopt, c.alpha, beta,
                           std::move(w), "custom");
    }
    return builtin_model(model_name, model_params);
}

void RunConfig::validate(const std::string& command) const {
    if (window < 4) throw ConfigError("window must be at least 4");
    if (!(newton.tol_res > 0) || !(descent_tol > 0) || !(plateau_tol > 0) ||
        !(multibump.tol_level > 0))
        throw ConfigError("all tolerances must be positive");
    if (command == "multibump") {
        if (window < 4L * multibump.spacing * multibump.k)
            throw ConfigError("multibump runs need window >= 4 * spacing * k");
        if (!(multibump.r > 0)) throw ConfigError("multibump radius r must be positive");
    }
}

namespace {

std::string timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json solve_report_json(const SolveReport& r) {
    return {{"residual_sup", r.residual_sup},
            {"action", r.action_value},
            {"star_grad_norm", r.star_grad_norm},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"singular_jacobian", r.singular_jacobian},
            {"zero_solution", r.zero_solution},
            {"window_used", r.window_used}};
}

int cmd_check_model(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
    SystemModel model = cfg.make_model();
    AssumptionReport rep = check_assumptions(model, SampleGrid::standard(static_cast<unsigned>(cfg.seed)));
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(
            {{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}, {"detail", c.detail}});
    report["result"] = {{"checks", checks},
                        {"all_pass", rep.all_pass},
                        {"grid", rep.grid_description},
                        {"model", model.name()}};
    (void)out;
    return rep.all_pass ? 0 : 1;
}

OneBumpConfig one_bump_config(const RunConfig& cfg, long window) {
    OneBumpConfig ob;
    ob.window = window;
    ob.path_nodes = cfg.path_nodes;
    ob.max_rounds = cfg.max_rounds;
    ob.deform.steps_per_node = cfg.steps_per_node;
    ob.deform.delta_path = cfg.delta_path;
    ob.deform.plateau_tol = cfg.plateau_tol;
    ob.deform.plateau_rounds = cfg.plateau_rounds;
    ob.deform.descent.tol = cfg.descent_tol;
    ob.newton = cfg.newton;
    return ob;
}

int cmd_one_bump(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
    SystemModel model = cfg.make_model();
    OneBumpResult res = find_one_bump(model, one_bump_config(cfg, cfg.window));
    write_sequence_csv(out / "solution.csv", res.report.solution);
    write_levels_csv(out / "level_history.csv", res.minimax.history);
    SmallWindowAudit audit = audit_small_window_bounds(res.report.solution, model, cfg.r0);
    report["result"] = {{"r0_audit",
                         {{"r0", audit.r0},
                          {"windows_checked", audit.windows_checked},
                          {"worst_potential_margin", audit.worst_potential_margin},
                          {"worst_gradient_margin", audit.worst_gradient_margin},
                          {"pass", audit.pass}}},
                        {"solve", solve_report_json(res.report)},
                        {"recenter_shift", res.recenter_shift},
                        {"minimax",
                         {{"level", res.minimax.level},
                          {"argmax_node", res.minimax.argmax_node},
                          {"rounds", res.minimax.history.size()},
                          {"plateau_reached", res.minimax.plateau_reached}}},
                        {"artifacts", {"solution.csv", "level_history.csv"}}};
    return res.report.converged && !res.report.zero_solution ? 0 : 1;
}

int cmd_multibump(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
    SystemModel model = cfg.make_model();
    Window bound = Window::symmetric(cfg.window);
    SeparationVector P = make_separation(cfg.multibump.k, cfg.multibump.N, model.period(),
                                         cfg.multibump.spacing, bound);

    long bump_window = std::min<long>(cfg.window, 100);
    OneBumpResult one = find_one_bump(model, one_bump_config(cfg, bump_window));
    if (!one.report.converged) {
        report["result"] = {{"one_bump", solve_report_json(one.report)},
                            {"error", "one-bump stage failed to converge"}};
        return 1;
    }

    MultibumpConfig mc;
    mc.window = cfg.window;
    mc.newton = cfg.newton;
    mc.tol_level = cfg.multibump.tol_level;
    mc.eps_tail = cfg.multibump.eps;
    MultibumpReport rep =
        find_multibump(one.report.solution, P, model, cfg.multibump.r, mc);

    write_sequence_csv(out / "solution.csv", rep.solution);
    report["result"] = {{"one_bump", solve_report_json(one.report)},
                        {"centers", P.points},
                        {"per_window_distance", rep.per_window_distance},
                        {"per_window_action", rep.per_window_action},
                        {"tail_energies", rep.tail_energies},
                        {"residual_sup", rep.residual_sup},
                        {"action", rep.action_value},
                        {"one_bump_action", rep.one_bump_action},
                        {"newton_converged", rep.newton_converged},
                        {"verdict", rep.pass ? "pass" : "fail"},
                        {"failed_clauses", rep.failed_clauses},
                        {"artifacts", {"solution.csv"}}};
    return rep.pass ? 0 : 1;
}

int cmd_flow(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
    SystemModel model = cfg.make_model();
    Sequence seed(model.dim());
    if (!cfg.flow.seed_csv.empty()) {
        seed = read_sequence_csv(std::filesystem::path(cfg.flow.seed_csv));
        if (seed.dim() != model.dim()) throw ConfigError("flow seed has the wrong dimension");
    } else {
        OneBumpResult one = find_one_bump(model, one_bump_config(cfg, cfg.window));
        if (!one.report.converged) throw NumericsError("flow seeding: one-bump stage failed");
        seed = one.report.solution.scaled(cfg.flow.seed_scale);
    }
    OperatorA A(model, Window::symmetric(cfg.window));
    DescentControl dc;
    dc.tol = cfg.descent_tol;
    FlowTrajectory traj = descend(seed, model, A, cfg.flow.steps, dc);
    write_trajectory_csv(out / "trajectory.csv", traj);
    report["result"] = {{"steps_taken", traj.actions.size() - 1},
                        {"final_action", traj.actions.back()},
                        {"final_grad_norm", traj.grad_norms.back()},
                        {"reached_tolerance", traj.reached_tolerance},
                        {"stagnated", traj.stagnated},
                        {"artifacts", {"trajectory.csv"}}};
    return traj.stagnated ? 1 : 0;
}

int cmd_diagnose(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
    SystemModel model = cfg.make_model();
    json result;
    bool ok = true;
    bool requested = false;

    if (!cfg.diagnose.solution_csv.empty()) {
        requested = true;
        Sequence u = read_sequence_csv(std::filesystem::path(cfg.diagnose.solution_csv));
        BumpDecomposition bd = bump_decompose(u, model, cfg.diagnose.sep, cfg.diagnose.thresh);
        json bumps = json::array();
        for (const auto& b : bd.bumps)
            bumps.push_back({{"center", b.center}, {"norm", norm_star(b.piece, model)}});
        result["bumps"] = bumps;
        result["remainder_norm"] = bd.remainder_norm;
        try {
            DecayEstimate d = decay_rate(u);
            result["decay"] = {{"lambda", d.lambda},
                               {"lambda_left", d.lambda_left},
                               {"lambda_right", d.lambda_right},
                               {"decaying", d.decaying}};
            ok = ok && d.decaying;
        } catch (const NumericsError& e) {
            result["decay"] = {{"error", e.what()}};
            ok = false;
        }
    }
    if (!cfg.diagnose.profiles_csv.empty()) {
        requested = true;
        auto rhos = read_profiles_csv(std::filesystem::path(cfg.diagnose.profiles_csv));
        CCVerdict v = cc_classify(rhos, {0.1, 0.02}, {8, 16, 32});
        result["cc"] = {{"kind", to_string(v.kind)},
                        {"eta", v.eta},
                        {"centers", v.centers},
                        {"detail", v.detail}};
        ok = ok && v.kind != CCKind::undetermined;
    }
    if (!requested) throw ConfigError("diagnose needs solution_csv and/or profiles_csv");
    report["result"] = result;
    (void)out;
    return ok ? 0 : 1;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& cfg,
                const std::filesystem::path& out_dir, bool quiet) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    json report;
    report["command"] = command;
    report["config"] = cfg.to_json();
    report["meta"] = {{"timestamp", timestamp()}, {"version", kVersion}};

    int code = 0;
    try {
        cfg.validate(command);
        if (command == "check-model")
            code = cmd_check_model(cfg, out_dir, report);
        else if (command == "one-bump")
            code = cmd_one_bump(cfg, out_dir, report);
        else if (command == "multibump")
            code = cmd_multibump(cfg, out_dir, report);
        else if (command == "flow")
            code = cmd_flow(cfg, out_dir, report);
        else if (command == "diagnose")
            code = cmd_diagnose(cfg, out_dir, report);
        else
            throw ConfigError("unknown command: " + command);
    } catch (const ConfigError& e) {
        report["error"] = e.what();
        code = 2;
    } catch (const std::exception& e) {
        report["error"] = e.what();
        code = 1;
    }
    report["exit_code"] = code;

    std::ofstream os(out_dir / "report.json");
    os << report.dump(2) << "\n";

    if (!quiet) {
        if (report.contains("error"))
            std::cerr << command << ": " << report["error"].get<std::string>() << "\n";
        std::cout << command << ": exit " << code << " (report: "
                  << (out_dir / "report.json").string() << ")\n";
    }
    return code;
}

}  // namespace hamlock
