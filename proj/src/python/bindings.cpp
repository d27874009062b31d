#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hamlock/cutoff.hpp"
#include "hamlock/diagnostics.hpp"
#include "hamlock/io.hpp"
#include "hamlock/multibump.hpp"
#include "hamlock/runner.hpp"

namespace py = pybind11;
using namespace hamlock;

namespace {

Sequence sequence_from_array(int dim, long base, const py::array_t<double>& arr) {
    auto buf = arr.request();
    std::vector<double> vals;
    if (buf.ndim == 1) {
        if (dim != 1) throw ConfigError("1-d payload requires dim == 1");
        const double* p = static_cast<const double*>(buf.ptr);
        vals.assign(p, p + buf.shape[0]);
    } else if (buf.ndim == 2) {
        if (buf.shape[1] != dim) throw ConfigError("payload columns must equal dim");
        auto a = arr.unchecked<2>();
        vals.reserve(buf.shape[0] * buf.shape[1]);
        for (py::ssize_t i = 0; i < a.shape(0); ++i)
            for (py::ssize_t j = 0; j < a.shape(1); ++j) vals.push_back(a(i, j));
    } else {
        throw ConfigError("sequence payload must be 1-d or 2-d");
    }
    return Sequence(dim, base, std::move(vals));
}

py::array_t<double> sequence_to_array(const Sequence& u) {
    long sites = u.is_zero() ? 0 : u.site_count();
    py::array_t<double> out({sites, static_cast<long>(u.dim())});
    auto a = out.mutable_unchecked<2>();
    for (long s = 0; s < sites; ++s) {
        auto x = u.site(u.first() + s);
        for (int j = 0; j < u.dim(); ++j) a(s, j) = x[j];
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_hamlock, m) {
    m.doc() = "Homoclinic and multibump solutions of periodic second-order "
              "discrete Hamiltonian systems";

    py::register_exception<ConfigError>(m, "HamlockConfigError", PyExc_ValueError);
    py::register_exception<NumericsError>(m, "HamlockNumericsError", PyExc_RuntimeError);

    py::class_<Window>(m, "Window")
        .def(py::init<long, long>(), py::arg("lo"), py::arg("hi"))
        .def_static("symmetric", &Window::symmetric)
        .def_readwrite("lo", &Window::lo)
        .def_readwrite("hi", &Window::hi)
        .def("__repr__", [](const Window& w) {
            return "Window(" + std::to_string(w.lo) + ", " + std::to_string(w.hi) + ")";
        });

    py::class_<Sequence>(m, "Sequence")
        .def(py::init(&sequence_from_array), py::arg("dim"), py::arg("base"), py::arg("values"))
        .def_static("zero", &Sequence::zero, py::arg("dim"))
        .def_static("delta", &Sequence::delta, py::arg("t"), py::arg("x"))
        .def_property_readonly("dim", &Sequence::dim)
        .def_property_readonly("base", &Sequence::first)
        .def_property_readonly("is_zero", &Sequence::is_zero)
        .def("first", &Sequence::first)
        .def("last", &Sequence::last)
        .def("value", &Sequence::value, py::arg("t"))
        .def("sup_norm", &Sequence::sup_norm)
        .def("peak_index", &Sequence::peak_index)
        .def("shifted", &Sequence::shifted, py::arg("p"))
        .def("scaled", &Sequence::scaled, py::arg("a"))
        .def("values", &sequence_to_array, "stored payload as a (sites, dim) array")
        .def("__add__", [](const Sequence& a, const Sequence& b) { return a + b; })
        .def("__sub__", [](const Sequence& a, const Sequence& b) { return a - b; })
        .def("__rmul__", [](const Sequence& u, double a) { return u.scaled(a); })
        .def("__eq__", [](const Sequence& a, const Sequence& b) { return a == b; });

    py::class_<IndexSet>(m, "IndexSet")
        .def_static("range", &IndexSet::range, py::arg("lo"), py::arg("hi"))
        .def("contains", &IndexSet::contains)
        .def("count", &IndexSet::count)
        .def("intervals", [](const IndexSet& s) {
            std::vector<std::pair<long, long>> out;
            for (const auto& iv : s.intervals()) out.emplace_back(iv.lo, iv.hi);
            return out;
        });

    py::class_<Cutoff>(m, "Cutoff")
        .def("weight", &Cutoff::weight)
        .def_property_readonly("ramp_width", &Cutoff::ramp_width)
        .def("support", &Cutoff::support)
        .def("influence", &Cutoff::influence);
    m.def("ramp_cutoff", &ramp_cutoff, py::arg("plateau"), py::arg("ramp_width"));
    m.def("apply_cutoff", &apply_cutoff, py::arg("cutoff"), py::arg("u"));

    py::class_<Witness>(m, "Witness")
        .def(py::init([](long t0, const Eigen::VectorXd& x0) { return Witness{t0, x0}; }),
             py::arg("t0"), py::arg("x0"))
        .def_readwrite("t0", &Witness::t0)
        .def_readwrite("x0", &Witness::x0);

    py::class_<SystemModel>(m, "SystemModel")
        .def_property_readonly("dim", &SystemModel::dim)
        .def_property_readonly("period", &SystemModel::period)
        .def_property_readonly("alpha", &SystemModel::alpha)
        .def_property_readonly("beta", &SystemModel::beta)
        .def_property_readonly("name", &SystemModel::name)
        .def("L", &SystemModel::L, py::arg("t"), py::return_value_policy::copy)
        .def("V", &SystemModel::V, py::arg("t"), py::arg("x"))
        .def("Vx", &SystemModel::Vx, py::arg("t"), py::arg("x"))
        .def("hessian", &SystemModel::hessian, py::arg("t"), py::arg("x"))
        .def_property_readonly("witness", &SystemModel::witness)
        .def_property_readonly("min_L_eigenvalue", &SystemModel::min_L_eigenvalue);
    m.def("builtin_model", &builtin_model, py::arg("name"), py::arg("params"));

    py::class_<AssumptionCheck>(m, "AssumptionCheck")
        .def_readonly("name", &AssumptionCheck::name)
        .def_readonly("pass_", &AssumptionCheck::pass)
        .def_readonly("margin", &AssumptionCheck::margin)
        .def_readonly("detail", &AssumptionCheck::detail);
    py::class_<AssumptionReport>(m, "AssumptionReport")
        .def_readonly("checks", &AssumptionReport::checks)
        .def_readonly("all_pass", &AssumptionReport::all_pass)
        .def_readonly("grid_description", &AssumptionReport::grid_description);
    py::class_<SampleGrid>(m, "SampleGrid")
        .def_static("standard", &SampleGrid::standard, py::arg("seed") = 0);
    m.def("check_assumptions", &check_assumptions, py::arg("model"), py::arg("grid"));

    m.def("inner_l2", &inner_l2, py::arg("u"), py::arg("v"));
    m.def("inner_star", &inner_star, py::arg("u"), py::arg("v"), py::arg("model"));
    m.def("norm_star", &norm_star, py::arg("u"), py::arg("model"));
    m.def("window_energy", &window_energy, py::arg("u"), py::arg("F"), py::arg("model"));
    m.def("apply_operator_A", &apply_operator_A, py::arg("u"), py::arg("model"));
    m.def("action", &action, py::arg("u"), py::arg("model"));
    m.def("window_action", &window_action, py::arg("u"), py::arg("I"), py::arg("model"));
    m.def("residual", &residual, py::arg("u"), py::arg("model"));
    m.def("grad_l2", &grad_l2, py::arg("u"), py::arg("model"));

    py::class_<OperatorA>(m, "OperatorA")
        .def(py::init<const SystemModel&, const Window&>(), py::arg("model"), py::arg("window"))
        .def("apply", &OperatorA::apply)
        .def("solve", &OperatorA::solve);
    m.def("grad_star", &grad_star, py::arg("u"), py::arg("model"), py::arg("A"));

    py::class_<FlowTrajectory>(m, "FlowTrajectory")
        .def_readonly("iterates", &FlowTrajectory::iterates)
        .def_readonly("actions", &FlowTrajectory::actions)
        .def_readonly("grad_norms", &FlowTrajectory::grad_norms)
        .def_readonly("step_sizes", &FlowTrajectory::step_sizes)
        .def_readonly("reached_tolerance", &FlowTrajectory::reached_tolerance)
        .def_readonly("stagnated", &FlowTrajectory::stagnated);
    py::class_<DescentControl>(m, "DescentControl")
        .def(py::init<>())
        .def_readwrite("h0", &DescentControl::h0)
        .def_readwrite("tol", &DescentControl::tol)
        .def_readwrite("armijo", &DescentControl::armijo);
    m.def("descend", &descend, py::arg("u0"), py::arg("model"), py::arg("A"), py::arg("steps"),
          py::arg("ctrl") = DescentControl{});

    py::class_<NewtonOptions>(m, "NewtonOptions")
        .def(py::init<>())
        .def_readwrite("tol_res", &NewtonOptions::tol_res)
        .def_readwrite("max_iter", &NewtonOptions::max_iter);
    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("solution", &SolveReport::solution)
        .def_readonly("residual_sup", &SolveReport::residual_sup)
        .def_readonly("action_value", &SolveReport::action_value)
        .def_readonly("star_grad_norm", &SolveReport::star_grad_norm)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("converged", &SolveReport::converged)
        .def_readonly("zero_solution", &SolveReport::zero_solution)
        .def_readonly("window_used", &SolveReport::window_used);
    m.def("newton_refine", &newton_refine, py::arg("u0"), py::arg("model"), py::arg("window"),
          py::arg("opts") = NewtonOptions{});

    py::class_<Path>(m, "Path")
        .def_readonly("nodes", &Path::nodes)
        .def_readonly("levels", &Path::levels)
        .def("argmax_node", &Path::argmax_node)
        .def("level", &Path::level);
    py::class_<MinimaxEstimate>(m, "MinimaxEstimate")
        .def_readonly("level", &MinimaxEstimate::level)
        .def_readonly("argmax_node", &MinimaxEstimate::argmax_node)
        .def_readonly("history", &MinimaxEstimate::history)
        .def_readonly("plateau_reached", &MinimaxEstimate::plateau_reached);
    py::class_<DeformControl>(m, "DeformControl")
        .def(py::init<>())
        .def_readwrite("window", &DeformControl::window)
        .def_readwrite("steps_per_node", &DeformControl::steps_per_node)
        .def_readwrite("delta_path", &DeformControl::delta_path)
        .def_readwrite("plateau_tol", &DeformControl::plateau_tol)
        .def_readwrite("plateau_rounds", &DeformControl::plateau_rounds);
    m.def("negative_endpoint", &negative_endpoint, py::arg("model"));
    m.def("initial_path", &initial_path, py::arg("model"), py::arg("nodes"));
    m.def("deform_path", &deform_path, py::arg("path"), py::arg("model"), py::arg("rounds"),
          py::arg("ctrl"));

    py::class_<OneBumpConfig>(m, "OneBumpConfig")
        .def(py::init<>())
        .def_readwrite("window", &OneBumpConfig::window)
        .def_readwrite("path_nodes", &OneBumpConfig::path_nodes)
        .def_readwrite("max_rounds", &OneBumpConfig::max_rounds)
        .def_readwrite("deform", &OneBumpConfig::deform)
        .def_readwrite("newton", &OneBumpConfig::newton)
        .def_readwrite("seed", &OneBumpConfig::seed);
    py::class_<OneBumpResult>(m, "OneBumpResult")
        .def_readonly("report", &OneBumpResult::report)
        .def_readonly("minimax", &OneBumpResult::minimax)
        .def_readonly("path", &OneBumpResult::path)
        .def_readonly("recenter_shift", &OneBumpResult::recenter_shift);
    m.def("find_one_bump", &find_one_bump, py::arg("model"),
          py::arg("cfg") = OneBumpConfig{});

    py::class_<SeparationVector>(m, "SeparationVector")
        .def_static("make", &SeparationVector::make, py::arg("points"), py::arg("N"),
                    py::arg("T"))
        .def_readonly("points", &SeparationVector::points)
        .def_readonly("N", &SeparationVector::N)
        .def_readonly("T", &SeparationVector::T)
        .def_property_readonly("k", &SeparationVector::k);
    m.def("make_separation", &make_separation, py::arg("k"), py::arg("N"), py::arg("T"),
          py::arg("spacing"), py::arg("bound"));
    py::class_<WindowSystem>(m, "WindowSystem")
        .def_readonly("I", &WindowSystem::I)
        .def_readonly("M", &WindowSystem::M);
    m.def("windows", &windows, py::arg("P"), py::arg("bound"));
    m.def("glue", &glue, py::arg("v"), py::arg("P"), py::arg("bound"));
    m.def("glue_path", &glue_path, py::arg("gamma"), py::arg("P"), py::arg("theta"),
          py::arg("bound"));

    py::class_<MultibumpConfig>(m, "MultibumpConfig")
        .def(py::init<>())
        .def_readwrite("window", &MultibumpConfig::window)
        .def_readwrite("newton", &MultibumpConfig::newton)
        .def_readwrite("tol_level", &MultibumpConfig::tol_level)
        .def_readwrite("eps_tail", &MultibumpConfig::eps_tail);
    py::class_<MultibumpReport>(m, "MultibumpReport")
        .def_readonly("solution", &MultibumpReport::solution)
        .def_readonly("per_window_distance", &MultibumpReport::per_window_distance)
        .def_readonly("per_window_action", &MultibumpReport::per_window_action)
        .def_readonly("tail_energies", &MultibumpReport::tail_energies)
        .def_readonly("residual_sup", &MultibumpReport::residual_sup)
        .def_readonly("action_value", &MultibumpReport::action_value)
        .def_readonly("one_bump_action", &MultibumpReport::one_bump_action)
        .def_readonly("newton_converged", &MultibumpReport::newton_converged)
        .def_readonly("pass_", &MultibumpReport::pass)
        .def_readonly("failed_clauses", &MultibumpReport::failed_clauses)
        .def_readonly("window_used", &MultibumpReport::window_used);
    m.def("find_multibump", &find_multibump, py::arg("v"), py::arg("P"), py::arg("model"),
          py::arg("r"), py::arg("cfg") = MultibumpConfig{});

    py::class_<MassProfile>(m, "MassProfile")
        .def(py::init([](long base, const std::vector<double>& values) {
                 MassProfile p;
                 p.base = base;
                 p.values = values;
                 return p;
             }),
             py::arg("base"), py::arg("values"))
        .def_static("from_sequence", &MassProfile::from_sequence)
        .def_readwrite("base", &MassProfile::base)
        .def_readwrite("values", &MassProfile::values);
    py::class_<CCVerdict>(m, "CCVerdict")
        .def_property_readonly("kind", [](const CCVerdict& v) { return to_string(v.kind); })
        .def_readonly("centers", &CCVerdict::centers)
        .def_readonly("eta", &CCVerdict::eta)
        .def_readonly("detail", &CCVerdict::detail);
    m.def("cc_classify", &cc_classify, py::arg("rhos"), py::arg("eps_grid"), py::arg("N_grid"));

    py::class_<Bump>(m, "Bump")
        .def_readonly("center", &Bump::center)
        .def_readonly("piece", &Bump::piece);
    py::class_<BumpDecomposition>(m, "BumpDecomposition")
        .def_readonly("bumps", &BumpDecomposition::bumps)
        .def_readonly("remainder_norm", &BumpDecomposition::remainder_norm);
    m.def("bump_decompose", &bump_decompose, py::arg("u"), py::arg("model"), py::arg("sep"),
          py::arg("thresh"));
    py::class_<DecayEstimate>(m, "DecayEstimate")
        .def_readonly("lambda_", &DecayEstimate::lambda)
        .def_readonly("lambda_left", &DecayEstimate::lambda_left)
        .def_readonly("lambda_right", &DecayEstimate::lambda_right)
        .def_readonly("decaying", &DecayEstimate::decaying);
    m.def("decay_rate", &decay_rate, py::arg("u"));

    m.def("write_sequence_csv",
          [](const std::filesystem::path& p, const Sequence& u) { write_sequence_csv(p, u); },
          py::arg("path"), py::arg("u"));
    m.def("read_sequence_csv",
          [](const std::filesystem::path& p) { return read_sequence_csv(p); },
          py::arg("path"));

    m.def("run_command",
          [](const std::string& command, const std::string& config_json,
             const std::filesystem::path& out_dir, bool quiet) {
              RunConfig cfg = RunConfig::from_json(nlohmann::json::parse(config_json));
              return run_command(command, cfg, out_dir, quiet);
          },
          py::arg("command"), py::arg("config_json"), py::arg("out_dir"),
          py::arg("quiet") = true);

    m.attr("__version__") = "0.1.0";
}
