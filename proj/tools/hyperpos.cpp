// hyperpos: spectra, stability certificates, equilibria, feedback design and
// simulation for polynomial systems on hypergraphs.
//
// Exit codes: 0 ok, 2 invalid input, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperpos/control.hpp"
#include "hyperpos/dynamics.hpp"
#include "hyperpos/error.hpp"
#include "hyperpos/io.hpp"
#include "hyperpos/multilinear_solve.hpp"
#include "hyperpos/repro.hpp"
#include "hyperpos/spectral.hpp"
#include "hyperpos/stability.hpp"

namespace fs = std::filesystem;
using namespace hyperpos;
using io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct Globals {
    std::string input;
    std::string out_dir;
    std::optional<double> tol;
    std::uint64_t seed = 1;
    bool json = false;
};

PowerOptions power_options(const Globals& g) {
    PowerOptions p;
    if (g.tol) p.tol = *g.tol;
    return p;
}

std::string require_input(const Globals& g) {
    if (g.input.empty()) throw Error(ErrorCode::InvalidArgument, "--input is required");
    return g.input;
}

std::string vec_text(const Vector& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += io::format_double(v[i]);
    }
    return s;
}

fs::path out_path(const Globals& g, const std::string& file) {
    const fs::path dir = g.out_dir.empty() ? fs::path(".") : fs::path(g.out_dir);
    fs::create_directories(dir);
    return dir / file;
}

// Prints the JSON document or its flat key=value form and, with --out-dir,
// keeps a copy as <name>.json.
void emit(const Globals& g, const std::string& name, const Json& j) {
    if (g.json) {
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& [key, value] : j.items()) {
            if (value.is_string()) {
                std::cout << key << '=' << value.get<std::string>() << '\n';
            } else {
                std::cout << key << '=' << value.dump() << '\n';
            }
        }
    }
    if (!g.out_dir.empty()) io::write_json_file(out_path(g, name + ".json"), j);
}

CubicalTensor load_tensor_arg(const Globals& g) {
    const Json j = io::read_json_file(require_input(g));
    if (j.contains("type")) {
        const io::ModelSpec spec = io::model_from_json(j);
        if (spec.layers.size() != 1 || spec.sis) {
            throw Error(ErrorCode::InvalidArgument, "expected a single tensor");
        }
        return spec.layers.front();
    }
    return io::tensor_from_json(j);
}

// ---- spectrum ----------------------------------------------------------------

int cmd_spectrum(const Globals& g) {
    const CubicalTensor a = load_tensor_arg(g);
    Json j;
    j["order"] = a.order();
    j["dim"] = a.dim();
    const EigenPair pair = perron_metzler(a, power_options(g));
    j["value"] = pair.value;
    j["vector"] = pair.vector;
    j["residual"] = pair.residual;
    j["iterations"] = pair.iterations;
    j["bracket"] = {pair.lower, pair.upper};
    j["shift"] = metzler_split(a).shift;
    j["strongly_connected"] = is_strongly_connected(metzler_split(a).nonneg);
    if (a.dim() <= kExactIrreducibilityCap) {
        j["irreducible"] = is_irreducible(a);
    } else {
        j["irreducible"] = "unchecked above n = 20; strong connectivity is the sufficient-only test";
    }
    if (is_supersymmetric(a)) j["gershgorin"] = io::to_json(gershgorin_bounds(a));
    emit(g, "spectrum", j);
    return kExitOk;
}

// ---- certify -----------------------------------------------------------------

int cmd_certify(const Globals& g) {
    const io::ModelSpec spec = io::model_from_json(io::read_json_file(require_input(g)));
    const double tol = g.tol.value_or(kDefaultSignTol);

    Json attempts = Json::array();
    std::optional<StabilityCertificate> decided;
    std::optional<StabilityCertificate> last;
    std::optional<Error> last_error;

    auto attempt = [&](const char* method, auto&& fn) {
        if (decided) return;
        try {
            StabilityCertificate c = fn();
            attempts.push_back({{"method", method}, {"verdict", to_string(c.verdict)}});
            if (c.verdict != Verdict::Inconclusive) decided = c;
            last = std::move(c);
        } catch (const Error& e) {
            attempts.push_back({{"method", method}, {"error", e.what()}});
            last_error = e;
        }
    };

    if (spec.kind == ModelKind::Sis) {
        attempt("SisCondition", [&] { return certify_sis(*spec.sis, tol); });
    } else if (spec.kind == ModelKind::Affine || spec.kind == ModelKind::LotkaVolterra) {
        throw Error(ErrorCode::InvalidModel,
                    "certify covers homogeneous, layered, shifted and SIS models; use "
                    "`equilibrium` for affine and Lotka-Volterra models");
    } else {
        const auto& layers = spec.layers;
        if (layers.size() == 1) {
            attempt("DiagDominance", [&] { return quick_check_diag_dominant(layers.front()); });
        }
        attempt("OnesVector", [&] { return certify_ones_vector(layers); });
        if (layers.size() == 1) {
            attempt("PerronSign", [&] { return certify_uniform(layers.front(), tol); });
        } else {
            attempt("SharedEigenvector",
                    [&] { return certify_nonuniform_shared_eigvec(layers, tol); });
            attempt("CommonPositiveVector", [&] { return certify_common_positive_vector(layers); });
        }
    }

    if (!decided && !last && last_error) throw *last_error;
    StabilityCertificate cert = decided ? *decided : *last;
    Json j = io::to_json(cert);
    j["attempts"] = std::move(attempts);
    emit(g, "certificate", j);
    return kExitOk;
}

// ---- simulate ----------------------------------------------------------------

struct SimArgs {
    std::string repro;
    std::vector<double> x0;
    int runs = 1;
    std::optional<double> dt, horizon, conv_eps, cap;
    std::optional<int> record_every;
    std::optional<unsigned> threads;
};

void apply(const SimArgs& s, SimConfig& cfg) {
    if (s.dt) cfg.dt = *s.dt;
    if (s.horizon) cfg.horizon = *s.horizon;
    if (s.conv_eps) cfg.conv_eps = *s.conv_eps;
    if (s.cap) cfg.blowup_cap = *s.cap;
    if (s.record_every) cfg.record_every = *s.record_every;
}

Json write_run(const Globals& g, const std::string& label, const HypergraphModel& model,
               const SimConfig& cfg, const Trajectory& traj) {
    const fs::path csv = out_path(g, label + ".csv");
    std::ofstream out(csv);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + csv.string());
    io::write_csv(out, traj);
    Json meta = io::run_metadata(model, cfg, traj);
    meta["label"] = label;
    meta["csv"] = csv.filename().string();
    io::write_json_file(out_path(g, label + ".json"), meta);
    return Json{{"label", label},
                {"termination", to_string(traj.termination)},
                {"final_time", traj.final_time},
                {"final_state", traj.final_state()},
                {"invariants_held", traj.all_in_sets()},
                {"csv", csv.string()}};
}

int cmd_simulate(const Globals& g, const SimArgs& s) {
    Json runs = Json::array();
    Json j;
    if (!s.repro.empty()) {
        const repro::Setup setup = repro::setup(s.repro, g.seed);
        for (auto run : setup.runs) {
            apply(s, run.config);
            runs.push_back(write_run(g, run.label, run.model, run.config,
                                     simulate(run.model, run.x0, run.config)));
        }
        j["repro"] = setup.name;
        j["description"] = setup.description;
    } else {
        const io::ModelSpec spec = io::model_from_json(io::read_json_file(require_input(g)));
        const HypergraphModel model = io::to_model(spec);
        SimConfig cfg;
        apply(s, cfg);
        if (model.kind == ModelKind::Affine || model.kind == ModelKind::LotkaVolterra) {
            try {
                cfg.target = equilibrium_affine(model.layers.front(), *model.constant).solution;
            } catch (const Error&) {
                // no positive equilibrium to aim for; run to the horizon
            }
        }
        const auto n = static_cast<std::size_t>(model.dim());
        std::vector<Vector> starts;
        if (!s.x0.empty()) {
            starts.push_back(s.x0);
        } else if (spec.x0 && s.runs == 1) {
            starts.push_back(*spec.x0);
        } else {
            std::mt19937_64 rng(g.seed);
            for (int r = 0; r < s.runs; ++r) {
                Vector x = repro::random_vector(rng, n, 0.0, 1.0);
                if (model.shift) {
                    for (std::size_t i = 0; i < n; ++i) x[i] += (*model.shift)[i];
                }
                starts.push_back(std::move(x));
            }
        }
        for (const auto& x : starts) {
            if (x.size() != n) {
                throw Error(ErrorCode::InvalidInitialState,
                            "x0 has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(n));
            }
        }
        const auto trajs = simulate_batch(model, starts, cfg, s.threads.value_or(0));
        for (std::size_t r = 0; r < trajs.size(); ++r) {
            const std::string label =
                trajs.size() == 1 ? "trajectory" : "trajectory_" + std::to_string(r);
            runs.push_back(write_run(g, label, model, cfg, trajs[r]));
        }
        j["model_hash"] = io::hex64(io::model_hash(model));
    }
    j["runs"] = std::move(runs);
    if (g.json) {
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& r : j["runs"]) {
            std::cout << r["label"].get<std::string>() << ": "
                      << r["termination"].get<std::string>() << " at t="
                      << r["final_time"].get<double>() << " -> " << r["csv"].get<std::string>()
                      << '\n';
        }
    }
    return kExitOk;
}

// ---- equilibrium -------------------------------------------------------------

int cmd_equilibrium(const Globals& g) {
    const io::ModelSpec spec = io::model_from_json(io::read_json_file(require_input(g)));
    if (spec.kind != ModelKind::Affine && spec.kind != ModelKind::LotkaVolterra) {
        throw Error(ErrorCode::InvalidModel, "equilibrium needs an affine or lotka_volterra model");
    }
    const HypergraphModel model = io::to_model(spec);
    SolveOptions opts;
    if (g.tol) opts.tol = *g.tol;
    Json j;
    if (spec.kind == ModelKind::LotkaVolterra) {
        const LvEquilibria eq = equilibrium_lv(model.layers.front(), *model.constant, opts);
        j = io::to_json(eq.positive);
        j["boundary"] = eq.boundary;
    } else {
        j = io::to_json(equilibrium_affine(model.layers.front(), *model.constant, opts));
    }
    emit(g, "equilibrium", j);
    return kExitOk;
}

// ---- control -----------------------------------------------------------------

struct ControlArgs {
    std::string gain = "scalar";
    double margin = 1.0;
    std::string mask = "all";
    std::vector<int> edge;
    double bisect_tol = 1e-10;
};

int cmd_control(const Globals& g, const ControlArgs& c) {
    const CubicalTensor a = load_tensor_arg(g);
    const PowerOptions popts = power_options(g);
    GainDesign design;
    if (c.gain == "scalar") {
        design = design_scalar_gain(a, c.margin, popts);
    } else if (c.gain == "tensor") {
        Mask mask;
        std::string description = c.mask;
        if (c.mask == "all") {
            mask = mask_all_off_diagonal(a);
        } else if (c.mask == "hyperedge") {
            if (c.edge.empty()) throw Error(ErrorCode::InvalidArgument, "--mask hyperedge needs --edge");
            mask = mask_hyperedge(a, IndexTuple(c.edge));
            description = "hyperedge " + vec_text(Vector(c.edge.begin(), c.edge.end()));
        } else if (c.mask == "none") {
            // empty mask: only useful to confirm infeasibility
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown mask preset \"" + c.mask + "\"");
        }
        design = design_tensor_gain(a, mask, c.margin, c.bisect_tol, description, popts);
    } else {
        throw Error(ErrorCode::InvalidArgument, "--gain must be scalar or tensor");
    }
    Json j = io::to_json(design);
    const StabilityCertificate check = certify_uniform(closed_loop(a, design));
    j["closed_loop_certificate"] = io::to_json(check);
    emit(g, "gain", j);
    return kExitOk;
}

// ---- centrality --------------------------------------------------------------

int cmd_centrality(const Globals& g) {
    const CubicalTensor b = load_tensor_arg(g);
    const CentralityResult r = hec_centrality(b, power_options(g));
    emit(g, "centrality", io::to_json(r));
    return kExitOk;
}

// ---- generate ----------------------------------------------------------------

struct GenerateArgs {
    std::string kind;
    int order = 3;
    int dim = 3;
    double off_diag = 1.0;
    double diag = 0.0;
    int petals = 3;
    int core_size = 1;
    double weight = 1.0;
    std::string output;
};

int cmd_generate(const Globals& g, const GenerateArgs& a) {
    CubicalTensor t(2, 1);
    if (a.kind == "uniform") {
        if (a.order < 2 || a.dim < 1) throw Error(ErrorCode::InvalidArgument, "need k >= 2, n >= 1");
        t = uniform_tensor(a.order, a.dim, a.off_diag, a.diag);
    } else if (a.kind == "sunflower") {
        if (a.order < 2 || a.petals < 1 || a.core_size < 1 || a.core_size >= a.order) {
            throw Error(ErrorCode::InvalidArgument,
                        "need k >= 2, petals >= 1 and 1 <= core-size < k");
        }
        t = sunflower_tensor(a.order, a.petals, a.core_size, a.weight);
    } else {
        throw Error(ErrorCode::InvalidArgument, "generator must be uniform or sunflower");
    }
    const Json j = io::tensor_to_json(t);
    if (!a.output.empty()) {
        io::write_json_file(a.output, j);
    } else if (!g.out_dir.empty()) {
        io::write_json_file(out_path(g, a.kind + ".json"), j);
    } else {
        std::cout << j.dump(2) << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral analysis, stability certificates and simulation for polynomial "
                 "systems on hypergraphs"};
    app.fallthrough();
    app.require_subcommand(1);

    Globals g;
    double tol = 0.0;
    app.add_option("--input,-i", g.input, "tensor or model JSON file");
    app.add_option("--out-dir,-o", g.out_dir, "directory for CSV/JSON outputs");
    auto* tol_opt = app.add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "seed for random initial states");
    app.add_flag("--json", g.json, "machine-readable stdout");

    auto* spectrum = app.add_subcommand("spectrum", "Perron-H-eigenpair of a Metzler tensor");
    auto* certify = app.add_subcommand("certify", "stability certificate for a model");

    SimArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "integrate a model, write CSV trajectories");
    simulate_cmd->add_option("--repro", sim.repro, "canned setup")
        ->check(CLI::IsMember(repro::names()));
    simulate_cmd->add_option("--x0", sim.x0, "initial state")->delimiter(',');
    simulate_cmd->add_option("--runs", sim.runs, "random starts when no x0 is given")
        ->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--dt", sim.dt)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--horizon", sim.horizon)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--conv-eps", sim.conv_eps)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--cap", sim.cap, "blowup cap")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--record-every", sim.record_every)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--threads", sim.threads);

    auto* equilibrium = app.add_subcommand("equilibrium", "positive equilibrium of an affine or LV model");

    ControlArgs ctl;
    auto* control = app.add_subcommand("control", "stabilizing feedback gain");
    control->add_option("--gain", ctl.gain, "scalar or tensor")
        ->check(CLI::IsMember({"scalar", "tensor"}));
    control->add_option("--margin", ctl.margin, "closed-loop value must be <= -margin")
        ->check(CLI::NonNegativeNumber);
    control->add_option("--mask", ctl.mask, "all, hyperedge or none")
        ->check(CLI::IsMember({"all", "hyperedge", "none"}));
    control->add_option("--edge", ctl.edge, "node indices of the hyperedge")->delimiter(',');
    control->add_option("--bisect-tol", ctl.bisect_tol)->check(CLI::PositiveNumber);

    auto* centrality = app.add_subcommand("centrality", "H-eigenvector centrality");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "write a generated tensor as JSON");
    generate->add_option("kind", gen.kind, "uniform or sunflower")
        ->required()
        ->check(CLI::IsMember({"uniform", "sunflower"}));
    generate->add_option("--k,--order", gen.order);
    generate->add_option("--n,--dim", gen.dim);
    generate->add_option("--off-diag", gen.off_diag);
    generate->add_option("--diag", gen.diag);
    generate->add_option("--petals", gen.petals);
    generate->add_option("--core-size", gen.core_size);
    generate->add_option("--weight", gen.weight);
    generate->add_option("--output", gen.output, "file to write instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }
    if (tol_opt->count() > 0) g.tol = tol;

    try {
        if (spectrum->parsed()) return cmd_spectrum(g);
        if (certify->parsed()) return cmd_certify(g);
        if (simulate_cmd->parsed()) return cmd_simulate(g, sim);
        if (equilibrium->parsed()) return cmd_equilibrium(g);
        if (control->parsed()) return cmd_control(g, ctl);
        if (centrality->parsed()) return cmd_centrality(g);
        if (generate->parsed()) return cmd_generate(g, gen);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_numerical(e.code()) ? kExitNumerical : kExitInvalid;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
