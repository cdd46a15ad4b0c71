#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hyperpos/error.hpp"
#include "hyperpos/io.hpp"

namespace hyperpos::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const Json& field(const Json& j, const char* key, const std::string& ctx) {
    if (!j.is_object()) parse_error(ctx + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) parse_error(ctx + ": missing field \"" + key + "\"");
    return *it;
}

int as_int(const Json& v, const std::string& ctx) {
    if (!v.is_number_integer()) parse_error(ctx + ": expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        parse_error(ctx + ": integer out of range");
    }
    return static_cast<int>(x);
}

double as_double(const Json& v, const std::string& ctx) {
    if (!v.is_number()) parse_error(ctx + ": expected a number");
    return v.get<double>();
}

Vector as_vector(const Json& v, const std::string& ctx) {
    if (!v.is_array()) parse_error(ctx + ": expected an array of numbers");
    Vector out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_double(v[i], ctx + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::optional<Vector> opt_vector(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return as_vector(*it, key);
}

CubicalTensor generator_tensor(const Json& j) {
    const auto& g = field(j, "generator", "tensor");
    if (!g.is_string()) parse_error("tensor: \"generator\" must be a string");
    const std::string name = g.get<std::string>();
    if (name == "uniform") {
        const int k = as_int(field(j, "order", "uniform generator"), "uniform generator: order");
        const int n = as_int(field(j, "dim", "uniform generator"), "uniform generator: dim");
        if (k < 2 || n < 1) parse_error("uniform generator: need order >= 2 and dim >= 1");
        return uniform_tensor(k, n,
                              as_double(field(j, "off_diag", "uniform generator"), "off_diag"),
                              as_double(field(j, "diag", "uniform generator"), "diag"));
    }
    if (name == "sunflower") {
        const int k = as_int(field(j, "order", "sunflower generator"), "sunflower: order");
        const int r = as_int(field(j, "petals", "sunflower generator"), "sunflower: petals");
        const int core = j.contains("core_size") ? as_int(j["core_size"], "core_size") : 1;
        const double w = j.contains("weight") ? as_double(j["weight"], "weight") : 1.0;
        if (k < 2 || r < 1 || core < 1 || core >= k) {
            parse_error("sunflower generator: need order >= 2, petals >= 1, 1 <= core_size < order");
        }
        return sunflower_tensor(k, r, core, w);
    }
    parse_error("tensor: unknown generator \"" + name + "\"");
}

void put_bytes(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
}

template <class T>
void put(std::uint64_t& h, T v) {
    if constexpr (std::is_same_v<T, double>) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        put_bytes(h, &bits, sizeof bits);
    } else {
        const auto w = static_cast<std::int64_t>(v);
        put_bytes(h, &w, sizeof w);
    }
}

void put_opt(std::uint64_t& h, const std::optional<Vector>& v) {
    put(h, v ? 1 : 0);
    if (!v) return;
    put(h, v->size());
    for (double x : *v) put(h, x);
}

Json vector_json(std::span<const double> v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) parse_error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        parse_error(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

CubicalTensor tensor_from_json(const Json& j) {
    if (!j.is_object()) parse_error("tensor: expected an object");
    if (j.contains("generator")) return generator_tensor(j);

    const int k = as_int(field(j, "order", "tensor"), "tensor: order");
    const int n = as_int(field(j, "dim", "tensor"), "tensor: dim");
    if (k < 2) parse_error("tensor: order must be >= 2, got " + std::to_string(k));
    if (n < 1) parse_error("tensor: dim must be >= 1, got " + std::to_string(n));
    const auto& entries = field(j, "entries", "tensor");
    if (!entries.is_array()) parse_error("tensor: \"entries\" must be an array");

    TensorBuilder builder(k, n);
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const std::string ctx = "tensor entry " + std::to_string(e);
        const auto& idx = field(entries[e], "idx", ctx);
        if (!idx.is_array()) parse_error(ctx + ": \"idx\" must be an array");
        if (idx.size() != static_cast<std::size_t>(k)) {
            parse_error(ctx + ": idx has " + std::to_string(idx.size()) +
                        " components, expected " + std::to_string(k));
        }
        std::vector<int> comps;
        for (std::size_t m = 0; m < idx.size(); ++m) {
            const int c = as_int(idx[m], ctx + ": idx[" + std::to_string(m) + "]");
            if (c < 0 || c >= n) {
                parse_error(ctx + ": idx[" + std::to_string(m) + "] = " + std::to_string(c) +
                            " is outside [0, " + std::to_string(n) + ")");
            }
            comps.push_back(c);
        }
        const double v = as_double(field(entries[e], "val", ctx), ctx + ": val");
        if (!std::isfinite(v)) parse_error(ctx + ": val is not finite");
        builder.add(IndexTuple(std::move(comps)), v);
    }
    return builder.build();
}

Json tensor_to_json(const CubicalTensor& t) {
    Json j;
    j["order"] = t.order();
    j["dim"] = t.dim();
    Json entries = Json::array();
    for (std::size_t e = 0; e < t.nnz(); ++e) {
        const auto idx = t.index(e);
        entries.push_back({{"idx", std::vector<int>(idx.begin(), idx.end())}, {"val", t.value(e)}});
    }
    j["entries"] = std::move(entries);
    return j;
}

ModelSpec model_from_json(const Json& j) {
    if (!j.is_object()) parse_error("model: expected an object");
    ModelSpec spec;
    if (!j.contains("type")) {
        if (j.contains("order") || j.contains("generator")) {
            spec.kind = ModelKind::Homogeneous;
            spec.layers.push_back(tensor_from_json(j));
            return spec;
        }
        parse_error("model: missing field \"type\"");
    }
    const auto& type = j["type"];
    if (!type.is_string()) parse_error("model: \"type\" must be a string");
    const std::string name = type.get<std::string>();

    auto read_layers = [&] {
        if (j.contains("tensor")) spec.layers.push_back(tensor_from_json(j["tensor"]));
        if (j.contains("layers")) {
            const auto& ls = j["layers"];
            if (!ls.is_array()) parse_error("model: \"layers\" must be an array");
            for (std::size_t i = 0; i < ls.size(); ++i) {
                try {
                    spec.layers.push_back(tensor_from_json(ls[i]));
                } catch (const Error& e) {
                    parse_error("layer " + std::to_string(i) + ": " + e.what());
                }
            }
        }
        if (spec.layers.empty()) parse_error("model: no layers given");
    };

    spec.x0 = opt_vector(j, "x0");
    if (name == "homogeneous" || name == "polynomial") {
        spec.kind = name == "homogeneous" ? ModelKind::Homogeneous : ModelKind::Polynomial;
        read_layers();
        spec.b = opt_vector(j, "b");
    } else if (name == "affine" || name == "lotka_volterra") {
        spec.kind = name == "affine" ? ModelKind::Affine : ModelKind::LotkaVolterra;
        read_layers();
        spec.b = opt_vector(j, "b");
        if (!spec.b) parse_error("model: type " + name + " needs \"b\"");
    } else if (name == "shifted") {
        spec.kind = ModelKind::Shifted;
        read_layers();
        spec.a = opt_vector(j, "a");
        if (!spec.a) parse_error("model: type shifted needs \"a\"");
    } else if (name == "sis") {
        spec.kind = ModelKind::Sis;
        SisModel sis;
        sis.triplet = tensor_from_json(field(j, "triplet", "sis model"));
        const int n = sis.triplet.dim();
        sis.pairwise =
            j.contains("pairwise") ? tensor_from_json(j["pairwise"]) : CubicalTensor(2, n);
        sis.beta1 = j.contains("beta1") ? as_double(j["beta1"], "beta1") : 0.0;
        sis.beta2 = as_double(field(j, "beta2", "sis model"), "beta2");
        const auto& g = field(j, "gamma", "sis model");
        sis.gamma = g.is_number() ? Vector(static_cast<std::size_t>(n), g.get<double>())
                                  : as_vector(g, "gamma");
        spec.layers = {sis.triplet, sis.pairwise};
        spec.sis = std::move(sis);
    } else {
        parse_error("model: unknown type \"" + name + "\"");
    }
    return spec;
}

Json model_to_json(const ModelSpec& spec) {
    Json j;
    j["type"] = to_string(spec.kind);
    if (spec.sis) {
        j["triplet"] = tensor_to_json(spec.sis->triplet);
        j["pairwise"] = tensor_to_json(spec.sis->pairwise);
        j["beta1"] = spec.sis->beta1;
        j["beta2"] = spec.sis->beta2;
        j["gamma"] = vector_json(spec.sis->gamma);
    } else {
        Json ls = Json::array();
        for (const auto& l : spec.layers) ls.push_back(tensor_to_json(l));
        j["layers"] = std::move(ls);
    }
    if (spec.b) j["b"] = vector_json(*spec.b);
    if (spec.a) j["a"] = vector_json(*spec.a);
    if (spec.x0) j["x0"] = vector_json(*spec.x0);
    return j;
}

HypergraphModel to_model(const ModelSpec& spec) {
    auto single = [&]() -> const CubicalTensor& {
        if (spec.layers.size() != 1) {
            throw Error(ErrorCode::InvalidModel, std::string("model type ") + to_string(spec.kind) +
                                                     " takes exactly one tensor");
        }
        return spec.layers.front();
    };
    switch (spec.kind) {
        case ModelKind::Homogeneous:
            if (spec.layers.size() == 1 && !spec.b) return build_homogeneous(spec.layers.front());
            return build_polynomial(spec.layers, spec.b);
        case ModelKind::Polynomial: return build_polynomial(spec.layers, spec.b);
        case ModelKind::Affine: return build_affine(single(), *spec.b);
        case ModelKind::LotkaVolterra: return build_lv(single(), *spec.b);
        case ModelKind::Shifted: return build_shifted(single(), *spec.a);
        case ModelKind::Sis: return build_sis(*spec.sis);
    }
    throw Error(ErrorCode::InvalidModel, "unknown model kind");
}

Json to_json(const EigenPair& pair) {
    return Json{{"value", pair.value},
                {"vector", vector_json(pair.vector)},
                {"residual", pair.residual},
                {"iterations", pair.iterations},
                {"bracket", {pair.lower, pair.upper}}};
}

Json to_json(const StabilityCertificate& cert) {
    Json j;
    j["verdict"] = to_string(cert.verdict);
    j["method"] = to_string(cert.method);
    j["margin"] = cert.margin;
    Json w = Json::object();
    if (cert.eigen) w["value"] = cert.eigen->value;
    if (cert.vector) {
        w["vector"] = vector_json(*cert.vector);
    } else if (cert.eigen) {
        w["vector"] = vector_json(cert.eigen->vector);
    }
    j["witness"] = std::move(w);
    if (!cert.note.empty()) j["note"] = cert.note;
    return j;
}

Json to_json(const SolveReport& report) {
    return Json{{"solution", vector_json(report.solution)},
                {"residual", report.residual},
                {"iterations", report.iterations},
                {"method", report.method}};
}

Json to_json(const GainDesign& design) {
    Json j;
    j["kind"] = to_string(design.kind);
    if (design.kind == GainKind::ScalarDiag) {
        j["q"] = design.q;
    } else {
        j["alpha"] = design.alpha;
        j["mask"] = design.mask_description;
        j["bisection_steps"] = design.bisection_steps;
        if (design.d) j["D"] = tensor_to_json(*design.d);
    }
    j["open_loop_value"] = design.open_loop_value;
    j["closed_loop_value"] = design.closed_loop_value;
    j["margin"] = design.margin;
    j["unnecessary"] = design.unnecessary;
    j["cost"] = design.cost;
    return j;
}

Json to_json(const CentralityResult& result) {
    return Json{{"scores", vector_json(result.scores)},
                {"eigenvalue", result.eigenvalue},
                {"order", result.order},
                {"residual", result.residual}};
}

Json to_json(const GershgorinBounds& bounds) {
    Json disks = Json::array();
    for (const auto& d : bounds.disks) disks.push_back({{"center", d.center}, {"radius", d.radius}});
    return Json{{"disks", std::move(disks)}, {"union", {bounds.lower, bounds.upper}}};
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const Trajectory& traj) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    os << 't';
    for (std::size_t i = 0; i < n; ++i) os << ",x_" << i;
    os << ",V_max,nu_min\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        os << format_double(traj.times[s]);
        for (double x : traj.states[s]) os << ',' << format_double(x);
        os << ',' << format_double(traj.monitors.v_max[s]) << ','
           << format_double(traj.monitors.nu_min[s]) << '\n';
    }
}

std::uint64_t model_hash(const HypergraphModel& model) {
    std::uint64_t h = 14695981039346656037ull;
    put(h, static_cast<int>(model.kind));
    put(h, static_cast<int>(model.wrapper));
    put(h, model.layers.size());
    for (const auto& l : model.layers) {
        put(h, l.order());
        put(h, l.dim());
        put(h, l.nnz());
        for (std::size_t e = 0; e < l.nnz(); ++e) {
            for (int c : l.index(e)) put(h, c);
            put(h, l.value(e));
        }
    }
    put_opt(h, model.constant);
    put_opt(h, model.shift);
    put_opt(h, model.recovery);
    put(h, model.beta1);
    put(h, model.beta2);
    return h;
}

std::string hex64(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

Json run_metadata(const HypergraphModel& model, const SimConfig& config, const Trajectory& traj) {
    Json cfg{{"dt", config.dt},
             {"horizon", config.horizon},
             {"conv_eps", config.conv_eps},
             {"blowup_cap", config.blowup_cap},
             {"record_every", config.record_every},
             {"max_halvings", config.max_halvings}};
    if (config.target) cfg["target"] = vector_json(*config.target);

    Json term{{"reason", to_string(traj.termination)}, {"final_time", traj.final_time}};
    if (traj.blowup_estimate) term["blowup_estimate"] = *traj.blowup_estimate;
    if (traj.blowup_estimate_latest) term["blowup_estimate_latest"] = *traj.blowup_estimate_latest;
    term["final_state"] = vector_json(traj.final_state());

    Json sets = Json::array();
    for (std::size_t s = 0; s < traj.set_names.size(); ++s) {
        bool all = true;
        for (const auto& row : traj.in_sets) all = all && row[s];
        sets.push_back({{"name", traj.set_names[s]}, {"held", all}});
    }
    Json events = Json::array();
    for (const auto& e : traj.events) {
        events.push_back({{"t", e.t}, {"kind", e.kind}, {"detail", e.detail}});
    }
    return Json{{"model_hash", hex64(model_hash(model))},
                {"model_kind", to_string(model.kind)},
                {"dim", model.dim()},
                {"config", std::move(cfg)},
                {"termination", std::move(term)},
                {"samples", traj.times.size()},
                {"stats",
                 {{"steps", traj.stats.steps},
                  {"substeps", traj.stats.substeps},
                  {"halvings", traj.stats.halvings},
                  {"clamps", traj.stats.clamps}}},
                {"monitor", {{"order", traj.monitor_order}, {"delta", vector_json(traj.delta)}}},
                {"invariant_sets", std::move(sets)},
                {"events", std::move(events)}};
}

}  // namespace hyperpos::io
