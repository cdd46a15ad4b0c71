#pragma once

// JSON model/tensor files, certificate and report serialization, CSV
// trajectories.
//
// Tensor:  {"order": k, "dim": n, "entries": [{"idx": [...], "val": v}, ...]}
//          {"generator": "uniform", "order": k, "dim": n, "off_diag": v, "diag": w}
//          {"generator": "sunflower", "order": k, "petals": r, "core_size"?, "weight"?}
// Model:   {"type": "homogeneous" | "polynomial" | "affine" | "lotka_volterra" |
//                   "shifted" | "sis",
//           "layers": [tensor, ...], "b": [...], "a": [...],
//           "pairwise": tensor, "triplet": tensor, "beta1", "beta2", "gamma",
//           "x0": [...]}
// A bare tensor is read as a homogeneous model.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperpos/control.hpp"
#include "hyperpos/dynamics.hpp"
#include "hyperpos/multilinear_solve.hpp"
#include "hyperpos/spectral.hpp"
#include "hyperpos/stability.hpp"

namespace hyperpos::io {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

// Errors: Parse, naming the offending field or entry.
CubicalTensor tensor_from_json(const Json& j);
Json tensor_to_json(const CubicalTensor& t);

// Model file contents before the layer invariants are enforced, so that the
// certify command can also take several layers of the same order.
struct ModelSpec {
    ModelKind kind = ModelKind::Homogeneous;
    std::vector<CubicalTensor> layers;
    std::optional<Vector> b;
    std::optional<Vector> a;
    std::optional<SisModel> sis;
    std::optional<Vector> x0;
};

ModelSpec model_from_json(const Json& j);
Json model_to_json(const ModelSpec& spec);
HypergraphModel to_model(const ModelSpec& spec);

Json to_json(const EigenPair& pair);
Json to_json(const StabilityCertificate& cert);
Json to_json(const SolveReport& report);
Json to_json(const GainDesign& design);
Json to_json(const CentralityResult& result);
Json to_json(const GershgorinBounds& bounds);

// Shortest round-trip decimal form.
std::string format_double(double v);

// Header t,x_0,...,x_{n-1},V_max,nu_min; one row per stored sample.
void write_csv(std::ostream& os, const Trajectory& traj);

// FNV-1a over a canonical byte encoding of the model.
std::uint64_t model_hash(const HypergraphModel& model);
std::string hex64(std::uint64_t h);

Json run_metadata(const HypergraphModel& model, const SimConfig& config, const Trajectory& traj);

}  // namespace hyperpos::io
