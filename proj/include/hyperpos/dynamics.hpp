#pragma once

// Polynomial systems on hypergraphs and their fixed-step integration.
//
// A model evaluates
//   f(x) = sum_l A_l (x - a)^{k_l - 1} + b             (wrapper None)
//   f(x) = diag(x) (sum_l A_l x^{k_l - 1} + b)         (LogisticPrefactor)
//   f(x) = -diag(gamma) x + (1 - x) sum_l A_l x^{k_l-1} (SusceptibleMask)
// where a is zero unless the model is shifted.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperpos/sis.hpp"
#include "hyperpos/tensor.hpp"

namespace hyperpos {

enum class ModelKind { Homogeneous, Polynomial, Affine, Sis, LotkaVolterra, Shifted };
enum class Wrapper { None, SusceptibleMask, LogisticPrefactor };

const char* to_string(ModelKind kind) noexcept;
const char* to_string(Wrapper wrapper) noexcept;

struct HypergraphModel {
    ModelKind kind = ModelKind::Polynomial;
    std::vector<CubicalTensor> layers;  // strictly decreasing orders, common dim
    std::optional<Vector> constant;     // b
    Wrapper wrapper = Wrapper::None;
    std::optional<Vector> shift;     // a
    std::optional<Vector> recovery;  // gamma, SusceptibleMask only
    // SIS rates; the SIS layers are stored already multiplied by them.
    double beta1 = 0.0;
    double beta2 = 0.0;

    int dim() const { return layers.front().dim(); }
    int top_order() const { return layers.front().order(); }

    Vector field(std::span<const double> x) const;
    // `scratch` must have length dim().
    void field_into(std::span<const double> x, std::span<double> out,
                    std::span<double> scratch) const;
};

// Throws InvalidModel when the layer/wrapper invariants do not hold.
void validate(const HypergraphModel& model);

HypergraphModel build_homogeneous(const CubicalTensor& a);
HypergraphModel build_polynomial(std::vector<CubicalTensor> layers,
                                 std::optional<Vector> constant = std::nullopt);
HypergraphModel build_affine(const CubicalTensor& a, const Vector& b);
HypergraphModel build_sis(const SisModel& sis);
HypergraphModel build_lv(const CubicalTensor& a, const Vector& b);
HypergraphModel build_shifted(const CubicalTensor& a, const Vector& shift);

struct ExpandedShifted {
    std::vector<CubicalTensor> layers;  // orders k, k-1, ..., 2; empty ones dropped
    Vector constant;
};

// Binomial expansion of A (x - a)^{k-1} into lower-order layers plus a
// constant: every entry contributes, for each subset of its heads, the signed
// product of the dropped shifts to the layer of the retained heads.
ExpandedShifted expand_shifted(const CubicalTensor& a, std::span<const double> shift);

// ---- invariant sets ------------------------------------------------------------

// A coordinate box {lo <= x <= hi}; infinite bounds are allowed.
struct InvariantBox {
    std::string name;
    Vector lo;
    Vector hi;

    bool contains(std::span<const double> x, double slack) const;
};

inline constexpr double kInvariantSlack = 1e-9;

// The sets a trajectory from x0 should never leave. The first one is the
// region the integrator enforces (orthant, unit box for SIS, {x >= a} for
// shifted models); with a known equilibrium x* of an affine or LV model the
// set {x >= x*} or {0 <= x <= x*} containing x0 is appended.
std::vector<InvariantBox> invariant_monitor(const HypergraphModel& model,
                                            std::span<const double> x0,
                                            const std::optional<Vector>& target = std::nullopt);

// ---- simulation ----------------------------------------------------------------

struct SimConfig {
    double dt = 1e-3;
    double horizon = 50.0;
    double conv_eps = 1e-6;
    double blowup_cap = 1e6;
    int record_every = 10;  // store every n-th step (plus first and last)
    int max_halvings = 40;
    std::optional<Vector> delta;   // monitor vector; default Perron vector of the top layer
    std::optional<Vector> target;  // equilibrium to converge to; see default_target
};

enum class Termination { Converged, Blowup, HorizonReached };
const char* to_string(Termination t) noexcept;

struct SimEvent {
    double t = 0.0;
    std::string kind;  // "clamp", "invariant", "nonfinite"
    std::string detail;
};

struct StepStats {
    std::int64_t steps = 0;
    std::int64_t substeps = 0;
    std::int64_t halvings = 0;
    std::int64_t clamps = 0;
};

struct MonitorSeries {
    std::vector<double> v_max;   // max_i (x_i / delta_i)^{k-1}
    std::vector<double> nu_min;  // min_i (x_i / delta_i)^{k-1}
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    MonitorSeries monitors;
    std::vector<std::string> set_names;
    std::vector<std::vector<std::uint8_t>> in_sets;  // [sample][set]
    std::vector<SimEvent> events;
    StepStats stats;

    Termination termination = Termination::HorizonReached;
    double final_time = 0.0;
    // Blowup of a homogeneous model: window from the comparison ODE.
    std::optional<double> blowup_estimate;
    std::optional<double> blowup_estimate_latest;
    Vector delta;
    int monitor_order = 0;

    const Vector& final_state() const { return states.back(); }
    bool all_in_sets() const;
};

// Origin for models with f(0) = 0 (no constant, no prefactor other than the
// susceptible mask), the shift a for shifted models, none otherwise.
std::optional<Vector> default_target(const HypergraphModel& model);

// Default monitor vector.
Vector default_delta(const HypergraphModel& model);

// Fixed-step RK4. A step that would leave the enforced region is retried with
// halved sizes; after max_halvings the state is clamped and an event logged.
// Errors: InvalidInitialState, DimensionMismatch, InvalidArgument (config).
Trajectory simulate(const HypergraphModel& model, std::span<const double> x0,
                    const SimConfig& config = {});

// Independent runs on worker threads; results follow the order of x0s.
std::vector<Trajectory> simulate_batch(const HypergraphModel& model,
                                       const std::vector<Vector>& x0s,
                                       const SimConfig& config = {}, unsigned threads = 0);

// V_max and nu_min along the stored samples for the given delta and order,
// measured from `center` (the origin when empty). simulate() fills its own
// monitors with the shift a as center for shifted models.
MonitorSeries lyapunov_trace(const Trajectory& trajectory, std::span<const double> delta, int k,
                             std::span<const double> center = {});

}  // namespace hyperpos
