#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "hyperpos/dynamics.hpp"
#include "hyperpos/error.hpp"
#include "hyperpos/spectral.hpp"
#include "hyperpos/stability.hpp"

namespace hyperpos {

const char* to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Homogeneous: return "homogeneous";
        case ModelKind::Polynomial: return "polynomial";
        case ModelKind::Affine: return "affine";
        case ModelKind::Sis: return "sis";
        case ModelKind::LotkaVolterra: return "lotka_volterra";
        case ModelKind::Shifted: return "shifted";
    }
    return "unknown";
}

const char* to_string(Wrapper wrapper) noexcept {
    switch (wrapper) {
        case Wrapper::None: return "None";
        case Wrapper::SusceptibleMask: return "SusceptibleMask";
        case Wrapper::LogisticPrefactor: return "LogisticPrefactor";
    }
    return "unknown";
}

const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::Converged: return "Converged";
        case Termination::Blowup: return "Blowup";
        case Termination::HorizonReached: return "HorizonReached";
    }
    return "unknown";
}

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_vector(const std::optional<Vector>& v, std::size_t n, const char* what) {
    if (!v) return;
    if (v->size() != n) {
        throw Error(ErrorCode::InvalidModel, std::string(what) + " has length " +
                                                 std::to_string(v->size()) + ", expected " +
                                                 std::to_string(n));
    }
    if (!all_finite(*v)) throw Error(ErrorCode::InvalidModel, std::string(what) + " is not finite");
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

void validate(const HypergraphModel& model) {
    if (model.layers.empty()) throw Error(ErrorCode::InvalidModel, "model has no layers");
    const int n = model.layers.front().dim();
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const auto& t = model.layers[l];
        if (t.dim() != n) {
            throw Error(ErrorCode::InvalidModel, "layer " + std::to_string(l) + " has dim " +
                                                     std::to_string(t.dim()) + ", expected " +
                                                     std::to_string(n));
        }
        if (l > 0 && !(t.order() < model.layers[l - 1].order())) {
            throw Error(ErrorCode::InvalidModel, "layer orders must be strictly decreasing");
        }
    }
    const auto nn = static_cast<std::size_t>(n);
    check_vector(model.constant, nn, "constant term");
    check_vector(model.shift, nn, "shift");
    check_vector(model.recovery, nn, "recovery vector");
    if (model.shift && model.wrapper != Wrapper::None) {
        throw Error(ErrorCode::InvalidModel, "a shifted model cannot carry a wrapper");
    }
    if (model.wrapper == Wrapper::SusceptibleMask) {
        if (model.constant) {
            throw Error(ErrorCode::InvalidModel, "susceptible mask does not take a constant term");
        }
        if (!model.recovery) {
            throw Error(ErrorCode::InvalidModel, "susceptible mask needs a recovery vector");
        }
        for (double g : *model.recovery) {
            if (!(g > 0.0)) throw Error(ErrorCode::InvalidModel, "recovery rates must be positive");
        }
    }
}

void HypergraphModel::field_into(std::span<const double> x, std::span<double> out,
                                 std::span<double> scratch) const {
    const auto n = static_cast<std::size_t>(dim());
    Vector shifted;
    std::span<const double> arg = x;
    if (shift) {
        shifted.resize(n);
        for (std::size_t i = 0; i < n; ++i) shifted[i] = x[i] - (*shift)[i];
        arg = shifted;
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& layer : layers) {
        tv_product_into(layer, arg, scratch);
        for (std::size_t i = 0; i < n; ++i) out[i] += scratch[i];
    }
    if (constant) {
        for (std::size_t i = 0; i < n; ++i) out[i] += (*constant)[i];
    }
    switch (wrapper) {
        case Wrapper::None: break;
        case Wrapper::LogisticPrefactor:
            for (std::size_t i = 0; i < n; ++i) out[i] *= x[i];
            break;
        case Wrapper::SusceptibleMask:
            for (std::size_t i = 0; i < n; ++i) {
                out[i] = -(*recovery)[i] * x[i] + (1.0 - x[i]) * out[i];
            }
            break;
    }
}

Vector HypergraphModel::field(std::span<const double> x) const {
    const auto n = static_cast<std::size_t>(dim());
    if (x.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "state has length " + std::to_string(x.size()) +
                                                      ", expected " + std::to_string(n));
    }
    Vector out(n), scratch(n);
    field_into(x, out, scratch);
    return out;
}

HypergraphModel build_homogeneous(const CubicalTensor& a) {
    HypergraphModel m;
    m.kind = ModelKind::Homogeneous;
    m.layers = {a};
    validate(m);
    return m;
}

HypergraphModel build_polynomial(std::vector<CubicalTensor> layers, std::optional<Vector> constant) {
    HypergraphModel m;
    m.kind = ModelKind::Polynomial;
    m.layers = std::move(layers);
    m.constant = std::move(constant);
    validate(m);
    return m;
}

HypergraphModel build_affine(const CubicalTensor& a, const Vector& b) {
    HypergraphModel m;
    m.kind = ModelKind::Affine;
    m.layers = {a};
    m.constant = b;
    validate(m);
    return m;
}

HypergraphModel build_sis(const SisModel& sis) {
    validate(sis);
    HypergraphModel m;
    m.kind = ModelKind::Sis;
    m.layers = {tensor_scale(sis.triplet, sis.beta2), tensor_scale(sis.pairwise, sis.beta1)};
    m.wrapper = Wrapper::SusceptibleMask;
    m.recovery = sis.gamma;
    m.beta1 = sis.beta1;
    m.beta2 = sis.beta2;
    validate(m);
    return m;
}

HypergraphModel build_lv(const CubicalTensor& a, const Vector& b) {
    HypergraphModel m;
    m.kind = ModelKind::LotkaVolterra;
    m.layers = {a};
    m.constant = b;
    m.wrapper = Wrapper::LogisticPrefactor;
    validate(m);
    return m;
}

HypergraphModel build_shifted(const CubicalTensor& a, const Vector& shift) {
    HypergraphModel m;
    m.kind = ModelKind::Shifted;
    m.layers = {a};
    m.shift = shift;
    validate(m);
    return m;
}

ExpandedShifted expand_shifted(const CubicalTensor& a, std::span<const double> shift) {
    const int k = a.order();
    const int n = a.dim();
    if (shift.size() != static_cast<std::size_t>(n)) {
        throw Error(ErrorCode::DimensionMismatch, "shift has length " +
                                                      std::to_string(shift.size()) +
                                                      ", expected " + std::to_string(n));
    }
    const int nheads = k - 1;
    // builders[r] collects terms keeping r heads (tensor order r + 1), r >= 1
    std::vector<TensorBuilder> builders;
    for (int r = 0; r <= nheads; ++r) builders.emplace_back(std::max(r + 1, 2), n);
    ExpandedShifted out;
    out.constant.assign(static_cast<std::size_t>(n), 0.0);

    std::vector<int> kept;
    for (std::size_t e = 0; e < a.nnz(); ++e) {
        const auto idx = a.index(e);
        const double v = a.value(e);
        for (unsigned mask = 0; mask < (1u << nheads); ++mask) {
            // bit m set: head m retained
            double coeff = v;
            kept.assign(1, idx[0]);
            for (int m = 0; m < nheads; ++m) {
                const int h = idx[static_cast<std::size_t>(m) + 1];
                if (mask & (1u << m)) {
                    kept.push_back(h);
                } else {
                    coeff *= -shift[static_cast<std::size_t>(h)];
                }
            }
            if (coeff == 0.0) continue;
            const int r = static_cast<int>(kept.size()) - 1;
            if (r == 0) {
                out.constant[static_cast<std::size_t>(idx[0])] += coeff;
            } else {
                builders[static_cast<std::size_t>(r)].add(IndexTuple(kept), coeff);
            }
        }
    }
    for (int r = nheads; r >= 1; --r) {
        CubicalTensor t = builders[static_cast<std::size_t>(r)].build();
        if (r == nheads || t.nnz() > 0) out.layers.push_back(std::move(t));
    }
    return out;
}

// ---- invariant sets ----------------------------------------------------------

bool InvariantBox::contains(std::span<const double> x, double slack) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lo[i] - slack) || !(x[i] <= hi[i] + slack)) return false;
    }
    return true;
}

std::vector<InvariantBox> invariant_monitor(const HypergraphModel& model,
                                            std::span<const double> x0,
                                            const std::optional<Vector>& target) {
    const auto n = static_cast<std::size_t>(model.dim());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<InvariantBox> sets;
    if (model.wrapper == Wrapper::SusceptibleMask) {
        sets.push_back({"unit_box", Vector(n, 0.0), Vector(n, 1.0)});
    } else if (model.shift) {
        sets.push_back({"above_shift", *model.shift, Vector(n, inf)});
    } else {
        sets.push_back({"orthant", Vector(n, 0.0), Vector(n, inf)});
    }
    const bool has_equilibrium =
        model.kind == ModelKind::Affine || model.kind == ModelKind::LotkaVolterra;
    if (has_equilibrium && target && target->size() == n && x0.size() == n) {
        bool above = true;
        bool below = true;
        for (std::size_t i = 0; i < n; ++i) {
            above = above && x0[i] >= (*target)[i];
            below = below && x0[i] > 0.0 && x0[i] < (*target)[i];
        }
        if (above) sets.push_back({"above_equilibrium", *target, Vector(n, inf)});
        if (below) sets.push_back({"below_equilibrium", Vector(n, 0.0), *target});
    }
    return sets;
}

// ---- simulation --------------------------------------------------------------

bool Trajectory::all_in_sets() const {
    for (const auto& row : in_sets) {
        for (auto f : row) {
            if (!f) return false;
        }
    }
    return true;
}

std::optional<Vector> default_target(const HypergraphModel& model) {
    const auto n = static_cast<std::size_t>(model.dim());
    if (model.shift && !model.constant) return *model.shift;
    if (model.constant || model.wrapper == Wrapper::LogisticPrefactor) return std::nullopt;
    return Vector(n, 0.0);
}

Vector default_delta(const HypergraphModel& model) {
    const auto n = static_cast<std::size_t>(model.dim());
    try {
        return perron_metzler(model.layers.front()).vector;
    } catch (const Error&) {
        return Vector(n, 1.0 / static_cast<double>(n));
    }
}

MonitorSeries lyapunov_trace(const Trajectory& trajectory, std::span<const double> delta, int k,
                             std::span<const double> center) {
    MonitorSeries out;
    out.v_max.reserve(trajectory.states.size());
    out.nu_min.reserve(trajectory.states.size());
    for (const auto& x : trajectory.states) {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double c = center.empty() ? 0.0 : center[i];
            const double r = (x[i] - c) / delta[i];
            hi = std::max(hi, r);
            lo = std::min(lo, r);
        }
        const double p = static_cast<double>(k - 1);
        // odd powers keep the sign of a slightly negative ratio
        out.v_max.push_back(std::copysign(std::pow(std::abs(hi), p), hi));
        out.nu_min.push_back(std::copysign(std::pow(std::abs(lo), p), lo));
    }
    return out;
}

namespace {

class Integrator {
public:
    Integrator(const HypergraphModel& model, const InvariantBox& region, const SimConfig& cfg,
               Trajectory& traj)
        : model_(model),
          region_(region),
          cfg_(cfg),
          traj_(traj),
          n_(static_cast<std::size_t>(model.dim())),
          k1_(n_), k2_(n_), k3_(n_), k4_(n_), tmp_(n_), scratch_(n_), y_(n_), full_(n_), half_(n_) {}

    // Advances x by h; x may become non-finite or exceed the cap, in which
    // case the step stops early.
    //
    // Each substep is taken as two half RK4 steps and compared against one
    // full step. The substep is halved while that difference exceeds the
    // local tolerance (stiff growth, e.g. near a blowup) or the result leaves
    // the enforced region.
    void step(Vector& x, double t, double h) {
        double remaining = h;
        double hs = h;
        int substeps = 0;
        constexpr int kMaxSubsteps = 4096;
        while (remaining > 0.0) {
            hs = std::min(remaining, 2.0 * hs);
            int halvings = 0;
            while (true) {
                const double err = attempt(x, hs);
                if (!all_finite(y_)) break;
                const bool inside = region_.contains(y_, 0.0);
                if (inside && err <= 1.0) break;
                if (halvings == cfg_.max_halvings || substeps >= kMaxSubsteps) {
                    if (!inside) {
                        // give up on the rest of the step: project its full update
                        hs = remaining;
                        attempt(x, hs);
                        clamp(t + h);
                    }
                    break;
                }
                hs *= 0.5;
                ++halvings;
                ++traj_.stats.halvings;
            }
            x = y_;
            ++substeps;
            ++traj_.stats.substeps;
            remaining = (hs >= remaining) ? 0.0 : remaining - hs;
            if (!all_finite(x) || inf_norm(x) > cfg_.blowup_cap) return;
        }
    }

private:
    static constexpr double kRelTol = 1e-9;
    static constexpr double kAbsTol = 1e-12;

    // Two half steps into y_; returns the scaled difference to one full step.
    double attempt(const Vector& x, double h) {
        rk4(x, h);
        full_ = y_;
        rk4(x, 0.5 * h);
        half_ = y_;
        rk4(half_, 0.5 * h);
        double err = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double scale = kAbsTol + kRelTol * std::max(std::abs(x[i]), std::abs(y_[i]));
            err = std::max(err, std::abs(y_[i] - full_[i]) / scale);
        }
        return std::isfinite(err) ? err : 0.0;
    }

    void rk4(const Vector& x, double h) {
        const auto& kern = simd::active();
        model_.field_into(x, k1_, scratch_);
        tmp_ = x;
        kern.axpy(n_, 0.5 * h, k1_.data(), tmp_.data());
        model_.field_into(tmp_, k2_, scratch_);
        tmp_ = x;
        kern.axpy(n_, 0.5 * h, k2_.data(), tmp_.data());
        model_.field_into(tmp_, k3_, scratch_);
        tmp_ = x;
        kern.axpy(n_, h, k3_.data(), tmp_.data());
        model_.field_into(tmp_, k4_, scratch_);
        kern.rk4_combine(n_, x.data(), h, k1_.data(), k2_.data(), k3_.data(), k4_.data(),
                         y_.data());
    }

    void clamp(double t) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double c = std::clamp(y_[i], region_.lo[i], region_.hi[i]);
            worst = std::max(worst, std::abs(c - y_[i]));
            y_[i] = c;
        }
        ++traj_.stats.clamps;
        traj_.events.push_back(
            {t, "clamp", "projected onto " + region_.name + " (moved " + std::to_string(worst) + ")"});
    }

    const HypergraphModel& model_;
    const InvariantBox& region_;
    const SimConfig& cfg_;
    Trajectory& traj_;
    std::size_t n_;
    Vector k1_, k2_, k3_, k4_, tmp_, scratch_, y_, full_, half_;
};

void check_config(const SimConfig& cfg, std::size_t n) {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
        }
    };
    positive(cfg.dt, "dt");
    positive(cfg.horizon, "horizon");
    positive(cfg.conv_eps, "conv_eps");
    positive(cfg.blowup_cap, "blowup_cap");
    if (cfg.record_every < 1) throw Error(ErrorCode::InvalidArgument, "record_every must be >= 1");
    if (cfg.max_halvings < 0) throw Error(ErrorCode::InvalidArgument, "max_halvings must be >= 0");
    if (cfg.delta) {
        if (cfg.delta->size() != n) {
            throw Error(ErrorCode::DimensionMismatch, "monitor vector has the wrong length");
        }
        for (double d : *cfg.delta) {
            if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, "monitor vector must be positive");
        }
    }
    if (cfg.target && cfg.target->size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "target has the wrong length");
    }
}

}  // namespace

Trajectory simulate(const HypergraphModel& model, std::span<const double> x0,
                    const SimConfig& config) {
    validate(model);
    const auto n = static_cast<std::size_t>(model.dim());
    if (x0.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "initial state has length " +
                                                      std::to_string(x0.size()) + ", expected " +
                                                      std::to_string(n));
    }
    check_config(config, n);

    const std::optional<Vector> target = config.target ? config.target : default_target(model);
    const auto sets = invariant_monitor(model, x0, target);
    if (!all_finite(x0) || !sets.front().contains(x0, 0.0)) {
        throw Error(ErrorCode::InvalidInitialState,
                    "initial state lies outside the invariant region " + sets.front().name);
    }

    Trajectory traj;
    traj.delta = config.delta ? *config.delta : default_delta(model);
    traj.monitor_order = model.top_order();
    for (const auto& s : sets) traj.set_names.push_back(s.name);
    std::vector<std::uint8_t> inside(sets.size(), 1);

    auto record = [&](double t, const Vector& x) {
        traj.times.push_back(t);
        traj.states.push_back(x);
        std::vector<std::uint8_t> flags;
        for (const auto& s : sets) flags.push_back(s.contains(x, kInvariantSlack) ? 1 : 0);
        traj.in_sets.push_back(std::move(flags));
    };

    Integrator integ(model, sets.front(), config, traj);
    Vector x(x0.begin(), x0.end());
    const auto total = static_cast<std::int64_t>(std::ceil(config.horizon / config.dt - 1e-9));
    record(0.0, x);

    auto converged = [&](const Vector& v) {
        if (!target) return false;
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(v[i] - (*target)[i]));
        return d < config.conv_eps;
    };

    traj.termination = Termination::HorizonReached;
    if (converged(x)) traj.termination = Termination::Converged;
    std::int64_t step = 0;
    bool recorded_last = true;
    while (traj.termination == Termination::HorizonReached && step < total) {
        const double t = static_cast<double>(step) * config.dt;
        integ.step(x, t, config.dt);
        ++step;
        ++traj.stats.steps;
        const double tn = static_cast<double>(step) * config.dt;
        recorded_last = false;

        for (std::size_t s = 0; s < sets.size(); ++s) {
            const bool in = sets[s].contains(x, kInvariantSlack);
            if (inside[s] && !in) {
                traj.events.push_back({tn, "invariant", "left " + sets[s].name});
            }
            inside[s] = in ? 1 : 0;
        }

        if (!all_finite(x)) {
            traj.events.push_back({tn, "nonfinite", "state is no longer finite"});
            traj.termination = Termination::Blowup;
        } else if (inf_norm(x) > config.blowup_cap) {
            traj.termination = Termination::Blowup;
        } else if (converged(x)) {
            traj.termination = Termination::Converged;
        }
        if (traj.termination != Termination::HorizonReached || step % config.record_every == 0) {
            record(tn, x);
            recorded_last = true;
        }
    }
    if (!recorded_last) record(static_cast<double>(step) * config.dt, x);
    traj.final_time = traj.times.back();

    Vector center;
    if (model.shift) center = *model.shift;
    traj.monitors = lyapunov_trace(traj, traj.delta, traj.monitor_order, center);

    const bool homogeneous = model.layers.size() == 1 && !model.constant && !model.shift &&
                             model.wrapper == Wrapper::None;
    if (traj.termination == Termination::Blowup && homogeneous && model.top_order() > 2) {
        try {
            const RateEstimate r = rate_estimate(model.layers.front(), x0);
            traj.blowup_estimate = r.blowup_time;
            traj.blowup_estimate_latest = r.blowup_time_latest;
        } catch (const Error&) {
        }
    }
    return traj;
}

std::vector<Trajectory> simulate_batch(const HypergraphModel& model,
                                       const std::vector<Vector>& x0s, const SimConfig& config,
                                       unsigned threads) {
    std::vector<Trajectory> out(x0s.size());
    std::vector<std::exception_ptr> errors(x0s.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, x0s.size())));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < x0s.size(); i = next++) {
            try {
                out[i] = simulate(model, x0s[i], config);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace hyperpos
