// One PASS/FAIL line per acceptance criterion. An optional argument selects a
// single criterion by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "hyperpos/control.hpp"
#include "hyperpos/dynamics.hpp"
#include "hyperpos/error.hpp"
#include "hyperpos/multilinear_solve.hpp"
#include "hyperpos/repro.hpp"
#include "hyperpos/spectral.hpp"
#include "hyperpos/stability.hpp"

using namespace hyperpos;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Named {
    std::string name;
    CubicalTensor tensor;
    double value;
};

std::vector<Named> worked_examples() {
    const SisModel sis = repro::sis_example();
    TensorBuilder d(3, 4);
    for (int i = 0; i < 4; ++i) d.add({i, i, i}, -sis.gamma[static_cast<std::size_t>(i)]);
    return {
        {"stable quartic", repro::stable_quartic(), -1.0},
        {"unstable quartic", repro::unstable_quartic(), 1.0},
        {"feedback closed loop", repro::feedback_quartic(), -30.5},
        {"damping matrix", repro::damping_matrix(), -2.0},
        {"SIS tensor", tensor_add(tensor_scale(sis.triplet, sis.beta2), d.build()), -0.75},
    };
}

void perron_values(Outcome& o) {
    double worst_err = 0.0, worst_res = 0.0, worst_time = 0.0;
    for (const auto& ex : worked_examples()) {
        const auto t0 = Clock::now();
        const EigenPair p = perron_metzler(ex.tensor);
        const double dt = seconds_since(t0);
        const double err = std::abs(p.value - ex.value);
        worst_err = std::max(worst_err, err);
        worst_res = std::max(worst_res, p.residual);
        worst_time = std::max(worst_time, dt);
        o.require(err <= 1e-8, ex.name + " value " + std::to_string(p.value));
        o.require(p.residual < 1e-10, ex.name + " residual " + std::to_string(p.residual));
        o.require(dt < 1.0, ex.name + " took " + std::to_string(dt) + " s");
    }
    o.detail << "max |error| " << worst_err << ", max residual " << worst_res << ", max time "
             << worst_time << " s";
}

void eigenvectors(Outcome& o) {
    double worst = 0.0;
    for (const auto& ex : worked_examples()) {
        const EigenPair p = perron_metzler(ex.tensor);
        for (double v : p.vector) {
            worst = std::max(worst, std::abs(v - 0.25));
        }
    }
    o.require(worst <= 1e-8, "eigenvector deviates by " + std::to_string(worst));
    o.detail << "max deviation from 1/n " << worst;
}

void sunflower(Outcome& o) {
    const auto sun = sunflower_tensor(4, 5);
    const CentralityResult c = hec_centrality(sun);
    const double ratio = c.scores[0] / c.scores[1];
    const double ratio_err = std::abs(ratio - std::pow(5.0, 0.25));
    const double value_err = std::abs(c.eigenvalue - 6.0 * std::pow(5.0, 0.25));
    const double res = eigen_residual(sun, c.eigenvalue, c.scores);
    o.require(ratio_err <= 1e-6, "centrality ratio " + std::to_string(ratio));
    o.require(value_err <= 1e-6, "eigenvalue " + std::to_string(c.eigenvalue));
    o.require(res < 1e-8, "residual " + std::to_string(res));
    o.detail << "ratio error " << ratio_err << ", eigenvalue error " << value_err << ", residual "
             << res;
}

void stability_by_simulation(Outcome& o) {
    std::mt19937_64 rng(2024);
    const auto stable = build_homogeneous(repro::stable_quartic());
    const auto unstable = build_homogeneous(repro::unstable_quartic());
    std::vector<Vector> starts;
    for (int i = 0; i < 20; ++i) starts.push_back(repro::random_vector(rng, 4, 0.0, 1.0));

    const auto decay = simulate_batch(stable, starts);
    double worst_final = 0.0;
    int reached = 0;
    for (const auto& t : decay) {
        const double norm = oracle::inf_norm(t.final_state());
        worst_final = std::max(worst_final, norm);
        if (norm < 1e-6) ++reached;
    }
    // Cooperative comparison: x(t) >= c(t) 1 with c' = lambda c^3, c(0) = min x0,
    // because A 1^3 = lambda 1. So ||x(50)|| >= (c0^-2 + 100)^-1/2 on every run.
    double floor_bound = 1e300;
    for (const auto& x0 : starts) {
        const double c0 = *std::min_element(x0.begin(), x0.end());
        floor_bound = std::min(floor_bound, 1.0 / std::sqrt(1.0 / (c0 * c0) + 2.0 * 50.0));
    }
    o.require(reached == 20, std::to_string(reached) + "/20 stable runs below 1e-6 (largest final norm " +
                                 std::to_string(worst_final) + ")");

    const auto blow = simulate_batch(unstable, starts);
    int blown = 0;
    for (const auto& t : blow) {
        if (t.termination == Termination::Blowup) ++blown;
    }
    o.require(blown == 20, std::to_string(blown) + "/20 unstable runs hit the cap");

    const auto ones = simulate(unstable, Vector(4, 1.0));
    const double envelope_time = std::log(1e6) / 1.0;
    o.require(ones.termination == Termination::Blowup && ones.final_time < envelope_time,
              "time to cap from ones " + std::to_string(ones.final_time));
    o.detail << "stable runs below 1e-6: " << reached << "/20, largest final norm " << worst_final
             << " (analytic lower bound on every final norm: " << floor_bound << "); unstable blowups "
             << blown << "/20; cap time from ones " << ones.final_time << " < " << envelope_time;
}

void affine_equilibrium(Outcome& o) {
    const auto t0 = Clock::now();
    const auto sol = equilibrium_affine(repro::stable_quartic(), Vector(4, 1.0));
    const double err = oracle::max_abs_diff(sol.solution, Vector(4, 1.0));
    o.require(sol.residual <= 1e-9, "residual " + std::to_string(sol.residual));
    o.require(err <= 1e-9, "solution error " + std::to_string(err));
    const auto setup = repro::setup("fig5", 1);
    double worst = 0.0;
    for (const auto& run : setup.runs) {
        const auto t = simulate(run.model, run.x0, run.config);
        const double d = oracle::max_abs_diff(t.final_state(), sol.solution);
        worst = std::max(worst, d);
        o.require(t.termination == Termination::Converged && d < 1e-5, run.label + " distance " +
                                                                           std::to_string(d));
        o.require(t.all_in_sets(), run.label + " left its invariant set");
    }
    const double dt = seconds_since(t0);
    o.require(dt < 5.0, "took " + std::to_string(dt) + " s");
    o.detail << "residual " << sol.residual << ", final distance " << worst << ", " << dt << " s";
}

void shifted_oracle(Outcome& o) {
    std::mt19937_64 rng(606);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int k = oracle::uniform_int(rng, 3, 4);
        const int n = oracle::uniform_int(rng, 2, 5);
        const auto a = oracle::random_tensor(rng, k, n, 0.5, -1.0, 1.0);
        const Vector shift = repro::random_vector(rng, static_cast<std::size_t>(n), -1.0, 1.0);
        const auto e = expand_shifted(a, shift);
        const auto model = build_polynomial(e.layers, e.constant);
        for (int p = 0; p < 200; ++p) {
            const Vector x = repro::random_vector(rng, static_cast<std::size_t>(n), -2.0, 2.0);
            const Vector ref = oracle::shifted_direct(a, shift, x);
            const double rel =
                oracle::max_abs_diff(model.field(x), ref) / std::max(1.0, oracle::inf_norm(ref));
            worst = std::max(worst, rel);
        }
    }
    o.require(worst < 1e-10, "relative error " + std::to_string(worst));
    o.detail << "max relative error " << worst << " over 10000 points";
}

void lyapunov(Outcome& o) {
    std::mt19937_64 rng(707);
    struct Case {
        std::string name;
        HypergraphModel model;
        bool stable;
    };
    const std::vector<Case> corpus{
        {"stable quartic", build_homogeneous(repro::stable_quartic()), true},
        {"feedback closed loop", build_homogeneous(repro::feedback_quartic()), true},
        {"damping matrix", build_homogeneous(repro::damping_matrix()), true},
        {"quartic plus damping", build_polynomial({repro::stable_quartic(), repro::damping_matrix()}), true},
        {"SIS", build_sis(repro::sis_example()), true},
        {"unstable quartic", build_homogeneous(repro::unstable_quartic()), false},
    };
    int runs = 0;
    double worst_rise = 0.0, worst_drop = 0.0;
    for (const auto& c : corpus) {
        for (int r = 0; r < 10; ++r) {
            const auto t = simulate(c.model, repro::random_vector(rng, 4, 0.0, 1.0));
            ++runs;
            const auto& m = t.monitors;
            for (std::size_t s = 1; s < m.v_max.size(); ++s) {
                if (c.stable) {
                    const double rise = m.v_max[s] - m.v_max[s - 1];
                    worst_rise = std::max(worst_rise, rise);
                    o.require(rise <= 1e-9, c.name + " V_max rose by " + std::to_string(rise));
                } else if (std::isfinite(m.nu_min[s])) {
                    const double drop = m.nu_min[s - 1] - m.nu_min[s];
                    worst_drop = std::max(worst_drop, drop);
                    o.require(drop <= 1e-9, c.name + " nu_min fell by " + std::to_string(drop));
                }
            }
        }
    }
    o.detail << runs << " runs, largest V_max rise " << worst_rise << ", largest nu_min drop "
             << worst_drop;
}

void shortcuts(Outcome& o) {
    std::mt19937_64 rng(808);
    int done = 0, negative = 0, inside = 0;
    while (done < 500) {
        const int k = oracle::uniform_int(rng, 2, 4);
        const int n = oracle::uniform_int(rng, 2, 4);
        const double margin = oracle::uniform(rng, 0.01, 1.0);
        const auto a = oracle::random_supersymmetric(
            rng, k, n, oracle::uniform(rng, 0.3, 1.0), 0.0, 1.0,
            [&](int, double radius) { return -(radius + margin); });
        if (!is_strongly_connected(metzler_split(a).nonneg)) continue;
        ++done;
        const EigenPair p = perron_metzler(a);
        const auto g = gershgorin_bounds(a);
        if (p.value < 0.0) ++negative;
        if (g.contains(p.value, 1e-9)) ++inside;
    }
    o.require(negative == done, std::to_string(done - negative) + " nonnegative Perron values");
    o.require(inside == done, std::to_string(done - inside) + " values outside the Gershgorin union");
    o.detail << done << " tensors, " << negative << " negative, " << inside << " inside the union";
}

void radius_monotonicity(Outcome& o) {
    std::mt19937_64 rng(909);
    int done = 0, violations = 0, fallback = 0;
    double worst = -1e300;
    while (done < 200) {
        const int k = oracle::uniform_int(rng, 2, 4);
        const int n = oracle::uniform_int(rng, 2, 5);
        const auto a = oracle::random_tensor(rng, k, n, oracle::uniform(rng, 0.4, 0.9), 0.0, 1.0);
        if (!is_irreducible(a)) continue;
        ++done;
        auto entries = a.entries();
        auto it = entries.begin();
        std::advance(it, static_cast<long>(rng() % entries.size()));
        entries.erase(it);
        const CubicalTensor b(k, n, entries);
        const double ra = perron_nonnegative(a).value;
        double rb;
        if (is_strongly_connected(b)) {
            rb = perron_nonnegative(b).value;
        } else {
            // a rigorous upper bound on rho is good enough for an upper comparison
            rb = perron_upper_value(b);
            ++fallback;
        }
        worst = std::max(worst, rb - ra);
        if (rb > ra + 1e-9) ++violations;
    }
    o.require(violations == 0, std::to_string(violations) + " increases");
    o.detail << done << " tensors (" << fallback << " via the bracket upper bound), max change "
             << worst;
}

void mtensor_solver(Outcome& o) {
    std::mt19937_64 rng(1010);
    int done = 0, bad_res = 0, bad_unique = 0, bad_dense = 0, linear = 0;
    double worst_res = 0.0, worst_spread = 0.0, worst_dense = 0.0;
    SolveOptions tight;
    tight.tol = 5e-11;
    while (done < 100) {
        const int k = oracle::uniform_int(rng, 2, 4);
        const int n = oracle::uniform_int(rng, 2, 6);
        const auto b = oracle::random_tensor(rng, k, n, 0.5, 0.0, 1.0);
        if (!is_strongly_connected(b)) continue;
        const double margin = oracle::uniform(rng, 0.1, 2.0);
        const double eta = perron_nonnegative(b).value + margin;
        const auto m = tensor_scale(shift_diagonal(b, -eta), -1.0);
        const Vector y = repro::random_vector(rng, static_cast<std::size_t>(n), 0.5, 2.0);
        const Vector rhs = oracle::dense_tv_product(m, y);
        if (std::any_of(rhs.begin(), rhs.end(), [](double v) { return !(v > 0.0); })) continue;
        ++done;

        const auto r = solve_mtensor(m, rhs, tight);
        const Vector lhs = oracle::dense_tv_product(m, r.solution);
        const double res = oracle::max_abs_diff(lhs, rhs);
        worst_res = std::max(worst_res, res);
        if (!(res < 1e-10)) ++bad_res;

        for (int s = 0; s < 5; ++s) {
            SolveOptions opts = tight;
            opts.start = repro::random_vector(rng, static_cast<std::size_t>(n), 0.01, 10.0);
            const double d = oracle::max_abs_diff(solve_mtensor(m, rhs, opts).solution, r.solution);
            worst_spread = std::max(worst_spread, d);
            if (!(d <= 1e-8)) ++bad_unique;
        }
        if (k == 2) {
            ++linear;
            const double d = oracle::max_abs_diff(r.solution, oracle::dense_solve(m, rhs));
            worst_dense = std::max(worst_dense, d);
            if (!(d <= 1e-9)) ++bad_dense;
        }
    }
    o.require(bad_res == 0, std::to_string(bad_res) + " residuals above 1e-10");
    o.require(bad_unique == 0, std::to_string(bad_unique) + " multi-start disagreements");
    o.require(bad_dense == 0, std::to_string(bad_dense) + " dense-solve mismatches");
    o.detail << done << " systems (" << linear << " linear), max residual " << worst_res
             << ", max multi-start spread " << worst_spread << ", max dense difference "
             << worst_dense;
}

void sis(Outcome& o) {
    std::mt19937_64 rng(1111);
    const auto model = build_sis(repro::sis_example());
    std::vector<Vector> starts;
    for (int i = 0; i < 20; ++i) starts.push_back(repro::random_vector(rng, 4, 0.0, 1.0));
    starts.push_back(repro::setup("fig7", 1).runs.front().x0);
    int healed = 0;
    for (const auto& t : simulate_batch(model, starts)) {
        o.require(t.all_in_sets(), "example left the unit box");
        if (t.termination == Termination::Converged) ++healed;
    }
    o.require(healed == static_cast<int>(starts.size()), "example did not heal on every run");

    int agree = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = oracle::uniform_int(rng, 2, 6);
        SisModel m;
        m.pairwise = oracle::random_tensor(rng, 2, n, 0.5, 0.0, 1.0);
        m.triplet = oracle::random_tensor(rng, 3, n, 0.3, 0.0, 1.0);
        m.beta1 = oracle::uniform(rng, 0.05, 1.0);
        m.beta2 = oracle::uniform(rng, 0.0, 1.0);
        const Vector ones(static_cast<std::size_t>(n), 1.0);
        const Vector a1 = tv_product(m.pairwise, ones);
        const Vector c1 = tv_product(m.triplet, ones);
        m.gamma.resize(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < m.gamma.size(); ++i) {
            m.gamma[i] = m.beta1 * a1[i] + m.beta2 * c1[i] + oracle::uniform(rng, 0.5, 1.5);
        }
        const auto cert = certify_sis(m);
        const auto t = simulate(build_sis(m), repro::random_vector(rng, static_cast<std::size_t>(n), 0.0, 1.0));
        const bool ok = cert.verdict == Verdict::GloballyStable &&
                        cert.method == Method::SisSumCondition &&
                        t.termination == Termination::Converged && t.all_in_sets();
        if (ok) ++agree;
    }
    o.require(agree == 50, std::to_string(50 - agree) + " random instances disagree");
    o.detail << "example healed on " << healed << "/" << starts.size()
             << " runs; certificate and simulation agree on " << agree << "/50 random instances";
}

struct Criterion {
    int id;
    const char* title;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "Perron values of the worked examples", perron_values},
        {2, "uniform Perron vectors", eigenvectors},
        {3, "sunflower centrality", sunflower},
        {4, "stability and blowup by simulation", stability_by_simulation},
        {5, "affine equilibrium", affine_equilibrium},
        {6, "shifted expansion against direct evaluation", shifted_oracle},
        {7, "Lyapunov monotonicity", lyapunov},
        {8, "dominance and Gershgorin shortcuts", shortcuts},
        {9, "spectral radius monotonicity", radius_monotonicity},
        {10, "M-tensor solver", mtensor_solver},
        {11, "SIS invariance and healing", sis},
    };
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    int failed = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        Outcome o;
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                    o.detail.str().c_str());
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
