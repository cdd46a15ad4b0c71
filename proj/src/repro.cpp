#include "hyperpos/repro.hpp"

#include "hyperpos/error.hpp"
#include "hyperpos/multilinear_solve.hpp"

namespace hyperpos::repro {

CubicalTensor stable_quartic() { return uniform_tensor(4, 4, 1.0, -64.0); }
CubicalTensor unstable_quartic() { return uniform_tensor(4, 4, 1.0, -62.0); }
CubicalTensor feedback_quartic() { return uniform_tensor(4, 4, 0.5, -62.0); }
CubicalTensor damping_matrix() { return uniform_tensor(2, 4, 1.0, -5.0); }

SisModel sis_example() {
    SisModel m;
    m.triplet = uniform_tensor(3, 4, 0.01, 0.0);
    m.pairwise = CubicalTensor(2, 4);
    m.beta1 = 0.0;
    m.beta2 = 1.0;
    m.gamma = Vector(4, 0.9);
    return m;
}

double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vector random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    Vector v(n);
    for (auto& x : v) x = hi - (hi - lo) * unit(rng);
    return v;
}

std::vector<std::string> names() { return {"fig3", "fig4", "fig5", "fig6", "fig7"}; }

Setup setup(std::string_view name, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Setup s;
    s.name = std::string(name);
    SimConfig cfg;
    if (name == "fig3") {
        s.description = "x' = A x^3 with lambda(A) = -1, random start in (0,1]^4";
        s.runs.push_back({"fig3", build_homogeneous(stable_quartic()), random_vector(rng, 4, 0, 1), cfg});
    } else if (name == "fig4") {
        s.description = "x' = A x^3 with lambda(A) = +1, random start in (0,1]^4";
        s.runs.push_back({"fig4", build_homogeneous(unstable_quartic()), random_vector(rng, 4, 0, 1), cfg});
    } else if (name == "fig5") {
        s.description = "x' = A x^3 + 1 from below and above the equilibrium x* = 1";
        const Vector b(4, 1.0);
        const auto model = build_affine(stable_quartic(), b);
        cfg.target = equilibrium_affine(stable_quartic(), b).solution;
        // IC1 strictly inside (0, x*), IC2 in [x*, x* + 1]
        Vector ic1 = random_vector(rng, 4, 0.0, 1.0);
        for (std::size_t i = 0; i < 4; ++i) ic1[i] *= 0.999 * (*cfg.target)[i];
        Vector ic2 = random_vector(rng, 4, 0.0, 1.0);
        for (std::size_t i = 0; i < 4; ++i) ic2[i] += (*cfg.target)[i];
        s.runs.push_back({"fig5_ic1", model, ic1, cfg});
        s.runs.push_back({"fig5_ic2", model, ic2, cfg});
    } else if (name == "fig6") {
        s.description = "x' = A x^3 + B x with lambda(A) = -1, lambda(B) = -2";
        s.runs.push_back({"fig6", build_polynomial({stable_quartic(), damping_matrix()}),
                          random_vector(rng, 4, 0, 1), cfg});
    } else if (name == "fig7") {
        s.description = "simplicial SIS, beta2 = 1, gamma = 0.9, random start in (0,1]^4";
        s.runs.push_back({"fig7", build_sis(sis_example()), random_vector(rng, 4, 0, 1), cfg});
    } else {
        throw Error(ErrorCode::InvalidArgument,
                    "unknown repro setup \"" + std::string(name) + "\" (fig3..fig7)");
    }
    return s;
}

}  // namespace hyperpos::repro
