#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hyperpos/error.hpp"
#include "hyperpos/repro.hpp"
#include "hyperpos/spectral.hpp"
#include "oracles.hpp"

using namespace hyperpos;

namespace {

void check_pair_invariants(const CubicalTensor& a, const EigenPair& p, double tol = 1e-10) {
    for (double v : p.vector) CHECK(v > 0.0);
    const double l1 = std::accumulate(p.vector.begin(), p.vector.end(), 0.0);
    CHECK(std::abs(l1 - 1.0) <= 1e-12);
    CHECK(p.residual <= 10.0 * tol * std::abs(p.value) + 1e-12);
    CHECK(std::abs(p.residual - eigen_residual(a, p.value, p.vector)) <= 1e-14);
    CHECK(p.lower <= p.value + 1e-12);
    CHECK(p.value <= p.upper + 1e-12);
}

// strongly connected nonnegative tensor with a random pattern
CubicalTensor random_connected(std::mt19937_64& rng, int k, int n, double density) {
    while (true) {
        auto t = oracle::random_tensor(rng, k, n, density, 0.0, 1.0);
        if (is_strongly_connected(t)) return t;
    }
}

}  // namespace

TEST_CASE("Perron pairs of the worked examples") {
    struct Case {
        CubicalTensor a;
        double value;
    };
    const SisModel sis = repro::sis_example();
    TensorBuilder d(3, 4);
    for (int i = 0; i < 4; ++i) d.add({i, i, i}, -0.9);
    const std::vector<Case> cases{
        {repro::stable_quartic(), -1.0},
        {repro::unstable_quartic(), 1.0},
        {repro::feedback_quartic(), -30.5},
        {repro::damping_matrix(), -2.0},
        {tensor_add(tensor_scale(sis.triplet, sis.beta2), d.build()), -0.75},
    };
    for (const auto& c : cases) {
        const EigenPair p = perron_metzler(c.a);
        CHECK(std::abs(p.value - c.value) < 1e-8);
        for (double v : p.vector) CHECK(std::abs(v - 0.25) < 1e-8);
        check_pair_invariants(c.a, p);
    }
}

TEST_CASE("perron_nonnegative on the quartic's nonnegative part") {
    const auto b = metzler_split(repro::stable_quartic()).nonneg;
    const EigenPair p = perron_nonnegative(b);
    CHECK(std::abs(p.value - 63.0) < 1e-8);
    for (double v : p.vector) CHECK(std::abs(v - 0.25) < 1e-10);
    check_pair_invariants(b, p);
}

TEST_CASE("identity tensor keeps its start vector") {
    // the identity is reducible, so the check has to be waived
    PowerOptions opts;
    opts.assume_irreducible = true;
    const EigenPair p = perron_nonnegative(identity_tensor(3, 3), opts);
    CHECK(p.value == doctest::Approx(1.0));
    for (double v : p.vector) CHECK(v == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(perron_nonnegative(identity_tensor(3, 3)), Error);
}

TEST_CASE("sunflower Perron value and centrality ratio") {
    const auto sun = sunflower_tensor(4, 5);
    const EigenPair p = perron_nonnegative(sun);
    const double expected = 6.0 * std::pow(5.0, 0.25);
    CHECK(std::abs(p.value - expected) < 1e-6);
    CHECK(p.residual < 1e-10 * 10 * expected + 1e-12);

    const CentralityResult c = hec_centrality(sun);
    CHECK(std::abs(c.scores[0] / c.scores[1] - std::pow(5.0, 0.25)) < 1e-6);
    for (std::size_t i = 2; i < c.scores.size(); ++i) CHECK(std::abs(c.scores[i] - c.scores[1]) < 1e-10);
    CHECK(c.order == 4);
}

TEST_CASE("centrality examples") {
    const CentralityResult u = hec_centrality(uniform_tensor(3, 4, 1.0, 0.0));
    for (double s : u.scores) CHECK(std::abs(s - 0.25) < 1e-12);

    const auto a = repro::stable_quartic();
    const CentralityResult ca = hec_centrality(a);
    const CentralityResult cb = hec_centrality(metzler_split(a).nonneg);
    CHECK(oracle::max_abs_diff(ca.scores, cb.scores) < 1e-12);
    CHECK(std::abs(ca.eigenvalue - (-1.0)) < 1e-8);
    CHECK(std::abs(cb.eigenvalue - 63.0) < 1e-8);

    TensorBuilder b(3, 3);
    b.add({0, 0, 1}, 1.0).add({1, 0, 0}, 1.0);
    try {
        hec_centrality(b.build());
        FAIL("expected NotIrreducible");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotIrreducible);
    }
}

TEST_CASE("eigen_residual") {
    const auto a = repro::stable_quartic();
    const Vector q(4, 0.25);
    CHECK(eigen_residual(a, -1.0, q) < 1e-12);
    CHECK(eigen_residual(identity_tensor(4, 3), 1.0, Vector(3, 1.0 / 3.0)) == 0.0);
    CHECK(eigen_residual(a, 0.0, q) == doctest::Approx(1.0 / 64.0).epsilon(1e-12));
}

TEST_CASE("degenerate dimension one") {
    TensorBuilder b(4, 1);
    b.add({0, 0, 0, 0}, -3.5);
    const EigenPair p = perron_metzler(b.build());
    CHECK(p.value == -3.5);
    CHECK(p.vector == Vector{1.0});
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(perron_nonnegative(repro::stable_quartic()), Error);
    try {
        perron_nonnegative(repro::stable_quartic());
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotNonnegative);
    }
    TensorBuilder b(3, 2);
    b.add({0, 1, 1}, -1.0);
    CHECK_THROWS_AS(perron_metzler(b.build()), NotMetzlerError);

    PowerOptions opts;
    opts.max_iter = 1;
    try {
        perron_nonnegative(sunflower_tensor(4, 5), opts);
        FAIL("expected MaxIterExceeded");
    } catch (const MaxIterError& e) {
        CHECK(e.code() == ErrorCode::MaxIterExceeded);
        REQUIRE(e.bracket().has_value());
        CHECK(e.bracket()->first <= 6.0 * std::pow(5.0, 0.25));
        CHECK(e.bracket()->second >= 6.0 * std::pow(5.0, 0.25));
        CHECK(e.last_iterate().size() == 16);
    }
}

TEST_CASE("equivariance under shift and scale") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = oracle::uniform_int(rng, 2, 4);
        const int n = oracle::uniform_int(rng, 2, 5);
        const auto b = random_connected(rng, k, n, 0.5);
        const auto a = shift_diagonal(b, -oracle::uniform(rng, 0.0, 3.0));
        const double c = oracle::uniform(rng, -5.0, 5.0);
        const EigenPair pa = perron_metzler(a);
        const EigenPair ps = perron_metzler(shift_diagonal(a, c));
        CHECK(std::abs(ps.value - (pa.value + c)) < 1e-9);
        CHECK(oracle::max_abs_diff(pa.vector, ps.vector) < 1e-9);
        check_pair_invariants(a, pa);

        const double s = oracle::uniform(rng, 0.1, 10.0);
        const EigenPair pb = perron_nonnegative(b);
        const EigenPair pc = perron_nonnegative(tensor_scale(b, s));
        CHECK(std::abs(pc.value - s * pb.value) < 1e-9 * std::max(1.0, s * pb.value));
    }
}

TEST_CASE("removing an entry lowers the spectral radius") {
    std::mt19937_64 rng(32);
    int strict = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int k = oracle::uniform_int(rng, 2, 4);
        const int n = oracle::uniform_int(rng, 2, 5);
        const auto a = random_connected(rng, k, n, 0.6);
        auto entries = a.entries();
        std::vector<IndexTuple> off;
        for (const auto& [idx, v] : entries) {
            if (!idx.is_diagonal()) off.push_back(idx);
        }
        const IndexTuple drop = off[rng() % off.size()];
        entries.erase(drop);
        const CubicalTensor b(k, n, entries);
        if (!is_strongly_connected(b)) continue;
        const double ra = perron_nonnegative(a).value;
        const double rb = perron_nonnegative(b).value;
        CHECK(rb <= ra + 1e-9);
        if (rb < ra - 1e-9) ++strict;
    }
    CHECK(strict > 0);
}
