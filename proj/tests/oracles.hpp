#pragma once

// Independent reference computations used only by the tests. None of these
// share code paths with the library beyond CubicalTensor::at().

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hyperpos/repro.hpp"
#include "hyperpos/tensor.hpp"

namespace oracle {

using hyperpos::CubicalTensor;
using hyperpos::IndexTuple;
using hyperpos::Vector;

// Odometer over all n^k index tuples, entry lookup by binary search.
inline Vector dense_tv_product(const CubicalTensor& a, const Vector& x) {
    const int k = a.order();
    const int n = a.dim();
    Vector out(static_cast<std::size_t>(n), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    while (true) {
        const double v = a.at(IndexTuple(idx));
        if (v != 0.0) {
            double p = v;
            for (int m = 1; m < k; ++m) p *= x[static_cast<std::size_t>(idx[static_cast<std::size_t>(m)])];
            out[static_cast<std::size_t>(idx[0])] += p;
        }
        int m = k - 1;
        while (m >= 0 && ++idx[static_cast<std::size_t>(m)] == n) idx[static_cast<std::size_t>(m--)] = 0;
        if (m < 0) break;
    }
    return out;
}

struct Term {
    int target;
    std::vector<int> vars;
    double coeff;
};

inline Vector eval_terms(const std::vector<Term>& terms, const Vector& x) {
    Vector out(x.size(), 0.0);
    for (const auto& t : terms) {
        double p = t.coeff;
        for (int v : t.vars) p *= x[static_cast<std::size_t>(v)];
        out[static_cast<std::size_t>(t.target)] += p;
    }
    return out;
}

// Reducible iff some nonempty proper I has no entry (i in I, all heads outside
// I). Such sets are closed under union, so for each excluded node j the
// largest one inside V \ {j} is a greatest fixpoint: drop any i that has an
// entry with every head outside the current set.
inline bool irreducible_fixpoint(const CubicalTensor& t) {
    const int n = t.dim();
    if (n == 1) return true;
    for (int j = 0; j < n; ++j) {
        std::vector<char> in(static_cast<std::size_t>(n), 1);
        in[static_cast<std::size_t>(j)] = 0;
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t e = 0; e < t.nnz(); ++e) {
                const auto idx = t.index(e);
                if (!in[static_cast<std::size_t>(idx[0])]) continue;
                bool all_out = true;
                for (std::size_t m = 1; m < idx.size(); ++m) all_out = all_out && !in[static_cast<std::size_t>(idx[m])];
                if (all_out) {
                    in[static_cast<std::size_t>(idx[0])] = 0;
                    changed = true;
                }
            }
        }
        if (std::any_of(in.begin(), in.end(), [](char c) { return c != 0; })) return false;
    }
    return true;
}

// A (x - a)^{k-1} straight from the definition.
inline Vector shifted_direct(const CubicalTensor& a, const Vector& shift, const Vector& x) {
    Vector out(x.size(), 0.0);
    for (std::size_t e = 0; e < a.nnz(); ++e) {
        const auto idx = a.index(e);
        double p = a.value(e);
        for (std::size_t m = 1; m < idx.size(); ++m) {
            const auto h = static_cast<std::size_t>(idx[m]);
            p *= x[h] - shift[h];
        }
        out[static_cast<std::size_t>(idx[0])] += p;
    }
    return out;
}

inline Vector dense_solve(const CubicalTensor& m, const Vector& b) {
    const int n = m.dim();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t e = 0; e < m.nnz(); ++e) {
        const auto idx = m.index(e);
        a(idx[0], idx[1]) = m.value(e);
    }
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = b[static_cast<std::size_t>(i)];
    const Eigen::VectorXd x = a.fullPivLu().solve(rhs);
    return Vector(x.data(), x.data() + n);
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline double inf_norm(const Vector& a) {
    double d = 0.0;
    for (double v : a) d = std::max(d, std::abs(v));
    return d;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * hyperpos::repro::unit(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Random sparse tensor; each tuple is present with probability `density`.
inline CubicalTensor random_tensor(std::mt19937_64& rng, int k, int n, double density, double lo,
                                   double hi) {
    hyperpos::TensorBuilder b(k, n);
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    while (true) {
        if (hyperpos::repro::unit(rng) < density) b.add(IndexTuple(idx), uniform(rng, lo, hi));
        int m = k - 1;
        while (m >= 0 && ++idx[static_cast<std::size_t>(m)] == n) idx[static_cast<std::size_t>(m--)] = 0;
        if (m < 0) break;
    }
    return b.build();
}

// Every multiset class of off-diagonal indices gets one value, replicated over
// its permutations; the diagonal gets diag(i).
template <class DiagFn>
inline CubicalTensor random_supersymmetric(std::mt19937_64& rng, int k, int n, double density,
                                           double lo, double hi, DiagFn diag) {
    hyperpos::TensorBuilder b(k, n);
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    while (true) {
        if (std::is_sorted(idx.begin(), idx.end()) &&
            !std::all_of(idx.begin(), idx.end(), [&](int c) { return c == idx[0]; }) &&
            hyperpos::repro::unit(rng) < density) {
            const double v = uniform(rng, lo, hi);
            std::vector<int> p = idx;
            do {
                b.add(IndexTuple(p), v);
            } while (std::next_permutation(p.begin(), p.end()));
        }
        int m = k - 1;
        while (m >= 0 && ++idx[static_cast<std::size_t>(m)] == n) idx[static_cast<std::size_t>(m--)] = 0;
        if (m < 0) break;
    }
    CubicalTensor off = b.build();
    hyperpos::TensorBuilder d(k, n);
    for (int i = 0; i < n; ++i) {
        double radius = 0.0;
        for (std::size_t e = off.row_begin(i); e < off.row_end(i); ++e) radius += std::abs(off.value(e));
        d.add(IndexTuple(std::vector<int>(static_cast<std::size_t>(k), i)), diag(i, radius));
    }
    return hyperpos::tensor_add(off, d.build());
}

}  // namespace oracle
