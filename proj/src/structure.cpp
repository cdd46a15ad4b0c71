#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "hyperpos/error.hpp"
#include "hyperpos/tensor.hpp"

namespace hyperpos {
namespace {

bool entry_is_diagonal(std::span<const int> idx) {
    return std::all_of(idx.begin(), idx.end(), [&](int c) { return c == idx[0]; });
}

// Breadth-first reachability from node 0 over adjacency lists.
bool reaches_all(const std::vector<std::vector<int>>& adj) {
    const std::size_t n = adj.size();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n;
}

}  // namespace

bool is_metzler(const CubicalTensor& a) {
    for (std::size_t e = 0; e < a.nnz(); ++e) {
        if (a.value(e) < 0.0 && !entry_is_diagonal(a.index(e))) return false;
    }
    return true;
}

bool is_nonnegative(const CubicalTensor& a) {
    const auto v = a.values();
    return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
}

bool is_supersymmetric(const CubicalTensor& a) {
    for (std::size_t e = 0; e < a.nnz(); ++e) {
        auto s = a.index(e);
        std::vector<int> perm(s.begin(), s.end());
        std::sort(perm.begin(), perm.end());
        do {
            if (a.at(IndexTuple(perm)) != a.value(e)) return false;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return true;
}

bool is_diagonally_dominant(const CubicalTensor& a, bool strict) {
    for (int i = 0; i < a.dim(); ++i) {
        double diag = 0.0;
        double off = 0.0;
        for (std::size_t e = a.row_begin(i); e < a.row_end(i); ++e) {
            if (entry_is_diagonal(a.index(e))) {
                diag = std::abs(a.value(e));
            } else {
                off += std::abs(a.value(e));
            }
        }
        if (strict ? !(diag > off) : !(diag >= off)) return false;
    }
    return true;
}

MetzlerSplit metzler_split(const CubicalTensor& a) {
    double min_diag = std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.dim(); ++i) min_diag = std::min(min_diag, a.diagonal(i));
    for (std::size_t e = 0; e < a.nnz(); ++e) {
        const auto idx = a.index(e);
        if (a.value(e) < 0.0 && !entry_is_diagonal(idx)) {
            throw NotMetzlerError(std::vector<int>(idx.begin(), idx.end()), a.value(e));
        }
    }
    const double shift = std::max(0.0, -min_diag);
    if (shift == 0.0) return MetzlerSplit{a, 0.0};

    auto entries = a.entries();
    for (int i = 0; i < a.dim(); ++i) {
        entries[IndexTuple(std::vector<int>(static_cast<std::size_t>(a.order()), i))] += shift;
    }
    return MetzlerSplit{CubicalTensor(a.order(), a.dim(), entries), shift};
}

Matrix mode_sum_matrix(const CubicalTensor& t) {
    const auto n = static_cast<std::size_t>(t.dim());
    Matrix m(n, Vector(n, 0.0));
    for (std::size_t e = 0; e < t.nnz(); ++e) {
        const auto idx = t.index(e);
        m[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(idx[1])] += t.value(e);
    }
    return m;
}

bool is_irreducible(const CubicalTensor& t) {
    const int n = t.dim();
    if (n > kExactIrreducibilityCap) {
        throw Error(ErrorCode::DimensionTooLarge,
                    "exact irreducibility check supports n <= " +
                        std::to_string(kExactIrreducibilityCap) + ", got " + std::to_string(n));
    }
    if (n == 1) return true;

    // Per row, the distinct bitmasks of head sets carried by nonzero entries.
    std::vector<std::vector<std::uint32_t>> head_masks(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& masks = head_masks[static_cast<std::size_t>(i)];
        for (std::size_t e = t.row_begin(i); e < t.row_end(i); ++e) {
            std::uint32_t mask = 0;
            for (int h : t.index(e).subspan(1)) mask |= 1u << h;
            masks.push_back(mask);
        }
        std::sort(masks.begin(), masks.end());
        masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    }

    // I is a reducibility witness iff every nonzero entry in a row of I has
    // at least one head inside I.
    const std::uint32_t full = (1u << n) - 1u;
    for (std::uint32_t subset = 1; subset < full; ++subset) {
        bool witness = true;
        for (int i = 0; i < n && witness; ++i) {
            if (!(subset & (1u << i))) continue;
            for (std::uint32_t mask : head_masks[static_cast<std::size_t>(i)]) {
                if ((mask & subset) == 0) {
                    witness = false;
                    break;
                }
            }
        }
        if (witness) return false;
    }
    return true;
}

bool is_strongly_connected(const CubicalTensor& t) {
    const auto n = static_cast<std::size_t>(t.dim());
    if (n == 1) return true;
    const Matrix m = mode_sum_matrix(t);
    std::vector<std::vector<int>> fwd(n);
    std::vector<std::vector<int>> bwd(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && m[i][j] > 0.0) {
                fwd[i].push_back(static_cast<int>(j));
                bwd[j].push_back(static_cast<int>(i));
            }
        }
    }
    return reaches_all(fwd) && reaches_all(bwd);
}

bool GershgorinBounds::contains(double lambda, double slack) const {
    return std::any_of(disks.begin(), disks.end(), [&](const GershgorinDisk& d) {
        return std::abs(lambda - d.center) <= d.radius + slack;
    });
}

GershgorinBounds gershgorin_bounds(const CubicalTensor& a) {
    if (!is_supersymmetric(a)) {
        throw Error(ErrorCode::SupersymmetryRequired,
                    "Gershgorin bounds are only valid for supersymmetric tensors");
    }
    GershgorinBounds out;
    out.lower = std::numeric_limits<double>::infinity();
    out.upper = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.dim(); ++i) {
        GershgorinDisk d{0.0, 0.0};
        for (std::size_t e = a.row_begin(i); e < a.row_end(i); ++e) {
            if (entry_is_diagonal(a.index(e))) {
                d.center = a.value(e);
            } else {
                d.radius += std::abs(a.value(e));
            }
        }
        out.lower = std::min(out.lower, d.center - d.radius);
        out.upper = std::max(out.upper, d.center + d.radius);
        out.disks.push_back(d);
    }
    return out;
}

}  // namespace hyperpos
