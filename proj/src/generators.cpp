#include <algorithm>
#include <numeric>
#include <string>

#include "hyperpos/error.hpp"
#include "hyperpos/tensor.hpp"

namespace hyperpos {

CubicalTensor from_polynomial(std::span<const Monomial> monomials, int dim, int order,
                              bool symmetrize) {
    TensorBuilder b(order, dim);
    for (std::size_t j = 0; j < monomials.size(); ++j) {
        const Monomial& mono = monomials[j];
        if (mono.heads.size() != static_cast<std::size_t>(order - 1)) {
            throw Error(ErrorCode::DegreeMismatch,
                        "monomial " + std::to_string(j) + " has degree " +
                            std::to_string(mono.heads.size()) + ", expected " +
                            std::to_string(order - 1));
        }
        if (mono.target < 0 || mono.target >= dim) {
            throw Error(ErrorCode::DimensionMismatch,
                        "monomial " + std::to_string(j) + " targets equation " +
                            std::to_string(mono.target));
        }
        std::vector<int> heads = mono.heads;
        std::sort(heads.begin(), heads.end());

        if (!symmetrize) {
            std::vector<int> idx{mono.target};
            idx.insert(idx.end(), heads.begin(), heads.end());
            b.add(IndexTuple(std::move(idx)), mono.coefficient);
            continue;
        }
        std::vector<std::vector<int>> perms;
        do {
            perms.push_back(heads);
        } while (std::next_permutation(heads.begin(), heads.end()));
        const double share = mono.coefficient / static_cast<double>(perms.size());
        for (const auto& p : perms) {
            std::vector<int> idx{mono.target};
            idx.insert(idx.end(), p.begin(), p.end());
            b.add(IndexTuple(std::move(idx)), share);
        }
    }
    return b.build();
}

CubicalTensor uniform_tensor(int order, int dim, double off_diag, double diag) {
    TensorBuilder b(order, dim);
    std::vector<int> idx(static_cast<std::size_t>(order), 0);
    // odometer over all dim^order tuples
    while (true) {
        const IndexTuple t(idx);
        b.add(t, t.is_diagonal() ? diag : off_diag);
        int m = order - 1;
        while (m >= 0 && ++idx[static_cast<std::size_t>(m)] == dim) {
            idx[static_cast<std::size_t>(m)] = 0;
            --m;
        }
        if (m < 0) break;
    }
    return b.build();
}

CubicalTensor sunflower_tensor(int order, int petals, int core_size, double weight) {
    if (petals < 1) throw Error(ErrorCode::InvalidArgument, "sunflower needs at least one petal");
    if (core_size < 1 || core_size >= order) {
        throw Error(ErrorCode::InvalidArgument, "sunflower core size must be in [1, order)");
    }
    const int dim = sunflower_dim(order, petals, core_size);
    const int own = order - core_size;
    TensorBuilder b(order, dim);
    for (int p = 0; p < petals; ++p) {
        std::vector<int> nodes(static_cast<std::size_t>(core_size));
        std::iota(nodes.begin(), nodes.end(), 0);
        for (int j = 0; j < own; ++j) nodes.push_back(core_size + p * own + j);
        std::sort(nodes.begin(), nodes.end());
        do {
            b.add(IndexTuple(nodes), weight);
        } while (std::next_permutation(nodes.begin(), nodes.end()));
    }
    return b.build();
}

}  // namespace hyperpos
