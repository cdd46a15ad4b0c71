#include <cmath>
#include <string>

#include "hyperpos/error.hpp"
#include "hyperpos/sis.hpp"

namespace hyperpos {

void validate(const SisModel& model) {
    const int n = model.triplet.dim();
    if (model.triplet.order() != 3) {
        throw Error(ErrorCode::InvalidModel, "SIS triplet tensor must have order 3");
    }
    if (model.pairwise.order() != 2 || model.pairwise.dim() != n) {
        throw Error(ErrorCode::InvalidModel,
                    "SIS pairwise matrix must be order 2 with dimension " + std::to_string(n));
    }
    if (model.gamma.size() != static_cast<std::size_t>(n)) {
        throw Error(ErrorCode::InvalidModel, "SIS recovery vector has length " +
                                                 std::to_string(model.gamma.size()) +
                                                 ", expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < model.gamma.size(); ++i) {
        if (!(model.gamma[i] > 0.0) || !std::isfinite(model.gamma[i])) {
            throw Error(ErrorCode::InvalidModel,
                        "recovery rate gamma[" + std::to_string(i) + "] must be positive");
        }
    }
    if (!(model.beta1 >= 0.0) || !(model.beta2 >= 0.0) || !std::isfinite(model.beta1) ||
        !std::isfinite(model.beta2)) {
        throw Error(ErrorCode::InvalidModel, "infection rates must be nonnegative");
    }
    if (!is_nonnegative(model.pairwise) || !is_nonnegative(model.triplet)) {
        throw Error(ErrorCode::InvalidModel, "SIS contact tensors must be nonnegative");
    }
}

}  // namespace hyperpos
