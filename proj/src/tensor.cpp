#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "hyperpos/error.hpp"
#include "hyperpos/tensor.hpp"

namespace hyperpos {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NotMetzler: return "NotMetzler";
        case ErrorCode::NotNonnegative: return "NotNonnegative";
        case ErrorCode::NotIrreducible: return "NotIrreducible";
        case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
        case ErrorCode::DegreeMismatch: return "DegreeMismatch";
        case ErrorCode::SupersymmetryRequired: return "SupersymmetryRequired";
        case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
        case ErrorCode::NotMTensor: return "NotMTensor";
        case ErrorCode::NotPositiveRhs: return "NotPositiveRhs";
        case ErrorCode::OrderTooLow: return "OrderTooLow";
        case ErrorCode::InfeasibleMask: return "InfeasibleMask";
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::InvalidInitialState: return "InvalidInitialState";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
    return code == ErrorCode::MaxIterExceeded || code == ErrorCode::InfeasibleMask;
}

namespace {

std::string format_index(const std::vector<int>& idx) {
    std::ostringstream os;
    os << '(';
    for (std::size_t m = 0; m < idx.size(); ++m) os << (m ? "," : "") << idx[m];
    os << ')';
    return os.str();
}

}  // namespace

NotMetzlerError::NotMetzlerError(std::vector<int> index, double value)
    : Error(ErrorCode::NotMetzler,
            "negative off-diagonal entry " + std::to_string(value) + " at " + format_index(index)),
      index_(std::move(index)),
      value_(value) {}

bool IndexTuple::is_diagonal() const noexcept {
    return std::adjacent_find(c_.begin(), c_.end(), std::not_equal_to<>()) == c_.end();
}

// ---- builder -----------------------------------------------------------------

TensorBuilder::TensorBuilder(int order, int dim) : order_(order), dim_(dim) {
    if (order < 2) throw Error(ErrorCode::InvalidArgument, "tensor order must be >= 2");
    if (dim < 1) throw Error(ErrorCode::InvalidArgument, "tensor dimension must be >= 1");
}

TensorBuilder& TensorBuilder::add(const IndexTuple& idx, double value) {
    if (idx.size() != static_cast<std::size_t>(order_)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "index " + format_index(idx.components()) + " has " +
                        std::to_string(idx.size()) + " components, expected " +
                        std::to_string(order_));
    }
    for (std::size_t m = 0; m < idx.size(); ++m) {
        if (idx[m] < 0 || idx[m] >= dim_) {
            throw Error(ErrorCode::DimensionMismatch,
                        "index " + format_index(idx.components()) + " out of range for dim " +
                            std::to_string(dim_));
        }
    }
    if (!std::isfinite(value)) {
        throw Error(ErrorCode::InvalidArgument,
                    "non-finite value at " + format_index(idx.components()));
    }
    entries_[idx] += value;
    return *this;
}

CubicalTensor TensorBuilder::build() const { return CubicalTensor(order_, dim_, entries_); }

// ---- tensor ------------------------------------------------------------------

CubicalTensor::CubicalTensor(int order, int dim)
    : CubicalTensor(order, dim, std::map<IndexTuple, double>{}) {}

CubicalTensor::CubicalTensor(int order, int dim, const std::map<IndexTuple, double>& entries)
    : order_(order), dim_(dim) {
    if (order < 2) throw Error(ErrorCode::InvalidArgument, "tensor order must be >= 2");
    if (dim < 1) throw Error(ErrorCode::InvalidArgument, "tensor dimension must be >= 1");

    std::size_t nnz = 0;
    for (const auto& [idx, v] : entries) {
        if (idx.size() != static_cast<std::size_t>(order)) {
            throw Error(ErrorCode::DimensionMismatch,
                        "index " + format_index(idx.components()) + " has " +
                            std::to_string(idx.size()) + " components, expected " +
                            std::to_string(order));
        }
        for (std::size_t m = 0; m < idx.size(); ++m) {
            if (idx[m] < 0 || idx[m] >= dim) {
                throw Error(ErrorCode::DimensionMismatch,
                            "index " + format_index(idx.components()) +
                                " out of range for dim " + std::to_string(dim));
            }
        }
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument,
                        "non-finite value at " + format_index(idx.components()));
        }
        if (v != 0.0) ++nnz;
    }

    tuples_.reserve(nnz * static_cast<std::size_t>(order));
    values_.reserve(nnz);
    heads_.resize(nnz * static_cast<std::size_t>(order - 1));
    row_ptr_.assign(static_cast<std::size_t>(dim) + 1, 0);

    std::size_t e = 0;
    for (const auto& [idx, v] : entries) {  // std::map iterates lexicographically
        if (v == 0.0) continue;
        tuples_.insert(tuples_.end(), idx.components().begin(), idx.components().end());
        values_.push_back(v);
        for (int m = 1; m < order; ++m) {
            heads_[static_cast<std::size_t>(m - 1) * nnz + e] = idx[static_cast<std::size_t>(m)];
        }
        ++row_ptr_[static_cast<std::size_t>(idx.first()) + 1];
        ++e;
    }
    for (std::size_t i = 1; i < row_ptr_.size(); ++i) row_ptr_[i] += row_ptr_[i - 1];
}

IndexTuple CubicalTensor::tuple(std::size_t e) const {
    const auto s = index(e);
    return IndexTuple(std::vector<int>(s.begin(), s.end()));
}

double CubicalTensor::at(const IndexTuple& idx) const {
    if (idx.size() != static_cast<std::size_t>(order_) || idx.first() < 0 || idx.first() >= dim_) {
        return 0.0;
    }
    std::size_t lo = row_begin(idx.first());
    std::size_t hi = row_end(idx.first());
    const auto& want = idx.components();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const auto s = index(mid);
        if (std::lexicographical_compare(s.begin(), s.end(), want.begin(), want.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < row_end(idx.first())) {
        const auto s = index(lo);
        if (std::equal(s.begin(), s.end(), want.begin(), want.end())) return values_[lo];
    }
    return 0.0;
}

double CubicalTensor::diagonal(int i) const {
    return at(IndexTuple(std::vector<int>(static_cast<std::size_t>(order_), i)));
}

std::map<IndexTuple, double> CubicalTensor::entries() const {
    std::map<IndexTuple, double> out;
    for (std::size_t e = 0; e < nnz(); ++e) out.emplace_hint(out.end(), tuple(e), values_[e]);
    return out;
}

simd::SparseRows CubicalTensor::rows() const noexcept {
    return simd::SparseRows{order_, dim_, nnz(), row_ptr_.data(), values_.data(), heads_.data()};
}

bool CubicalTensor::operator==(const CubicalTensor& other) const {
    return order_ == other.order_ && dim_ == other.dim_ && tuples_ == other.tuples_ &&
           values_ == other.values_;
}

// ---- products ----------------------------------------------------------------

void tv_product_into(const CubicalTensor& a, std::span<const double> x, std::span<double> out) {
    const auto n = static_cast<std::size_t>(a.dim());
    if (x.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "vector length " + std::to_string(x.size()) +
                                                      ", expected " + std::to_string(n));
    }
    if (out.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "output length " + std::to_string(out.size()) +
                                                      ", expected " + std::to_string(n));
    }
    const auto rows = a.rows();
    simd::active().tv_rows(rows, x.data(), out.data());
}

Vector tv_product(const CubicalTensor& a, std::span<const double> x) {
    Vector out(static_cast<std::size_t>(a.dim()));
    tv_product_into(a, x, out);
    return out;
}

Vector vec_power(std::span<const double> x, int p) {
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "power must be >= 1");
    Vector out(x.size());
    if (!x.empty()) simd::active().ipow(x.size(), x.data(), p, out.data());
    return out;
}

// ---- plumbing ----------------------------------------------------------------

CubicalTensor identity_tensor(int order, int dim) {
    TensorBuilder b(order, dim);
    for (int i = 0; i < dim; ++i) {
        b.add(IndexTuple(std::vector<int>(static_cast<std::size_t>(order), i)), 1.0);
    }
    return b.build();
}

CubicalTensor tensor_add(const CubicalTensor& a, const CubicalTensor& b) {
    if (a.order() != b.order() || a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "tensor_add: shapes (" +
                                                      std::to_string(a.order()) + "," +
                                                      std::to_string(a.dim()) + ") and (" +
                                                      std::to_string(b.order()) + "," +
                                                      std::to_string(b.dim()) + ")");
    }
    auto entries = a.entries();
    for (std::size_t e = 0; e < b.nnz(); ++e) entries[b.tuple(e)] += b.value(e);
    return CubicalTensor(a.order(), a.dim(), entries);
}

CubicalTensor tensor_scale(const CubicalTensor& a, double c) {
    auto entries = a.entries();
    for (auto& [idx, v] : entries) v *= c;
    return CubicalTensor(a.order(), a.dim(), entries);
}

CubicalTensor shift_diagonal(const CubicalTensor& a, double c) {
    return tensor_add(a, tensor_scale(identity_tensor(a.order(), a.dim()), c));
}

CubicalTensor matrix_tensor(const Matrix& m) {
    const int n = static_cast<int>(m.size());
    TensorBuilder b(2, n);
    for (int i = 0; i < n; ++i) {
        if (m[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(n)) {
            throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
        }
        for (int j = 0; j < n; ++j) b.add({i, j}, m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    return b.build();
}

}  // namespace hyperpos
