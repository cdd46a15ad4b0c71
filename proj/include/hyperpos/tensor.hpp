#pragma once

// Sparse cubical tensors: storage, multilinear products, structural
// predicates and hypergraph generators.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hyperpos/simd/kernels.hpp"

namespace hyperpos {

using Vector = std::vector<double>;
using Matrix = std::vector<std::vector<double>>;

// A k-component index into a cubical tensor (0-based).
class IndexTuple {
public:
    IndexTuple() = default;
    explicit IndexTuple(std::vector<int> components) : c_(std::move(components)) {}
    IndexTuple(std::initializer_list<int> components) : c_(components) {}

    std::size_t size() const noexcept { return c_.size(); }
    int operator[](std::size_t m) const { return c_[m]; }
    int& operator[](std::size_t m) { return c_[m]; }
    int first() const { return c_.front(); }
    std::span<const int> heads() const { return std::span<const int>(c_).subspan(1); }
    const std::vector<int>& components() const noexcept { return c_; }

    // All components equal.
    bool is_diagonal() const noexcept;

    auto operator<=>(const IndexTuple&) const = default;
    bool operator==(const IndexTuple&) const = default;

private:
    std::vector<int> c_;
};

class CubicalTensor;

// Accumulates entries (duplicates are summed) and produces an immutable
// tensor with exact zeros dropped.
class TensorBuilder {
public:
    TensorBuilder(int order, int dim);

    TensorBuilder& add(const IndexTuple& idx, double value);
    TensorBuilder& add(std::initializer_list<int> idx, double value) {
        return add(IndexTuple(idx), value);
    }
    CubicalTensor build() const;

    int order() const noexcept { return order_; }
    int dim() const noexcept { return dim_; }

private:
    int order_;
    int dim_;
    std::map<IndexTuple, double> entries_;
};

// Order-k, dimension-n tensor with lexicographically sorted sparse entries.
// Immutable after construction; safe to share across threads.
class CubicalTensor {
public:
    CubicalTensor(int order, int dim);  // the zero tensor
    CubicalTensor(int order, int dim, const std::map<IndexTuple, double>& entries);

    int order() const noexcept { return order_; }
    int dim() const noexcept { return dim_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const int> index(std::size_t e) const {
        return {tuples_.data() + e * static_cast<std::size_t>(order_),
                static_cast<std::size_t>(order_)};
    }
    IndexTuple tuple(std::size_t e) const;
    double value(std::size_t e) const { return values_[e]; }
    std::span<const double> values() const noexcept { return values_; }

    // Entries whose first index is i occupy [row_begin(i), row_end(i)).
    std::size_t row_begin(int i) const { return row_ptr_[static_cast<std::size_t>(i)]; }
    std::size_t row_end(int i) const { return row_ptr_[static_cast<std::size_t>(i) + 1]; }

    double at(const IndexTuple& idx) const;
    double diagonal(int i) const;

    std::map<IndexTuple, double> entries() const;
    simd::SparseRows rows() const noexcept;

    bool operator==(const CubicalTensor& other) const;

private:
    int order_;
    int dim_;
    std::vector<int> tuples_;  // nnz * order, row-major
    std::vector<double> values_;
    std::vector<std::int32_t> heads_;  // (order-1) * nnz, mode-major, for the kernels
    std::vector<std::size_t> row_ptr_;
};

struct MetzlerSplit {
    CubicalTensor nonneg;  // B, entrywise >= 0
    double shift = 0.0;    // s, with A = B - s * Identity
};

// ---- products ---------------------------------------------------------------

// (A x^{k-1})_i = sum A_{i,i2..ik} x_{i2} ... x_{ik}
Vector tv_product(const CubicalTensor& a, std::span<const double> x);
void tv_product_into(const CubicalTensor& a, std::span<const double> x, std::span<double> out);

// Componentwise integer power, p >= 1.
Vector vec_power(std::span<const double> x, int p);

// ---- constructors and plumbing ----------------------------------------------

CubicalTensor identity_tensor(int order, int dim);
CubicalTensor tensor_add(const CubicalTensor& a, const CubicalTensor& b);
CubicalTensor tensor_scale(const CubicalTensor& a, double c);
// A + c * Identity
CubicalTensor shift_diagonal(const CubicalTensor& a, double c);
// Order-2 tensor from a dense matrix.
CubicalTensor matrix_tensor(const Matrix& m);

// ---- structure --------------------------------------------------------------

bool is_metzler(const CubicalTensor& a);
bool is_nonnegative(const CubicalTensor& a);
bool is_supersymmetric(const CubicalTensor& a);
bool is_diagonally_dominant(const CubicalTensor& a, bool strict);

// Throws NotMetzlerError naming the first negative off-diagonal entry.
MetzlerSplit metzler_split(const CubicalTensor& a);

// M_ij = sum over j3..jk of T_{i,j,j3..jk}.
Matrix mode_sum_matrix(const CubicalTensor& t);

inline constexpr int kExactIrreducibilityCap = 20;

// Exact test by enumeration of index subsets; DimensionTooLarge above the cap.
bool is_irreducible(const CubicalTensor& t);

// Strong connectivity of the positivity pattern of the mode-sum matrix.
// Necessary for is_irreducible, and enough for the tensor to be weakly
// irreducible (what the Perron iteration relies on).
bool is_strongly_connected(const CubicalTensor& t);

struct GershgorinDisk {
    double center;
    double radius;
};

struct GershgorinBounds {
    std::vector<GershgorinDisk> disks;
    double lower;  // real interval hull of the union
    double upper;

    bool contains(double lambda, double slack = 0.0) const;
};

// Requires a supersymmetric tensor (SupersymmetryRequired otherwise).
GershgorinBounds gershgorin_bounds(const CubicalTensor& a);

// ---- polynomial and hypergraph generators ------------------------------------

struct Monomial {
    int target;              // equation index
    std::vector<int> heads;  // variable indices, a multiset of size k-1
    double coefficient;
};

// Tensor whose product reproduces the polynomial vector field. Without
// symmetrization each monomial lands on its sorted index tuple; with it the
// coefficient is spread evenly over the distinct permutations of the heads.
CubicalTensor from_polynomial(std::span<const Monomial> monomials, int dim, int order,
                              bool symmetrize);

// Every index tuple gets off_diag, the n diagonal tuples get diag.
CubicalTensor uniform_tensor(int order, int dim, double off_diag, double diag);

// r petals sharing a core of core_size nodes; node 0..core_size-1 form the
// core. Each hyperedge stores `weight` at every permutation of its nodes.
CubicalTensor sunflower_tensor(int order, int petals, int core_size = 1, double weight = 1.0);

inline int sunflower_dim(int order, int petals, int core_size = 1) {
    return core_size + petals * (order - core_size);
}

}  // namespace hyperpos
