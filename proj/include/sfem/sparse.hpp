#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace sfem {

///
/// Symmetric matrix in compressed sparse row form with the full pattern stored
/// (both triangles). Column indices are sorted within each row.
///
class SparseSymMatrix {
public:
    SparseSymMatrix() = default;
    SparseSymMatrix(std::size_t n, std::vector<std::size_t> row_offsets, std::vector<std::uint32_t> col_indices,
                    std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t nnz() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
    [[nodiscard]] std::span<const std::uint32_t> col_indices() const noexcept { return col_indices_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }

    /// Entry (i, j), zero when outside the pattern.
    [[nodiscard]] double at(std::size_t i, std::size_t j) const;
    /// Position of (i, j) in values(), or nnz() when absent.
    [[nodiscard]] std::size_t find(std::size_t i, std::size_t j) const;

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    [[nodiscard]] std::vector<double> diagonal() const;
    [[nodiscard]] double max_abs() const;
    /// max |A_ij - A_ji|
    [[nodiscard]] double asymmetry() const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::uint32_t> col_indices_;
    std::vector<double> values_;
};

/// x^T A x > 0 for `trials` random nonzero x.
bool probably_positive_definite(const SparseSymMatrix& A, std::mt19937_64& rng, int trials = 16);

/// Writes A as `MatrixMarket matrix coordinate real symmetric` (lower triangle, 1-based).
void write_matrix_market(std::ostream& out, const SparseSymMatrix& A);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

} // namespace sfem
