#include "sfem/sparse.hpp"

#include "sfem/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace sfem {

SparseSymMatrix::SparseSymMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                                 std::vector<std::uint32_t> col_indices, std::vector<double> values)
    : n_(n), row_offsets_(std::move(row_offsets)), col_indices_(std::move(col_indices)), values_(std::move(values))
{
    if (row_offsets_.size() != n_ + 1 || row_offsets_.front() != 0 || row_offsets_.back() != col_indices_.size()
        || col_indices_.size() != values_.size()) {
        throw DomainError("inconsistent CSR arrays");
    }
}

std::size_t SparseSymMatrix::find(std::size_t i, std::size_t j) const
{
    const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
    if (it == last || *it != j) {
        return nnz();
    }
    return static_cast<std::size_t>(it - col_indices_.begin());
}

double SparseSymMatrix::at(std::size_t i, std::size_t j) const
{
    const std::size_t k = find(i, j);
    return k == nnz() ? 0.0 : values_[k];
}

void SparseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            sum += values_[k] * x[col_indices_[k]];
        }
        y[i] = sum;
    }
}

std::vector<double> SparseSymMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

std::vector<double> SparseSymMatrix::diagonal() const
{
    std::vector<double> d(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        d[i] = at(i, i);
    }
    return d;
}

double SparseSymMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double SparseSymMatrix::asymmetry() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            worst = std::max(worst, std::abs(values_[k] - at(col_indices_[k], i)));
        }
    }
    return worst;
}

bool probably_positive_definite(const SparseSymMatrix& A, std::mt19937_64& rng, int trials)
{
    std::normal_distribution<double> normal;
    std::vector<double> x(A.size());
    for (int t = 0; t < trials; ++t) {
        for (double& v : x) {
            v = normal(rng);
        }
        if (!(dot(x, A.multiply(x)) > 0.0)) {
            return false;
        }
    }
    return true;
}

void write_matrix_market(std::ostream& out, const SparseSymMatrix& A)
{
    std::size_t lower = 0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t k = A.row_offsets()[i]; k < A.row_offsets()[i + 1]; ++k) {
            lower += A.col_indices()[k] <= i ? 1 : 0;
        }
    }
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    fmt::print(out, "{} {} {}\n", A.size(), A.size(), lower);
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t k = A.row_offsets()[i]; k < A.row_offsets()[i + 1]; ++k) {
            const std::size_t j = A.col_indices()[k];
            if (j <= i) {
                fmt::print(out, "{} {} {:.17g}\n", i + 1, j + 1, A.values()[k]);
            }
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm2(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

} // namespace sfem
