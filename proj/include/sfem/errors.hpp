#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace sfem {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point lies outside the region where closest-point projection is unique.
class OutOfTubularNeighborhood : public Error {
public:
    using Error::Error;
};

/// An iterative procedure (CG, ellipsoid projection) exhausted its budget.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, int iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}

    [[nodiscard]] int iterations() const noexcept { return iterations_; }
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

class DegenerateTriangle : public Error {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    explicit DegenerateTriangle(const std::string& what, std::size_t triangle = npos)
        : Error(what), triangle_(triangle) {}

    /// Index of the offending triangle, or npos for a standalone element.
    [[nodiscard]] std::size_t triangle() const noexcept { return triangle_; }

private:
    std::size_t triangle_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A mesh violates one of the TriMesh invariants.
class InvalidMesh : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace sfem
