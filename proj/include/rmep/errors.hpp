#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmep {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: shapes, non-finite entries, violated preconditions.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A dense object would exceed the configured dimension cap.
class CapacityError : public Error {
public:
    CapacityError(const std::string& what, std::size_t requested, std::size_t cap)
        : Error(what + ": dimension " + std::to_string(requested) + " exceeds cap " + std::to_string(cap)),
          requested_(requested), cap_(cap) {}
    std::size_t requested() const noexcept { return requested_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t requested_;
    std::size_t cap_;
};

/// LAPACK reported a failure (typically non-convergence).
class BackendError : public Error {
public:
    BackendError(const std::string& routine, long rows, long cols, int info)
        : Error(routine + " failed on " + std::to_string(rows) + "x" + std::to_string(cols) +
                " matrix (info=" + std::to_string(info) + ")"),
          rows_(rows), cols_(cols), info_(info) {}
    long rows() const noexcept { return rows_; }
    long cols() const noexcept { return cols_; }
    int info() const noexcept { return info_; }

private:
    long rows_;
    long cols_;
    int info_;
};

/// gamma is too small to divide by; the homogeneous alphas are preserved.
class InfiniteEigenvalue : public Error {
public:
    InfiniteEigenvalue(double gamma, std::vector<std::complex<double>> alphas)
        : Error("eigenvalue is infinite (gamma=" + std::to_string(gamma) + "); use the homogeneous form"),
          gamma_(gamma), alphas_(std::move(alphas)) {}
    double gamma() const noexcept { return gamma_; }
    const std::vector<std::complex<double>>& alphas() const noexcept { return alphas_; }

private:
    double gamma_;
    std::vector<std::complex<double>> alphas_;
};

/// No nonsingular combination of the operator determinants was found.
class IrregularMep : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace rmep
