#pragma once

// Dense complex linear algebra. Storage is Eigen (column-major); the
// factorizations call LAPACK through LAPACKE.

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rmep/config.hpp"

namespace rmep {

using cd = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Throws ValidationError if the matrix is empty or has a NaN/Inf entry.
void require_valid(const ComplexMatrix& a, std::string_view what);

}  // namespace rmep

namespace rmep::linalg {

struct SvdResult {
    ComplexMatrix U;             // m x m~ (economy) or m x m
    RealVector singular_values;  // length m~ = min(m, n), non-increasing
    ComplexMatrix V;             // n x n, always complete
    bool economy = true;
};

/// A = U diag(s) V^H. V is always square so its trailing columns span the
/// null space when m < n.
SvdResult svd(const ComplexMatrix& a, bool economy = true);

RealVector singular_values(const ComplexMatrix& a);

/// Spectral norm (largest singular value); 0 for the zero matrix.
double norm2(const ComplexMatrix& a);

struct HermitianEig {
    RealVector eigenvalues;  // ascending
    ComplexMatrix eigenvectors;
};

/// Eigen-decomposition of (H + H^H)/2. Rejects matrices that are not
/// Hermitian to tol.hermitian_rel.
HermitianEig eig_hermitian(const ComplexMatrix& h, const Tolerances& tol = default_tolerances());

/// Homogeneous eigenvalues of the pencil (A, B): A z = lambda B z with
/// lambda = beta / delta. delta == 0 is an infinite eigenvalue.
struct GepResult {
    ComplexVector beta;
    ComplexVector delta;
    ComplexMatrix right;  // unit-norm columns
    std::optional<ComplexMatrix> left;
    std::vector<bool> singular;  // both |beta| and |delta| negligible

    Index size() const { return beta.size(); }
    bool is_infinite(Index j) const { return delta(j) == cd(0.0); }
    cd eigenvalue(Index j) const { return beta(j) / delta(j); }
};

GepResult gep(const ComplexMatrix& a, const ComplexMatrix& b, bool want_left = false,
              const Tolerances& tol = default_tolerances());

/// Standard non-Hermitian eigenproblem; vectors unit-norm.
struct EigResult {
    ComplexVector eigenvalues;
    ComplexMatrix right;
    std::optional<ComplexMatrix> left;
};

EigResult eig(const ComplexMatrix& a, bool want_left = false);

/// A P = Q R with non-increasing |R(j,j)|. permutation[j] is the original
/// column placed at position j.
struct PivotedQr {
    ComplexMatrix Q;  // m x min(m, n)
    ComplexMatrix R;  // min(m, n) x n
    std::vector<Index> permutation;
};

PivotedQr rank_revealing_qr(const ComplexMatrix& a);

/// Row-major block Kronecker product: (A (x) B)(i p + r, j q + s) = A(i,j) B(r,s).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t cap = default_tolerances().kron_cap);

/// Kronecker product of a list, left to right.
ComplexMatrix kron_all(const std::vector<const ComplexMatrix*>& factors, std::size_t cap = default_tolerances().kron_cap);

/// Reciprocal 1-norm condition estimate from an LU factorization.
double rcond(const ComplexMatrix& a);

/// Caps the number of BLAS/LAPACK threads.
void set_backend_threads(int threads);

}  // namespace rmep::linalg
