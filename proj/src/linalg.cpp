#include "rmep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmep/errors.hpp"

// complex must be defined before lapacke.h
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

extern "C" void openblas_set_num_threads(int);

namespace rmep {

const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

void require_valid(const ComplexMatrix& a, std::string_view what) {
    if (a.rows() < 1 || a.cols() < 1)
        throw ValidationError(std::string(what) + ": matrix must have at least one row and one column");
    if (!a.allFinite())
        throw ValidationError(std::string(what) + ": matrix has non-finite entries");
}

}  // namespace rmep

namespace rmep::linalg {

namespace {

lapack_int as_lapack(Index v) { return static_cast<lapack_int>(v); }

void check_info(lapack_int info, const char* routine, Index rows, Index cols) {
    if (info != 0) throw BackendError(routine, static_cast<long>(rows), static_cast<long>(cols), info);
}

void normalize_columns(ComplexMatrix& m) {
    for (Index j = 0; j < m.cols(); ++j) {
        const double nrm = m.col(j).norm();
        if (nrm > 0.0) m.col(j) /= nrm;
    }
}

}  // namespace

SvdResult svd(const ComplexMatrix& a, bool economy) {
    require_valid(a, "svd");
    const Index m = a.rows();
    const Index n = a.cols();
    const Index mn = std::min(m, n);

    ComplexMatrix work = a;
    RealVector s(mn);
    ComplexMatrix u;
    ComplexMatrix vt(n, n);
    // 'S' already returns a square V^H when m >= n; otherwise ask for all of it.
    const char jobz = (economy && m >= n) ? 'S' : 'A';
    u.resize(m, jobz == 'S' ? mn : m);
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, jobz, as_lapack(m), as_lapack(n), work.data(),
                                           as_lapack(m), s.data(), u.data(), as_lapack(m), vt.data(), as_lapack(n));
    check_info(info, "zgesdd", m, n);

    SvdResult out;
    out.economy = economy;
    out.singular_values = std::move(s);
    out.V = vt.adjoint();
    if (economy && u.cols() > mn)
        out.U = u.leftCols(mn);
    else
        out.U = std::move(u);
    return out;
}

RealVector singular_values(const ComplexMatrix& a) {
    require_valid(a, "singular_values");
    const Index m = a.rows();
    const Index n = a.cols();
    ComplexMatrix work = a;
    RealVector s(std::min(m, n));
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', as_lapack(m), as_lapack(n), work.data(),
                                           as_lapack(m), s.data(), nullptr, 1, nullptr, 1);
    check_info(info, "zgesdd", m, n);
    return s;
}

double norm2(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    return singular_values(a)(0);
}

HermitianEig eig_hermitian(const ComplexMatrix& h, const Tolerances& tol) {
    require_valid(h, "eig_hermitian");
    if (h.rows() != h.cols()) throw ValidationError("eig_hermitian: matrix is not square");
    const double asym = (h - h.adjoint()).norm();
    if (asym > tol.hermitian_rel * h.norm())
        throw ValidationError("eig_hermitian: matrix is not Hermitian (||H - H^H||_F = " + std::to_string(asym) + ")");

    const Index n = h.rows();
    ComplexMatrix work = (h + h.adjoint()) * 0.5;
    RealVector w(n);
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', as_lapack(n), work.data(), as_lapack(n), w.data());
    check_info(info, "zheevd", n, n);
    return {std::move(w), std::move(work)};
}

GepResult gep(const ComplexMatrix& a, const ComplexMatrix& b, bool want_left, const Tolerances& tol) {
    require_valid(a, "gep");
    require_valid(b, "gep");
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw ValidationError("gep: A and B must be square and of equal size");

    const Index n = a.rows();
    ComplexMatrix wa = a;
    ComplexMatrix wb = b;
    GepResult out;
    out.beta.resize(n);
    out.delta.resize(n);
    out.right.resize(n, n);
    ComplexMatrix vl;
    if (want_left) vl.resize(n, n);
    const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, want_left ? 'V' : 'N', 'V', as_lapack(n), wa.data(),
                                          as_lapack(n), wb.data(), as_lapack(n), out.beta.data(), out.delta.data(),
                                          want_left ? vl.data() : nullptr, as_lapack(n), out.right.data(),
                                          as_lapack(n));
    check_info(info, "zggev", n, n);
    normalize_columns(out.right);
    if (want_left) {
        normalize_columns(vl);
        out.left = std::move(vl);
    }

    const double scale_a = tol.singular_pencil * tol.eps * std::max(a.norm(), 1.0);
    const double scale_b = tol.singular_pencil * tol.eps * std::max(b.norm(), 1.0);
    out.singular.resize(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j)
        out.singular[static_cast<std::size_t>(j)] = std::abs(out.beta(j)) <= scale_a && std::abs(out.delta(j)) <= scale_b;
    return out;
}

EigResult eig(const ComplexMatrix& a, bool want_left) {
    require_valid(a, "eig");
    if (a.rows() != a.cols()) throw ValidationError("eig: matrix is not square");
    const Index n = a.rows();
    ComplexMatrix work = a;
    EigResult out;
    out.eigenvalues.resize(n);
    out.right.resize(n, n);
    ComplexMatrix vl;
    if (want_left) vl.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, want_left ? 'V' : 'N', 'V', as_lapack(n), work.data(),
                                          as_lapack(n), out.eigenvalues.data(), want_left ? vl.data() : nullptr,
                                          as_lapack(n), out.right.data(), as_lapack(n));
    check_info(info, "zgeev", n, n);
    normalize_columns(out.right);
    if (want_left) {
        normalize_columns(vl);
        out.left = std::move(vl);
    }
    return out;
}

PivotedQr rank_revealing_qr(const ComplexMatrix& a) {
    require_valid(a, "rank_revealing_qr");
    const Index m = a.rows();
    const Index n = a.cols();
    const Index mn = std::min(m, n);

    ComplexMatrix work = a;
    std::vector<lapack_int> jpvt(static_cast<std::size_t>(n), 0);
    ComplexVector tau(mn);
    lapack_int info = LAPACKE_zgeqp3(LAPACK_COL_MAJOR, as_lapack(m), as_lapack(n), work.data(), as_lapack(m),
                                     jpvt.data(), tau.data());
    check_info(info, "zgeqp3", m, n);

    PivotedQr out;
    out.R = work.topRows(mn).triangularView<Eigen::Upper>();
    ComplexMatrix q = work.leftCols(mn);
    info = LAPACKE_zungqr(LAPACK_COL_MAJOR, as_lapack(m), as_lapack(mn), as_lapack(mn), q.data(), as_lapack(m),
                          tau.data());
    check_info(info, "zungqr", m, mn);
    out.Q = std::move(q);
    out.permutation.reserve(static_cast<std::size_t>(n));
    for (lapack_int p : jpvt) out.permutation.push_back(static_cast<Index>(p) - 1);
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t cap) {
    const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
    const auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
    if (rows > cap || cols > cap) throw CapacityError("kron", std::max(rows, cols), cap);

    const Index p = b.rows();
    const Index q = b.cols();
    ComplexMatrix out(a.rows() * p, a.cols() * q);
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i) out.block(i * p, j * q, p, q) = a(i, j) * b;
    return out;
}

ComplexMatrix kron_all(const std::vector<const ComplexMatrix*>& factors, std::size_t cap) {
    if (factors.empty()) throw ValidationError("kron_all: no factors");
    ComplexMatrix out = *factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, *factors[i], cap);
    return out;
}

double rcond(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw ValidationError("rcond: matrix is not square");
    if (!a.allFinite()) return 0.0;
    const double anorm = a.cwiseAbs().colwise().sum().maxCoeff();
    if (anorm == 0.0) return 0.0;
    const Eigen::PartialPivLU<ComplexMatrix> lu(a);
    // Eigen's estimate is meaningless once a pivot is exactly zero.
    if ((lu.matrixLU().diagonal().array() == cd(0.0)).any()) return 0.0;
    const double r = lu.rcond();
    return std::isfinite(r) ? r : 0.0;
}

void set_backend_threads(int threads) { openblas_set_num_threads(std::max(threads, 1)); }

}  // namespace rmep::linalg
