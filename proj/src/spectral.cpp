#include "rmep/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rmep/errors.hpp"

namespace rmep::spectral {
namespace {

void check_interval(Interval iv) {
    if (!(std::isfinite(iv.a) && std::isfinite(iv.b) && iv.a < iv.b))
        throw ValidationError("interval must satisfy a < b");
}

// Clenshaw-Curtis weights on the Chebyshev-Lobatto points of [-1, 1].
RealVector clenshaw_curtis(Index points) {
    const Index N = points - 1;
    RealVector w(points);
    for (Index k = 0; k <= N; ++k) {
        const double theta = M_PI * static_cast<double>(k) / static_cast<double>(N);
        double sum = 0.0;
        for (Index j = 1; j <= N / 2; ++j) {
            const double b = (2 * j == N) ? 1.0 : 2.0;
            sum += b / (4.0 * static_cast<double>(j * j) - 1.0) * std::cos(2.0 * static_cast<double>(j) * theta);
        }
        const double c = (k == 0 || k == N) ? 1.0 : 2.0;
        w(k) = c / static_cast<double>(N) * (1.0 - sum);
    }
    return w;
}

// T_j(x), T_j'(x), T_j''(x) for j < n by the three-term recurrence.
void chebyshev_row(double x, Index n, double* t, double* d1, double* d2) {
    for (Index j = 0; j < n; ++j) {
        if (j == 0) {
            t[0] = 1.0, d1[0] = 0.0, d2[0] = 0.0;
        } else if (j == 1) {
            t[1] = x, d1[1] = 1.0, d2[1] = 0.0;
        } else {
            t[j] = 2.0 * x * t[j - 1] - t[j - 2];
            d1[j] = 2.0 * t[j - 1] + 2.0 * x * d1[j - 1] - d1[j - 2];
            d2[j] = 4.0 * d1[j - 1] + 2.0 * x * d2[j - 1] - d2[j - 2];
        }
    }
}

double to_reference(Interval iv, double t) {
    const double slack = 1e-13 * iv.length();
    if (!(t >= iv.a - slack && t <= iv.b + slack))
        throw DomainError("point " + std::to_string(t) + " lies outside [" + std::to_string(iv.a) + ", " +
                          std::to_string(iv.b) + "]");
    return std::clamp((2.0 * t - iv.a - iv.b) / iv.length(), -1.0, 1.0);
}

Eigen::MatrixXd scaled_columns(const Eigen::MatrixXd& table, const RealVector& nodes, const Coefficient& g) {
    Eigen::MatrixXd out = table;
    for (Index m = 0; m < nodes.size(); ++m) out.row(m) *= g(nodes(m));
    return out;
}

void check_finite(const Coefficient& g, const RealVector& nodes, const char* name) {
    for (Index m = 0; m < nodes.size(); ++m)
        if (!std::isfinite(g(nodes(m))))
            throw ValidationError(std::string("coefficient ") + name + " is not finite at t = " +
                                  std::to_string(nodes(m)));
}

}  // namespace

ChebBasis build_basis(Interval interval, Index n, int oversampling) {
    check_interval(interval);
    if (n < 4) throw ValidationError("basis size must be at least 4");
    if (oversampling < 1) throw ValidationError("oversampling must be positive");

    ChebBasis b;
    b.interval = interval;
    b.n = n;
    b.oversampling = oversampling;
    const Index M = static_cast<Index>(oversampling) * n;
    const double half = 0.5 * interval.length();
    const double mid = 0.5 * (interval.a + interval.b);
    const double chain = 1.0 / (half * half);

    RealVector ref = clenshaw_curtis(M);
    b.nodes.resize(M);
    b.weights.resize(M);
    b.T.resize(M, n);
    b.T2.resize(M, n);
    std::vector<double> t(n), d1(n), d2(n);
    for (Index m = 0; m < M; ++m) {
        // Ascending order; CC weights are symmetric.
        const double x = -std::cos(M_PI * static_cast<double>(m) / static_cast<double>(M - 1));
        b.nodes(m) = mid + half * x;
        b.weights(m) = half * ref(m);
        chebyshev_row(x, n, t.data(), d1.data(), d2.data());
        for (Index j = 0; j < n; ++j) {
            b.T(m, j) = t[j];
            b.T2(m, j) = chain * d2[j];
        }
    }
    // Pin the endpoints exactly.
    b.nodes(0) = interval.a;
    b.nodes(M - 1) = interval.b;
    return b;
}

DiscretizedOde discretize(const OdeSpec& spec, const Tolerances& tol) {
    std::vector<EquationBlock> blocks(2);
    std::array<ChebBasis, 2> bases;
    std::vector<std::string> warnings;

    for (std::size_t r = 0; r < 2; ++r) {
        const OdeEquation& eq = spec.equations[r];
        if (!eq.p || !eq.q || !eq.f) throw ValidationError("equation " + std::to_string(r + 1) + " lacks a coefficient");
        ChebBasis basis = build_basis(eq.interval, eq.n, spec.oversampling);
        check_finite(eq.p, basis.nodes, "p");
        check_finite(eq.q, basis.nodes, "q");
        check_finite(eq.f, basis.nodes, "f");
        const Index n = basis.n;
        const RealVector sw = basis.weights.cwiseSqrt();

        Eigen::MatrixXd L = sw.asDiagonal() * (basis.T2 + scaled_columns(basis.T, basis.nodes, eq.f));
        Eigen::MatrixXd WT = sw.asDiagonal() * basis.T;
        Eigen::MatrixXd WP = sw.asDiagonal() * scaled_columns(basis.T, basis.nodes, eq.p);
        Eigen::MatrixXd WQ = sw.asDiagonal() * scaled_columns(basis.T, basis.nodes, eq.q);

        Eigen::MatrixXd Q, R;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> piv(L);
        piv.setThreshold(tol.rank_deficiency);
        const Index rank = piv.rank();
        if (rank == n) {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(L);
            Q = qr.householderQ() * Eigen::MatrixXd::Identity(L.rows(), n);
            R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
        } else {
            char buf[160];
            std::snprintf(buf, sizeof buf, "equation %zu: L has numerical rank %ld of %ld", r + 1,
                          static_cast<long>(rank), static_cast<long>(n));
            warnings.emplace_back(buf);
            // Any orthonormal completion of range(L) gives L = Q R. Complete
            // inside range(T), so Q spans the basis' own polynomial space
            // rather than two arbitrary directions.
            Eigen::MatrixXd QL = piv.householderQ() * Eigen::MatrixXd::Identity(L.rows(), rank);
            Eigen::MatrixXd rest = WT - QL * (QL.transpose() * WT);
            Eigen::BDCSVD<Eigen::MatrixXd> svd(rest, Eigen::ComputeThinU);
            Q.resize(L.rows(), n);
            Q << QL, svd.matrixU().leftCols(n - rank);
            // Re-orthogonalise the completion against QL once more.
            Q.rightCols(n - rank) -= QL * (QL.transpose() * Q.rightCols(n - rank));
            Eigen::HouseholderQR<Eigen::MatrixXd> tail(Q.rightCols(n - rank));
            Q.rightCols(n - rank) = tail.householderQ() * Eigen::MatrixXd::Identity(L.rows(), n - rank);
            R = Q.transpose() * L;
        }

        // Fix the sign freedom of each Q column: largest entry of the R row positive.
        for (Index i = 0; i < n; ++i) {
            Index j = 0;
            R.row(i).cwiseAbs().maxCoeff(&j);
            if (R(i, j) < 0.0) {
                R.row(i) *= -1.0;
                Q.col(i) *= -1.0;
            }
        }

        Eigen::MatrixXd G = Q.transpose() * WP;
        Eigen::MatrixXd K = Q.transpose() * WQ;

        Eigen::MatrixXd J(2, n);
        J.row(0) = basis.T.row(0);
        J.row(1) = basis.T.row(basis.T.rows() - 1);
        Eigen::HouseholderQR<Eigen::MatrixXd> jqr(J);
        Eigen::MatrixXd Rhat = jqr.matrixQR().triangularView<Eigen::Upper>();

        EquationBlock& blk = blocks[r];
        blk.A = ComplexMatrix::Zero(n + 2, n);
        blk.A.topRows(n) = R.cast<cd>();
        blk.A.bottomRows(2) = Rhat.cast<cd>();
        for (const Eigen::MatrixXd* m : {&G, &K}) {
            ComplexMatrix b = ComplexMatrix::Zero(n + 2, n);
            b.topRows(n) = -m->cast<cd>();
            blk.B.push_back(std::move(b));
        }
        bases[r] = std::move(basis);
    }
    return DiscretizedOde{RmepProblem(std::move(blocks)), std::move(bases), std::move(warnings)};
}

ChebExpansion reconstruct(const ChebBasis& basis, const ComplexVector& c) {
    if (c.size() != basis.n)
        throw ValidationError("reconstruct: expected " + std::to_string(basis.n) + " coefficients, got " +
                              std::to_string(c.size()));
    return ChebExpansion{basis.interval, c};
}

cd ChebExpansion::value(double t) const {
    const double x = to_reference(interval, t);
    cd b1 = 0.0, b2 = 0.0;
    for (Index j = coefficients.size() - 1; j >= 1; --j) {
        cd b0 = coefficients(j) + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return coefficients(0) + x * b1 - b2;
}

cd ChebExpansion::second_derivative(double t) const {
    const double x = to_reference(interval, t);
    const Index n = coefficients.size();
    std::vector<double> tv(n), d1(n), d2(n);
    chebyshev_row(x, n, tv.data(), d1.data(), d2.data());
    cd sum = 0.0;
    for (Index j = 2; j < n; ++j) sum += coefficients(j) * d2[j];
    const double half = 0.5 * interval.length();
    return sum / (half * half);
}

ContinuousResidual continuous_residual(const OdeSpec& spec, const EigenTuple& t, const Tolerances& tol) {
    if (t.value.k() != 2 || t.vectors.size() != 2)
        throw ValidationError("continuous_residual: expected a two-parameter tuple");
    std::vector<cd> lam = dehomogenize(t.value, tol.gamma_infinite);

    ContinuousResidual out;
    for (std::size_t r = 0; r < 2; ++r) {
        const OdeEquation& eq = spec.equations[r];
        const ComplexVector& c = t.vectors[r];
        if (c.size() != eq.n) throw ValidationError("continuous_residual: coefficient length mismatch");
        if (c.norm() == 0.0) {
            out.degenerate = true;
            continue;
        }
        ChebBasis fine = build_basis(eq.interval, eq.n, 2 * spec.oversampling);
        ComplexVector u = fine.T.cast<cd>() * c;
        ComplexVector u2 = fine.T2.cast<cd>() * c;
        double integral = 0.0;
        for (Index m = 0; m < fine.nodes.size(); ++m) {
            const double s = fine.nodes(m);
            integral += fine.weights(m) * std::abs(u2(m) + (lam[0] * eq.p(s) + lam[1] * eq.q(s) + eq.f(s)) * u(m));
        }
        out.per_equation[r] = integral;
        out.total += integral;
    }
    return out;
}

OdeSpec builtin_sturm_liouville(Index n1, Index n2, int oversampling) {
    auto one = [](double) { return 1.0; };
    auto minus_one = [](double) { return -1.0; };
    auto zero = [](double) { return 0.0; };
    OdeSpec s;
    s.equations[0] = OdeEquation{one, minus_one, zero, Interval{0.0, 1.0}, n1};
    s.equations[1] = OdeEquation{one, one, zero, Interval{0.0, 1.0}, n2};
    s.oversampling = oversampling;
    return s;
}

cd MathieuProblem::frequency(cd mu) const { return 2.0 * std::sqrt(mu) / h; }

MathieuProblem builtin_mathieu(double alpha, double beta, Index n1, Index n2, int oversampling) {
    if (!(beta > 0.0 && alpha > beta)) throw DomainError("mathieu: need alpha > beta > 0");
    MathieuProblem m;
    m.h = std::sqrt(alpha * alpha - beta * beta);
    m.xi0 = std::acosh(alpha / m.h);
    auto zero = [](double) { return 0.0; };
    m.spec.equations[0] = OdeEquation{[](double) { return 1.0; }, [](double s) { return -2.0 * std::cos(2.0 * s); },
                                      zero, Interval{0.0, M_PI / 2.0}, n1};
    m.spec.equations[1] = OdeEquation{[](double) { return -1.0; }, [](double t) { return 2.0 * std::cosh(2.0 * t); },
                                      zero, Interval{0.0, m.xi0}, n2};
    m.spec.oversampling = oversampling;
    return m;
}

void write_function_csv(std::ostream& out, const ChebExpansion& u, int points) {
    if (points < 2) throw ValidationError("write_function_csv: need at least two points");
    out << "t,re,im\n";
    char buf[96];
    for (int j = 0; j < points; ++j) {
        double t = u.interval.a + u.interval.length() * j / (points - 1);
        if (j == points - 1) t = u.interval.b;
        cd v = u.value(t);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, v.real(), v.imag());
        out << buf;
    }
}

void write_mathieu_mode_csv(std::ostream& out, const MathieuProblem& m, const ChebExpansion& u1,
                            const ChebExpansion& u2, int s_points, int t_points) {
    if (s_points < 2 || t_points < 2) throw ValidationError("write_mathieu_mode_csv: need at least two points per axis");
    // Odd and pi-periodic: u(pi - s) = -u(s), u(s + pi) = u(s).
    auto angular = [&](double s) -> cd {
        s = std::fmod(s, M_PI);
        if (s <= M_PI / 2.0) return u1.value(std::min(s, M_PI / 2.0));
        return -u1.value(std::max(M_PI - s, 0.0));
    };
    out << "x,y,re,im\n";
    char buf[128];
    for (int it = 0; it < t_points; ++it) {
        const double t = (it == t_points - 1) ? m.xi0 : m.xi0 * it / (t_points - 1);
        const cd radial = u2.value(t);
        for (int is = 0; is < s_points; ++is) {
            const double s = 2.0 * M_PI * is / s_points;
            const cd psi = angular(s) * radial;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", m.h * std::cosh(t) * std::cos(s),
                          m.h * std::sinh(t) * std::sin(s), psi.real(), psi.imag());
            out << buf;
        }
    }
}

}  // namespace rmep::spectral
