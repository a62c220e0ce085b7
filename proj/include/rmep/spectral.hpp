#pragma once

// Least-squares Chebyshev discretisation of two-parameter ODE eigenproblems
//   u_r'' + (lambda p_r + mu q_r + f_r) u_r = 0,  u_r(a_r) = u_r(b_r) = 0,
// into a 2-block RMEP with (n_r + 2) x n_r blocks. Quasimatrices become
// sqrt(weight)-scaled tables at oversampled Chebyshev-Lobatto nodes, so the
// discrete 2-norm reproduces the L2 norm of the continuous residual.

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmep/model.hpp"

namespace rmep::spectral {

struct Interval {
    double a = 0.0;
    double b = 1.0;
    double length() const { return b - a; }
};

using Coefficient = std::function<double(double)>;

struct OdeEquation {
    Coefficient p, q, f;
    Interval interval;
    Index n = 30;
};

struct OdeSpec {
    std::array<OdeEquation, 2> equations;
    int oversampling = 4;
};

/// Basis tau_j = T_{j-1} mapped to the interval, tabulated at the nodes.
struct ChebBasis {
    Interval interval;
    Index n = 0;
    int oversampling = 4;
    RealVector nodes;    // M = oversampling * n points, ascending
    RealVector weights;  // Clenshaw-Curtis on the same nodes
    Eigen::MatrixXd T;   // M x n, T(m, j) = tau_{j+1}(nodes(m))
    Eigen::MatrixXd T2;  // second derivatives in t
};

ChebBasis build_basis(Interval interval, Index n, int oversampling = 4);

struct DiscretizedOde {
    RmepProblem problem;
    std::array<ChebBasis, 2> bases;
    std::vector<std::string> warnings;  // e.g. numerically rank-deficient L_r
};

DiscretizedOde discretize(const OdeSpec& spec, const Tolerances& tol = default_tolerances());

/// u(t) = sum_j c_j tau_j(t), evaluated with Clenshaw's recurrence.
struct ChebExpansion {
    Interval interval;
    ComplexVector coefficients;

    cd value(double t) const;
    cd second_derivative(double t) const;
};

/// Throws ValidationError on a length mismatch. The expansion throws
/// DomainError for t outside the interval.
ChebExpansion reconstruct(const ChebBasis& basis, const ComplexVector& c);

struct ContinuousResidual {
    std::array<double, 2> per_equation{};
    double total = 0.0;
    bool degenerate = false;  // a coefficient vector was zero
};

/// sum_r int |u_r'' + (lambda p_r + mu q_r + f_r) u_r| dt with Clenshaw-Curtis
/// on nodes twice as dense as the discretisation's. Throws InfiniteEigenvalue.
ContinuousResidual continuous_residual(const OdeSpec& spec, const EigenTuple& t,
                                       const Tolerances& tol = default_tolerances());

/// p_1 = p_2 = q_2 = 1, q_1 = -1, f = 0 on [0, 1]^2. Eigenvalues
/// lambda = (i^2 + j^2) pi^2 / 2, mu = (j^2 - i^2) pi^2 / 2 with
/// eigenfunctions sin(i pi s), sin(j pi t).
OdeSpec builtin_sturm_liouville(Index n1 = 30, Index n2 = 30, int oversampling = 4);

/// Helmholtz on the ellipse with semi-axes alpha > beta, separated in
/// elliptic coordinates x = h cosh(t) cos(s), y = h sinh(t) sin(s):
///   u_1'' + (lambda - 2 mu cos 2s) u_1 = 0 on (0, pi/2),
///   u_2'' - (lambda - 2 mu cosh 2t) u_2 = 0 on (0, xi_0),
/// so p_1 = 1, q_1 = -2 cos 2s, p_2 = -1, q_2 = 2 cosh 2t. mu = h^2 omega^2 / 4.
struct MathieuProblem {
    OdeSpec spec;
    double h = 0.0;
    double xi0 = 0.0;

    /// omega = 2 sqrt(mu) / h (principal branch).
    cd frequency(cd mu) const;
};

MathieuProblem builtin_mathieu(double alpha, double beta, Index n1 = 30, Index n2 = 30, int oversampling = 4);

/// Columns t, re, im on `points` equispaced samples of the interval.
void write_function_csv(std::ostream& out, const ChebExpansion& u, int points);

/// Columns x, y, re, im of psi = u_1(s) u_2(t) on an (s, t) mesh covering the
/// ellipse, u_1 extended to [0, 2 pi) as an odd, pi-periodic function.
void write_mathieu_mode_csv(std::ostream& out, const MathieuProblem& m, const ChebExpansion& u1,
                            const ChebExpansion& u2, int s_points, int t_points);

}  // namespace rmep::spectral
