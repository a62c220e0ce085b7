#include "rmep/alternating.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "rmep/errors.hpp"
#include "rmep/generator.hpp"

namespace rmep::alt {

const char* to_string(AltStatus s) {
    switch (s) {
        case AltStatus::tol_met: return "tol-met";
        case AltStatus::budget_exhausted: return "budget-exhausted";
        case AltStatus::stagnated: return "stagnated";
    }
    return "unknown";
}

void write_trace_csv(std::ostream& out, const AltTrace& trace) {
    out << "iter,theta1,eps_kkt\n";
    char buf[96];
    for (std::size_t j = 0; j < trace.theta.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", j, trace.theta[j], trace.eps_kkt[j]);
        out << buf;
    }
}

ComplexMatrix build_R(const RmepProblem& p, const HomEigenvalue& v, std::size_t i) {
    if (i >= p.k()) throw ValidationError("build_R: block index out of range");
    if (v.k() != p.k()) throw ValidationError("build_R: eigenvalue has wrong number of parameters");
    const auto& b = p.block(i);
    ComplexMatrix r = v.gamma * b.A;
    for (std::size_t s = 0; s < p.k(); ++s) r.noalias() -= v.alphas[s] * b.B[s];
    return r;
}

VectorStep best_vector_step(const RmepProblem& p, const HomEigenvalue& v) {
    VectorStep out;
    for (std::size_t i = 0; i < p.k(); ++i) {
        const ComplexMatrix r = build_R(p, v, i);
        const auto f = linalg::svd(r, true);
        const Index n = r.cols();
        out.xs.push_back(f.V.col(n - 1));
        // m_i >= n_i so there are exactly n singular values.
        const double smin = f.singular_values(n - 1);
        out.sigma_min.push_back(smin);
        bool tied = false;
        if (n > 1) {
            const double gap = f.singular_values(n - 2) - smin;
            tied = gap <= 1e-8 * std::max(f.singular_values(0), 1.0);
        }
        out.tied.push_back(tied);
    }
    return out;
}

ComplexMatrix build_H(const RmepProblem& p, const std::vector<ComplexVector>& xs) {
    const std::size_t k = p.k();
    if (xs.size() != k) throw ValidationError("build_H: need one vector per block");
    const auto dim = static_cast<Index>(k + 1);
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& b = p.block(i);
        ComplexMatrix s(b.rows(), dim);
        s.col(0) = b.A * xs[i];
        for (std::size_t j = 0; j < k; ++j) s.col(static_cast<Index>(j + 1)) = -(b.B[j] * xs[i]);
        h.noalias() += s.adjoint() * s;
    }
    return h;
}

ValueStep best_value_step(const ComplexMatrix& h, const Tolerances& tol) {
    const auto e = linalg::eig_hermitian(h, tol);
    return {canonical_homogeneous(e.eigenvectors.col(0), tol), e.eigenvalues(0)};
}

double kkt_residual(const RmepProblem& p, const HomEigenvalue& v, const std::vector<ComplexVector>& xs) {
    const std::size_t k = p.k();
    double xi_total = 0.0;
    double eps = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double xi = p.norm_A(i) * p.norm_A(i);
        for (std::size_t s = 0; s < k; ++s) xi += p.norm_B(i, s) * p.norm_B(i, s);
        xi_total += xi;
        const ComplexMatrix r = build_R(p, v, i);
        const ComplexVector rx = r * xs[i];
        const double omega = rx.squaredNorm();
        const ComplexVector g = r.adjoint() * rx - omega * xs[i];
        eps += xi > 0.0 ? g.norm() / xi : g.norm();
    }
    const ComplexMatrix h = build_H(p, xs);
    const ComplexVector vv = as_vector(v);
    const ComplexVector hv = h * vv;
    const cd omega = vv.dot(hv);
    const double tail = (hv - omega * vv).norm();
    eps += xi_total > 0.0 ? tail / xi_total : tail;
    return eps;
}

PerturbationSet reconstruct_perturbation(const RmepProblem& p, const HomEigenvalue& v,
                                         const std::vector<ComplexVector>& xs) {
    const std::size_t k = p.k();
    if (xs.size() != k || v.k() != k) throw ValidationError("reconstruct_perturbation: tuple size differs from k");
    std::vector<EquationBlock> blocks;
    blocks.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& b = p.block(i);
        ComplexVector f = v.gamma * (b.A * xs[i]);
        for (std::size_t s = 0; s < k; ++s) f.noalias() -= v.alphas[s] * (b.B[s] * xs[i]);
        const ComplexMatrix fx = f * xs[i].adjoint();
        EquationBlock pert;
        pert.A = b.A - v.gamma * fx;
        for (std::size_t s = 0; s < k; ++s) pert.B.push_back(b.B[s] + std::conj(v.alphas[s]) * fx);
        blocks.push_back(std::move(pert));
    }
    return make_perturbation(p, std::move(blocks));
}

namespace {

struct RunState {
    HomEigenvalue value;
    std::vector<ComplexVector> xs;
    AltTrace trace;
};

RunState run_from(const RmepProblem& p, const HomEigenvalue& start, const AltConfig& cfg, const Tolerances& tol) {
    RunState st;
    st.value = start;
    VectorStep step = best_vector_step(p, st.value);
    double theta_prev = 0.0;
    for (double s : step.sigma_min) theta_prev += s * s;
    st.trace.theta.push_back(theta_prev);
    st.trace.eps_kkt.push_back(kkt_residual(p, st.value, step.xs));

    st.trace.status = AltStatus::budget_exhausted;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        if (it > 1) step = best_vector_step(p, st.value);
        st.xs = step.xs;
        const ValueStep vs = best_value_step(build_H(p, st.xs), tol);
        st.value = vs.value;
        const double theta = vs.omega_min;
        const double kkt = kkt_residual(p, st.value, st.xs);
        st.trace.theta.push_back(theta);
        st.trace.eps_kkt.push_back(kkt);
        st.trace.iterations = it;
        st.trace.non_unique_vectors = false;
        for (bool t : step.tied) st.trace.non_unique_vectors = st.trace.non_unique_vectors || t;
        if (std::abs(theta - theta_prev) <= (theta + 1.0) * cfg.rel_tol) {
            st.trace.status =
                cfg.kkt_check && kkt > tol.stagnation_kkt ? AltStatus::stagnated : AltStatus::tol_met;
            break;
        }
        theta_prev = theta;
    }
    if (st.xs.empty()) st.xs = step.xs;
    st.trace.final_kkt = st.trace.eps_kkt.back();
    return st;
}

}  // namespace

AltResult solve_one(const RmepProblem& p, const AltConfig& cfg, const Tolerances& tol) {
    if (cfg.max_iters < 1) throw ValidationError("solve_one: max_iters must be at least 1");
    if (!(cfg.rel_tol > 0.0)) throw ValidationError("solve_one: rel_tol must be positive");
    if (cfg.restarts < 0) throw ValidationError("solve_one: restarts must be nonnegative");
    std::vector<cd> init = cfg.initial_lambdas;
    if (init.empty()) init.assign(p.k(), cd(0.0));
    if (init.size() != p.k()) throw ValidationError("solve_one: initial guess needs k values");

    RunState best = run_from(p, homogenize(init), cfg, tol);
    std::mt19937_64 rng(cfg.seed);
    for (int r = 0; r < cfg.restarts; ++r) {
        const ComplexMatrix guess = random_complex(static_cast<Index>(p.k()), 1, rng);
        std::vector<cd> lambdas(guess.data(), guess.data() + guess.size());
        RunState cand = run_from(p, homogenize(lambdas), cfg, tol);
        if (cand.trace.theta.back() < best.trace.theta.back()) best = std::move(cand);
    }

    AltResult out;
    out.tuple.value = best.value;
    out.tuple.vectors = best.xs;
    out.trace = std::move(best.trace);
    out.perturbation = reconstruct_perturbation(p, out.tuple.value, out.tuple.vectors);
    if (out.tuple.value.is_finite(tol)) {
        out.lambdas = dehomogenize(out.tuple.value, tol.gamma_infinite);
        out.tuple.residual = normalized_residual(p, *out.lambdas, out.tuple.vectors);
    } else {
        out.likely_infimum = true;
    }
    return out;
}

}  // namespace rmep::alt
