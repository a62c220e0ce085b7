#include "rmep/mep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rmep/errors.hpp"

namespace rmep::mep {
namespace {

int permutation_sign(const std::vector<std::size_t>& perm) {
    int inversions = 0;
    for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = a + 1; b < perm.size(); ++b)
            if (perm[a] > perm[b]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

// det of the k x k operator array whose (i, j) entry is cell(i, j), with the
// Kronecker factor of row i in position i.
template <class Cell>
ComplexMatrix operator_determinant(std::size_t k, Cell cell, std::size_t cap) {
    if (k == 1) return *cell(0, 0);
    if (k == 2) return linalg::kron(*cell(0, 0), *cell(1, 1), cap) - linalg::kron(*cell(0, 1), *cell(1, 0), cap);

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    ComplexMatrix sum;
    do {
        std::vector<const ComplexMatrix*> factors(k);
        for (std::size_t i = 0; i < k; ++i) factors[i] = cell(i, perm[i]);
        ComplexMatrix term = linalg::kron_all(factors, cap);
        if (permutation_sign(perm) < 0) term = -term;
        if (sum.size() == 0)
            sum = std::move(term);
        else
            sum += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

std::vector<cd> random_sphere(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    std::vector<cd> w(n);
    double norm2 = 0.0;
    for (auto& x : w) {
        x = cd(normal(rng), normal(rng));
        norm2 += std::norm(x);
    }
    for (auto& x : w) x /= std::sqrt(norm2);
    return w;
}

ComplexMatrix combine(const DeltaSet& d, const std::vector<cd>& w) {
    ComplexMatrix m = w[0] * d.delta[0];
    for (std::size_t j = 1; j < d.delta.size(); ++j) m += w[j] * d.delta[j];
    return m;
}

MepTuple to_mep_tuple(const HomEigenvalue& value, const ComplexVector& z, std::span<const Index> dims,
                    const Tolerances& tol) {
    Factorization f = extract_factors(z, dims);
    MepTuple t;
    t.value = value;
    t.vectors = std::move(f.factors);
    t.separability = f.separability;
    t.poorly_separable = f.separability > tol.separability_flag;
    return t;
}

MepSolution solve_direct(const DeltaSet& d, std::mt19937_64& rng, const Tolerances& tol) {
    const std::size_t k = d.k();
    const Index n = d.size();
    Eigen::PartialPivLU<ComplexMatrix> lu(d.delta[0]);

    std::vector<ComplexMatrix> gamma(k);
    for (std::size_t s = 0; s < k; ++s) gamma[s] = lu.solve(d.delta[s + 1]);

    // A random unit-modulus combination separates tuples that share some lambda_s.
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    ComplexMatrix combined = gamma[0];
    if (k > 1) {
        combined = ComplexMatrix::Zero(n, n);
        for (std::size_t s = 0; s < k; ++s) combined += std::polar(1.0, angle(rng)) * gamma[s];
    }
    linalg::EigResult e = linalg::eig(combined, true);
    const ComplexMatrix& z = e.right;
    const ComplexMatrix& y = *e.left;

    ComplexVector yz(n);
    for (Index j = 0; j < n; ++j) yz(j) = y.col(j).dot(z.col(j));

    std::vector<ComplexVector> lambdas(k, ComplexVector(n));
    for (std::size_t s = 0; s < k; ++s) {
        if (k == 1) {
            lambdas[s] = e.eigenvalues;
            break;
        }
        ComplexMatrix gz = gamma[s] * z;
        for (Index j = 0; j < n; ++j) {
            if (std::abs(yz(j)) > 1e-10)
                lambdas[s](j) = y.col(j).dot(gz.col(j)) / yz(j);
            else
                lambdas[s](j) = z.col(j).dot(gz.col(j));
        }
    }

    MepSolution sol;
    sol.path = MepPath::direct;
    sol.weights = d.weights;
    sol.rcond = d.rcond;
    sol.tuples.reserve(static_cast<std::size_t>(n));
    std::vector<cd> lam(k);
    for (Index j = 0; j < n; ++j) {
        for (std::size_t s = 0; s < k; ++s) lam[s] = lambdas[s](j);
        sol.tuples.push_back(to_mep_tuple(homogenize(lam), z.col(j), d.dims, tol));
    }
    return sol;
}

MepSolution solve_shifted(const DeltaSet& d, std::mt19937_64& rng, const Tolerances& tol) {
    const std::size_t k = d.k();
    std::vector<cd> best_w;
    double best = 0.0;
    for (int draw = 0; draw < tol.max_weight_draws; ++draw) {
        std::vector<cd> w = random_sphere(k + 1, rng);
        double rc = linalg::rcond(combine(d, w));
        if (rc > best) {
            best = rc;
            best_w = std::move(w);
        }
    }
    if (best <= tol.pencil_singular_rcond)
        throw IrregularMep("no nonsingular combination of Delta_0..Delta_k found in " +
                           std::to_string(tol.max_weight_draws) + " draws (best rcond " + std::to_string(best) + ")");

    ComplexMatrix delta = combine(d, best_w);
    linalg::GepResult g = linalg::gep(d.delta[0], delta, true, tol);
    const Index n = g.size();

    MepSolution sol;
    sol.path = MepPath::shifted;
    sol.weights = best_w;
    sol.rcond = best;
    sol.tuples.reserve(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
        ComplexVector z = g.right.col(j);
        ComplexVector w = g.left->col(j);
        ComplexVector u(static_cast<Index>(k + 1));
        for (std::size_t s = 0; s <= k; ++s) u(static_cast<Index>(s)) = w.dot(d.delta[s] * z);
        if (u.norm() <= 1e-13 * (d.delta[0] * z).norm()) {
            ComplexVector dz = delta * z;
            for (std::size_t s = 0; s <= k; ++s) u(static_cast<Index>(s)) = dz.dot(d.delta[s] * z);
        }
        MepTuple t = u.norm() > 0.0 ? to_mep_tuple(canonical_homogeneous(u, tol), z, d.dims, tol)
                                    : to_mep_tuple(HomEigenvalue{0.0, std::vector<cd>(k, cd(0.0))}, z, d.dims, tol);
        t.singular = g.singular[static_cast<std::size_t>(j)];
        sol.tuples.push_back(std::move(t));
    }
    return sol;
}

}  // namespace

DeltaSet build_deltas(const MepProblem& m, const Tolerances& tol) {
    const std::size_t k = m.k();
    if (k > kMaxParameters)
        throw CapacityError("operator determinants support k <= 4; parameter count", k, kMaxParameters);
    const std::size_t total = m.total_dimension();
    if (total > tol.kron_cap) throw CapacityError("operator determinant", total, tol.kron_cap);

    DeltaSet d;
    d.dims = m.dims();
    d.delta.reserve(k + 1);
    for (std::size_t c = 0; c <= k; ++c) {
        auto cell = [&](std::size_t i, std::size_t j) -> const ComplexMatrix* {
            const EquationBlock& b = m.block(i);
            return (c > 0 && j + 1 == c) ? &b.A : &b.B[j];
        };
        d.delta.push_back(operator_determinant(k, cell, tol.kron_cap));
    }
    d.weights.assign(k + 1, cd(0.0));
    d.weights[0] = 1.0;
    d.rcond = linalg::rcond(d.delta[0]);
    return d;
}

Factorization extract_factors(const ComplexVector& z, std::span<const Index> dims) {
    Index total = 1;
    for (Index n : dims) total *= n;
    if (dims.empty() || total != z.size())
        throw ValidationError("extract_factors: vector length does not match the product of dimensions");
    const double nz = z.norm();
    if (nz == 0.0) throw ValidationError("extract_factors: zero vector");

    Factorization f;
    ComplexVector rest = z / nz;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        const Index rows = dims[i];
        const Index cols = rest.size() / rows;
        using RowMajor = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        ComplexMatrix reshaped = Eigen::Map<const RowMajor>(rest.data(), rows, cols);
        linalg::SvdResult s = linalg::svd(reshaped);
        f.factors.push_back(s.U.col(0));
        rest = s.V.col(0).conjugate();
    }
    f.factors.push_back(rest);

    std::vector<const ComplexMatrix*> parts;
    std::vector<ComplexMatrix> cols;
    cols.reserve(f.factors.size());
    for (const auto& x : f.factors) cols.emplace_back(x);
    for (const auto& c : cols) parts.push_back(&c);
    ComplexVector p = linalg::kron_all(parts, static_cast<std::size_t>(total) + 1).col(0);
    ComplexVector zn = z / nz;
    f.separability = (zn - p * p.dot(zn)).norm();

    // Put the overall phase on the last factor so the product reproduces z.
    cd phase = p.dot(zn);
    if (std::abs(phase) > 0.0) f.factors.back() *= phase / std::abs(phase);
    return f;
}

MepSolution solve_mep(const DeltaSet& d, const MepOptions& opts, const Tolerances& tol) {
    std::mt19937_64 rng(opts.seed);
    if (d.rcond * tol.delta0_condition > 1.0) return solve_direct(d, rng, tol);
    return solve_shifted(d, rng, tol);
}

MepSolution solve_mep(const MepProblem& m, const MepOptions& opts, const Tolerances& tol) {
    return solve_mep(build_deltas(m, tol), opts, tol);
}

RegularityReport check_regularity(const DeltaSet& d, int trials, std::uint64_t seed, const Tolerances& tol) {
    if (trials < 1) throw ValidationError("check_regularity: trials must be positive");
    std::mt19937_64 rng(seed);
    RegularityReport r;
    r.worst_rcond = 1.0;
    for (int t = 0; t < trials; ++t) {
        double rc = linalg::rcond(combine(d, random_sphere(d.k() + 1, rng)));
        r.trial_rcond.push_back(rc);
        r.best_rcond = std::max(r.best_rcond, rc);
        r.worst_rcond = std::min(r.worst_rcond, rc);
    }
    r.regular_likely = r.best_rcond > tol.pencil_singular_rcond;
    return r;
}

}  // namespace rmep::mep
