#include "rmep/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rmep/errors.hpp"

namespace rmep {

namespace {

void check_shapes(const std::vector<EquationBlock>& blocks) {
    const std::size_t k = blocks.size();
    if (k == 0) throw ValidationError("problem needs at least one equation block");
    for (std::size_t i = 0; i < k; ++i) {
        const auto& b = blocks[i];
        const std::string tag = "block " + std::to_string(i);
        require_valid(b.A, tag + " A");
        if (b.B.size() != k)
            throw ValidationError(tag + ": expected " + std::to_string(k) + " B matrices, got " +
                                  std::to_string(b.B.size()));
        if (b.A.rows() < b.A.cols())
            throw ValidationError(tag + ": needs rows >= cols (got " + std::to_string(b.A.rows()) + "x" +
                                  std::to_string(b.A.cols()) + ")");
        for (std::size_t s = 0; s < k; ++s) {
            require_valid(b.B[s], tag + " B" + std::to_string(s + 1));
            if (b.B[s].rows() != b.A.rows() || b.B[s].cols() != b.A.cols())
                throw ValidationError(tag + ": B" + std::to_string(s + 1) + " shape differs from A");
        }
    }
}

}  // namespace

RmepProblem::RmepProblem(std::vector<EquationBlock> blocks) : blocks_(std::move(blocks)) {
    check_shapes(blocks_);
    norm_a_.reserve(k());
    norm_b_.resize(k());
    for (std::size_t i = 0; i < k(); ++i) {
        norm_a_.push_back(linalg::norm2(blocks_[i].A));
        for (const auto& b : blocks_[i].B) norm_b_[i].push_back(linalg::norm2(b));
    }
}

std::vector<Index> RmepProblem::dims() const {
    std::vector<Index> d;
    d.reserve(k());
    for (const auto& b : blocks_) d.push_back(b.cols());
    return d;
}

std::size_t RmepProblem::total_dimension() const {
    std::size_t n = 1;
    for (const auto& b : blocks_) {
        const auto c = static_cast<std::size_t>(b.cols());
        if (n > std::numeric_limits<std::size_t>::max() / c) throw CapacityError("total dimension", n, n);
        n *= c;
    }
    return n;
}

bool RmepProblem::is_square() const {
    for (const auto& b : blocks_)
        if (b.rows() != b.cols()) return false;
    return true;
}

MepProblem::MepProblem(std::vector<EquationBlock> blocks) : MepProblem(RmepProblem(std::move(blocks))) {}

MepProblem::MepProblem(RmepProblem problem) : problem_(std::move(problem)) {
    if (!problem_.is_square()) throw ValidationError("MEP blocks must be square");
}

HomEigenvalue homogenize(std::span<const cd> lambdas) {
    double sum = 1.0;
    for (const cd& l : lambdas) {
        if (!std::isfinite(l.real()) || !std::isfinite(l.imag()))
            throw ValidationError("homogenize: eigenvalue is not finite");
        sum += std::norm(l);
    }
    const double tau = std::sqrt(sum);
    HomEigenvalue h;
    h.gamma = 1.0 / tau;
    h.alphas.reserve(lambdas.size());
    for (const cd& l : lambdas) h.alphas.push_back(l / tau);
    return h;
}

std::vector<cd> dehomogenize(const HomEigenvalue& h, double threshold) {
    if (!(h.gamma > threshold)) throw InfiniteEigenvalue(h.gamma, h.alphas);
    std::vector<cd> out;
    out.reserve(h.alphas.size());
    for (const cd& a : h.alphas) out.push_back(a / h.gamma);
    return out;
}

HomEigenvalue canonical_homogeneous(const ComplexVector& v, const Tolerances& tol) {
    const double nrm = v.norm();
    if (!(nrm > 0.0)) throw ValidationError("canonical_homogeneous: zero vector");
    ComplexVector u = v / nrm;
    cd phase;
    if (std::abs(u(0)) > tol.gamma_phase_floor) {
        phase = std::conj(u(0)) / std::abs(u(0));
    } else {
        Index big = 1;
        for (Index j = 2; j < u.size(); ++j)
            if (std::abs(u(j)) > std::abs(u(big))) big = j;
        phase = u.size() > 1 && std::abs(u(big)) > 0.0 ? std::conj(u(big)) / std::abs(u(big)) : cd(1.0);
    }
    u *= phase;
    HomEigenvalue h;
    h.gamma = std::max(u(0).real(), 0.0);
    h.alphas.assign(u.data() + 1, u.data() + u.size());
    return h;
}

ComplexVector as_vector(const HomEigenvalue& h) {
    ComplexVector v(static_cast<Index>(h.k() + 1));
    v(0) = h.gamma;
    for (std::size_t s = 0; s < h.k(); ++s) v(static_cast<Index>(s + 1)) = h.alphas[s];
    return v;
}

Residual normalized_residual(const RmepProblem& p, std::span<const cd> lambdas, const std::vector<ComplexVector>& xs) {
    const std::size_t k = p.k();
    if (lambdas.size() != k || xs.size() != k) throw ValidationError("normalized_residual: tuple size differs from k");
    Residual r;
    r.per_block.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& b = p.block(i);
        if (xs[i].size() != b.cols()) throw ValidationError("normalized_residual: vector length mismatch");
        ComplexVector f = b.A * xs[i];
        double denom = p.norm_A(i);
        for (std::size_t s = 0; s < k; ++s) {
            f.noalias() -= lambdas[s] * (b.B[s] * xs[i]);
            denom += std::abs(lambdas[s]) * p.norm_B(i, s);
        }
        const double rho = denom > 0.0 ? f.norm() / denom : f.norm();
        r.per_block.push_back(rho);
        r.total += rho;
    }
    return r;
}

Residual normalized_residual(const RmepProblem& p, const EigenTuple& t, const Tolerances& tol) {
    const auto lambdas = dehomogenize(t.value, tol.gamma_infinite);
    return normalized_residual(p, lambdas, t.vectors);
}

double homogeneous_residual(const RmepProblem& p, const HomEigenvalue& v, const std::vector<ComplexVector>& xs) {
    const std::size_t k = p.k();
    if (v.k() != k || xs.size() != k) throw ValidationError("homogeneous_residual: tuple size differs from k");
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& b = p.block(i);
        ComplexVector f = v.gamma * (b.A * xs[i]);
        for (std::size_t s = 0; s < k; ++s) f.noalias() -= v.alphas[s] * (b.B[s] * xs[i]);
        total += f.squaredNorm();
    }
    return total;
}

double homogeneous_residual(const RmepProblem& p, const EigenTuple& t) {
    return homogeneous_residual(p, t.value, t.vectors);
}

double perturbation_cost(const RmepProblem& p, const PerturbationSet& s) {
    if (s.blocks.size() != p.k()) throw ValidationError("perturbation: block count differs from problem");
    double cost = 0.0;
    for (std::size_t i = 0; i < p.k(); ++i) {
        const auto& orig = p.block(i);
        const auto& pert = s.blocks[i];
        if (pert.B.size() != orig.B.size() || pert.A.rows() != orig.rows() || pert.A.cols() != orig.cols())
            throw ValidationError("perturbation: shape mismatch in block " + std::to_string(i));
        cost += (pert.A - orig.A).squaredNorm();
        for (std::size_t j = 0; j < orig.B.size(); ++j) {
            if (pert.B[j].rows() != orig.rows() || pert.B[j].cols() != orig.cols())
                throw ValidationError("perturbation: shape mismatch in block " + std::to_string(i));
            cost += (pert.B[j] - orig.B[j]).squaredNorm();
        }
    }
    return cost;
}

PerturbationSet make_perturbation(const RmepProblem& p, std::vector<EquationBlock> perturbed) {
    PerturbationSet s{std::move(perturbed), 0.0};
    s.cost = perturbation_cost(p, s);
    return s;
}

RmepProblem apply_perturbation(const RmepProblem& p, const PerturbationSet& s) {
    perturbation_cost(p, s);  // shape check
    return RmepProblem(s.blocks);
}

}  // namespace rmep
