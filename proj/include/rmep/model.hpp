#pragma once

// Problem and solution types shared by every solver.

#include <optional>
#include <span>
#include <vector>

#include "rmep/config.hpp"
#include "rmep/linalg.hpp"

namespace rmep {

/// One equation A x = sum_s lambda_s B_s x of a multiparameter system.
struct EquationBlock {
    ComplexMatrix A;
    std::vector<ComplexMatrix> B;

    Index rows() const { return A.rows(); }
    Index cols() const { return A.cols(); }
};

/// k equation blocks, block i of shape m_i x n_i with m_i >= n_i.
/// Spectral norms of every matrix are computed once on construction.
class RmepProblem {
public:
    explicit RmepProblem(std::vector<EquationBlock> blocks);

    std::size_t k() const { return blocks_.size(); }
    const EquationBlock& block(std::size_t i) const { return blocks_.at(i); }
    const std::vector<EquationBlock>& blocks() const { return blocks_; }
    Index rows(std::size_t i) const { return blocks_.at(i).rows(); }
    Index cols(std::size_t i) const { return blocks_.at(i).cols(); }
    std::vector<Index> dims() const;
    /// N = n_1 * ... * n_k.
    std::size_t total_dimension() const;
    bool is_square() const;

    double norm_A(std::size_t i) const { return norm_a_.at(i); }
    double norm_B(std::size_t i, std::size_t s) const { return norm_b_.at(i).at(s); }

private:
    std::vector<EquationBlock> blocks_;
    std::vector<double> norm_a_;
    std::vector<std::vector<double>> norm_b_;
};

/// Square multiparameter problem (all m_i = n_i).
class MepProblem {
public:
    explicit MepProblem(std::vector<EquationBlock> blocks);
    explicit MepProblem(RmepProblem problem);

    std::size_t k() const { return problem_.k(); }
    const EquationBlock& block(std::size_t i) const { return problem_.block(i); }
    std::vector<Index> dims() const { return problem_.dims(); }
    std::size_t total_dimension() const { return problem_.total_dimension(); }
    const RmepProblem& as_rmep() const { return problem_; }

private:
    RmepProblem problem_;
};

/// lambda_s = alphas[s] / gamma with gamma >= 0 and gamma^2 + sum |alpha|^2 = 1.
struct HomEigenvalue {
    double gamma = 1.0;
    std::vector<cd> alphas;

    std::size_t k() const { return alphas.size(); }
    bool is_finite(const Tolerances& tol = default_tolerances()) const { return gamma > tol.gamma_infinite; }
};

HomEigenvalue homogenize(std::span<const cd> lambdas);

/// Throws InfiniteEigenvalue when gamma <= threshold.
std::vector<cd> dehomogenize(const HomEigenvalue& h, double threshold = default_tolerances().gamma_infinite);

/// Scales an arbitrary nonzero vector (gamma, alpha_1, ..., alpha_k) to unit
/// norm and rotates its phase so gamma is real and nonnegative. When |gamma|
/// is below tol.gamma_phase_floor the largest-modulus alpha is made real
/// positive instead.
HomEigenvalue canonical_homogeneous(const ComplexVector& v, const Tolerances& tol = default_tolerances());

ComplexVector as_vector(const HomEigenvalue& h);

struct Residual {
    std::vector<double> per_block;
    double total = 0.0;
};

struct EigenTuple {
    HomEigenvalue value;
    std::vector<ComplexVector> vectors;
    std::optional<Residual> residual;
};

/// rho_i = ||A_i x_i - sum_s lambda_s B_is x_i|| / (||A_i|| + sum_s |lambda_s| ||B_is||).
Residual normalized_residual(const RmepProblem& p, std::span<const cd> lambdas,
                             const std::vector<ComplexVector>& xs);

/// Same, for a tuple in homogeneous form. Throws InfiniteEigenvalue.
Residual normalized_residual(const RmepProblem& p, const EigenTuple& t, const Tolerances& tol = default_tolerances());

/// sum_i ||gamma A_i x_i - sum_s alpha_s B_is x_i||^2, defined for gamma = 0.
double homogeneous_residual(const RmepProblem& p, const HomEigenvalue& v, const std::vector<ComplexVector>& xs);
double homogeneous_residual(const RmepProblem& p, const EigenTuple& t);

/// A perturbed copy {A^_i, B^_is} of some origin problem and its Frobenius distance.
struct PerturbationSet {
    std::vector<EquationBlock> blocks;
    double cost = 0.0;
};

/// sum_i ||[A^_i - A_i, B^_i1 - B_i1, ...]||_F^2. Throws on shape mismatch.
double perturbation_cost(const RmepProblem& p, const PerturbationSet& s);

/// Builds the set and fills in its cost against p.
PerturbationSet make_perturbation(const RmepProblem& p, std::vector<EquationBlock> perturbed);

RmepProblem apply_perturbation(const RmepProblem& p, const PerturbationSet& s);

}  // namespace rmep
