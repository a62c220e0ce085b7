#pragma once

// Square multiparameter problems through operator determinants:
// Delta_0 = |B_ij|_(x), Delta_s = the same determinant with column s
// replaced by (A_1, ..., A_k). Every eigen-tuple gives Delta_s z = lambda_s Delta_0 z
// with z = x_1 (x) ... (x) x_k.

#include <cstdint>
#include <span>
#include <vector>

#include "rmep/model.hpp"

namespace rmep::mep {

inline constexpr std::size_t kMaxParameters = 4;

struct DeltaSet {
    std::vector<ComplexMatrix> delta;  // Delta_0 .. Delta_k, each N x N
    std::vector<Index> dims;
    /// Weights of the combination sum_j w_j Delta_j the solver uses
    /// (e_1, i.e. Delta_0 itself, unless the shifted path was taken).
    std::vector<cd> weights;
    /// Reciprocal condition estimate of that combination.
    double rcond = 0.0;

    std::size_t k() const { return delta.size() - 1; }
    Index size() const { return delta.front().rows(); }
};

DeltaSet build_deltas(const MepProblem& m, const Tolerances& tol = default_tolerances());

struct Factorization {
    std::vector<ComplexVector> factors;  // unit vectors
    /// ||z - p p^H z|| with p = x_1 (x) ... (x) x_k.
    double separability = 0.0;
};

/// Successive reshape and rank-one SVD of a unit vector of length n_1 ... n_k.
Factorization extract_factors(const ComplexVector& z, std::span<const Index> dims);

struct MepTuple {
    HomEigenvalue value;
    std::vector<ComplexVector> vectors;
    double separability = 0.0;
    bool poorly_separable = false;
    /// The pencil reported both homogeneous coordinates as negligible.
    bool singular = false;
};

enum class MepPath { direct, shifted };

struct MepOptions {
    std::uint64_t seed = 0x6d6570u;
};

struct MepSolution {
    std::vector<MepTuple> tuples;  // all N, in solver order
    MepPath path = MepPath::direct;
    std::vector<cd> weights;
    double rcond = 0.0;
};

/// Direct path when cond(Delta_0) is below tol.delta0_condition: eigenproblem
/// of Delta_0^{-1} sum_s c_s Delta_s for random unit-modulus c, each lambda_s
/// from the left/right Rayleigh quotient. Otherwise the shifted pencils
/// Delta_j z = eta_j Delta z with Delta = sum_j w_j Delta_j the best
/// conditioned of tol.max_weight_draws random draws. Throws IrregularMep.
MepSolution solve_mep(const MepProblem& m, const MepOptions& opts = {}, const Tolerances& tol = default_tolerances());
MepSolution solve_mep(const DeltaSet& d, const MepOptions& opts = {}, const Tolerances& tol = default_tolerances());

struct RegularityReport {
    std::vector<double> trial_rcond;
    double best_rcond = 0.0;
    double worst_rcond = 0.0;
    bool regular_likely = false;
};

/// Samples weights uniformly on the unit sphere of C^{k+1}.
RegularityReport check_regularity(const DeltaSet& d, int trials, std::uint64_t seed = 1,
                                  const Tolerances& tol = default_tolerances());

}  // namespace rmep::mep
