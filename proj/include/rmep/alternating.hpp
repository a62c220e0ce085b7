#pragma once

// Alternating minimisation for one approximate eigen-tuple: minimise
//   sum_i ||gamma A_i x_i - sum_s alpha_s B_is x_i||^2
// over unit x_i and unit (gamma, alpha) with gamma >= 0, alternating the
// exact minimiser in x (smallest right singular vectors) with the exact
// minimiser in (gamma, alpha) (smallest eigenvector of a (k+1)x(k+1) matrix).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rmep/model.hpp"

namespace rmep::alt {

struct AltConfig {
    std::vector<cd> initial_lambdas;  // empty means all zero
    int max_iters = 1000;
    double rel_tol = 1e-6;
    bool kkt_check = true;
    int restarts = 0;  // extra runs from random initial lambdas
    std::uint64_t seed = 0;
};

enum class AltStatus { tol_met, budget_exhausted, stagnated };

const char* to_string(AltStatus s);

/// Entry j is the state after sweep j; entry 0 is the initial guess with its
/// optimal vectors.
struct AltTrace {
    std::vector<double> theta;
    std::vector<double> eps_kkt;
    double final_kkt = 0.0;
    int iterations = 0;
    AltStatus status = AltStatus::budget_exhausted;
    /// sigma_min of some R_i was numerically multiple at exit.
    bool non_unique_vectors = false;
};

void write_trace_csv(std::ostream& out, const AltTrace& trace);

struct AltResult {
    EigenTuple tuple;
    /// Set when gamma is above the infinite threshold.
    std::optional<std::vector<cd>> lambdas;
    /// gamma vanished: theta_1 is likely an infimum not attained by finite lambdas.
    bool likely_infimum = false;
    PerturbationSet perturbation;
    AltTrace trace;
};

/// R_i = gamma A_i - sum_s alpha_s B_is.
ComplexMatrix build_R(const RmepProblem& p, const HomEigenvalue& v, std::size_t i);

struct VectorStep {
    std::vector<ComplexVector> xs;
    std::vector<double> sigma_min;
    std::vector<bool> tied;  // sigma_min coincides with the next singular value
};

/// Each x_i is the last right singular vector of R_i.
VectorStep best_vector_step(const RmepProblem& p, const HomEigenvalue& v);

/// H = sum_i S_i^H S_i with S_i = [A_i x_i, -B_i1 x_i, ..., -B_ik x_i].
ComplexMatrix build_H(const RmepProblem& p, const std::vector<ComplexVector>& xs);

struct ValueStep {
    HomEigenvalue value;
    double omega_min = 0.0;
};

/// Unit eigenvector of the smallest eigenvalue of H in canonical phase.
ValueStep best_value_step(const ComplexMatrix& h, const Tolerances& tol = default_tolerances());

/// Normalised KKT residual of the state (v, xs).
double kkt_residual(const RmepProblem& p, const HomEigenvalue& v, const std::vector<ComplexVector>& xs);

/// E_i = -gamma f_i x_i^H, F_is = conj(alpha_s) f_i x_i^H with
/// f_i = gamma A_i x_i - sum_s alpha_s B_is x_i. The perturbed problem has
/// (v, xs) as an exact eigen-tuple and costs homogeneous_residual(p, v, xs).
PerturbationSet reconstruct_perturbation(const RmepProblem& p, const HomEigenvalue& v,
                                         const std::vector<ComplexVector>& xs);

AltResult solve_one(const RmepProblem& p, const AltConfig& cfg = {}, const Tolerances& tol = default_tolerances());

}  // namespace rmep::alt
