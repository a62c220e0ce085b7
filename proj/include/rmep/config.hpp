#pragma once

#include <cstddef>
#include <limits>

namespace rmep {

/// Every numerical threshold used by the library. Relative thresholds are
/// multiples of machine epsilon times a norm scale chosen at the call site.
struct Tolerances {
    double eps = std::numeric_limits<double>::epsilon();

    /// ||H - H^H||_F <= hermitian_rel * ||H||_F for eig_hermitian input.
    double hermitian_rel = 1e-10;
    /// gamma at or below this counts as an infinite eigenvalue.
    double gamma_infinite = 1e-12;
    /// |gamma| below this switches phase normalisation to the largest alpha.
    double gamma_phase_floor = 1e-14;
    /// Multiple of eps * norm scale under which both (beta, delta) of a
    /// pencil eigenvalue flag it as singular.
    double singular_pencil = 1e3;
    /// ||V11||_2 < 1 - attainment_margin certifies the phi minimiser.
    double attainment_margin = 1e-10;
    /// Delta_0 is used directly when its condition estimate is below this.
    double delta0_condition = 1e12;
    /// A combination sum_j w_j Delta_j with reciprocal condition below this
    /// is numerically singular. Pencils from discretised ODEs have eigenvalues
    /// spread over many orders of magnitude, so any combination is badly
    /// conditioned while the pencil itself stays regular; QZ handles those.
    double pencil_singular_rcond = std::numeric_limits<double>::epsilon();
    /// Random weight draws for the shifted pencil of a singular Delta_0.
    int max_weight_draws = 8;
    /// ||z - x_1 (x) ... (x) x_k|| above this flags a poorly separable vector.
    double separability_flag = 1e-6;
    /// eps_KKT above this when the relative-change rule fires is stagnation.
    double stagnation_kkt = 1e-4;
    /// sigma_min(R) < rank_deficiency * sigma_max(R) warns in discretisation.
    double rank_deficiency = 1e-10;
    /// Largest allowed row or column count of a Kronecker product.
    std::size_t kron_cap = 20000;
};

const Tolerances& default_tolerances();

}  // namespace rmep
