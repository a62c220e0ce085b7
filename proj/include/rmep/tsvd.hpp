#pragma once

// Complete set of approximate eigen-tuples by truncating the SVD of each
// stacked block [A_i, B_i1, ..., B_ik] to rank n_i and solving the square
// problem that remains.

#include <iosfwd>
#include <optional>
#include <vector>

#include "rmep/mep.hpp"
#include "rmep/model.hpp"

namespace rmep::tsvd {

/// SVD [A, B_1, ..., B_k] = U diag(s) V^H split after the n-th singular value.
/// V is ((k+1)n) x ((k+1)n); V(j*n : (j+1)*n, 0:n) is the block V_{j+1,1}.
struct BlockTruncation {
    ComplexMatrix U1;       // m x n
    RealVector sigma1;      // n, descending
    ComplexMatrix V;        // complete right factor
    RealVector tail;        // sigma_{n+1} .. sigma_{min(m, (k+1)n)}
    double v11_norm = 0.0;  // ||V_11||_2

    Index n() const { return sigma1.size(); }
    /// Block V_{j+1,1} (j = 0 is V_11), n x n.
    ComplexMatrix v_block(std::size_t j) const;
};

struct TsvdBlocks {
    std::vector<BlockTruncation> blocks;
    std::size_t k() const { return blocks.size(); }
};

TsvdBlocks truncate_blocks(const RmepProblem& p);

struct TsvdCertificate {
    double phi = 0.0;
    std::vector<double> phi_i;
    std::vector<bool> attained_i;  // ||V_11|| < 1 - margin for block i
    bool attained = false;
    /// A^_i = U1 S1 V_11^H, B^_is = U1 S1 V_{s+1,1}^H.
    PerturbationSet perturbed;
    /// Per block, X_i1..X_ik with A^_i = sum_s B^_is X_is (present when block attained).
    std::vector<std::optional<std::vector<ComplexMatrix>>> coupling;
    /// ||A^_i - sum_s B^_is X_is||_F, NaN without coupling.
    std::vector<double> coupling_residual;
    /// ||[A^_i, B^_i*]||_2 (1 + sum_s ||X_is||_2); scale for the residual above.
    std::vector<double> coupling_scale;
};

TsvdCertificate phi_certificate(const RmepProblem& p, const TsvdBlocks& blocks,
                                const Tolerances& tol = default_tolerances());

/// A~_i = V_11^H, B~_is = V_{s+1,1}^H.
MepProblem reduced_mep(const TsvdBlocks& blocks);

struct ApproxTuple {
    EigenTuple tuple;  // residual against the original problem, when finite
    std::optional<std::vector<cd>> lambdas;
    double rho = 0.0;  // total normalized residual, +inf when infinite
    double separability = 0.0;
    bool poorly_separable = false;
    bool singular = false;
};

struct CompleteResult {
    std::vector<ApproxTuple> tuples;  // ascending rho, infinite ones last
    mep::MepPath path = mep::MepPath::direct;
    double rcond = 0.0;
};

CompleteResult solve_complete(const RmepProblem& p, const mep::MepOptions& opts = {},
                              const Tolerances& tol = default_tolerances());

/// Columns j, lambda<s>_re, lambda<s>_im, gamma, rho, rho_<i>.
void write_complete_csv(std::ostream& out, const CompleteResult& r, std::size_t k);

}  // namespace rmep::tsvd
