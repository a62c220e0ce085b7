#include "rmep/tsvd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "rmep/errors.hpp"

namespace rmep::tsvd {

ComplexMatrix BlockTruncation::v_block(std::size_t j) const {
    const Index n = this->n();
    return V.block(static_cast<Index>(j) * n, 0, n, n);
}

TsvdBlocks truncate_blocks(const RmepProblem& p) {
    const std::size_t k = p.k();
    TsvdBlocks out;
    out.blocks.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const EquationBlock& b = p.block(i);
        const Index m = b.rows();
        const Index n = b.cols();
        ComplexMatrix c(m, static_cast<Index>(k + 1) * n);
        c.leftCols(n) = b.A;
        for (std::size_t s = 0; s < k; ++s) c.middleCols(static_cast<Index>(s + 1) * n, n) = b.B[s];

        linalg::SvdResult svd = linalg::svd(c);
        BlockTruncation t;
        t.U1 = svd.U.leftCols(n);
        t.sigma1 = svd.singular_values.head(n);
        t.tail = svd.singular_values.tail(svd.singular_values.size() - n);
        t.V = std::move(svd.V);
        t.v11_norm = linalg::norm2(t.v_block(0));
        out.blocks.push_back(std::move(t));
    }
    return out;
}

TsvdCertificate phi_certificate(const RmepProblem& p, const TsvdBlocks& blocks, const Tolerances& tol) {
    const std::size_t k = p.k();
    if (blocks.k() != k) throw ValidationError("phi_certificate: block count does not match the problem");

    TsvdCertificate cert;
    cert.attained = true;
    std::vector<EquationBlock> perturbed(k);
    for (std::size_t i = 0; i < k; ++i) {
        const BlockTruncation& t = blocks.blocks[i];
        const Index n = t.n();
        if (n != p.cols(i)) throw ValidationError("phi_certificate: truncation does not match block " + std::to_string(i));

        double phi_i = t.tail.squaredNorm();
        cert.phi_i.push_back(phi_i);
        cert.phi += phi_i;

        ComplexMatrix us = t.U1 * t.sigma1.asDiagonal();
        EquationBlock& hat = perturbed[i];
        hat.A = us * t.v_block(0).adjoint();
        for (std::size_t s = 0; s < k; ++s) hat.B.push_back(us * t.v_block(s + 1).adjoint());

        const bool attained = t.v11_norm < 1.0 - tol.attainment_margin;
        cert.attained_i.push_back(attained);
        cert.attained = cert.attained && attained;
        if (!attained) {
            cert.coupling.emplace_back();
            cert.coupling_residual.push_back(std::numeric_limits<double>::quiet_NaN());
            cert.coupling_scale.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }

        // [I; -X_1; ...; -X_k] lies in the span of the trailing V columns.
        // V_12 has full row rank here; n well-conditioned columns J come from
        // the pivoted QR and X = -[V_22; ...; V_{k+1,2}](:, J) V_12(:, J)^{-1}.
        const Index rest = t.V.cols() - n;
        ComplexMatrix v12 = t.V.block(0, n, n, rest);
        linalg::PivotedQr qr = linalg::rank_revealing_qr(v12);
        ComplexMatrix v12j(n, n);
        ComplexMatrix lower(static_cast<Index>(k) * n, n);
        for (Index c = 0; c < n; ++c) {
            const Index col = n + qr.permutation[static_cast<std::size_t>(c)];
            v12j.col(c) = t.V.block(0, col, n, 1);
            lower.col(c) = t.V.block(n, col, static_cast<Index>(k) * n, 1);
        }
        // X^T = -(V_12(:,J)^T)^{-1} lower^T, solved without forming the inverse.
        ComplexMatrix x = -v12j.transpose().partialPivLu().solve(lower.transpose()).transpose();

        std::vector<ComplexMatrix> xs;
        ComplexMatrix coupled = hat.A;
        ComplexMatrix stacked(hat.A.rows(), static_cast<Index>(k + 1) * n);
        stacked.leftCols(n) = hat.A;
        double xnorm = 0.0;
        for (std::size_t s = 0; s < k; ++s) {
            xs.push_back(x.middleRows(static_cast<Index>(s) * n, n));
            coupled -= hat.B[s] * xs.back();
            stacked.middleCols(static_cast<Index>(s + 1) * n, n) = hat.B[s];
            xnorm += linalg::norm2(xs.back());
        }
        cert.coupling_residual.push_back(coupled.norm());
        cert.coupling_scale.push_back(linalg::norm2(stacked) * (1.0 + xnorm));
        cert.coupling.emplace_back(std::move(xs));
    }
    cert.perturbed = make_perturbation(p, std::move(perturbed));
    return cert;
}

MepProblem reduced_mep(const TsvdBlocks& blocks) {
    const std::size_t k = blocks.k();
    std::vector<EquationBlock> square(k);
    for (std::size_t i = 0; i < k; ++i) {
        const BlockTruncation& t = blocks.blocks[i];
        square[i].A = t.v_block(0).adjoint();
        for (std::size_t s = 0; s < k; ++s) square[i].B.push_back(t.v_block(s + 1).adjoint());
    }
    return MepProblem(std::move(square));
}

CompleteResult solve_complete(const RmepProblem& p, const mep::MepOptions& opts, const Tolerances& tol) {
    const std::size_t total = p.total_dimension();
    if (total > tol.kron_cap) throw CapacityError("solve_complete", total, tol.kron_cap);

    mep::MepSolution sol = mep::solve_mep(reduced_mep(truncate_blocks(p)), opts, tol);

    CompleteResult out;
    out.path = sol.path;
    out.rcond = sol.rcond;
    out.tuples.reserve(sol.tuples.size());
    for (mep::MepTuple& m : sol.tuples) {
        ApproxTuple a;
        a.tuple.value = m.value;
        a.tuple.vectors = std::move(m.vectors);
        a.separability = m.separability;
        a.poorly_separable = m.poorly_separable;
        a.singular = m.singular;
        if (a.tuple.value.is_finite(tol) && !a.singular) {
            std::vector<cd> lam = dehomogenize(a.tuple.value, tol.gamma_infinite);
            a.tuple.residual = normalized_residual(p, lam, a.tuple.vectors);
            a.rho = a.tuple.residual->total;
            a.lambdas = std::move(lam);
        } else {
            a.rho = std::numeric_limits<double>::infinity();
        }
        out.tuples.push_back(std::move(a));
    }
    std::stable_sort(out.tuples.begin(), out.tuples.end(),
                     [](const ApproxTuple& x, const ApproxTuple& y) { return x.rho < y.rho; });
    return out;
}

void write_complete_csv(std::ostream& out, const CompleteResult& r, std::size_t k) {
    out << "j";
    for (std::size_t s = 1; s <= k; ++s) out << ",lambda" << s << "_re,lambda" << s << "_im";
    out << ",gamma,rho";
    for (std::size_t i = 1; i <= k; ++i) out << ",rho_" << i;
    out << '\n';

    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << ',' << buf;
    };
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < r.tuples.size(); ++j) {
        const ApproxTuple& t = r.tuples[j];
        out << j + 1;
        for (std::size_t s = 0; s < k; ++s) {
            num(t.lambdas ? (*t.lambdas)[s].real() : nan);
            num(t.lambdas ? (*t.lambdas)[s].imag() : nan);
        }
        num(t.tuple.value.gamma);
        num(t.rho);
        for (std::size_t i = 0; i < k; ++i) num(t.tuple.residual ? t.tuple.residual->per_block[i] : nan);
        out << '\n';
    }
}

}  // namespace rmep::tsvd
