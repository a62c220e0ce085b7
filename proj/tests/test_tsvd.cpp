#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rmep/errors.hpp"
#include "rmep/generator.hpp"
#include "rmep/tsvd.hpp"
#include "support.hpp"

using namespace rmep;
using rmep::testing::kEps;
using rmep::testing::multiset_distance;

namespace {

ComplexMatrix stacked(const EquationBlock& b) {
    ComplexMatrix s(b.rows(), b.cols() * static_cast<Index>(1 + b.B.size()));
    s.leftCols(b.cols()) = b.A;
    for (std::size_t j = 0; j < b.B.size(); ++j) s.middleCols(b.cols() * static_cast<Index>(j + 1), b.cols()) = b.B[j];
    return s;
}

RmepProblem rect(std::vector<Index> m, std::vector<Index> n, std::uint64_t seed) { return random_problem(m, n, seed); }

std::vector<std::vector<cd>> finite(const mep::MepSolution& s) {
    std::vector<std::vector<cd>> out;
    for (const auto& t : s.tuples)
        if (t.value.is_finite()) out.push_back(dehomogenize(t.value));
    return out;
}

}  // namespace

TEST_CASE("truncation of [I, 0]") {
    ComplexMatrix a = ComplexMatrix::Zero(3, 2);
    a.topRows(2) = ComplexMatrix::Identity(2, 2);
    const RmepProblem p({EquationBlock{a, {ComplexMatrix::Zero(3, 2)}}});
    const auto t = tsvd::truncate_blocks(p);
    const auto& b = t.blocks[0];
    CHECK((b.sigma1 - RealVector::Ones(2)).norm() < 1e-15);
    // Sigma_1 = I is degenerate, so V_11 is unitary rather than literally I
    CHECK((b.v_block(0).adjoint() * b.v_block(0) - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
    CHECK(b.v_block(1).norm() < 1e-15);
    CHECK(b.tail.size() == 1);
    CHECK(b.tail(0) < 1e-15);
    CHECK(b.v11_norm == doctest::Approx(1.0));

    const auto cert = tsvd::phi_certificate(p, t);
    CHECK_FALSE(cert.attained);
    CHECK_FALSE(cert.coupling[0].has_value());
    CHECK(std::isnan(cert.coupling_residual[0]));

    // reduced pencil (V_11^H, 0): every eigenvalue is infinite
    const auto red = tsvd::reduced_mep(t);
    const auto sol = mep::solve_mep(red);
    for (const auto& tt : sol.tuples) CHECK_FALSE(tt.value.is_finite());
    const auto all = tsvd::solve_complete(p);
    for (const auto& tt : all.tuples) {
        CHECK(std::isinf(tt.rho));
        CHECK_FALSE(tt.lambdas.has_value());
    }
}

TEST_CASE("stacked right factors are orthonormal") {
    const RmepProblem p = rect({20, 12}, {5, 4}, 1);
    const auto t = tsvd::truncate_blocks(p);
    for (const auto& b : t.blocks) {
        const Index n = b.n();
        ComplexMatrix col(3 * n, n);
        for (std::size_t j = 0; j < 3; ++j) col.middleRows(static_cast<Index>(j) * n, n) = b.v_block(j);
        CHECK((col.adjoint() * col - ComplexMatrix::Identity(n, n)).norm() < 1e-12);
        for (Index j = 1; j < n; ++j) CHECK(b.sigma1(j) <= b.sigma1(j - 1));
        CHECK(b.tail.maxCoeff() <= b.sigma1.minCoeff());
        CHECK(b.v11_norm == doctest::Approx(linalg::norm2(b.v_block(0))));
    }
}

TEST_CASE("noiseless planted problems have negligible tails and zero phi") {
    const std::array<Index, 2> m{20, 20}, n{5, 5};
    const auto planted = random_planted_problem(m, n, 0.0, 7);
    const auto t = tsvd::truncate_blocks(planted.problem);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(t.blocks[i].tail.maxCoeff() <= 1e3 * kEps * linalg::norm2(stacked(planted.problem.block(i))));
    const auto cert = tsvd::phi_certificate(planted.problem, t);
    CHECK(cert.phi <= 1e-24 * 1e3);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(rmep::testing::rel_diff(cert.perturbed.blocks[i].A, planted.problem.block(i).A) <= 1e3 * kEps);
}

TEST_CASE("phi equals the perturbation cost of the truncation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const RmepProblem p = rect({9, 7}, {3, 2}, 100 + seed);
        const auto t = tsvd::truncate_blocks(p);
        const auto cert = tsvd::phi_certificate(p, t);
        double phi = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(cert.phi_i[i] == doctest::Approx(t.blocks[i].tail.squaredNorm()).epsilon(1e-12));
            phi += cert.phi_i[i];
        }
        CHECK(cert.phi == doctest::Approx(phi).epsilon(1e-14));
        CHECK(std::abs(perturbation_cost(p, cert.perturbed) - cert.phi) <= 1e-10 * cert.phi);
        CHECK(std::abs(cert.perturbed.cost - cert.phi) <= 1e-10 * cert.phi);
    }
}

TEST_CASE("phi against a direct Eckart-Young computation for k = 1") {
    const RmepProblem p = rect({6}, {2}, 11);
    const auto cert = tsvd::phi_certificate(p, tsvd::truncate_blocks(p));
    const RealVector s = linalg::singular_values(stacked(p.block(0)));
    CHECK(cert.phi == doctest::Approx(s.tail(s.size() - 2).squaredNorm()).epsilon(1e-12));
}

TEST_CASE("phi lower-bounds feasible perturbations") {
    std::mt19937_64 rng(12);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const RmepProblem p = rect({8, 7}, {3, 3}, 200 + seed);
        const auto cert = tsvd::phi_certificate(p, tsvd::truncate_blocks(p));
        for (int c = 0; c < 50; ++c) {
            // any [A^, B^] of rank <= n_i is feasible for the rank test
            std::vector<EquationBlock> blocks;
            for (std::size_t i = 0; i < 2; ++i) {
                const auto& b = p.block(i);
                const ComplexMatrix noisy = stacked(b) + 0.3 * random_complex(b.rows(), 3 * b.cols(), rng);
                const auto s = linalg::svd(noisy);
                const Index n = b.cols();
                const ComplexMatrix low = s.U.leftCols(n) * s.singular_values.head(n).asDiagonal() * s.V.leftCols(n).adjoint();
                blocks.push_back(EquationBlock{low.leftCols(n), {low.middleCols(n, n), low.rightCols(n)}});
            }
            CHECK(make_perturbation(p, blocks).cost >= cert.phi - 1e-10);
        }
    }
}

TEST_CASE("coupling identity when the minimiser is attained") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const RmepProblem p = rect({10, 8}, {4, 3}, 300 + seed);
        const auto cert = tsvd::phi_certificate(p, tsvd::truncate_blocks(p));
        for (std::size_t i = 0; i < 2; ++i) {
            if (!cert.attained_i[i]) continue;
            REQUIRE(cert.coupling[i].has_value());
            const auto& x = *cert.coupling[i];
            const auto& hat = cert.perturbed.blocks[i];
            ComplexMatrix r = hat.A;
            for (std::size_t s = 0; s < 2; ++s) r -= hat.B[s] * x[s];
            CHECK(r.norm() == doctest::Approx(cert.coupling_residual[i]).epsilon(1e-6).scale(1e-14));
            CHECK(r.norm() <= 1e3 * kEps * cert.coupling_scale[i]);
            ++checked;
        }
    }
    CHECK(checked >= 30);
}

TEST_CASE("reduced problem of a padded square GEP") {
    std::mt19937_64 rng(13);
    const ComplexMatrix a = random_complex(4, 4, rng), b = random_complex(4, 4, rng);
    ComplexMatrix ap = ComplexMatrix::Zero(6, 4), bp = ComplexMatrix::Zero(6, 4);
    ap.topRows(4) = a;
    bp.topRows(4) = b;
    const RmepProblem p({EquationBlock{ap, {bp}}});
    const auto blocks = tsvd::truncate_blocks(p);
    const auto red = tsvd::reduced_mep(blocks);
    CHECK((red.block(0).A - blocks.blocks[0].v_block(0).adjoint()).norm() == 0.0);

    const auto g = linalg::gep(a, b);
    std::vector<std::vector<cd>> ref;
    for (Index j = 0; j < 4; ++j) ref.push_back({g.eigenvalue(j)});
    CHECK(multiset_distance(finite(mep::solve_mep(red)), ref) < 1e-10);

    // the complete set equals the direct pencil (V_11^H, V_21^H)
    const auto direct = linalg::gep(blocks.blocks[0].v_block(0).adjoint(), blocks.blocks[0].v_block(1).adjoint());
    std::vector<std::vector<cd>> pencil, complete;
    for (Index j = 0; j < 4; ++j) pencil.push_back({direct.eigenvalue(j)});
    const auto all = tsvd::solve_complete(p);
    for (const auto& t : all.tuples) complete.push_back(*t.lambdas);
    CHECK(multiset_distance(pencil, complete) < 1e-10);
    for (const auto& t : all.tuples) CHECK(t.rho <= 1e-12);
}

TEST_CASE("noiseless planted problems: solution sets coincide") {
    const std::array<Index, 2> m{20, 20}, n{5, 5};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto planted = random_planted_problem(m, n, 0.0, 400 + seed);
        const auto red = tsvd::reduced_mep(tsvd::truncate_blocks(planted.problem));
        const auto a = finite(mep::solve_mep(red));
        const auto b = finite(mep::solve_mep(planted.reference));
        CHECK(a.size() == 25);
        CHECK(multiset_distance(a, b) <= 1e-10);
        const auto all = tsvd::solve_complete(planted.problem);
        CHECK(all.tuples.size() == 25);
        for (const auto& t : all.tuples) CHECK(t.rho <= 1e-10);
    }
}

TEST_CASE("complete set is sorted and carries residuals") {
    const RmepProblem p = rect({8, 7}, {3, 4}, 14);
    const auto r = tsvd::solve_complete(p);
    CHECK(r.tuples.size() == 12);
    for (std::size_t j = 1; j < r.tuples.size(); ++j) CHECK(r.tuples[j].rho >= r.tuples[j - 1].rho);
    for (const auto& t : r.tuples) {
        REQUIRE(t.tuple.residual.has_value());
        CHECK(t.rho == doctest::Approx(t.tuple.residual->total));
        CHECK(t.rho == doctest::Approx(normalized_residual(p, *t.lambdas, t.tuple.vectors).total));
    }

    std::ostringstream os;
    tsvd::write_complete_csv(os, r, 2);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "j,lambda1_re,lambda1_im,lambda2_re,lambda2_im,gamma,rho,rho_1,rho_2");
    int lines = 0;
    for (std::string line; std::getline(is, line);) ++lines;
    CHECK(lines == 12);
}

TEST_CASE("size cap") {
    Tolerances small = default_tolerances();
    small.kron_cap = 10;
    CHECK_THROWS_AS(tsvd::solve_complete(rect({5, 5}, {4, 4}, 15), {}, small), CapacityError);
}
