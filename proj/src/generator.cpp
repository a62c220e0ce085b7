#include "rmep/generator.hpp"

#include "rmep/errors.hpp"

namespace rmep {

ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng, double stddev) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            out(i, j) = cd(stddev * re, stddev * im);
        }
    return out;
}

ComplexVector random_unit_vector(Index n, std::mt19937_64& rng) {
    ComplexVector v = random_complex(n, 1, rng);
    return v / v.norm();
}

namespace {

void check_sizes(std::span<const Index> m, std::span<const Index> n, bool strict) {
    if (m.empty() || m.size() != n.size()) throw ValidationError("generator: m and n must list k >= 1 sizes each");
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (n[i] < 1) throw ValidationError("generator: n_i must be positive");
        if (strict ? m[i] <= n[i] : m[i] < n[i]) throw ValidationError("generator: m_i must exceed n_i");
    }
}

}  // namespace

PlantedProblem random_planted_problem(std::span<const Index> m, std::span<const Index> n, double sigma,
                                      std::uint64_t seed) {
    check_sizes(m, n, true);
    if (!(sigma >= 0.0)) throw ValidationError("generator: sigma must be nonnegative");
    const std::size_t k = m.size();
    std::mt19937_64 rng(seed);

    std::vector<EquationBlock> reference(k);
    std::vector<ComplexMatrix> q(k);
    for (std::size_t i = 0; i < k; ++i) {
        reference[i].A = random_complex(n[i], n[i], rng);
        for (std::size_t s = 0; s < k; ++s) reference[i].B.push_back(random_complex(n[i], n[i], rng));
        const ComplexMatrix raw = random_complex(m[i], n[i], rng);
        const Eigen::HouseholderQR<ComplexMatrix> qr(raw);
        q[i] = qr.householderQ() * ComplexMatrix::Identity(m[i], n[i]);
    }

    std::vector<EquationBlock> blocks(k);
    for (std::size_t i = 0; i < k; ++i) {
        blocks[i].A = q[i] * reference[i].A;
        for (std::size_t s = 0; s < k; ++s) blocks[i].B.push_back(q[i] * reference[i].B[s]);
        if (sigma > 0.0) {
            blocks[i].A += random_complex(m[i], n[i], rng, sigma);
            for (std::size_t s = 0; s < k; ++s) blocks[i].B[s] += random_complex(m[i], n[i], rng, sigma);
        }
    }
    return {RmepProblem(std::move(blocks)), MepProblem(std::move(reference))};
}

RmepProblem random_problem(std::span<const Index> m, std::span<const Index> n, std::uint64_t seed) {
    check_sizes(m, n, false);
    const std::size_t k = m.size();
    std::mt19937_64 rng(seed);
    std::vector<EquationBlock> blocks(k);
    for (std::size_t i = 0; i < k; ++i) {
        blocks[i].A = random_complex(m[i], n[i], rng);
        for (std::size_t s = 0; s < k; ++s) blocks[i].B.push_back(random_complex(m[i], n[i], rng));
    }
    return RmepProblem(std::move(blocks));
}

}  // namespace rmep
