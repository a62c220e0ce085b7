#pragma once

// Helpers shared by the test binaries.

#include <algorithm>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "rmep/generator.hpp"
#include "rmep/linalg.hpp"
#include "rmep/model.hpp"

namespace rmep::testing {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    const double scale = std::max(a.norm(), b.norm());
    return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

/// Largest distance between two multisets of points in C^k matched greedily,
/// nearest first. Infinity when the sizes differ.
inline double multiset_distance(std::vector<std::vector<cd>> a, std::vector<std::vector<cd>> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    auto dist = [](const std::vector<cd>& x, const std::vector<cd>& y) {
        double d = 0.0;
        for (std::size_t s = 0; s < x.size(); ++s) d = std::max(d, std::abs(x[s] - y[s]));
        return d;
    };
    double worst = 0.0;
    while (!a.empty()) {
        std::size_t bi = 0, bj = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                if (double d = dist(a[i], b[j]); d < best) best = d, bi = i, bj = j;
        worst = std::max(worst, best);
        a.erase(a.begin() + static_cast<std::ptrdiff_t>(bi));
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return worst;
}

/// The 2x1 scalar problem A = [2; 0], B = [1; 0].
inline RmepProblem scalar_problem() {
    ComplexMatrix a(2, 1), b(2, 1);
    a << 2.0, 0.0;
    b << 1.0, 0.0;
    return RmepProblem({EquationBlock{a, {b}}});
}

/// Square k = 2 problem with diagonal blocks, known eigen-tuples at index pairs.
inline MepProblem diagonal_mep(Index n1, Index n2, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    auto diag = [&](Index n) {
        ComplexVector d(n);
        for (Index j = 0; j < n; ++j) d(j) = cd(g(rng), g(rng));
        return ComplexMatrix(d.asDiagonal());
    };
    return MepProblem({EquationBlock{diag(n1), {diag(n1), diag(n1)}}, EquationBlock{diag(n2), {diag(n2), diag(n2)}}});
}

}  // namespace rmep::testing
