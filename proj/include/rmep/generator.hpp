#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "rmep/model.hpp"

namespace rmep {

/// rows x cols matrix with real and imaginary parts drawn from N(0, stddev).
ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng, double stddev = 1.0);

/// Unit vector with N(0,1) real/imaginary parts before normalisation.
ComplexVector random_unit_vector(Index n, std::mt19937_64& rng);

struct PlantedProblem {
    RmepProblem problem;
    MepProblem reference;
};

/// A_i = Q_i Ac_i + E_i, B_is = Q_i Bc_is + F_is where {Ac_i, Bc_is} is a
/// random n_i x n_i MEP, Q_i is the thin-QR factor of a random m_i x n_i
/// matrix and the noise has real/imaginary parts drawn from N(0, sigma).
PlantedProblem random_planted_problem(std::span<const Index> m, std::span<const Index> n, double sigma,
                                      std::uint64_t seed);

/// Dense random RMEP with standard normal real/imaginary parts.
RmepProblem random_problem(std::span<const Index> m, std::span<const Index> n, std::uint64_t seed);

}  // namespace rmep
