#pragma once

// Problem files. JSON:
//   {"format": "rmep-problem", "version": 1, "k": K,
//    "blocks": [{"rows": m, "cols": n, "A": [[re, im], ...], "B": [[[re, im], ...], ...]}, ...]}
// with entries in column-major order. Binary: a 16-byte header
// ("RMEPBIN" NUL, uint32 version, uint32 reserved) followed by uint64 k,
// then per block uint64 rows, uint64 cols and the A, B_1..B_k entries as
// column-major little-endian (re, im) float64 pairs.

#include <array>
#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "rmep/model.hpp"

namespace rmep::io {

inline constexpr std::array<char, 8> kBinaryMagic = {'R', 'M', 'E', 'P', 'B', 'I', 'N', '\0'};
inline constexpr std::uint32_t kFormatVersion = 1;

nlohmann::json to_json(const RmepProblem& p);
RmepProblem problem_from_json(const nlohmann::json& j);

void write_binary(std::ostream& out, const RmepProblem& p);
RmepProblem read_binary(std::istream& in);

/// Writes JSON unless the extension is ".bin".
void save_problem(const std::filesystem::path& path, const RmepProblem& p);
/// Detects the binary magic, otherwise parses JSON.
RmepProblem load_problem(const std::filesystem::path& path);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, Index rows, Index cols);

}  // namespace rmep::io
