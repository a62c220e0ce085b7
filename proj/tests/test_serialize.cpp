#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmep/errors.hpp"
#include "rmep/generator.hpp"
#include "rmep/serialize.hpp"

using namespace rmep;

namespace {

bool bit_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(cd) * static_cast<std::size_t>(a.size())) == 0;
}

bool bit_equal(const RmepProblem& a, const RmepProblem& b) {
    if (a.k() != b.k()) return false;
    for (std::size_t i = 0; i < a.k(); ++i) {
        if (!bit_equal(a.block(i).A, b.block(i).A)) return false;
        for (std::size_t s = 0; s < a.k(); ++s)
            if (!bit_equal(a.block(i).B[s], b.block(i).B[s])) return false;
    }
    return true;
}

RmepProblem sample(std::uint64_t seed) {
    const std::array<Index, 2> m{6, 5}, n{3, 4};
    auto blocks = random_problem(m, n, seed).blocks();
    // awkward doubles: subnormal, huge, negative zero
    blocks[0].A(0, 0) = cd(4.9e-324, -0.0);
    blocks[1].B[1](4, 3) = cd(1.7976931348623157e308, 1.0 / 3.0);
    return RmepProblem(std::move(blocks));
}

}  // namespace

TEST_CASE("JSON round trip is bit exact") {
    const RmepProblem p = sample(1);
    const auto j = io::to_json(p);
    CHECK(j["format"] == "rmep-problem");
    CHECK(j["k"] == 2);
    const RmepProblem q = io::problem_from_json(nlohmann::json::parse(j.dump()));
    CHECK(bit_equal(p, q));
}

TEST_CASE("JSON entries are column-major [re, im] pairs") {
    ComplexMatrix a(2, 1), b(2, 1);
    a << cd(1, 2), cd(3, 4);
    b << cd(5, 0), cd(0, 6);
    const auto j = io::to_json(RmepProblem({EquationBlock{a, {b}}}));
    CHECK(j["blocks"][0]["A"][1][0] == 3.0);
    CHECK(j["blocks"][0]["A"][1][1] == 4.0);
    CHECK(j["blocks"][0]["B"][0][1][1] == 6.0);

    ComplexMatrix m(2, 2);
    m << 1, 2, 3, 4;
    const auto mj = io::matrix_to_json(m);
    CHECK(mj[1][0] == 3.0);  // (1, 0) comes second
    CHECK(bit_equal(io::matrix_from_json(mj, 2, 2), m));
}

TEST_CASE("binary round trip and header") {
    const RmepProblem p = sample(2);
    std::stringstream ss;
    io::write_binary(ss, p);
    const std::string bytes = ss.str();
    REQUIRE(bytes.size() >= 16);
    CHECK(std::memcmp(bytes.data(), io::kBinaryMagic.data(), 8) == 0);
    std::uint32_t version = 0;
    std::memcpy(&version, bytes.data() + 8, 4);
    CHECK(version == io::kFormatVersion);
    CHECK(bit_equal(p, io::read_binary(ss)));
}

TEST_CASE("files dispatch on content") {
    const auto dir = std::filesystem::temp_directory_path() / "rmep_test_serialize";
    std::filesystem::create_directories(dir);
    const RmepProblem p = sample(3);
    io::save_problem(dir / "p.json", p);
    io::save_problem(dir / "p.bin", p);
    CHECK(bit_equal(p, io::load_problem(dir / "p.json")));
    CHECK(bit_equal(p, io::load_problem(dir / "p.bin")));
    std::filesystem::copy_file(dir / "p.bin", dir / "renamed.dat", std::filesystem::copy_options::overwrite_existing);
    CHECK(bit_equal(p, io::load_problem(dir / "renamed.dat")));
    CHECK_THROWS_AS(io::load_problem(dir / "missing.json"), ValidationError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(io::problem_from_json(nlohmann::json::parse(R"({"format":"other","version":1})")), ValidationError);
    auto j = io::to_json(sample(4));
    j["blocks"][0]["A"].erase(0);
    CHECK_THROWS_AS(io::problem_from_json(j), ValidationError);
    j = io::to_json(sample(4));
    j["blocks"][0]["rows"] = 2;  // fewer rows than columns
    CHECK_THROWS(io::problem_from_json(j));

    std::stringstream bad("RMEPBAD\0garbage");
    CHECK_THROWS_AS(io::read_binary(bad), ValidationError);
    std::stringstream ss;
    io::write_binary(ss, sample(5));
    std::stringstream truncated(ss.str().substr(0, 64));
    CHECK_THROWS_AS(io::read_binary(truncated), ValidationError);
}
