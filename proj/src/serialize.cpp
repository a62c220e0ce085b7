#include "rmep/serialize.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "rmep/errors.hpp"

namespace rmep::io {

namespace {

template <typename T>
void put(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
        std::reverse(bytes.begin(), bytes.end());
        out.write(bytes.data(), sizeof(T));
    } else {
        out.write(reinterpret_cast<const char*>(&value), sizeof(T));
    }
}

template <typename T>
T get(std::istream& in) {
    std::array<char, sizeof(T)> bytes{};
    if (!in.read(bytes.data(), sizeof(T))) throw ValidationError("binary problem: unexpected end of stream");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
}

void put_matrix(std::ostream& out, const ComplexMatrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i) {
            put(out, m(i, j).real());
            put(out, m(i, j).imag());
        }
}

ComplexMatrix get_matrix(std::istream& in, Index rows, Index cols) {
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            const double re = get<double>(in);
            const double im = get<double>(in);
            m(i, j) = cd(re, im);
        }
    return m;
}

constexpr std::uint64_t kMaxSide = 1u << 24;

}  // namespace

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json arr = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i) arr.push_back({m(i, j).real(), m(i, j).imag()});
    return arr;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j, Index rows, Index cols) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(rows * cols))
        throw ValidationError("problem JSON: entry array has wrong length");
    ComplexMatrix m(rows, cols);
    std::size_t idx = 0;
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r, ++idx) {
            const auto& e = j[idx];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ValidationError("problem JSON: entries must be [re, im] pairs");
            m(r, c) = cd(e[0].get<double>(), e[1].get<double>());
        }
    return m;
}

nlohmann::json to_json(const RmepProblem& p) {
    nlohmann::json j;
    j["format"] = "rmep-problem";
    j["version"] = kFormatVersion;
    j["k"] = p.k();
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : p.blocks()) {
        nlohmann::json jb;
        jb["rows"] = b.rows();
        jb["cols"] = b.cols();
        jb["A"] = matrix_to_json(b.A);
        nlohmann::json bs = nlohmann::json::array();
        for (const auto& m : b.B) bs.push_back(matrix_to_json(m));
        jb["B"] = std::move(bs);
        blocks.push_back(std::move(jb));
    }
    j["blocks"] = std::move(blocks);
    return j;
}

RmepProblem problem_from_json(const nlohmann::json& j) {
    try {
        if (j.value("format", std::string{}) != "rmep-problem")
            throw ValidationError("problem JSON: missing format tag \"rmep-problem\"");
        if (j.at("version").get<std::uint32_t>() != kFormatVersion)
            throw ValidationError("problem JSON: unsupported version");
        const auto k = j.at("k").get<std::size_t>();
        const auto& jblocks = j.at("blocks");
        if (!jblocks.is_array() || jblocks.size() != k) throw ValidationError("problem JSON: expected k blocks");
        std::vector<EquationBlock> blocks;
        blocks.reserve(k);
        for (const auto& jb : jblocks) {
            const auto rows = jb.at("rows").get<Index>();
            const auto cols = jb.at("cols").get<Index>();
            if (rows < 1 || cols < 1) throw ValidationError("problem JSON: non-positive shape");
            EquationBlock b;
            b.A = matrix_from_json(jb.at("A"), rows, cols);
            for (const auto& jm : jb.at("B")) b.B.push_back(matrix_from_json(jm, rows, cols));
            blocks.push_back(std::move(b));
        }
        return RmepProblem(std::move(blocks));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("problem JSON: ") + e.what());
    }
}

void write_binary(std::ostream& out, const RmepProblem& p) {
    out.write(kBinaryMagic.data(), kBinaryMagic.size());
    put<std::uint32_t>(out, kFormatVersion);
    put<std::uint32_t>(out, 0);
    put<std::uint64_t>(out, p.k());
    for (const auto& b : p.blocks()) {
        put<std::uint64_t>(out, static_cast<std::uint64_t>(b.rows()));
        put<std::uint64_t>(out, static_cast<std::uint64_t>(b.cols()));
        put_matrix(out, b.A);
        for (const auto& m : b.B) put_matrix(out, m);
    }
}

RmepProblem read_binary(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kBinaryMagic)
        throw ValidationError("binary problem: bad magic");
    if (get<std::uint32_t>(in) != kFormatVersion) throw ValidationError("binary problem: unsupported version");
    get<std::uint32_t>(in);
    const auto k = get<std::uint64_t>(in);
    if (k == 0 || k > 64) throw ValidationError("binary problem: implausible k");
    std::vector<EquationBlock> blocks;
    for (std::uint64_t i = 0; i < k; ++i) {
        const auto rows = get<std::uint64_t>(in);
        const auto cols = get<std::uint64_t>(in);
        if (rows == 0 || cols == 0 || rows > kMaxSide || cols > kMaxSide)
            throw ValidationError("binary problem: implausible shape");
        EquationBlock b;
        b.A = get_matrix(in, static_cast<Index>(rows), static_cast<Index>(cols));
        for (std::uint64_t s = 0; s < k; ++s)
            b.B.push_back(get_matrix(in, static_cast<Index>(rows), static_cast<Index>(cols)));
        blocks.push_back(std::move(b));
    }
    return RmepProblem(std::move(blocks));
}

void save_problem(const std::filesystem::path& path, const RmepProblem& p) {
    if (path.extension() == ".bin") {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
        write_binary(out, p);
    } else {
        std::ofstream out(path);
        if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
        out << to_json(p).dump() << '\n';
    }
}

RmepProblem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::array<char, 8> head{};
    in.read(head.data(), head.size());
    const bool binary = in.gcount() == static_cast<std::streamsize>(head.size()) && head == kBinaryMagic;
    in.clear();
    in.seekg(0);
    if (binary) return read_binary(in);
    try {
        return problem_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("problem JSON: ") + e.what());
    }
}

}  // namespace rmep::io
