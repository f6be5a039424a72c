#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace graphsumm {

using NodeId = std::uint32_t;
using SupernodeId = std::uint32_t;
using EdgeCount = std::uint64_t;

constexpr SupernodeId kInvalidSupernode = static_cast<SupernodeId>(-1);

enum class Model { weighted, unweighted };

inline const char *model_name(Model m) {
    return m == Model::weighted ? "weighted" : "unweighted";
}

class Error : public std::runtime_error {
public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Parse failure with a 1-based line number attached.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string &msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// splitmix64 finalizer. Bijective on 64-bit words for a fixed seed, which is
// what the min-hash shingles need from a "random permutation" of node ids.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t x) {
    return mix64(seed ^ mix64(x));
}

// Deterministic across standard libraries, unlike uniform_int_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform draw from [0, n). Lemire multiply-shift; bias is negligible for
    // the set sizes we sample from and the result is stdlib-independent.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace graphsumm
