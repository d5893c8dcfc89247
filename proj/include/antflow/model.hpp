#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "antflow/errors.hpp"

namespace antflow {

enum class Mode { tasep, uni, bi };
enum class Direction { right, left };

inline std::string_view to_string(Mode m) {
    switch (m) {
    case Mode::tasep: return "tasep";
    case Mode::uni: return "uni";
    case Mode::bi: return "bi";
    }
    return "?";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "tasep") return Mode::tasep;
    if (s == "uni") return Mode::uni;
    if (s == "bi") return Mode::bi;
    return std::nullopt;
}

inline std::string_view to_string(Direction d) { return d == Direction::right ? "R" : "L"; }

inline std::optional<Direction> parse_direction(std::string_view s) {
    if (s == "R") return Direction::right;
    if (s == "L") return Direction::left;
    return std::nullopt;
}

constexpr Direction opposite(Direction d) {
    return d == Direction::right ? Direction::left : Direction::right;
}

constexpr std::size_t index_of(Direction d) { return d == Direction::right ? 0 : 1; }

// Lattice length and hopping/evaporation probabilities.
//   q: hop onto an unmarked free site (the single TASEP rate in tasep mode)
//   Q: hop onto a marked free site
//   K: hop when an opposing ant occupies the target (bi mode only)
//   f: per-sweep evaporation probability of an unoccupied mark
struct ModelParams {
    std::size_t L = 100;
    double q = 0.2;
    double Q = 0.9;
    double K = 0.1;
    double f = 0.0;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

namespace detail {
inline bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }
} // namespace detail

// Throws invalid_rates naming the offending symbol.
//   tasep: 0 <= q <= 1
//   uni:   0 <= q <= Q <= 1
//   bi:    0 <= K < q < Q <= 1
// and 0 <= f <= 1 everywhere.
inline void validate(const ModelParams& p, Mode mode) {
    if (p.L < 2) throw invalid_rates("L must be at least 2");
    if (!detail::in_unit(p.q)) throw invalid_rates("q must lie in [0, 1]");
    if (!detail::in_unit(p.f)) throw invalid_rates("f must lie in [0, 1]");
    if (mode == Mode::tasep) return;
    if (!detail::in_unit(p.Q)) throw invalid_rates("Q must lie in [0, 1]");
    if (mode == Mode::uni) {
        if (p.q > p.Q) throw invalid_rates("q must not exceed Q");
        return;
    }
    if (!detail::in_unit(p.K)) throw invalid_rates("K must lie in [0, 1]");
    if (!(p.K < p.q && p.q < p.Q)) throw invalid_rates("bidirectional rates need K < q < Q");
}

} // namespace antflow
