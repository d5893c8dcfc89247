#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include "antflow/errors.hpp"
#include "antflow/trajectory.hpp"

namespace antflow {

// Space-time raster: one row per snapshot (time runs downwards), one
// column per site.
struct Raster {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Cell> cells; // row-major

    Cell at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
    friend bool operator==(const Raster&, const Raster&) = default;
};

// Grey levels written to the PGM, indexed by Cell code:
//   empty 255 (white), mark 192, R-ant 0 (black), L-ant 128, both 64.
inline constexpr std::array<std::uint8_t, 5> grey_levels{255, 192, 0, 128, 64};

inline std::uint8_t grey_of(Cell c) { return grey_levels[static_cast<std::size_t>(c)]; }

inline Raster spacetime_raster(const Trajectory& traj) {
    if (traj.snapshots.empty()) throw empty_trajectory("trajectory has no snapshots");
    Raster r;
    r.rows = traj.snapshots.size();
    r.cols = traj.params.L;
    r.cells.reserve(r.rows * r.cols);
    for (const auto& s : traj.snapshots) r.cells.insert(r.cells.end(), s.cells.begin(), s.cells.end());
    return r;
}

// Binary P5, maxval 255.
inline void write_pgm(std::ostream& os, const Raster& r) {
    os << "P5\n" << r.cols << ' ' << r.rows << "\n255\n";
    std::vector<char> row(r.cols);
    for (std::size_t i = 0; i < r.rows; ++i) {
        for (std::size_t j = 0; j < r.cols; ++j) row[j] = static_cast<char>(grey_of(r.at(i, j)));
        os.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

// Integer cell codes, one raster row per line.
inline void write_raster_csv(std::ostream& os, const Raster& r) {
    for (std::size_t i = 0; i < r.rows; ++i) {
        for (std::size_t j = 0; j < r.cols; ++j) {
            if (j) os << ',';
            os << static_cast<int>(r.at(i, j));
        }
        os << '\n';
    }
}

} // namespace antflow
