#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "antflow/trail_state.hpp"

namespace antflow {

// Per-site code used by snapshots and rasters.
enum class Cell : std::uint8_t { empty = 0, mark = 1, right = 2, left = 3, both = 4 };

struct Snapshot {
    double time = 0.0;
    std::vector<Cell> cells;

    bool has(std::size_t site, Direction d) const {
        const Cell c = cells[site];
        return c == Cell::both || c == (d == Direction::right ? Cell::right : Cell::left);
    }
    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

inline Snapshot take_snapshot(const TrailState& s) {
    Snapshot snap;
    snap.time = s.clock();
    snap.cells.resize(s.size());
    const bool marks = s.mode() != Mode::tasep;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool r = s.occupied(i, Direction::right);
        const bool l = s.occupied(i, Direction::left);
        if (r && l) snap.cells[i] = Cell::both;
        else if (r) snap.cells[i] = Cell::right;
        else if (l) snap.cells[i] = Cell::left;
        else if (marks && s.mark_present(i)) snap.cells[i] = Cell::mark;
        else snap.cells[i] = Cell::empty;
    }
    return snap;
}

struct Trajectory {
    Mode mode = Mode::uni;
    ModelParams params;
    std::size_t n_right = 0;
    std::size_t n_left = 0;
    std::vector<SweepStats> stats;    // one entry per measurement sweep
    std::vector<Snapshot> snapshots;  // every record_interval measurement sweeps

    std::size_t measured_sweeps() const { return stats.size(); }
    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Warmup sweeps are discarded; each measurement sweep contributes its
// counters, and a snapshot is taken after every record_interval-th one
// (record_interval = 0 disables snapshots). The visitor sees every
// elementary-update event of the measurement phase only.
template <class Visitor>
Trajectory run(TrailState& state, std::size_t warmup_sweeps, std::size_t measure_sweeps,
               std::size_t record_interval, Visitor&& visit) {
    for (std::size_t i = 0; i < warmup_sweeps; ++i) state.sweep();
    Trajectory traj;
    traj.mode = state.mode();
    traj.params = state.params();
    traj.n_right = state.count(Direction::right);
    traj.n_left = state.count(Direction::left);
    traj.stats.reserve(measure_sweeps);
    for (std::size_t i = 0; i < measure_sweeps; ++i) {
        traj.stats.push_back(state.sweep(visit));
        if (record_interval != 0 && (i + 1) % record_interval == 0) traj.snapshots.push_back(take_snapshot(state));
    }
    return traj;
}

inline Trajectory run(TrailState& state, std::size_t warmup_sweeps, std::size_t measure_sweeps,
                      std::size_t record_interval = 0) {
    return run(state, warmup_sweeps, measure_sweeps, record_interval, [](const UpdateEvent&) {});
}

} // namespace antflow
