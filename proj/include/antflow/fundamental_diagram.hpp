#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "antflow/observables.hpp"
#include "antflow/parallel.hpp"

namespace antflow {

struct GridCell {
    double rho_R = 0.0;
    double rho_L = 0.0;
    double f = 0.0;
    friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct SweepConfig {
    Mode mode = Mode::uni;
    ModelParams params; // params.f is replaced per cell
    std::vector<GridCell> cells;
    std::size_t replicas = 1;
    std::uint64_t master_seed = 0;
    std::size_t warmup_sweeps = 0;
    std::size_t measure_sweeps = 1000;
    std::size_t workers = 1;
};

struct FdTable {
    std::vector<FdPoint> points;
    SweepConfig config;
};

inline std::size_t ants_for_density(double rho, std::size_t L) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw domain_error("density must lie in [0, 1]");
    return static_cast<std::size_t>(std::llround(rho * static_cast<double>(L)));
}

// The replica stream depends on the cell's content (mode, ant counts, f)
// rather than its position in the grid, so a cell gives the same numbers
// whatever grid it is part of.
inline std::uint64_t replica_seed(std::uint64_t master, Mode mode, std::size_t n_right, std::size_t n_left,
                                  double f, std::size_t replica) {
    std::uint64_t key = splitmix64(static_cast<std::uint64_t>(mode) + 1);
    key = splitmix64(key ^ n_right);
    key = splitmix64(key ^ (static_cast<std::uint64_t>(n_left) << 1));
    key = splitmix64(key ^ std::bit_cast<std::uint64_t>(f));
    return derive_seed(master, key, replica);
}

// Replica means with standard errors sd / sqrt(n) (sd with n - 1).
inline FdPoint combine_replicas(const std::vector<FdPoint>& reps) {
    FdPoint out = reps.front();
    const double n = static_cast<double>(reps.size());
    auto mean_se = [&](auto field) {
        double m = 0.0;
        for (const auto& r : reps) m += r.*field;
        m /= n;
        double ss = 0.0;
        for (const auto& r : reps) ss += (r.*field - m) * (r.*field - m);
        const double se = reps.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        return std::pair{m, se};
    };
    std::tie(out.V_R, out.stderr_V_R) = mean_se(&FdPoint::V_R);
    std::tie(out.V_L, out.stderr_V_L) = mean_se(&FdPoint::V_L);
    out.n_replicas = reps.size();
    finish_flows(out);
    return out;
}

// One FdPoint per grid cell, in grid order. (cell, replica) tasks run on a
// worker pool; results are identical for any worker count.
inline FdTable fundamental_diagram_sweep(const SweepConfig& cfg) {
    if (cfg.replicas < 1) throw invalid_argument("replicas must be at least 1");
    const std::size_t L = cfg.params.L;
    struct Task {
        std::size_t cell;
        std::size_t replica;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
        // Validate up front so that failures surface before any work is done.
        ModelParams p = cfg.params;
        p.f = cfg.cells[c].f;
        validate(p, cfg.mode);
        ants_for_density(cfg.cells[c].rho_R, L);
        ants_for_density(cfg.cells[c].rho_L, L);
        for (std::size_t r = 0; r < cfg.replicas; ++r) tasks.push_back({c, r});
    }

    std::vector<FdPoint> results(tasks.size());
    parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
        const GridCell& cell = cfg.cells[tasks[i].cell];
        ModelParams p = cfg.params;
        p.f = cell.f;
        const std::size_t nr = ants_for_density(cell.rho_R, L);
        const std::size_t nl = ants_for_density(cell.rho_L, L);
        TrailState state(p, nr, nl, replica_seed(cfg.master_seed, cfg.mode, nr, nl, cell.f, tasks[i].replica),
                         cfg.mode);
        results[i] = stationary_averages(run(state, cfg.warmup_sweeps, cfg.measure_sweeps));
    });

    FdTable table;
    table.config = cfg;
    for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
        std::vector<FdPoint> reps(results.begin() + static_cast<std::ptrdiff_t>(c * cfg.replicas),
                                  results.begin() + static_cast<std::ptrdiff_t>((c + 1) * cfg.replicas));
        table.points.push_back(combine_replicas(reps));
    }
    return table;
}

// ---- CSV ----------------------------------------------------------------

inline constexpr const char* fd_csv_header =
    "rho_R,rho_L,f,V_R,V_L,F_R,F_L,F_tot,F_eff,stderr_V_R,stderr_V_L,n_replicas";

inline std::string format_g6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline std::string fd_csv_row(const FdPoint& p) {
    std::string row;
    for (double x : {p.rho_R, p.rho_L, p.f, p.V_R, p.V_L, p.F_R, p.F_L, p.F_tot, p.F_eff, p.stderr_V_R,
                     p.stderr_V_L}) {
        row += format_g6(x);
        row += ',';
    }
    row += std::to_string(p.n_replicas);
    return row;
}

inline void write_fd_csv(std::ostream& os, const std::vector<FdPoint>& points, bool header = true) {
    if (header) os << fd_csv_header << '\n';
    for (const auto& p : points) os << fd_csv_row(p) << '\n';
}

// Reads rows written by write_fd_csv. Values come back rounded to the six
// significant digits they were printed with.
inline std::vector<FdPoint> read_fd_csv(std::istream& is) {
    std::vector<FdPoint> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != fd_csv_header) throw parse_error(lineno, "unexpected FdTable header");
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 12) throw parse_error(lineno, "expected 12 fields");
        std::vector<double> v;
        try {
            for (std::size_t i = 0; i < 11; ++i) v.push_back(std::stod(fields[i]));
            FdPoint p;
            p.rho_R = v[0];
            p.rho_L = v[1];
            p.f = v[2];
            p.V_R = v[3];
            p.V_L = v[4];
            p.F_R = v[5];
            p.F_L = v[6];
            p.F_tot = v[7];
            p.F_eff = v[8];
            p.stderr_V_R = v[9];
            p.stderr_V_L = v[10];
            p.n_replicas = static_cast<std::size_t>(std::stoull(fields[11]));
            out.push_back(p);
        } catch (const std::logic_error&) {
            throw parse_error(lineno, "malformed number");
        }
    }
    return out;
}

} // namespace antflow
