#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "antflow/errors.hpp"
#include "antflow/trajectory.hpp"

namespace antflow {

struct VelocityFlow {
    double V = 0.0;
    double F = 0.0;
    friend bool operator==(const VelocityFlow&, const VelocityFlow&) = default;
};

// Exact random-sequential TASEP on a ring: V = p(1 - rho), F = p rho (1 - rho).
inline VelocityFlow tasep_exact(double p, double rho) {
    if (!(p >= 0.0 && p <= 1.0)) throw domain_error("rate must lie in [0, 1]");
    if (!(rho >= 0.0 && rho <= 1.0)) throw domain_error("density must lie in [0, 1]");
    return {p * (1.0 - rho), p * rho * (1.0 - rho)};
}

struct TotalEffective {
    double total = 0.0;
    double effective = 0.0;
};

inline TotalEffective total_effective_flow(double F_R, double F_L) { return {F_R + F_L, F_R - F_L}; }

// One stationary measurement. F_d is always stored as rho_d * V_d (one
// rounding of the product), so F = rho V holds bitwise. It agrees with
// hops / (L T) to within a few ulps.
struct FdPoint {
    double rho_R = 0.0;
    double rho_L = 0.0;
    double V_R = 0.0;
    double V_L = 0.0;
    double F_R = 0.0;
    double F_L = 0.0;
    double F_tot = 0.0;
    double F_eff = 0.0;
    double stderr_V_R = 0.0;
    double stderr_V_L = 0.0;
    std::size_t n_replicas = 0;
    double f = 0.0;
    // Set when the direction holds no ants; V and F are then reported as 0.
    bool empty_R = false;
    bool empty_L = false;

    double stderr_F_R() const { return rho_R * stderr_V_R; }
    double stderr_F_L() const { return rho_L * stderr_V_L; }
};

inline void finish_flows(FdPoint& p) {
    p.F_R = p.rho_R * p.V_R;
    p.F_L = p.rho_L * p.V_L;
    const auto te = total_effective_flow(p.F_R, p.F_L);
    p.F_tot = te.total;
    p.F_eff = te.effective;
}

// V_d = hops_d / (N_d T); F_d = rho_d V_d with rho_d = N_d / L.
inline FdPoint stationary_averages(const Trajectory& traj) {
    if (traj.stats.empty()) throw empty_trajectory("trajectory has no measurement sweeps");
    SweepStats total;
    for (const auto& s : traj.stats) total += s;
    const double T = static_cast<double>(traj.stats.size());
    const double L = static_cast<double>(traj.params.L);

    FdPoint p;
    p.f = traj.params.f;
    p.n_replicas = 1;
    p.rho_R = static_cast<double>(traj.n_right) / L;
    p.rho_L = static_cast<double>(traj.n_left) / L;
    p.empty_R = traj.n_right == 0;
    p.empty_L = traj.n_left == 0;
    p.V_R = p.empty_R ? 0.0 : static_cast<double>(total.hops_R) / (static_cast<double>(traj.n_right) * T);
    p.V_L = p.empty_L ? 0.0 : static_cast<double>(total.hops_L) / (static_cast<double>(traj.n_left) * T);
    finish_flows(p);
    return p;
}

struct ClusterStats {
    std::size_t cluster_count = 0;
    double largest_cluster_fraction = 0.0;
};

namespace detail {
inline std::vector<std::size_t> positions(const Snapshot& snap, Direction d) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < snap.cells.size(); ++i)
        if (snap.has(i, d)) pos.push_back(i);
    return pos;
}

// Empty sites between consecutive ants, the last entry wrapping around.
inline std::vector<std::size_t> circular_gaps(const std::vector<std::size_t>& pos, std::size_t L) {
    std::vector<std::size_t> gaps(pos.size());
    for (std::size_t k = 0; k + 1 < pos.size(); ++k) gaps[k] = pos[k + 1] - pos[k] - 1;
    if (!pos.empty()) gaps.back() = pos.front() + L - pos.back() - 1;
    return gaps;
}
} // namespace detail

inline constexpr std::size_t default_gap_threshold = 5;

// Clusters are maximal circular runs of same-direction ants whose
// consecutive gaps are <= gap_threshold. A ring with no gap above the
// threshold is one cluster.
inline ClusterStats cluster_stats(const Snapshot& snap, Direction d,
                                  std::size_t gap_threshold = default_gap_threshold) {
    if (gap_threshold < 1) throw invalid_argument("gap_threshold must be at least 1");
    const auto pos = detail::positions(snap, d);
    if (pos.empty()) return {};
    const auto gaps = detail::circular_gaps(pos, snap.cells.size());
    const std::size_t n = pos.size();

    std::size_t start = n;
    for (std::size_t k = 0; k < n; ++k)
        if (gaps[k] > gap_threshold) {
            start = (k + 1) % n;
            break;
        }
    if (start == n) return {1, 1.0};

    std::size_t clusters = 0, largest = 0, run = 0;
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t k = (start + step) % n;
        ++run;
        if (gaps[k] > gap_threshold) {
            ++clusters;
            largest = std::max(largest, run);
            run = 0;
        }
    }
    return {clusters, static_cast<double>(largest) / static_cast<double>(n)};
}

// Gaps between consecutive same-direction ants, starting from the ant at
// the lowest site. Sum of gaps + N = L.
inline std::vector<std::size_t> sim_distance_headways(const Snapshot& snap, Direction d) {
    const auto pos = detail::positions(snap, d);
    if (pos.size() < 2) throw too_few_ants("distance headways need at least two ants");
    return detail::circular_gaps(pos, snap.cells.size());
}

} // namespace antflow
