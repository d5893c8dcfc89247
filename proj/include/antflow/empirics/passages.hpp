#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "antflow/empirics/event_log.hpp"

namespace antflow::empirics {

struct PairedPassage {
    std::size_t n = 0; // 1-based ordinal within its direction
    Direction direction = Direction::right;
    double t_plus = 0.0;
    double t_minus = 0.0;
    friend bool operator==(const PairedPassage&, const PairedPassage&) = default;
};

// Enters that never got a matching leave (still inside at the end of the
// log, or turned around).
struct UTurnReport {
    std::array<std::size_t, 2> entered{0, 0};
    std::array<std::size_t, 2> unmatched{0, 0};

    double rate(Direction d) const {
        const auto k = index_of(d);
        return entered[k] == 0 ? 0.0 : static_cast<double>(unmatched[k]) / static_cast<double>(entered[k]);
    }
};

struct Pairing {
    std::vector<PairedPassage> pairs; // R passages first, then L, each by n
    UTurnReport report;
};

// FIFO matching: without overtaking the k-th ant to enter is the k-th to
// leave.
inline Pairing pair_passages(const EventLog& log) {
    Pairing out;
    for (Direction d : {Direction::right, Direction::left}) {
        std::vector<double> enters, leaves;
        for (const auto& e : log.events) {
            if (e.direction != d) continue;
            (e.kind == EventKind::enter ? enters : leaves).push_back(e.t);
        }
        const std::size_t matched = std::min(enters.size(), leaves.size());
        for (std::size_t k = 0; k < matched; ++k) out.pairs.push_back({k + 1, d, enters[k], leaves[k]});
        out.report.entered[index_of(d)] = enters.size();
        out.report.unmatched[index_of(d)] = enters.size() - matched;
    }
    return out;
}

struct TravelTime {
    double travel_time = 0.0;
    double velocity = 0.0;
};

inline TravelTime travel_time_velocity(const PairedPassage& p, double section_length) {
    if (!(section_length > 0.0)) throw invalid_argument("section length must be positive");
    const double dt = p.t_minus - p.t_plus;
    if (!(dt > 0.0)) throw non_positive_travel_time("leave time must be after enter time");
    return {dt, section_length / dt};
}

inline std::vector<TravelTime> travel_time_velocity(const std::vector<PairedPassage>& pairs, double section_length) {
    std::vector<TravelTime> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(travel_time_velocity(p, section_length));
    return out;
}

enum class Boundary { enter, leave };

struct Headway {
    std::size_t index = 0; // position of the ant in the input pair list
    double dt = 0.0;
    std::optional<double> flow; // 1/dt; empty when dt == 0
    bool duplicate_timestamp = false;
};

// Time headways t(n) - t(n-1) between consecutive ants of the same
// direction at one boundary. The first ant of each direction has none.
inline std::vector<Headway> time_headways(const std::vector<PairedPassage>& pairs, Boundary boundary) {
    std::vector<Headway> out;
    std::array<std::optional<double>, 2> prev;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        const double t = boundary == Boundary::enter ? p.t_plus : p.t_minus;
        auto& last = prev[index_of(p.direction)];
        if (last) {
            Headway h{i, t - *last, std::nullopt, false};
            if (h.dt == 0.0) h.duplicate_timestamp = true;
            else h.flow = 1.0 / h.dt;
            out.push_back(h);
        }
        last = t;
    }
    return out;
}

struct DistanceHeadway {
    double dd = 0.0;
    bool degenerate = false; // predecessor velocity was 0
};

// (t_plus(n) - t_plus(n-1)) * v(n-1), in body lengths.
inline DistanceHeadway distance_headway(const PairedPassage& prev, const PairedPassage& cur, double v_prev) {
    if (prev.direction != cur.direction || cur.n < 2 || prev.n + 1 != cur.n)
        throw missing_predecessor("distance headway needs the preceding ant of the same direction");
    return {(cur.t_plus - prev.t_plus) * v_prev, v_prev == 0.0};
}

// Aligned with `pairs`; the first ant of each direction gets nullopt.
inline std::vector<std::optional<DistanceHeadway>> distance_headways(const std::vector<PairedPassage>& pairs,
                                                                     const std::vector<double>& velocities) {
    if (velocities.size() != pairs.size()) throw invalid_argument("one velocity per pair is required");
    std::vector<std::optional<DistanceHeadway>> out(pairs.size());
    std::array<std::optional<std::size_t>, 2> prev;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto& last = prev[index_of(pairs[i].direction)];
        if (last && pairs[*last].n + 1 == pairs[i].n)
            out[i] = distance_headway(pairs[*last], pairs[i], velocities[*last]);
        last = i;
    }
    return out;
}

struct AveragedCounts {
    double own = 0.0;
    double counter = 0.0;
};

// Time averages of N^own and N^counter over the ant's own passage
// [t_plus, t_minus). The ant counts itself in N^own.
inline AveragedCounts averaged_counts(const PairedPassage& p, const std::array<StepFunction, 2>& counts) {
    const double dt = p.t_minus - p.t_plus;
    if (!(dt > 0.0)) throw empty_interval("passage interval is empty");
    const auto& own = counts[index_of(p.direction)];
    const auto& cf = counts[index_of(opposite(p.direction))];
    return {own.integrate(p.t_plus, p.t_minus) / dt, cf.integrate(p.t_plus, p.t_minus) / dt};
}

struct Densities {
    double rho = 0.0;
    double rho_cf = 0.0;
};

// Section length in body lengths doubles as the site count.
inline Densities dimensionless_densities(double own, double counter, double section_sites) {
    if (!(section_sites > 0.0)) throw invalid_argument("section length must be positive");
    return {own / section_sites, counter / section_sites};
}

enum class FlowClass { uni, bi };

inline std::string_view to_string(FlowClass c) { return c == FlowClass::uni ? "uni" : "bi"; }

inline constexpr double default_counterflow_threshold = 1.0;

// Mean counterflow count below the threshold is unidirectional; a value
// equal to the threshold counts as bidirectional.
inline FlowClass classify_counterflow(double mean_counter_count, double threshold = default_counterflow_threshold) {
    return mean_counter_count < threshold ? FlowClass::uni : FlowClass::bi;
}

struct AntMetrics {
    std::size_t n = 0;
    Direction direction = Direction::right;
    double t_plus = 0.0;
    double t_minus = 0.0;
    double travel_time = 0.0;
    double velocity = 0.0;
    std::optional<double> dt_enter;
    std::optional<double> dt_leave;
    std::optional<double> dd;
    double N_own = 0.0;
    double N_cf = 0.0;
    double rho = 0.0;
    double rho_cf = 0.0;
    FlowClass cls = FlowClass::uni;
};

// Full per-ant pipeline on already paired passages.
inline std::vector<AntMetrics> compute_metrics(const EventLog& log, const std::vector<PairedPassage>& pairs,
                                               double threshold = default_counterflow_threshold) {
    const auto counts = instantaneous_counts(log);
    const auto tv = travel_time_velocity(pairs, log.section_length);
    std::vector<double> v;
    for (const auto& x : tv) v.push_back(x.velocity);
    const auto dd = distance_headways(pairs, v);

    std::vector<AntMetrics> out(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto& m = out[i];
        m.n = pairs[i].n;
        m.direction = pairs[i].direction;
        m.t_plus = pairs[i].t_plus;
        m.t_minus = pairs[i].t_minus;
        m.travel_time = tv[i].travel_time;
        m.velocity = tv[i].velocity;
        if (dd[i]) m.dd = dd[i]->dd;
        const auto avg = averaged_counts(pairs[i], counts);
        m.N_own = avg.own;
        m.N_cf = avg.counter;
        const auto rho = dimensionless_densities(avg.own, avg.counter, log.section_length);
        m.rho = rho.rho;
        m.rho_cf = rho.rho_cf;
        m.cls = classify_counterflow(avg.counter, threshold);
    }
    for (const auto& h : time_headways(pairs, Boundary::enter)) out[h.index].dt_enter = h.dt;
    for (const auto& h : time_headways(pairs, Boundary::leave)) out[h.index].dt_leave = h.dt;
    return out;
}

inline constexpr const char* metrics_csv_header =
    "n,direction,t_plus,t_minus,travel_time,velocity,dt_enter,dt_leave,dd,N_own,N_cf,rho,rho_cf,class";

namespace detail {
inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}
inline std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : std::string{}; }
} // namespace detail

// Missing values (first ant of a direction) are left empty.
inline void write_metrics_csv(std::ostream& os, const std::vector<AntMetrics>& rows) {
    os << metrics_csv_header << '\n';
    using detail::num;
    using detail::opt_num;
    for (const auto& m : rows) {
        os << m.n << ',' << to_string(m.direction) << ',' << num(m.t_plus) << ',' << num(m.t_minus) << ','
           << num(m.travel_time) << ',' << num(m.velocity) << ',' << opt_num(m.dt_enter) << ','
           << opt_num(m.dt_leave) << ',' << opt_num(m.dd) << ',' << num(m.N_own) << ',' << num(m.N_cf) << ','
           << num(m.rho) << ',' << num(m.rho_cf) << ',' << to_string(m.cls) << '\n';
    }
}

} // namespace antflow::empirics
