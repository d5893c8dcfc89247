#pragma once

// Command-line front end: simulate, sweep, analyze, validate.
//
// Exit codes: 0 ok, 1 I/O failure, 2 configuration error, 3 event-log
// parse error, 4 validation failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"

#include "antflow/empirics/event_log.hpp"
#include "antflow/empirics/fits.hpp"
#include "antflow/empirics/passages.hpp"
#include "antflow/fundamental_diagram.hpp"
#include "antflow/raster.hpp"
#include "antflow/section_recorder.hpp"

namespace antflow::cli {

enum ExitCode : int { ok = 0, io_failure = 1, config_error = 2, parse_failure = 3, validation_failure = 4 };

struct RunConfig {
    std::string mode = "uni";
    std::size_t L = 1000;
    std::vector<std::string> rho;   // values or start:stop:step ranges
    std::vector<std::string> rho_R;
    std::vector<std::string> rho_L;
    double q = 0.2;
    double Q = 0.9;
    double K = 0.1;
    std::vector<std::string> f;
    std::uint64_t seed = 0;
    std::optional<std::size_t> warmup; // default 10 L
    std::size_t sweeps = 10000;
    std::size_t replicas = 1;
    std::size_t workers = 1;
    std::size_t record_interval = 1;
    std::string out;
    bool resume = false;
    bool raster_csv = false;
    std::size_t gap_threshold = default_gap_threshold;
    std::size_t section_start = 0;
    std::size_t section_length = 0; // 0: no event log

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct AnalyzeConfig {
    std::string events;
    double section_length = 0.0;
    std::string out = ".";
    double bin_width = 0.1;
    double threshold = empirics::default_counterflow_threshold;
};

struct ValidateConfig {
    bool quick = false;
    bool inject_rate_error = false;
    std::size_t workers = 1;
    std::uint64_t seed = 0;
};

// A configuration problem tied to one option.
struct ConfigError {
    std::string key;
    std::string message;
};

namespace detail {

inline std::vector<double> expand_values(const std::vector<std::string>& specs, const std::string& key) {
    std::vector<double> out;
    for (const auto& s : specs) {
        std::vector<double> parts;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ':')) {
            try {
                std::size_t used = 0;
                parts.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::logic_error&) {
                throw ConfigError{key, "cannot parse '" + s + "'"};
            }
        }
        if (parts.size() == 1) {
            out.push_back(parts[0]);
        } else if (parts.size() == 3 && parts[2] > 0 && parts[1] >= parts[0]) {
            const auto n = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
            for (std::size_t k = 0; k <= n; ++k)
                out.push_back(std::round((parts[0] + static_cast<double>(k) * parts[2]) * 1e12) / 1e12);
        } else {
            throw ConfigError{key, "expected a value or start:stop:step, got '" + s + "'"};
        }
    }
    for (double v : out)
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError{key, "value " + format_g6(v) + " outside [0, 1]"};
    return out;
}

inline Mode checked_mode(const RunConfig& c) {
    const auto m = parse_mode(c.mode);
    if (!m) throw ConfigError{"mode", "must be tasep, uni or bi"};
    return *m;
}

inline ModelParams checked_params(const RunConfig& c, Mode mode, double f) {
    ModelParams p{c.L, c.q, c.Q, c.K, f};
    try {
        validate(p, mode);
    } catch (const invalid_rates& e) {
        const std::string what = e.what();
        std::string key = "q";
        if (what.rfind("L ", 0) == 0) key = "L";
        else if (what.rfind("f ", 0) == 0) key = "f";
        else if (what.rfind("Q ", 0) == 0) key = "Q";
        else if (what.rfind("K ", 0) == 0 || what.find("K <") != std::string::npos) key = "K";
        throw ConfigError{key, what};
    }
    return p;
}

// Grid cells in (f, rho_L, rho_R) order. uni/tasep use --rho; bi uses the
// --rho-R x --rho-L product, or --rho for equal densities.
inline std::vector<GridCell> grid_cells(const RunConfig& c, Mode mode) {
    const auto fs = expand_values(c.f.empty() ? std::vector<std::string>{"0"} : c.f, "f");
    std::vector<std::pair<double, double>> rl; // (rho_R, rho_L)
    if (mode == Mode::bi) {
        if (!c.rho.empty()) {
            if (!c.rho_R.empty() || !c.rho_L.empty())
                throw ConfigError{"rho", "use either --rho or --rho-R/--rho-L"};
            for (double r : expand_values(c.rho, "rho")) rl.emplace_back(r, r);
        } else {
            const auto rs = expand_values(c.rho_R, "rho-R");
            const auto ls = expand_values(c.rho_L, "rho-L");
            for (double r : rs)
                for (double l : ls) rl.emplace_back(r, l);
        }
    } else {
        if (!c.rho_L.empty()) throw ConfigError{"rho-L", "left-movers need --mode bi"};
        auto rs = expand_values(c.rho, "rho");
        for (double r : expand_values(c.rho_R, "rho-R")) rs.push_back(r);
        for (double r : rs) rl.emplace_back(r, 0.0);
    }
    std::vector<GridCell> cells;
    for (double f : fs) {
        checked_params(c, mode, f);
        for (auto [r, l] : rl) cells.push_back({r, l, f});
    }
    std::stable_sort(cells.begin(), cells.end(), [](const GridCell& a, const GridCell& b) {
        return std::tie(a.f, a.rho_L, a.rho_R) < std::tie(b.f, b.rho_L, b.rho_R);
    });
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
}

inline std::size_t warmup_of(const RunConfig& c) { return c.warmup.value_or(10 * c.L); }

struct IoError {
    std::string message;
};

inline std::ofstream open_out(const std::filesystem::path& p, bool binary = false) {
    std::ofstream os(p, binary ? std::ios::binary : std::ios::out);
    if (!os) throw IoError{"cannot write " + p.string()};
    return os;
}

inline void ensure_dir(const std::filesystem::path& p) {
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec || !std::filesystem::is_directory(p)) throw IoError{"cannot create directory " + p.string()};
}

} // namespace detail

// ---- simulate ---------------------------------------------------------------

// One run. Writes raster.pgm (and raster.csv with --raster-csv),
// summary.csv (one FdTable row) and, with --section-length, events.csv plus
// the ground-truth passages.csv.
inline int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        const Mode mode = detail::checked_mode(c);
        const auto cells = detail::grid_cells(c, mode);
        if (cells.size() != 1) throw ConfigError{"rho", "simulate takes exactly one density point and one f"};
        if (c.section_length >= c.L) throw ConfigError{"section-length", "must be smaller than L"};
        if (c.section_start >= c.L) throw ConfigError{"section-start", "must be a lattice site"};
        if (c.gap_threshold < 1) throw ConfigError{"gap-threshold", "must be at least 1"};
        const GridCell cell = cells.front();
        const ModelParams p = detail::checked_params(c, mode, cell.f);
        const std::size_t nr = ants_for_density(cell.rho_R, c.L);
        const std::size_t nl = ants_for_density(cell.rho_L, c.L);

        TrailState state(p, nr, nl, replica_seed(c.seed, mode, nr, nl, cell.f, 0), mode);
        std::optional<SectionRecorder> rec;
        if (c.section_length > 0) rec.emplace(c.L, c.section_start, c.section_length);
        Trajectory traj;
        if (rec) traj = run(state, detail::warmup_of(c), c.sweeps, c.record_interval, *rec);
        else traj = run(state, detail::warmup_of(c), c.sweeps, c.record_interval);

        const std::filesystem::path dir(c.out.empty() ? "antflow_out" : c.out);
        detail::ensure_dir(dir);
        std::optional<FdPoint> point;
        if (!traj.stats.empty()) {
            point = stationary_averages(traj);
            auto os = detail::open_out(dir / "summary.csv");
            write_fd_csv(os, {*point});
        }
        if (!traj.snapshots.empty()) {
            const auto raster = spacetime_raster(traj);
            auto pgm = detail::open_out(dir / "raster.pgm", true);
            write_pgm(pgm, raster);
            if (c.raster_csv) {
                auto csv = detail::open_out(dir / "raster.csv");
                write_raster_csv(csv, raster);
            }
        }
        if (rec) {
            auto ev = detail::open_out(dir / "events.csv");
            ev << "t,direction,event\n";
            char buf[40];
            for (const auto& e : rec->log().events) {
                std::snprintf(buf, sizeof buf, "%.17g", e.t);
                ev << buf << ',' << to_string(e.direction) << ','
                   << (e.kind == empirics::EventKind::enter ? "enter" : "leave") << '\n';
            }
            auto ps = detail::open_out(dir / "passages.csv");
            ps << "n,direction,t_plus,t_minus\n";
            for (const auto& pp : rec->completed()) {
                ps << pp.n << ',' << to_string(pp.direction) << ',';
                std::snprintf(buf, sizeof buf, "%.17g", pp.t_plus);
                ps << buf << ',';
                std::snprintf(buf, sizeof buf, "%.17g", pp.t_minus);
                ps << buf << '\n';
            }
        }

        out << "mode " << to_string(mode) << "  L " << c.L << "  N_R " << nr << "  N_L " << nl << "  f "
            << format_g6(cell.f) << '\n';
        if (point)
            out << "V_R " << format_g6(point->V_R) << "  V_L " << format_g6(point->V_L) << "  F_R "
                << format_g6(point->F_R) << "  F_L " << format_g6(point->F_L) << '\n';
        if (!traj.snapshots.empty()) {
            for (Direction d : {Direction::right, Direction::left}) {
                if (state.count(d) == 0) continue;
                const auto cs = cluster_stats(traj.snapshots.back(), d, c.gap_threshold);
                out << "clusters " << to_string(d) << ' ' << cs.cluster_count << "  largest fraction "
                    << format_g6(cs.largest_cluster_fraction) << '\n';
            }
        }
        return ok;
    } catch (const ConfigError& e) {
        err << "config error [" << e.key << "]: " << e.message << '\n';
        return config_error;
    } catch (const detail::IoError& e) {
        err << "io error: " << e.message << '\n';
        return io_failure;
    } catch (const antflow::error& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    }
}

// ---- sweep ------------------------------------------------------------------

namespace detail {
inline std::string cell_key(double rho_R, double rho_L, double f) {
    return format_g6(rho_R) + ',' + format_g6(rho_L) + ',' + format_g6(f);
}

inline void write_sorted(const std::filesystem::path& path, std::vector<FdPoint> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const FdPoint& a, const FdPoint& b) {
        return std::tie(a.f, a.rho_L, a.rho_R) < std::tie(b.f, b.rho_L, b.rho_R);
    });
    const auto tmp = path.string() + ".tmp";
    {
        auto os = open_out(tmp);
        write_fd_csv(os, rows);
        if (!os) throw IoError{"write failed for " + tmp};
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError{"cannot replace " + path.string()};
}
} // namespace detail

// Fundamental-diagram grid. Rows are sorted by (f, rho_L, rho_R) and the
// file is rewritten after every batch of cells, so an interrupted sweep can
// be continued with --resume.
inline int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        const Mode mode = detail::checked_mode(c);
        auto cells = detail::grid_cells(c, mode);
        if (cells.empty()) throw ConfigError{"rho", "the density grid is empty"};
        if (c.replicas < 1) throw ConfigError{"replicas", "must be at least 1"};
        const std::filesystem::path path(c.out.empty() ? "fd_table.csv" : c.out);
        if (path.has_parent_path()) detail::ensure_dir(path.parent_path());

        std::vector<FdPoint> rows;
        std::set<std::string> done;
        if (c.resume && std::filesystem::exists(path)) {
            std::ifstream is(path);
            if (!is) throw detail::IoError{"cannot read " + path.string()};
            try {
                rows = read_fd_csv(is);
            } catch (const parse_error& e) {
                throw detail::IoError{"existing table is unreadable: " + std::string(e.what())};
            }
            for (const auto& r : rows) done.insert(detail::cell_key(r.rho_R, r.rho_L, r.f));
        }
        std::vector<GridCell> pending;
        for (const auto& cell : cells) {
            const double rr = double(ants_for_density(cell.rho_R, c.L)) / double(c.L);
            const double rl = double(ants_for_density(cell.rho_L, c.L)) / double(c.L);
            if (!done.count(detail::cell_key(rr, rl, cell.f))) pending.push_back(cell);
        }
        out << cells.size() << " cells, " << cells.size() - pending.size() << " already done\n";

        SweepConfig sc;
        sc.mode = mode;
        sc.params = detail::checked_params(c, mode, 0.0);
        sc.replicas = c.replicas;
        sc.master_seed = c.seed;
        sc.warmup_sweeps = detail::warmup_of(c);
        sc.measure_sweeps = c.sweeps;
        sc.workers = std::max<std::size_t>(1, c.workers);
        const std::size_t batch = sc.workers;
        if (pending.empty()) detail::write_sorted(path, rows);
        for (std::size_t b = 0; b < pending.size(); b += batch) {
            sc.cells.assign(pending.begin() + static_cast<std::ptrdiff_t>(b),
                            pending.begin() + static_cast<std::ptrdiff_t>(std::min(pending.size(), b + batch)));
            const auto table = fundamental_diagram_sweep(sc);
            // Round-trip through the printed form so resumed and fresh
            // tables compare equal.
            for (const auto& pnt : table.points) {
                std::istringstream is(std::string(fd_csv_header) + "\n" + fd_csv_row(pnt) + "\n");
                rows.push_back(read_fd_csv(is).front());
            }
            detail::write_sorted(path, rows);
        }
        out << "wrote " << rows.size() << " rows to " << path.string() << '\n';
        return ok;
    } catch (const ConfigError& e) {
        err << "config error [" << e.key << "]: " << e.message << '\n';
        return config_error;
    } catch (const detail::IoError& e) {
        err << "io error: " << e.message << '\n';
        return io_failure;
    } catch (const antflow::error& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    }
}

// ---- analyze ------------------------------------------------------------------

inline int cmd_analyze(const AnalyzeConfig& c, std::ostream& out, std::ostream& err) {
    using namespace empirics;
    try {
        if (!(c.section_length > 0)) throw ConfigError{"section-length", "must be positive"};
        if (!(c.bin_width > 0)) throw ConfigError{"bin-width", "must be positive"};
        std::ifstream is(c.events);
        if (!is) throw detail::IoError{"cannot read " + c.events};
        LoadResult loaded;
        try {
            loaded = load_events(is, c.section_length);
        } catch (const parse_error& e) {
            err << "parse error in " << c.events << ": " << e.what() << '\n';
            return parse_failure;
        } catch (const negative_count& e) {
            err << "parse error in " << c.events << ": " << e.what() << '\n';
            return parse_failure;
        }
        for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
        const EventLog& log = loaded.log;
        const auto pairing = pair_passages(log);
        std::vector<AntMetrics> metrics;
        try {
            metrics = compute_metrics(log, pairing.pairs, c.threshold);
        } catch (const non_positive_travel_time& e) {
            err << "parse error in " << c.events << ": " << e.what() << '\n';
            return parse_failure;
        }

        const std::filesystem::path dir(c.out);
        detail::ensure_dir(dir);
        {
            auto os = detail::open_out(dir / "metrics.csv");
            write_metrics_csv(os, metrics);
        }
        {
            auto os = detail::open_out(dir / "uturn.csv");
            os << "direction,entered,unmatched,rate\n";
            for (Direction d : {Direction::right, Direction::left})
                os << to_string(d) << ',' << pairing.report.entered[index_of(d)] << ','
                   << pairing.report.unmatched[index_of(d)] << ',' << format_g6(pairing.report.rate(d)) << '\n';
        }

        auto hist = [&](const std::string& name, const std::vector<double>& xs) {
            if (xs.empty()) return;
            auto os = detail::open_out(dir / name);
            write_histogram_csv(os, distribution_summary(xs, c.bin_width));
        };
        out << "events " << log.events.size() << ", paired ants " << metrics.size() << '\n';
        for (Direction d : {Direction::right, Direction::left}) {
            std::vector<double> v_all, v_uni, v_bi, headways, gaps;
            for (const auto& m : metrics) {
                if (m.direction != d) continue;
                v_all.push_back(m.velocity);
                (m.cls == FlowClass::uni ? v_uni : v_bi).push_back(m.velocity);
                if (m.dt_enter && *m.dt_enter > 0) headways.push_back(*m.dt_enter);
                if (m.dd && *m.dd > 0) gaps.push_back(*m.dd);
            }
            const std::string tag(to_string(d));
            hist("velocity_hist_" + tag + ".csv", v_all);
            hist("time_headway_hist_" + tag + ".csv", headways);
            hist("distance_headway_hist_" + tag + ".csv", gaps);

            auto mean = [](const std::vector<double>& xs) {
                return xs.empty() ? std::string("n/a") : format_g6(distribution_summary(xs, 1.0).mean);
            };
            out << tag << ": entered " << pairing.report.entered[index_of(d)] << ", unmatched "
                << pairing.report.unmatched[index_of(d)] << " (rate " << format_g6(pairing.report.rate(d)) << ")\n";
            out << tag << ": mean velocity uni " << mean(v_uni) << " (" << v_uni.size() << "), bi " << mean(v_bi)
                << " (" << v_bi.size() << ")\n";
            if (headways.size() >= 2)
                out << tag << ": time headway exponential rate " << format_g6(fit_negative_exponential(headways))
                    << '\n';
            if (gaps.size() >= 2) {
                const auto ln = fit_lognormal(gaps);
                out << tag << ": distance headway lognormal mu " << format_g6(ln.mu) << " sigma "
                    << format_g6(ln.sigma) << '\n';
            }
        }
        return ok;
    } catch (const ConfigError& e) {
        err << "config error [" << e.key << "]: " << e.message << '\n';
        return config_error;
    } catch (const detail::IoError& e) {
        err << "io error: " << e.message << '\n';
        return io_failure;
    }
}

// ---- validate -----------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Built-in self checks against closed forms: TASEP velocity, the f = 0 and
// f = 1 reductions, F = rho V, and the mark survival law. --quick uses a
// smaller lattice and fewer sweeps with wider tolerances.
inline std::vector<CheckResult> run_validation(const ValidateConfig& c) {
    std::vector<CheckResult> results;
    const std::size_t L = c.quick ? 200 : 1000;
    const std::size_t warm = c.quick ? 400 : 1000;
    const std::size_t meas = c.quick ? 1500 : 5000;
    const std::size_t reps = 4;
    const double floor_tol = c.quick ? 0.03 : 0.01;
    const double sigmas = c.quick ? 4.0 : 3.0;
    // The negative-control hook perturbs the oracle's rate.
    const double oracle_scale = c.inject_rate_error ? 1.15 : 1.0;

    auto velocity_check = [&](const std::string& name, Mode mode, ModelParams p, double rate) {
        SweepConfig sc;
        sc.mode = mode;
        sc.params = p;
        for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) sc.cells.push_back({r, 0.0, p.f});
        sc.replicas = reps;
        sc.master_seed = c.seed;
        sc.warmup_sweeps = warm;
        sc.measure_sweeps = meas;
        sc.workers = c.workers;
        const auto table = fundamental_diagram_sweep(sc);
        CheckResult res{name, true, {}};
        double worst = 0.0;
        for (const auto& pt : table.points) {
            const double expected = tasep_exact(std::min(1.0, rate * oracle_scale), pt.rho_R).V;
            const double dev = std::abs(pt.V_R - expected);
            const double tol = std::max(floor_tol, sigmas * pt.stderr_V_R);
            worst = std::max(worst, dev / tol);
            if (dev > tol) res.passed = false;
        }
        res.detail = "worst deviation / tolerance = " + format_g6(worst);
        results.push_back(res);
        return table;
    };

    const auto tasep = velocity_check("tasep exact velocity (p=0.9)", Mode::tasep, {L, 0.9, 0.9, 0.0, 0.0}, 0.9);
    velocity_check("f=0 reduces to TASEP with rate Q", Mode::uni, {L, 0.2, 0.9, 0.0, 0.0}, 0.9);
    velocity_check("f=1 reduces to TASEP with rate q", Mode::uni, {L, 0.2, 0.9, 0.0, 1.0}, 0.2);

    {
        CheckResult res{"estimator identity F = rho V", true, {}};
        for (const auto& pt : tasep.points)
            if (pt.F_R != pt.rho_R * pt.V_R || pt.F_tot != pt.F_R + pt.F_L) res.passed = false;
        auto s = new_state({97, 0.2, 0.9, 0.1, 0.05}, 31, 17, c.seed, Mode::bi);
        const auto tr = run(s, 10, 200);
        const auto pt = stationary_averages(tr);
        std::uint64_t hops = 0;
        for (const auto& st : tr.stats) hops += st.hops_R;
        const double direct = double(hops) / (97.0 * 200.0);
        if (std::abs(pt.F_R - direct) > 1e-12 * direct || pt.F_R != pt.rho_R * pt.V_R) res.passed = false;
        res.detail = "F_R " + format_g6(pt.F_R) + " vs hops/(L T) " + format_g6(direct);
        results.push_back(res);
    }

    {
        const int n = c.quick ? 20000 : 100000;
        CheckResult res{"mark survival (1-f)^dt", true, {}};
        double worst = 0.0;
        for (double f : {0.02, 0.2}) {
            std::array<int, 3> alive{};
            const std::array<double, 3> dts{1.0, 5.0, 10.0};
            for (int k = 0; k < n; ++k) {
                auto s = TrailState::with_ants({2, 0.2, 0.9, 0.0, f}, Mode::uni, {0}, {},
                                               derive_seed(c.seed ^ 0x5eed, static_cast<std::uint64_t>(k)));
                std::optional<std::size_t> vacated;
                while (!vacated)
                    s.elementary_update([&](const UpdateEvent& e) {
                        if (e.outcome == Outcome::hopped) vacated = e.site;
                    });
                const double tv = static_cast<double>(s.mark(*vacated).vacated_at) / 2.0;
                for (std::size_t j = 0; j < dts.size(); ++j) alive[j] += s.mark_present(*vacated, tv + dts[j]) ? 1 : 0;
            }
            for (std::size_t j = 0; j < dts.size(); ++j) {
                const double p = std::pow(1.0 - f * oracle_scale, dts[j]);
                const double sigma = std::sqrt(p * (1 - p) / n);
                const double dev = std::abs(alive[j] / double(n) - p);
                worst = std::max(worst, dev / (3 * sigma));
                if (dev > 3 * sigma) res.passed = false;
            }
        }
        res.detail = "worst deviation / 3 sigma = " + format_g6(worst);
        results.push_back(res);
    }
    return results;
}

inline int cmd_validate(const ValidateConfig& c, std::ostream& out) {
    const auto results = run_validation(c);
    bool all = true;
    for (const auto& r : results) {
        out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
        all = all && r.passed;
    }
    out << (all ? "all checks passed\n" : "validation failed\n");
    return all ? ok : validation_failure;
}

// ---- argument parsing -----------------------------------------------------------

inline void add_model_options(CLI::App& app, RunConfig& c) {
    app.add_option("--mode", c.mode, "tasep | uni | bi")->capture_default_str();
    app.add_option("--L", c.L, "lattice length (sites)")->capture_default_str();
    app.add_option("--rho", c.rho, "density (repeatable; start:stop:step allowed)");
    app.add_option("--rho-R", c.rho_R, "right-mover density (repeatable)");
    app.add_option("--rho-L", c.rho_L, "left-mover density (repeatable)");
    app.add_option("--q", c.q, "hop probability onto an unmarked site (TASEP rate in tasep mode)")
        ->capture_default_str();
    app.add_option("--Q", c.Q, "hop probability onto a marked site")->capture_default_str();
    app.add_option("--K", c.K, "hop probability against an opposing ant")->capture_default_str();
    app.add_option("--f", c.f, "evaporation probability per sweep (repeatable)");
    app.add_option("--seed", c.seed, "master seed")->envname("ANTFLOW_SEED")->capture_default_str();
    app.add_option("--warmup", c.warmup, "warmup sweeps (default 10 L)");
    app.add_option("--sweeps", c.sweeps, "measurement sweeps")->capture_default_str();
    app.add_option("--out", c.out, "output directory (simulate, default antflow_out) or file (sweep, default fd_table.csv)");
    app.set_config("--config", "", "key = value configuration file; flags override it");
}

inline void add_simulate_options(CLI::App& app, RunConfig& c) {
    add_model_options(app, c);
    app.add_option("--record-interval", c.record_interval, "snapshot every n sweeps (0: none)")
        ->capture_default_str();
    app.add_flag("--raster-csv", c.raster_csv, "also write raster.csv");
    app.add_option("--gap-threshold", c.gap_threshold, "cluster gap threshold (sites)")->capture_default_str();
    app.add_option("--section-start", c.section_start, "first site of the observed section")->capture_default_str();
    app.add_option("--section-length", c.section_length, "observed section length; writes events.csv when > 0")
        ->capture_default_str();
}

inline void add_sweep_options(CLI::App& app, RunConfig& c) {
    add_model_options(app, c);
    app.add_option("--replicas", c.replicas, "independent replicas per cell")->capture_default_str();
    app.add_option("--workers", c.workers, "worker threads")->capture_default_str();
    app.add_flag("--resume", c.resume, "skip cells already present in --out");
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"antflow: ant-trail traffic simulator and cumulative-counting analysis"};
    app.require_subcommand(1);

    RunConfig sim_cfg, sweep_cfg;
    AnalyzeConfig an_cfg;
    ValidateConfig val_cfg;

    auto* sim = app.add_subcommand("simulate", "run one simulation and export raster and summary");
    add_simulate_options(*sim, sim_cfg);
    auto* sweep = app.add_subcommand("sweep", "fundamental-diagram grid to CSV");
    add_sweep_options(*sweep, sweep_cfg);

    auto* an = app.add_subcommand("analyze", "cumulative-counting analysis of an event log");
    an->add_option("events", an_cfg.events, "event CSV (t,direction,event)")->required();
    an->add_option("--section-length", an_cfg.section_length, "section length in body lengths")->required();
    an->add_option("--out", an_cfg.out, "output directory")->capture_default_str();
    an->add_option("--bin-width", an_cfg.bin_width, "histogram bin width")->capture_default_str();
    an->add_option("--threshold", an_cfg.threshold, "counterflow count separating uni from bi")
        ->capture_default_str();

    auto* val = app.add_subcommand("validate", "built-in TASEP and limit-case checks");
    val->add_flag("--quick", val_cfg.quick, "reduced sweep counts and wider tolerances");
    val->add_option("--workers", val_cfg.workers, "worker threads")->capture_default_str();
    val->add_option("--seed", val_cfg.seed, "master seed")->envname("ANTFLOW_SEED");
    val->add_flag("--inject-rate-error", val_cfg.inject_rate_error, "negative control: perturb the oracle")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    }

    if (sim->parsed()) return cmd_simulate(sim_cfg, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_cfg, out, err);
    if (an->parsed()) return cmd_analyze(an_cfg, out, err);
    return cmd_validate(val_cfg, out);
}

} // namespace antflow::cli
