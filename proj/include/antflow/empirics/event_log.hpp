#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "antflow/errors.hpp"
#include "antflow/model.hpp"

namespace antflow::empirics {

enum class EventKind { enter, leave };

struct EventRecord {
    double t = 0.0; // seconds
    Direction direction = Direction::right;
    EventKind kind = EventKind::enter;
    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct EventLog {
    std::vector<EventRecord> events; // sorted by t
    double section_length = 1.0;     // body lengths
};

struct LoadResult {
    EventLog log;
    std::vector<std::string> warnings;
};

namespace detail {
inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out(1);
    for (char c : line) {
        if (c == ',') out.emplace_back();
        else out.back() += c;
    }
    return out;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}
} // namespace detail

// Checks that the per-direction count never drops below zero. Line numbers
// in errors refer to 1-based data rows counted from the header (line 1).
inline void check_counts(const std::vector<EventRecord>& events, const std::vector<std::size_t>& lines = {}) {
    std::array<long long, 2> n{0, 0};
    for (std::size_t i = 0; i < events.size(); ++i) {
        auto& c = n[index_of(events[i].direction)];
        c += events[i].kind == EventKind::enter ? 1 : -1;
        if (c < 0)
            throw negative_count(lines.empty() ? i + 2 : lines[i],
                                 std::string("leave without a matching enter for direction ") +
                                     std::string(to_string(events[i].direction)));
    }
}

// Parses the `t,direction,event` CSV. Out-of-order rows are stably sorted
// by time and reported as a warning.
inline LoadResult load_events(std::istream& is, double section_length) {
    if (!(section_length > 0.0)) throw invalid_argument("section length must be positive");
    LoadResult res;
    res.log.section_length = section_length;
    std::vector<std::size_t> lines;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!header_seen) {
            if (lineno == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
            if (detail::trim(line) != "t,direction,event") throw parse_error(lineno, "expected header t,direction,event");
            header_seen = true;
            continue;
        }
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_csv(line);
        if (f.size() != 3) throw parse_error(lineno, "expected 3 fields");
        EventRecord rec;
        const std::string ts = detail::trim(f[0]);
        std::size_t used = 0;
        try {
            rec.t = std::stod(ts, &used);
        } catch (const std::logic_error&) {
            throw parse_error(lineno, "malformed time '" + ts + "'");
        }
        if (used != ts.size() || !std::isfinite(rec.t) || rec.t < 0.0)
            throw parse_error(lineno, "time must be a finite non-negative number");
        const auto dir = parse_direction(detail::trim(f[1]));
        if (!dir) throw parse_error(lineno, "direction must be R or L");
        rec.direction = *dir;
        const std::string kind = detail::trim(f[2]);
        if (kind == "enter") rec.kind = EventKind::enter;
        else if (kind == "leave") rec.kind = EventKind::leave;
        else throw parse_error(lineno, "event must be enter or leave");
        res.log.events.push_back(rec);
        lines.push_back(lineno);
    }
    if (!header_seen) throw parse_error(1, "missing header");

    auto& ev = res.log.events;
    const bool sorted = std::is_sorted(ev.begin(), ev.end(), [](auto& a, auto& b) { return a.t < b.t; });
    if (!sorted) {
        std::vector<std::size_t> order(ev.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ev[a].t < ev[b].t; });
        std::vector<EventRecord> sorted_ev;
        std::vector<std::size_t> sorted_lines;
        for (auto i : order) {
            sorted_ev.push_back(ev[i]);
            sorted_lines.push_back(lines[i]);
        }
        ev = std::move(sorted_ev);
        lines = std::move(sorted_lines);
        res.warnings.push_back("input was not sorted by time; rows were reordered");
    }
    check_counts(ev, lines);
    return res;
}

// Piecewise-constant N(t): values[k] holds on [times[k], times[k+1]) and
// the function is 0 before times[0]. Several events at one instant collapse
// into a single breakpoint carrying the value after all of them.
class StepFunction {
public:
    void push(double t, int value) {
        if (!times_.empty() && times_.back() == t) values_.back() = value;
        else {
            times_.push_back(t);
            values_.push_back(value);
        }
    }

    int operator()(double t) const {
        const auto it = std::upper_bound(times_.begin(), times_.end(), t);
        if (it == times_.begin()) return 0;
        return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
    }

    // Integral over [a, b).
    double integrate(double a, double b) const {
        if (!(b > a)) return 0.0;
        double sum = 0.0;
        double t = a;
        auto it = std::upper_bound(times_.begin(), times_.end(), a);
        int v = it == times_.begin() ? 0 : values_[static_cast<std::size_t>(it - times_.begin()) - 1];
        for (; it != times_.end() && *it < b; ++it) {
            sum += v * (*it - t);
            t = *it;
            v = values_[static_cast<std::size_t>(it - times_.begin())];
        }
        return sum + v * (b - t);
    }

    const std::vector<double>& times() const { return times_; }
    const std::vector<int>& values() const { return values_; }

private:
    std::vector<double> times_;
    std::vector<int> values_;
};

// N^j(t) = n_+^j(t) - n_-^j(t) for both directions, indexed by index_of(d).
inline std::array<StepFunction, 2> instantaneous_counts(const EventLog& log) {
    std::array<StepFunction, 2> out;
    std::array<int, 2> n{0, 0};
    for (const auto& e : log.events) {
        const auto k = index_of(e.direction);
        n[k] += e.kind == EventKind::enter ? 1 : -1;
        out[k].push(e.t, n[k]);
    }
    return out;
}

} // namespace antflow::empirics
