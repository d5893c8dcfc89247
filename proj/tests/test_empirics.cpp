#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "antflow/empirics/event_log.hpp"
#include "antflow/empirics/passages.hpp"
#include "antflow/rng.hpp"
#include "antflow/section_recorder.hpp"
#include "antflow/trajectory.hpp"

using namespace antflow;
using namespace antflow::empirics;
using Catch::Approx;

namespace {

LoadResult load(const std::string& text, double section = 10.0) {
    std::istringstream is(text);
    return load_events(is, section);
}

// Synthetic overtaking-free traffic. All times are multiples of 1/64 so
// that a midpoint rule on a 1/128 grid integrates step functions exactly.
struct Synthetic {
    EventLog log;
    std::vector<PairedPassage> truth; // completed passages, R then L
};

Synthetic make_log(std::uint64_t seed, std::size_t n_right, std::size_t n_left, std::size_t drop_last = 0) {
    Rng rng(seed);
    Synthetic s;
    s.log.section_length = 12.0;
    auto tick = [](double x) { return std::round(x * 64.0) / 64.0; };
    for (Direction d : {Direction::right, Direction::left}) {
        const std::size_t n = d == Direction::right ? n_right : n_left;
        double t_in = tick(rng.uniform() * 5.0), last_out = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            t_in += tick(0.25 + 4.0 * rng.uniform());
            double t_out = std::max(t_in + tick(1.0 + 10.0 * rng.uniform()), last_out + 1.0 / 64.0);
            last_out = t_out;
            s.log.events.push_back({t_in, d, EventKind::enter});
            if (k + drop_last < n) {
                s.log.events.push_back({t_out, d, EventKind::leave});
                s.truth.push_back({k + 1, d, t_in, t_out});
            }
        }
    }
    std::stable_sort(s.log.events.begin(), s.log.events.end(), [](auto& a, auto& b) { return a.t < b.t; });
    return s;
}

// Independent count: ants of direction d inside at time t, straight from
// the raw events.
int brute_count(const EventLog& log, Direction d, double t) {
    int n = 0;
    for (const auto& e : log.events)
        if (e.direction == d && e.t <= t) n += e.kind == EventKind::enter ? 1 : -1;
    return n;
}

double brute_integral(const EventLog& log, Direction d, double a, double b) {
    const double h = 1.0 / 128.0;
    double sum = 0.0;
    for (double t = a + h / 2; t < b; t += h) sum += brute_count(log, d, t) * h;
    return sum;
}

} // namespace

TEST_CASE("load_events", "[empirics][io]") {
    SECTION("header only") {
        const auto r = load("t,direction,event\n");
        CHECK(r.log.events.empty());
        CHECK(r.warnings.empty());
    }
    SECTION("one passage") {
        const auto r = load("t,direction,event\n1.0,R,enter\n2.0,R,leave\n");
        REQUIRE(r.log.events.size() == 2);
        CHECK(r.log.events[0] == EventRecord{1.0, Direction::right, EventKind::enter});
        const auto counts = instantaneous_counts(r.log);
        CHECK(counts[0](1.5) == 1);
        CHECK(r.log.section_length == 10.0);
    }
    SECTION("leave before enter") {
        try {
            load("t,direction,event\n1.0,R,leave\n");
            FAIL("expected negative_count");
        } catch (const negative_count& e) {
            CHECK(e.line() == 2);
        }
    }
    SECTION("malformed rows report their line") {
        for (const auto& [text, line] : std::vector<std::pair<std::string, std::size_t>>{
                 {"t,direction,event\n1.0,R,enter\n2.0,X,leave\n", 3},
                 {"t,direction,event\nabc,R,enter\n", 2},
                 {"t,direction,event\n1.0,R\n", 2},
                 {"t,direction,event\n-1,R,enter\n", 2},
                 {"t,direction,event\n1.0,R,enter\n\n2,L,exit\n", 4},
                 {"time,dir,kind\n", 1},
             }) {
            try {
                load(text);
                FAIL("expected parse_error");
            } catch (const parse_error& e) {
                CHECK(e.line() == line);
            }
        }
    }
    SECTION("unsorted input is sorted with a warning") {
        const auto r = load("t,direction,event\n3,R,leave\n1,R,enter\n2,L,enter\n");
        REQUIRE(r.warnings.size() == 1);
        CHECK(r.log.events[0].t == 1.0);
        CHECK(r.log.events[2].kind == EventKind::leave);
    }
    SECTION("CRLF line endings are tolerated") {
        CHECK(load("t,direction,event\r\n1,L,enter\r\n").log.events.size() == 1);
    }
    SECTION("section length must be positive") {
        CHECK_THROWS_AS(load("t,direction,event\n", 0.0), invalid_argument);
    }
}

TEST_CASE("pair_passages", "[empirics]") {
    SECTION("FIFO") {
        const auto r = load("t,direction,event\n1,R,enter\n2,R,enter\n5,R,leave\n7,R,leave\n");
        const auto p = pair_passages(r.log);
        REQUIRE(p.pairs.size() == 2);
        CHECK(p.pairs[0] == PairedPassage{1, Direction::right, 1, 5});
        CHECK(p.pairs[1] == PairedPassage{2, Direction::right, 2, 7});
        CHECK(p.report.rate(Direction::right) == 0.0);
    }
    SECTION("unmatched enters are reported") {
        std::string text = "t,direction,event\n";
        for (int i = 0; i < 10; ++i) text += std::to_string(i) + ",L,enter\n";
        for (int i = 0; i < 9; ++i) text += std::to_string(20 + i) + ",L,leave\n";
        const auto p = pair_passages(load(text).log);
        CHECK(p.pairs.size() == 9);
        CHECK(p.report.entered[1] == 10);
        CHECK(p.report.unmatched[1] == 1);
        CHECK(p.report.rate(Direction::left) == Approx(0.1));
        CHECK(p.report.rate(Direction::right) == 0.0);
    }
    SECTION("recovers generator ground truth") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const auto s = make_log(seed, 40, 25, seed % 3);
            const auto p = pair_passages(s.log);
            CHECK(p.pairs == s.truth);
            CHECK(p.report.unmatched[0] == seed % 3);
        }
    }
}

TEST_CASE("travel_time_velocity", "[empirics]") {
    const auto tv = travel_time_velocity(PairedPassage{1, Direction::right, 5, 20}, 15.0);
    CHECK(tv.travel_time == 15.0);
    CHECK(tv.velocity == 1.0);
    CHECK_THROWS_AS(travel_time_velocity(PairedPassage{1, Direction::right, 5, 5}, 15.0), non_positive_travel_time);
    CHECK_THROWS_AS(travel_time_velocity(PairedPassage{1, Direction::right, 5, 6}, 0.0), invalid_argument);
}

TEST_CASE("constant-velocity traffic", "[empirics]") {
    const double v0 = 1.7, Ls = 15.0;
    EventLog log;
    log.section_length = Ls;
    std::vector<double> enter_times{0.0, 2.5, 3.0, 9.25, 11.0, 20.0};
    for (double t : enter_times) {
        log.events.push_back({t, Direction::right, EventKind::enter});
        log.events.push_back({t + Ls / v0, Direction::right, EventKind::leave});
    }
    std::stable_sort(log.events.begin(), log.events.end(), [](auto& a, auto& b) { return a.t < b.t; });
    const auto pairs = pair_passages(log).pairs;
    REQUIRE(pairs.size() == enter_times.size());
    const auto tv = travel_time_velocity(pairs, Ls);
    std::vector<double> v;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        CHECK(tv[i].travel_time == Approx(Ls / v0).epsilon(1e-12));
        CHECK(tv[i].velocity == Approx(v0).epsilon(1e-12));
        v.push_back(tv[i].velocity);
        // departure function = arrival function shifted by the travel time
        CHECK(pairs[i].t_minus - pairs[i].t_plus == Approx(Ls / v0).epsilon(1e-12));
    }
    const auto dd = distance_headways(pairs, v);
    CHECK_FALSE(dd[0].has_value());
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        const double true_gap = (enter_times[i] - enter_times[i - 1]) * v0;
        CHECK(dd[i]->dd == Approx(true_gap).epsilon(1e-12));
    }
    // leave headways equal enter headways when speeds match
    const auto he = time_headways(pairs, Boundary::enter);
    const auto hl = time_headways(pairs, Boundary::leave);
    REQUIRE(he.size() == hl.size());
    for (std::size_t i = 0; i < he.size(); ++i) CHECK(hl[i].dt == Approx(he[i].dt).margin(1e-12));
}

TEST_CASE("time_headways", "[empirics]") {
    std::vector<PairedPassage> pairs{{1, Direction::right, 3, 10}, {2, Direction::right, 5, 11}, {3, Direction::right, 9, 12}};
    const auto h = time_headways(pairs, Boundary::enter);
    REQUIRE(h.size() == 2);
    CHECK(h[0].dt == 2.0);
    CHECK(*h[0].flow == 0.5);
    CHECK(h[1].dt == 4.0);
    CHECK(*h[1].flow == 0.25);
    CHECK(time_headways({pairs[0]}, Boundary::enter).empty());

    std::vector<PairedPassage> dup{{1, Direction::left, 3, 10}, {2, Direction::left, 3, 11}};
    const auto d = time_headways(dup, Boundary::enter);
    REQUIRE(d.size() == 1);
    CHECK(d[0].duplicate_timestamp);
    CHECK_FALSE(d[0].flow.has_value());

    SECTION("Poisson arrivals at rate 0.5") {
        Rng rng(31);
        std::vector<PairedPassage> ps;
        double t = 0.0;
        const std::size_t n = 20000;
        for (std::size_t k = 0; k < n; ++k) {
            t += -std::log(1.0 - rng.uniform()) / 0.5;
            ps.push_back({k + 1, Direction::right, t, t + 1.0});
        }
        double sum = 0.0;
        const auto hs = time_headways(ps, Boundary::enter);
        for (const auto& x : hs) sum += x.dt;
        const double mean = sum / double(hs.size());
        CHECK(std::abs(mean - 2.0) < 3.0 * 2.0 / std::sqrt(double(hs.size())));
    }
}

TEST_CASE("distance_headway", "[empirics]") {
    const PairedPassage a{1, Direction::right, 10, 20}, b{2, Direction::right, 12, 22};
    CHECK(distance_headway(a, b, 1.5).dd == 3.0);
    const auto z = distance_headway(a, b, 0.0);
    CHECK(z.dd == 0.0);
    CHECK(z.degenerate);
    CHECK_THROWS_AS(distance_headway(b, a, 1.0), missing_predecessor);
    CHECK_THROWS_AS(distance_headway(a, PairedPassage{2, Direction::left, 12, 22}, 1.0), missing_predecessor);
}

TEST_CASE("instantaneous_counts", "[empirics]") {
    const auto r = load("t,direction,event\n1,R,enter\n4,R,leave\n");
    const auto n = instantaneous_counts(r.log);
    CHECK(n[0](0.5) == 0);
    CHECK(n[0](1.0) == 1);
    CHECK(n[0](3.999) == 1);
    CHECK(n[0](4.0) == 0);
    CHECK(n[1](2.0) == 0);
    CHECK(instantaneous_counts(EventLog{})[0](10.0) == 0);

    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const auto s = make_log(seed, 30, 30, 2);
        const auto c = instantaneous_counts(s.log);
        for (std::size_t k = 0; k < 2; ++k) {
            int prev = 0;
            for (std::size_t i = 0; i < c[k].values().size(); ++i) {
                CHECK(c[k].values()[i] >= 0);
                prev = c[k].values()[i];
            }
            CHECK(prev == 2); // two trailing ants never leave
        }
    }
}

TEST_CASE("averaged_counts", "[empirics]") {
    SECTION("hand-integrated counterflow") {
        // R ant inside [0, 10); an L ant inside [2, 6): B = 4, so 4 / 10.
        const auto r = load("t,direction,event\n0,R,enter\n2,L,enter\n6,L,leave\n10,R,leave\n");
        const auto pairs = pair_passages(r.log).pairs;
        const auto counts = instantaneous_counts(r.log);
        const auto a = averaged_counts(pairs[0], counts);
        CHECK(a.counter == Approx(0.4));
        CHECK(a.own == Approx(1.0));
    }
    SECTION("no counterflow") {
        const auto r = load("t,direction,event\n0,R,enter\n1,R,enter\n3,R,leave\n5,R,leave\n");
        const auto pairs = pair_passages(r.log).pairs;
        const auto a = averaged_counts(pairs[0], instantaneous_counts(r.log));
        CHECK(a.counter == 0.0);
        CHECK(a.own == Approx((1 * 1 + 2 * 2) / 3.0));
    }
    SECTION("empty interval") {
        CHECK_THROWS_AS(averaged_counts(PairedPassage{1, Direction::right, 2, 2}, {}), empty_interval);
    }
    SECTION("matches brute-force quadrature") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto s = make_log(1000 + seed, 15, 12);
            const auto counts = instantaneous_counts(s.log);
            for (const auto& p : s.truth) {
                const auto a = averaged_counts(p, counts);
                const double dt = p.t_minus - p.t_plus;
                const double own = brute_integral(s.log, p.direction, p.t_plus, p.t_minus) / dt;
                const double cf = brute_integral(s.log, opposite(p.direction), p.t_plus, p.t_minus) / dt;
                CHECK(a.own == Approx(own).epsilon(1e-9));
                CHECK(a.counter == Approx(cf).epsilon(1e-9).margin(1e-12));
            }
        }
    }
}

TEST_CASE("dimensionless_densities and classification", "[empirics]") {
    CHECK(dimensionless_densities(2.0, 0.0, 10.0).rho == 0.2);
    CHECK(dimensionless_densities(0.0, 0.0, 10.0).rho == 0.0);
    CHECK(dimensionless_densities(10.0, 5.0, 10.0).rho == 1.0);
    CHECK(dimensionless_densities(10.0, 5.0, 10.0).rho_cf == 0.5);
    CHECK_THROWS_AS(dimensionless_densities(1.0, 1.0, 0.0), invalid_argument);

    CHECK(classify_counterflow(0.0) == FlowClass::uni);
    CHECK(classify_counterflow(3.2, 1.0) == FlowClass::bi);
    CHECK(classify_counterflow(1.0) == FlowClass::bi);
    CHECK(classify_counterflow(0.999) == FlowClass::uni);
    CHECK(classify_counterflow(1.5, 2.0) == FlowClass::uni);
}

TEST_CASE("compute_metrics and metrics CSV", "[empirics][io]") {
    const auto r = load("t,direction,event\n0,R,enter\n2,L,enter\n4,R,enter\n6,L,leave\n10,R,leave\n12,R,leave\n", 10.0);
    const auto pairing = pair_passages(r.log);
    const auto m = compute_metrics(r.log, pairing.pairs);
    REQUIRE(m.size() == 3);
    CHECK(m[0].travel_time == 10.0);
    CHECK(m[0].velocity == 1.0);
    CHECK_FALSE(m[0].dt_enter.has_value());
    CHECK(*m[1].dt_enter == 4.0);
    CHECK(*m[1].dt_leave == 2.0);
    CHECK(*m[1].dd == 4.0);
    CHECK(m[0].N_cf == Approx(0.4));
    CHECK(m[0].cls == FlowClass::uni);
    CHECK(m[2].direction == Direction::left);
    CHECK(m[2].N_cf == Approx(1.5));
    CHECK(m[2].cls == FlowClass::bi);
    CHECK(m[2].rho_cf == Approx(0.15));

    std::ostringstream os;
    write_metrics_csv(os, m);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,direction,t_plus,t_minus,travel_time,velocity,dt_enter,dt_leave,dd,N_own,N_cf,rho,rho_cf,class");
    std::getline(is, line);
    CHECK(line == "1,R,0,10,10,1,,,,1.6,0.4,0.16,0.04,uni");
    std::getline(is, line);
    CHECK(line == "2,R,4,12,8,1.25,4,2,4,1.75,0.25,0.175,0.025,uni");
}

TEST_CASE("simulator logs: FIFO pairing recovers the true passages", "[empirics][simulator]") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto s = new_state({300, 0.2, 0.9, 0.1, 0.01}, 30, 20, seed, Mode::bi);
        SectionRecorder rec(300, 100, 25);
        run(s, 100, 2000, 0, rec);
        const auto log = rec.log();
        check_counts(log.events);
        const auto pairing = pair_passages(log);
        CHECK(pairing.pairs == rec.completed());
        CHECK(pairing.pairs.size() > 50);
        // velocities from the pipeline equal length / (true leave - true enter)
        const auto tv = travel_time_velocity(pairing.pairs, log.section_length);
        const auto truth = rec.completed();
        for (std::size_t i = 0; i < truth.size(); ++i)
            CHECK(tv[i].velocity == 25.0 / (truth[i].t_minus - truth[i].t_plus));
    }
}
