#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "antflow/fundamental_diagram.hpp"

using namespace antflow;
using Catch::Approx;

TEST_CASE("empty grid gives an empty table", "[fd]") {
    SweepConfig c;
    CHECK(fundamental_diagram_sweep(c).points.empty());
}

TEST_CASE("invalid cells are rejected before running", "[fd]") {
    SweepConfig c;
    c.params.L = 50;
    c.cells = {{0.5, 0.0, 0.1}, {1.2, 0.0, 0.1}};
    CHECK_THROWS_AS(fundamental_diagram_sweep(c), domain_error);
    c.cells = {{0.5, 0.0, 2.0}};
    CHECK_THROWS_AS(fundamental_diagram_sweep(c), invalid_rates);
    c.cells = {{0.5, 0.0, 0.1}};
    c.replicas = 0;
    CHECK_THROWS_AS(fundamental_diagram_sweep(c), invalid_argument);
}

TEST_CASE("f = 0 recovers TASEP with rate Q", "[fd]") {
    SweepConfig c;
    c.mode = Mode::uni;
    c.params = {200, 0.2, 0.9, 0.0, 0.0};
    c.cells = {{0.5, 0.0, 0.0}};
    c.replicas = 4;
    c.warmup_sweeps = 1000;
    c.measure_sweeps = 2000;
    c.master_seed = 11;
    const auto p = fundamental_diagram_sweep(c).points.at(0);
    // On a finite ring the stationary measure is uniform over
    // configurations, which gives V = Q (L - N) / (L - 1).
    const double finite_ring = 0.9 * (200.0 - 100.0) / 199.0;
    CHECK(std::abs(p.V_R - finite_ring) <= 3 * p.stderr_V_R);
    CHECK(std::abs(p.V_R - tasep_exact(0.9, 0.5).V) < 0.005);
    CHECK(p.n_replicas == 4);
    CHECK(p.F_R == p.rho_R * p.V_R);
}

TEST_CASE("worker count does not change the table", "[fd]") {
    SweepConfig c;
    c.mode = Mode::bi;
    c.params = {60, 0.2, 0.9, 0.1, 0.0};
    c.cells = {{0.1, 0.3, 0.01}, {0.5, 0.5, 0.2}, {0.0, 0.4, 1.0}};
    c.replicas = 3;
    c.warmup_sweeps = 20;
    c.measure_sweeps = 50;
    c.master_seed = 5;
    std::ostringstream a, b;
    c.workers = 1;
    write_fd_csv(a, fundamental_diagram_sweep(c).points);
    c.workers = 4;
    write_fd_csv(b, fundamental_diagram_sweep(c).points);
    CHECK(a.str() == b.str());
}

TEST_CASE("a cell's result does not depend on the rest of the grid", "[fd]") {
    SweepConfig c;
    c.mode = Mode::uni;
    c.params = {80, 0.2, 0.9, 0.0, 0.0};
    c.replicas = 2;
    c.warmup_sweeps = 10;
    c.measure_sweeps = 30;
    c.cells = {{0.3, 0.0, 0.05}};
    const auto alone = fundamental_diagram_sweep(c).points.at(0);
    c.cells = {{0.7, 0.0, 0.05}, {0.3, 0.0, 0.05}};
    const auto within = fundamental_diagram_sweep(c).points.at(1);
    CHECK(alone.V_R == within.V_R);
    CHECK(alone.stderr_V_R == within.stderr_V_R);
}

TEST_CASE("zero-ant direction reports zero with a flag", "[fd]") {
    SweepConfig c;
    c.mode = Mode::bi;
    c.params = {40, 0.2, 0.9, 0.1, 0.0};
    c.cells = {{0.0, 0.25, 0.1}};
    c.measure_sweeps = 20;
    const auto p = fundamental_diagram_sweep(c).points.at(0);
    CHECK(p.empty_R);
    CHECK(p.V_R == 0.0);
    CHECK(p.F_R == 0.0);
    CHECK(p.V_L > 0.0);
    CHECK(p.F_eff == -p.F_L);
}

TEST_CASE("FdTable CSV", "[fd][csv]") {
    FdPoint p;
    p.rho_R = 0.1;
    p.rho_L = 0.2;
    p.f = 0.0008;
    p.V_R = 0.123456789;
    p.V_L = 1.0 / 3.0;
    finish_flows(p);
    p.stderr_V_R = 1e-7;
    p.n_replicas = 8;
    std::ostringstream os;
    write_fd_csv(os, {p});
    const std::string text = os.str();
    CHECK(text.substr(0, text.find('\n')) ==
          "rho_R,rho_L,f,V_R,V_L,F_R,F_L,F_tot,F_eff,stderr_V_R,stderr_V_L,n_replicas");
    CHECK(text.find("0.1,0.2,0.0008,0.123457,0.333333,") != std::string::npos);
    CHECK(text.find(",1e-07,0,8\n") != std::string::npos);

    std::istringstream is(text);
    const auto back = read_fd_csv(is);
    REQUIRE(back.size() == 1);
    CHECK(back[0].V_R == Approx(0.123457));
    CHECK(back[0].n_replicas == 8);
    CHECK(fd_csv_row(back[0]) == fd_csv_row(p));

    std::istringstream bad("rho_R,rho_L\n1,2\n");
    CHECK_THROWS_AS(read_fd_csv(bad), parse_error);
}
