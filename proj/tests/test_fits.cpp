#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "antflow/empirics/fits.hpp"

using namespace antflow::empirics;
using Catch::Approx;

TEST_CASE("fit_negative_exponential", "[fits]") {
    CHECK(fit_negative_exponential(std::vector<double>{1, 2, 3}) == Approx(0.5));
    CHECK(fit_negative_exponential(std::vector<double>{4, 4, 4, 4}) == Approx(0.25));
    CHECK_THROWS_AS(fit_negative_exponential(std::vector<double>{1, 0}), antflow::non_positive_sample);
    CHECK_THROWS_AS(fit_negative_exponential(std::vector<double>{1}), antflow::invalid_argument);

    SECTION("recovers the generator rate") {
        // MLE of an exponential rate has asymptotic sd lambda / sqrt(n)
        std::mt19937_64 gen(7);
        std::exponential_distribution<double> dist(0.7);
        std::vector<double> xs(100000);
        for (auto& x : xs) x = dist(gen);
        const double rate = fit_negative_exponential(xs);
        CHECK(std::abs(rate - 0.7) < 3 * 0.7 / std::sqrt(double(xs.size())));
    }
}

TEST_CASE("fit_lognormal", "[fits]") {
    const double e = std::exp(1.0);
    const auto a = fit_lognormal(std::vector<double>{e, e, e});
    CHECK(a.mu == Approx(1.0));
    CHECK(a.sigma == Approx(0.0).margin(1e-12));
    const auto b = fit_lognormal(std::vector<double>{1.0, e * e});
    CHECK(b.mu == Approx(1.0));
    CHECK(b.sigma == Approx(1.0));
    CHECK_THROWS_AS(fit_lognormal(std::vector<double>{1.0, -2.0}), antflow::non_positive_sample);

    SECTION("recovers the generator parameters") {
        // sd(mu_hat) = sigma / sqrt(n), sd(sigma_hat) ~ sigma / sqrt(2n)
        std::mt19937_64 gen(11);
        std::lognormal_distribution<double> dist(0.3, 0.5);
        std::vector<double> xs(100000);
        for (auto& x : xs) x = dist(gen);
        const auto fit = fit_lognormal(xs);
        const double n = double(xs.size());
        CHECK(std::abs(fit.mu - 0.3) < 3 * 0.5 / std::sqrt(n));
        CHECK(std::abs(fit.sigma - 0.5) < 3 * 0.5 / std::sqrt(2 * n));
    }
}

TEST_CASE("distribution_summary", "[fits]") {
    SECTION("single bin") {
        const auto s = distribution_summary(std::vector<double>{1.0, 1.0}, 0.5);
        REQUIRE(s.bins.size() == 1);
        CHECK(s.bins[0].lo == 1.0);
        CHECK(s.bins[0].hi == 1.5);
        CHECK(s.bins[0].count == 2);
        CHECK(s.mean == 1.0);
        CHECK(s.variance == 0.0);
    }
    SECTION("edge values go to the upper bin") {
        CHECK(bin_index(1.5, 0.5) == 3);
        CHECK(bin_index(0.3, 0.1) == 3);
        CHECK(bin_index(0.7, 0.1) == 7);
        CHECK(bin_index(-0.5, 0.5) == -1);
        CHECK(bin_index(0.29999, 0.1) == 2);
        const auto s = distribution_summary(std::vector<double>{0.2, 0.3}, 0.1);
        REQUIRE(s.bins.size() == 2);
        CHECK(s.bins[0].count == 1);
        CHECK(s.bins[1].count == 1);
    }
    SECTION("gaps between occupied bins are filled with zeros") {
        const auto s = distribution_summary(std::vector<double>{0.1, 2.1}, 1.0);
        REQUIRE(s.bins.size() == 3);
        CHECK(s.bins[1].count == 0);
        std::ostringstream os;
        write_histogram_csv(os, s);
        CHECK(os.str() == "bin_lo,bin_hi,count\n0,1,1\n1,2,0\n2,3,1\n");
    }
    SECTION("errors") {
        CHECK_THROWS_AS(distribution_summary(std::vector<double>{}, 1.0), antflow::empty_input);
        CHECK_THROWS_AS(distribution_summary(std::vector<double>{1.0}, 0.0), antflow::invalid_argument);
    }
    SECTION("normal sample moments") {
        std::mt19937_64 gen(3);
        std::normal_distribution<double> dist(2.0, 0.4);
        std::vector<double> xs(50000);
        for (auto& x : xs) x = dist(gen);
        const auto s = distribution_summary(xs, 0.05);
        const double n = double(xs.size());
        CHECK(std::abs(s.mean - 2.0) < 3 * 0.4 / std::sqrt(n));
        // var(s^2) = 2 sigma^4 / (n - 1) for a normal sample
        CHECK(std::abs(s.variance - 0.16) < 3 * std::sqrt(2.0 / (n - 1)) * 0.16);
        std::size_t total = 0;
        for (const auto& b : s.bins) total += b.count;
        CHECK(total == xs.size());
    }
}
