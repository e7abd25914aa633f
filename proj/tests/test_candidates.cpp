#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "candidates.hpp"
#include "errors.hpp"

using namespace epifit;

namespace {

// Z1-style SIR grids of squares with side 0.001.
CandidateGrid z1_grid()
{
    return CandidateGrid({{"beta", build_range_grid(0, 1, 0.001, RangeEndpoints::HalfOpen)},
                          {"gamma", build_range_grid(0, 0.5, 0.001, RangeEndpoints::HalfOpen)}});
}

CandidateGrid z3_grid()
{
    return CandidateGrid({{"beta", build_range_grid(0.1, 0.5, 0.001, RangeEndpoints::Closed)},
                          {"gamma", build_range_grid(0, 0.2, 0.001, RangeEndpoints::HalfOpen)}});
}

// The seven SEIR candidate lists used by the weekly fitting setup.
std::vector<GridDim> seir_dims()
{
    std::vector<GridDim> dims;
    dims.push_back({"beta", {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
                             0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5}});
    dims.push_back({"tau_e", {4, 5, 6, 7}});
    dims.push_back({"tau_r", build_range_grid(5, 14, 1, RangeEndpoints::Closed)});
    dims.push_back({"tau_s", build_range_grid(3, 14, 1, RangeEndpoints::Closed)});
    dims.push_back({"tau_rs", build_range_grid(5, 28, 1, RangeEndpoints::Closed)});
    dims.push_back({"tau_d", build_range_grid(1, 28, 1, RangeEndpoints::Closed)});
    dims.push_back({"p_s", {0.01, 0.025, 0.05, 0.075, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35,
                            0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99}});
    return dims;
}

} // namespace

TEST_CASE("range grids reproduce the published cardinalities")
{
    const auto beta = build_range_grid(0, 1, 0.001, RangeEndpoints::HalfOpen);
    CHECK(beta.size() == 1000);
    CHECK(beta.front() == 0.001);
    CHECK(beta.back() == 1.0);

    const auto gamma_half = build_range_grid(0, 0.5, 0.001, RangeEndpoints::HalfOpen);
    CHECK(gamma_half.size() == 500);

    const auto beta_closed = build_range_grid(0.1, 0.5, 0.001, RangeEndpoints::Closed);
    CHECK(beta_closed.size() == 401);
    CHECK(beta_closed.front() == 0.1);
    CHECK(beta_closed.back() == 0.5);

    CHECK(z1_grid().cardinality() == 500000);
    CHECK(CandidateGrid({{"beta", beta}, {"gamma", build_range_grid(0, 0.2, 0.001,
                                                                    RangeEndpoints::HalfOpen)}})
              .cardinality() == 200000);
    CHECK(z3_grid().cardinality() == 80200);
}

TEST_CASE("grid values are exact decimals")
{
    const auto beta = build_range_grid(0, 1, 0.001, RangeEndpoints::HalfOpen);
    CHECK(beta[249] == 0.25); // exact hit on the generating value
    const auto two = build_range_grid(0, 0.2, 0.1, RangeEndpoints::HalfOpen);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == 0.1);
    CHECK(two[1] == 0.2);
}

TEST_CASE("range grid rejects a non-multiple span")
{
    CHECK_THROWS_AS(build_range_grid(0, 1.0005, 0.001, RangeEndpoints::HalfOpen),
                    ArgumentError);
    CHECK_THROWS_AS(build_range_grid(1, 0.5, 0.001, RangeEndpoints::HalfOpen), ArgumentError);
    CHECK_THROWS_AS(build_range_grid(0, 1, -0.001, RangeEndpoints::HalfOpen), ArgumentError);
}

TEST_CASE("explicit grid cardinalities")
{
    const CandidateGrid table3(seir_dims());
    CHECK(table3.cardinality() == 116121600ull);

    CHECK(CandidateGrid({{"x", {1.0}}}).cardinality() == 1);
    CHECK(CandidateGrid({{"x", {1.0, 2.0}}, {"y", {1.0, 2.0, 3.0}}}).cardinality() == 6);
}

TEST_CASE("duplicate or decreasing values are rejected")
{
    CHECK_THROWS_AS(CandidateGrid({{"x", {1.0, 1.0}}}), ArgumentError);
    CHECK_THROWS_AS(CandidateGrid({{"x", {2.0, 1.0}}}), ArgumentError);
    CHECK_THROWS_AS(CandidateGrid({GridDim{"x", std::vector<double>{}}}), ArgumentError);
}

TEST_CASE("mixed-radix decoding, last dimension fastest")
{
    const CandidateGrid grid({{"a", {10, 20, 30}}, {"b", {1, 2}}});
    CHECK(grid.param_at(0) == std::vector<double>{10, 1});
    CHECK(grid.param_at(3) == std::vector<double>{20, 2});
    CHECK(grid.param_at(grid.cardinality() - 1) == std::vector<double>{30, 2});
    CHECK_THROWS_AS(grid.param_at(6), ArgumentError);
}

TEST_CASE("index round trip: exhaustive on Z3, sampled on the large SEIR grid")
{
    const CandidateGrid z3 = z3_grid();
    for (std::uint64_t index = 0; index < z3.cardinality(); ++index) {
        const auto values = z3.param_at(index);
        CHECK(z3.index_of(values) == index);
    }

    const CandidateGrid table3(seir_dims());
    for (std::uint64_t k = 0; k < 10000; ++k) {
        const std::uint64_t index = (k * 11612159ull + 37) % table3.cardinality();
        CHECK(table3.index_of(table3.param_at(index)) == index);
    }
}

TEST_CASE("sampling determinism and draw independence from chunking")
{
    const auto dist = DiscreteDist::uniform(1000);
    const auto a = sample(dist, 5000, 99);
    const auto b = sample(dist, 5000, 99);
    CHECK(a == b);

    // Any draw is a pure function of (seed, position).
    for (std::uint64_t i : {0ull, 17ull, 4999ull}) {
        CHECK(dist.sample_index(99, i) == a[static_cast<std::size_t>(i)]);
    }

    const auto other = sample(dist, 5000, 100);
    CHECK(a != other);

    CHECK(sample(dist, 0, 1).empty());
}

TEST_CASE("uniform sampling frequencies stay within 5 sigma")
{
    const std::uint64_t n = 1000000;
    const auto dist = DiscreteDist::uniform(10);
    std::vector<std::uint64_t> counts(10, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        counts[static_cast<std::size_t>(dist.sample_index(2024, i))]++;
    }
    const double expected = 100000.0;
    const double sigma = 300.0; // binomial sd for p = 0.1
    for (std::uint64_t c : counts) {
        CHECK(std::fabs(static_cast<double>(c) - expected) <= 5 * sigma);
    }
}

TEST_CASE("explicit weights: validation and sampling proportions")
{
    CHECK_THROWS_AS(DiscreteDist::explicit_weights({0.5, 0.6}), ArgumentError);
    CHECK_THROWS_AS(DiscreteDist::explicit_weights({1.0, 0.0}), ArgumentError);

    const auto dist = DiscreteDist::explicit_weights({0.2, 0.3, 0.5});
    CHECK(dist.mass_at(0) == doctest::Approx(0.2));
    CHECK(dist.mass_at(2) == doctest::Approx(0.5));

    std::vector<std::uint64_t> counts(3, 0);
    const std::uint64_t n = 200000;
    for (std::uint64_t i = 0; i < n; ++i) {
        counts[static_cast<std::size_t>(dist.sample_index(7, i))]++;
    }
    for (std::size_t k = 0; k < 3; ++k) {
        const double p = dist.mass_at(k);
        const double sigma = std::sqrt(n * p * (1 - p));
        CHECK(std::fabs(static_cast<double>(counts[k]) - n * p) <= 5 * sigma);
    }
}
