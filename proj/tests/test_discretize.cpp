#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "nbcert/dataset.hpp"
#include "nbcert/discretize.hpp"
#include "nbcert/errors.hpp"
#include "nbcert/rng.hpp"

using namespace nbcert;

namespace {

Dataset numeric_column(const std::vector<double>& values) {
    std::string csv = "A,label\n";
    for (double v : values) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        csv += std::string(buf) + ",l0\n";
    }
    return parse_csv(csv, Schema{{}, "label"});
}

// independent rank-statistics quantile (linear interpolation)
double rank_quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TEST_CASE("uniform cuts are equal-width interior points") {
    Dataset ds = numeric_column({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    Binner b = fit_discretizer(ds, {"A"}, 5, BinStrategy::Uniform);
    REQUIRE(b.columns.size() == 1);
    const std::vector<double> expected{1.8, 3.6, 5.4, 7.2};
    REQUIRE(b.columns[0].cuts.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(b.columns[0].cuts[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("quantile cuts match direct rank statistics") {
    Rng rng(404);
    std::vector<double> values(37);
    for (double& v : values)
        v = static_cast<double>(draw_below(rng, 1000)) / 7.0;
    Dataset ds = numeric_column(values);
    Binner b = fit_discretizer(ds, {"A"}, 4, BinStrategy::Quantile);
    std::vector<double> expected;
    for (int i = 1; i < 4; ++i)
        expected.push_back(rank_quantile(values, i / 4.0));
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    REQUIRE(b.columns[0].cuts.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(b.columns[0].cuts[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("heavily tied column collapses to fewer effective bins") {
    Dataset ds = numeric_column({0, 0, 0, 0, 10});
    Binner b = fit_discretizer(ds, {"A"}, 5, BinStrategy::Quantile);
    Dataset binned = apply_discretizer(ds, b);
    std::set<std::string> tokens = binned.active_domain(0);
    CHECK(tokens.size() <= 2);  // duplicate cuts merged
    CHECK(binned.active_domain(0).size() >= 1);
}

TEST_CASE("constant column yields a single bin") {
    Dataset ds = numeric_column({3, 3, 3});
    Binner b = fit_discretizer(ds, {"A"}, 5, BinStrategy::Uniform);
    CHECK(b.columns[0].constant);
    Dataset binned = apply_discretizer(ds, b);
    CHECK(binned.active_domain(0) == std::set<std::string>{"b0"});
}

TEST_CASE("apply clamps out-of-range values and keeps missing cells missing") {
    Dataset ds = numeric_column({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    Binner b = fit_discretizer(ds, {"A"}, 5, BinStrategy::Uniform);
    CHECK(bin_of(b.columns[0], -100.0) == 0);
    CHECK(bin_of(b.columns[0], 2.0) == 1);
    CHECK(bin_of(b.columns[0], 1e9) == 4);

    Dataset holes = ds;
    holes.set_cell(3, 0, Dataset::kMissing);
    Dataset binned = apply_discretizer(holes, b);
    CHECK(binned.cell(3, 0) == Dataset::kMissing);
    CHECK(binned.missing_cells() == 1);
}

TEST_CASE("every finite value maps to exactly one of n_bins bins") {
    Dataset ds = numeric_column({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    Binner b = fit_discretizer(ds, {"A"}, 5, BinStrategy::Uniform);
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        double x = static_cast<double>(draw_below(rng, 4000)) / 100.0 - 15.0;
        int bin = bin_of(b.columns[0], x);
        CHECK(bin >= 0);
        CHECK(bin < 5);
    }
}

TEST_CASE("fit contract violations") {
    Dataset ds = numeric_column({1, 2, 3});
    CHECK_THROWS_AS(fit_discretizer(ds, {"A"}, 1, BinStrategy::Uniform), Error);
    CHECK_THROWS_AS(fit_discretizer(ds, {"B"}, 3, BinStrategy::Uniform),
                    SchemaMismatchError);
    Dataset text = parse_csv("A,label\nhello,l0\n", Schema{{}, "label"});
    CHECK_THROWS_AS(fit_discretizer(text, {"A"}, 3, BinStrategy::Uniform),
                    NonNumericError);
    Dataset holes = ds;
    holes.set_cell(0, 0, Dataset::kMissing);
    CHECK_THROWS_AS(fit_discretizer(holes, {"A"}, 3, BinStrategy::Uniform),
                    NotCompleteError);
}
