#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <vector>

#include "helpers.hpp"
#include "nbcert/dataset.hpp"
#include "nbcert/errors.hpp"
#include "nbcert/index.hpp"

using namespace nbcert;
using namespace nbcert::testing;

TEST_CASE("index counts on the two-label walkthrough dataset") {
    Dataset ds = decision_walkthrough_dataset();
    FrequencyIndex idx = build_index(ds);
    REQUIRE(idx.m() == 2);
    CHECK(idx.label_tokens == std::vector<std::string>{"lstar", "l"});
    CHECK(idx.n == 9);
    CHECK(idx.d == 2);
    CHECK(idx.N == std::vector<long long>{4, 5});
    CHECK(idx.M[0] == std::vector<long long>{0, 1});
    CHECK(idx.M[1] == std::vector<long long>{2, 0});

    std::vector<int> t = encode_point(ds, {"a", "b"});
    PointCounts counts = counts_for(idx, t);
    CHECK(counts.E[0] == std::vector<long long>{3, 2});
    CHECK(counts.E[1] == std::vector<long long>{1, 1});

    CHECK(idx.cells_visited == idx.n * idx.d);
}

TEST_CASE("unseen point values count zero, missing point cells throw") {
    Dataset ds = decision_walkthrough_dataset();
    FrequencyIndex idx = build_index(ds);
    PointCounts counts = counts_for(idx, {Dataset::kUnseen, Dataset::kUnseen});
    for (const auto& row : counts.E)
        CHECK(row == std::vector<long long>{0, 0});
    CHECK_THROWS_AS(counts_for(idx, {Dataset::kMissing, 0}), IncompletePointError);
}

TEST_CASE("structural invariants hold on random instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        Dataset ds = random_tiny(rng);
        FrequencyIndex idx = build_index(ds);

        long long total = 0;
        for (long long c : idx.N) total += c;
        CHECK(total == ds.n());

        for (int li = 0; li < idx.m(); ++li)
            for (int j = 0; j < ds.d(); ++j) {
                long long seen = 0;
                for (long long e : idx.E[li][j]) seen += e;
                CHECK(idx.M[li][j] + seen == idx.N[li]);  // every cell accounted
            }

        for (int j = 0; j < ds.d(); ++j) {
            long long dom = 0;
            for (long long c : idx.value_count[j])
                if (c > 0) ++dom;
            CHECK(dom == idx.domain_size[j]);
            CHECK(dom == static_cast<long long>(ds.active_domain(j).size()));
        }

        std::vector<int> point = random_point(ds, rng);
        PointCounts fast = counts_for(idx, point);
        PointCounts slow = scan_counts(ds, idx, point);
        CHECK(fast.E == slow.E);
    }
}

TEST_CASE("complete dataset has zero missing counts") {
    Dataset ds = poisoning_walkthrough_dataset();
    FrequencyIndex idx = build_index(ds);
    for (const auto& row : idx.M)
        for (long long m : row) CHECK(m == 0);
}

TEST_CASE("null_cell matches a rebuild after each nulling") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        Dataset ds = random_tiny(rng, {.max_missing = 0});
        if (ds.n() < 2) continue;
        FrequencyIndex live = build_index(ds);
        for (int step = 0; step < 4; ++step) {
            const long long r = draw_below(rng, ds.n());
            const int j = static_cast<int>(draw_below(rng, ds.d()));
            const int v = ds.cell(r, j);
            if (v == Dataset::kMissing) continue;
            ds.set_cell(r, j, Dataset::kMissing);
            null_cell(live, ds.label(r), j, v);
            FrequencyIndex fresh = build_index(ds);
            CHECK(live.N == fresh.N);
            CHECK(live.M == fresh.M);
            CHECK(live.E == fresh.E);
            CHECK(live.value_count == fresh.value_count);
            CHECK(live.domain_size == fresh.domain_size);
        }
    }
}

TEST_CASE("json dump is deterministic and structurally sound") {
    Dataset ds = decision_walkthrough_dataset();
    FrequencyIndex idx = build_index(ds);
    const std::string a = index_to_json(idx);
    const std::string b = index_to_json(build_index(ds));
    CHECK(a == b);
    auto doc = nlohmann::json::parse(a);
    CHECK(doc["n"] == 9);
    CHECK(doc["labels"] == nlohmann::json({"lstar", "l"}));
    CHECK(doc["N"] == nlohmann::json({4, 5}));
    CHECK(doc["M"][1][0] == 2);       // label "l", attribute X
    CHECK(doc["E"][0][0]["a"] == 3);  // label "lstar", attribute X, token "a"
}

TEST_CASE("empty dataset is rejected") {
    Dataset ds(Schema{{"A"}, "label"});
    CHECK_THROWS_AS(build_index(ds), EmptyDatasetError);
}
