#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nbcert/dataset.hpp"
#include "nbcert/decision.hpp"
#include "nbcert/index.hpp"
#include "nbcert/rng.hpp"

namespace nbcert::testing {

// 9-row two-attribute dataset from the decision walkthrough: four l* rows
// (one missing Y) and five l rows (two missing X); u* tokens are distinct
// constants. Test point of interest: (a, b).
inline Dataset decision_walkthrough_dataset() {
    const std::string csv =
        "X,Y,label\n"
        "a,b,lstar\n"
        "c,b,lstar\n"
        "a,d,lstar\n"
        "a,NULL,lstar\n"
        "a,b,l\n"
        "b,c,l\n"
        "NULL,u4,l\n"
        "NULL,u5,l\n"
        "u6,u7,l\n";
    return parse_csv(csv, Schema{{}, "label", "NULL"});
}

// 9-row complete dataset from the poisoning walkthrough. Test point (a, b):
// e*(X,Y) = (2,3) for lstar, e(X,Y) = (1,2) for l.
inline Dataset poisoning_walkthrough_dataset() {
    const std::string csv =
        "X,Y,label\n"
        "a,b,lstar\n"
        "a,u1,lstar\n"
        "u2,b,lstar\n"
        "u3,b,lstar\n"
        "a,b,l\n"
        "w1,b,l\n"
        "w2,w3,l\n"
        "w4,w5,l\n"
        "w6,w7,l\n";
    return parse_csv(csv, Schema{{}, "label", "NULL"});
}

struct TinyInstanceSpec {
    long long max_rows = 8;
    int max_attrs = 3;
    int max_domain = 3;
    int max_labels = 3;
    long long max_missing = 6;
};

// Random tiny instance within the size class the brute-force oracles can cover.
inline Dataset random_tiny(Rng& rng, const TinyInstanceSpec& spec = {}) {
    const long long rows = 2 + static_cast<long long>(draw_below(rng, spec.max_rows - 1));
    const int attrs = 1 + static_cast<int>(draw_below(rng, spec.max_attrs));
    const int domain = 1 + static_cast<int>(draw_below(rng, spec.max_domain));
    const int labels = 2 + static_cast<int>(draw_below(rng, spec.max_labels - 1));
    Schema schema;
    for (int j = 0; j < attrs; ++j) schema.attributes.push_back("A" + std::to_string(j));
    schema.label_attribute = "label";
    Dataset ds(schema);
    for (long long r = 0; r < rows; ++r) {
        std::vector<int> cells(attrs);
        for (int j = 0; j < attrs; ++j)
            cells[j] = ds.intern_value(
                j, "v" + std::to_string(draw_below(rng, domain)));
        ds.add_row(std::move(cells),
                   ds.intern_label("l" + std::to_string(draw_below(rng, labels))));
    }
    long long missing = draw_below(rng, spec.max_missing + 1);
    for (long long i = 0; i < missing; ++i) {
        const long long r = draw_below(rng, rows);
        const int j = static_cast<int>(draw_below(rng, attrs));
        ds.set_cell(r, j, Dataset::kMissing);
    }
    return ds;
}

// Random complete test point drawn from per-attribute value pools (mostly
// observed tokens, occasionally an unseen one).
inline std::vector<int> random_point(const Dataset& ds, Rng& rng) {
    std::vector<int> point(ds.d());
    for (int j = 0; j < ds.d(); ++j) {
        if (ds.value_dict_size(j) == 0 || draw_below(rng, 8) == 0) {
            point[j] = Dataset::kUnseen;
        } else {
            point[j] = static_cast<int>(draw_below(rng, ds.value_dict_size(j)));
        }
    }
    return point;
}

inline std::vector<std::string> point_tokens(const Dataset& ds,
                                             const std::vector<int>& point) {
    std::vector<std::string> tokens(point.size());
    for (int j = 0; j < static_cast<int>(point.size()); ++j)
        tokens[j] = point[j] == Dataset::kUnseen ? std::string("__never_seen__")
                                                 : ds.value_token(j, point[j]);
    return tokens;
}

// Independent per-point count oracle: one full dataset scan, no index.
inline PointCounts scan_counts(const Dataset& ds, const FrequencyIndex& index,
                               const std::vector<int>& point) {
    PointCounts counts;
    counts.E.assign(index.m(), std::vector<long long>(ds.d(), 0));
    for (long long r = 0; r < ds.n(); ++r) {
        int li = -1;
        for (int i = 0; i < index.m(); ++i)
            if (index.labels[i] == ds.label(r)) li = i;
        for (int j = 0; j < ds.d(); ++j)
            if (ds.cell(r, j) != Dataset::kMissing && ds.cell(r, j) == point[j])
                ++counts.E[li][j];
    }
    return counts;
}

}  // namespace nbcert::testing
