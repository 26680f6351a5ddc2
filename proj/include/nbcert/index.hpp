#pragma once

#include <string>
#include <vector>

#include "nbcert/dataset.hpp"

namespace nbcert {

// One-pass frequency index over an incomplete dataset: per-label row counts,
// per-label/attribute missing counts, and per-label/attribute value->count
// tables. Built once in O(nd); answers per-point count queries in O(md).
struct FrequencyIndex {
    long long n = 0;
    int d = 0;
    // Dataset label ids with at least one row, in first-appearance order.
    std::vector<int> labels;
    std::vector<std::string> label_tokens;
    std::vector<long long> N;                          // [li]
    std::vector<std::vector<long long>> M;             // [li][attr]
    std::vector<std::vector<std::vector<long long>>> E;  // [li][attr][value id]
    // Occurrences of each value id across all labels; the active domain of an
    // attribute is the set of ids with a positive count.
    std::vector<std::vector<long long>> value_count;    // [attr][value id]
    std::vector<long long> domain_size;                 // [attr]
    std::vector<std::vector<std::string>> value_tokens;  // [attr][value id]

    long long cells_visited = 0;  // instrumentation for the one-pass contract

    int m() const { return static_cast<int>(labels.size()); }
    bool in_domain(int attr, int value_id) const {
        return value_id >= 0 &&
               value_id < static_cast<int>(value_count[attr].size()) &&
               value_count[attr][value_id] > 0;
    }
    bool domain_is_singleton(int attr, int value_id) const {
        return domain_size[attr] == 1 && in_domain(attr, value_id);
    }
};

// Per-test-point slice of the index: E[li][j] counts rows with label li whose
// j-th cell equals the point's j-th value.
struct PointCounts {
    std::vector<std::vector<long long>> E;  // [li][attr]
};

FrequencyIndex build_index(const Dataset& dataset);

// Point values are dataset value ids (Dataset::kUnseen for tokens absent
// from the training data). Throws IncompletePointError on kMissing.
PointCounts counts_for(const FrequencyIndex& index, const std::vector<int>& point);

// Incremental update: the cell (label, attr) currently holding value_id is
// set to missing. Keeps all index invariants and the active domains current.
void null_cell(FrequencyIndex& index, int label_id, int attr, int value_id);

// Debug dump with deterministic key ordering: {n, labels, N, M, E}.
std::string index_to_json(const FrequencyIndex& index);

}  // namespace nbcert
