#include "nbcert/index.hpp"

#include <map>

#include <json.hpp>

#include "nbcert/errors.hpp"

namespace nbcert {

FrequencyIndex build_index(const Dataset& dataset) {
    if (dataset.n() == 0) throw EmptyDatasetError("cannot index an empty dataset");

    FrequencyIndex index;
    index.n = dataset.n();
    index.d = dataset.d();
    // labels kept in first-appearance (dictionary) order; dictionary entries
    // without rows are dropped so that every N_i is positive
    std::vector<long long> rows_per_label(dataset.label_dict_size(), 0);
    for (long long r = 0; r < dataset.n(); ++r) ++rows_per_label[dataset.label(r)];
    std::vector<int> pos_of_label(dataset.label_dict_size(), -1);
    for (int l = 0; l < dataset.label_dict_size(); ++l) {
        if (rows_per_label[l] == 0) continue;
        pos_of_label[l] = static_cast<int>(index.labels.size());
        index.labels.push_back(l);
        index.label_tokens.push_back(dataset.label_token(l));
    }
    const int m = index.m();
    index.N.assign(m, 0);
    index.M.assign(m, std::vector<long long>(index.d, 0));
    index.E.resize(m);
    for (int li = 0; li < m; ++li) {
        index.E[li].resize(index.d);
        for (int j = 0; j < index.d; ++j)
            index.E[li][j].assign(dataset.value_dict_size(j), 0);
    }
    index.value_count.resize(index.d);
    index.value_tokens.resize(index.d);
    for (int j = 0; j < index.d; ++j) {
        index.value_count[j].assign(dataset.value_dict_size(j), 0);
        for (int v = 0; v < dataset.value_dict_size(j); ++v)
            index.value_tokens[j].push_back(dataset.value_token(j, v));
    }

    // Missing cells (id -1) are counted in slot 0 of a one-shifted array so
    // the hot loop carries no data-dependent branch: an unpredictable
    // missing-or-not branch makes build time depend on the missing rate
    // (worst around 50%), which this pass must not.
    std::vector<std::vector<std::vector<long long>>> shifted(m);
    for (int li = 0; li < m; ++li) {
        shifted[li].resize(index.d);
        for (int j = 0; j < index.d; ++j)
            shifted[li][j].assign(dataset.value_dict_size(j) + 1, 0);
    }
    for (long long r = 0; r < dataset.n(); ++r) {
        const int li = pos_of_label[dataset.label(r)];
        ++index.N[li];
        auto& row_counts = shifted[li];
        for (int j = 0; j < index.d; ++j) ++row_counts[j][dataset.cell(r, j) + 1];
    }
    index.cells_visited += dataset.n() * index.d;
    for (int li = 0; li < m; ++li)
        for (int j = 0; j < index.d; ++j) {
            index.M[li][j] = shifted[li][j][0];
            for (int v = 0; v < dataset.value_dict_size(j); ++v) {
                index.E[li][j][v] = shifted[li][j][v + 1];
                index.value_count[j][v] += shifted[li][j][v + 1];
            }
        }
    index.domain_size.assign(index.d, 0);
    for (int j = 0; j < index.d; ++j)
        for (long long c : index.value_count[j])
            if (c > 0) ++index.domain_size[j];
    return index;
}

PointCounts counts_for(const FrequencyIndex& index, const std::vector<int>& point) {
    if (static_cast<int>(point.size()) != index.d)
        throw SchemaMismatchError("point dimension mismatch");
    PointCounts counts;
    counts.E.assign(index.m(), std::vector<long long>(index.d, 0));
    for (int j = 0; j < index.d; ++j) {
        const int v = point[j];
        if (v == Dataset::kMissing)
            throw IncompletePointError("test point has a missing value");
        if (v == Dataset::kUnseen) continue;  // E stays 0 for every label
        for (int li = 0; li < index.m(); ++li)
            counts.E[li][j] = index.E[li][j][v];
    }
    return counts;
}

void null_cell(FrequencyIndex& index, int label_id, int attr, int value_id) {
    int li = -1;
    for (int i = 0; i < index.m(); ++i)
        if (index.labels[i] == label_id) li = i;
    if (li < 0 || value_id < 0 ||
        value_id >= static_cast<int>(index.E[li][attr].size()) ||
        index.E[li][attr][value_id] <= 0)
        throw Error("null_cell: no such cell in the index");
    --index.E[li][attr][value_id];
    ++index.M[li][attr];
    if (--index.value_count[attr][value_id] == 0) --index.domain_size[attr];
}

std::string index_to_json(const FrequencyIndex& index) {
    nlohmann::ordered_json out;
    out["n"] = index.n;
    out["labels"] = index.label_tokens;
    out["N"] = index.N;
    out["M"] = index.M;
    nlohmann::ordered_json e_json = nlohmann::ordered_json::array();
    for (int li = 0; li < index.m(); ++li) {
        nlohmann::ordered_json per_attr = nlohmann::ordered_json::array();
        for (int j = 0; j < index.d; ++j) {
            std::map<std::string, long long> sorted;
            for (int v = 0; v < static_cast<int>(index.E[li][j].size()); ++v)
                if (index.E[li][j][v] > 0)
                    sorted[index.value_tokens[j][v]] = index.E[li][j][v];
            nlohmann::ordered_json table = nlohmann::ordered_json::object();
            for (const auto& [token, count] : sorted) table[token] = count;
            per_attr.push_back(std::move(table));
        }
        e_json.push_back(std::move(per_attr));
    }
    out["E"] = std::move(e_json);
    return out.dump(2);
}

}  // namespace nbcert
