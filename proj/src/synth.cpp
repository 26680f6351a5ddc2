#include "nbcert/synth.hpp"

#include "nbcert/errors.hpp"
#include "nbcert/rng.hpp"

namespace nbcert {

Dataset make_synthetic(long long rows, int attrs, int labels, int domain,
                       std::uint64_t seed) {
    if (rows < 1 || attrs < 1 || labels < 1 || domain < 1)
        throw Error("synthetic dataset needs positive rows/attrs/labels/domain");
    Schema schema;
    for (int j = 0; j < attrs; ++j) schema.attributes.push_back("A" + std::to_string(j));
    schema.label_attribute = "label";

    Dataset ds(schema);
    std::vector<std::vector<int>> value_ids(attrs);
    for (int j = 0; j < attrs; ++j)
        for (int v = 0; v < domain; ++v)
            value_ids[j].push_back(ds.intern_value(j, "v" + std::to_string(v)));
    std::vector<int> label_ids;
    for (int l = 0; l < labels; ++l)
        label_ids.push_back(ds.intern_label("l" + std::to_string(l)));

    Rng rng(seed);
    for (long long r = 0; r < rows; ++r) {
        std::vector<int> cells(attrs);
        for (int j = 0; j < attrs; ++j)
            cells[j] = value_ids[j][draw_below(rng, domain)];
        ds.add_row(std::move(cells), label_ids[draw_below(rng, labels)]);
    }
    ds.provenance = "synthetic(rows=" + std::to_string(rows) +
                    ",attrs=" + std::to_string(attrs) +
                    ",labels=" + std::to_string(labels) +
                    ",domain=" + std::to_string(domain) +
                    ",seed=" + std::to_string(seed) + ")";
    return ds;
}

std::vector<std::vector<std::string>> sample_points(const Dataset& dataset, int k,
                                                    std::uint64_t seed) {
    if (k > dataset.n()) throw Error("cannot sample more points than rows");
    std::vector<long long> rows(dataset.n());
    for (long long i = 0; i < dataset.n(); ++i) rows[i] = i;
    Rng rng(seed);
    for (int i = 0; i < k; ++i) {
        const long long j =
            i + static_cast<long long>(draw_below(rng, rows.size() - i));
        std::swap(rows[i], rows[j]);
    }
    std::vector<std::vector<std::string>> points;
    for (int i = 0; i < k; ++i) {
        std::vector<std::string> point(dataset.d());
        for (int j = 0; j < dataset.d(); ++j) {
            const int v = dataset.cell(rows[i], j);
            if (v == Dataset::kMissing)
                throw IncompletePointError("sampled row has a missing value");
            point[j] = dataset.value_token(j, v);
        }
        points.push_back(std::move(point));
    }
    return points;
}

}  // namespace nbcert
