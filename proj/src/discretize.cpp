#include "nbcert/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "nbcert/errors.hpp"

namespace nbcert {

namespace {

double parse_number(const std::string& token, const std::string& attr) {
    const char* begin = token.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw NonNumericError("attribute '" + attr + "': cannot parse '" + token +
                              "' as a number");
    return v;
}

// Linear-interpolation empirical quantile over a sorted sample.
double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

int bin_of(const Binner::Column& column, double value) {
    auto it = std::upper_bound(column.cuts.begin(), column.cuts.end(), value);
    return static_cast<int>(it - column.cuts.begin());
}

Binner fit_discretizer(const Dataset& dataset,
                       const std::vector<std::string>& numeric_attrs,
                       int n_bins, BinStrategy strategy) {
    if (n_bins < 2) throw Error("n_bins must be at least 2");
    if (!dataset.is_complete())
        throw NotCompleteError("fit_discretizer requires a complete dataset");

    Binner binner;
    binner.n_bins = n_bins;
    binner.strategy = strategy;
    for (const std::string& name : numeric_attrs) {
        int attr = -1;
        for (int j = 0; j < dataset.d(); ++j)
            if (dataset.schema().attributes[j] == name) attr = j;
        if (attr < 0)
            throw SchemaMismatchError("unknown numeric attribute '" + name + "'");

        std::vector<double> values(dataset.n());
        for (long long r = 0; r < dataset.n(); ++r)
            values[r] = parse_number(dataset.value_token(attr, dataset.cell(r, attr)),
                                     name);
        std::sort(values.begin(), values.end());
        const double lo = values.front(), hi = values.back();

        Binner::Column column;
        column.attr = attr;
        if (lo == hi) {
            column.constant = true;  // single bin, warn at the CLI layer
        } else if (strategy == BinStrategy::Uniform) {
            for (int i = 1; i < n_bins; ++i)
                column.cuts.push_back(lo + (hi - lo) * i / n_bins);
        } else {
            for (int i = 1; i < n_bins; ++i)
                column.cuts.push_back(quantile(values, static_cast<double>(i) / n_bins));
        }
        // collapse duplicate cut points; fewer effective bins is fine
        column.cuts.erase(std::unique(column.cuts.begin(), column.cuts.end()),
                          column.cuts.end());
        binner.columns.push_back(std::move(column));
    }
    return binner;
}

Dataset apply_discretizer(const Dataset& dataset, const Binner& binner) {
    Dataset out(dataset.schema());
    out.provenance = dataset.provenance;
    std::vector<const Binner::Column*> col_of_attr(dataset.d(), nullptr);
    for (const auto& column : binner.columns) {
        if (column.attr < 0 || column.attr >= dataset.d())
            throw SchemaMismatchError("binner column out of range");
        col_of_attr[column.attr] = &column;
    }
    for (long long r = 0; r < dataset.n(); ++r) {
        std::vector<int> cells(dataset.d());
        for (int j = 0; j < dataset.d(); ++j) {
            int v = dataset.cell(r, j);
            if (v == Dataset::kMissing) {
                cells[j] = Dataset::kMissing;
            } else if (col_of_attr[j] != nullptr) {
                double x = parse_number(dataset.value_token(j, v),
                                        dataset.schema().attributes[j]);
                cells[j] = out.intern_value(
                    j, "b" + std::to_string(bin_of(*col_of_attr[j], x)));
            } else {
                cells[j] = out.intern_value(j, dataset.value_token(j, v));
            }
        }
        out.add_row(std::move(cells),
                    out.intern_label(dataset.label_token(dataset.label(r))));
    }
    return out;
}

}  // namespace nbcert
