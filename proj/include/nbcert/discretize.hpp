#pragma once

#include <string>
#include <vector>

#include "nbcert/dataset.hpp"

namespace nbcert {

enum class BinStrategy { Uniform, Quantile };

// Cut points per discretized attribute. A value v falls into bin
// upper_bound(cuts, v); bin i gets the token "b<i>". Values outside the
// fitted range clamp to the first/last bin by construction.
struct Binner {
    struct Column {
        int attr = -1;
        std::vector<double> cuts;   // strictly increasing
        bool constant = false;      // min == max at fit time
    };
    int n_bins = 5;
    BinStrategy strategy = BinStrategy::Uniform;
    std::vector<Column> columns;
};

Binner fit_discretizer(const Dataset& dataset,
                       const std::vector<std::string>& numeric_attrs,
                       int n_bins, BinStrategy strategy);

// Replaces numeric cells of the fitted columns with bin tokens. Missing
// cells stay missing; other attributes pass through untouched.
Dataset apply_discretizer(const Dataset& dataset, const Binner& binner);

int bin_of(const Binner::Column& column, double value);

}  // namespace nbcert
