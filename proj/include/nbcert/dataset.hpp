#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nbcert {

struct Schema {
    // Feature attribute names, in column order. May be left empty when
    // loading a CSV, in which case every non-label header column becomes a
    // feature attribute.
    std::vector<std::string> attributes;
    std::string label_attribute;
    std::string null_token = "NULL";
};

// Categorical dataset with optional missing feature cells. Values are
// interned per attribute; a cell holds the value id or kMissing. Labels are
// interned in first-appearance order, which fixes the label iteration order
// everywhere downstream.
class Dataset {
public:
    static constexpr int kMissing = -1;
    // Returned by find_value/encode_point for tokens absent from the
    // dictionary; never stored in a cell.
    static constexpr int kUnseen = -2;

    Dataset() : Dataset(Schema{}) {}
    explicit Dataset(Schema schema);

    int d() const { return static_cast<int>(schema_.attributes.size()); }
    long long n() const { return static_cast<long long>(labels_.size()); }
    const Schema& schema() const { return schema_; }

    int cell(long long row, int attr) const {
        return cells_[static_cast<std::size_t>(row) * d() + attr];
    }
    int label(long long row) const { return labels_[row]; }

    int intern_value(int attr, const std::string& token);
    int find_value(int attr, const std::string& token) const;  // kUnseen if absent
    const std::string& value_token(int attr, int id) const {
        return value_tokens_[attr][id];
    }
    int value_dict_size(int attr) const {
        return static_cast<int>(value_tokens_[attr].size());
    }

    int intern_label(const std::string& token);
    int find_label(const std::string& token) const;  // -1 if absent
    const std::string& label_token(int id) const { return label_tokens_[id]; }
    int label_dict_size() const { return static_cast<int>(label_tokens_.size()); }

    void add_row(std::vector<int> cells, int label_id);
    void set_cell(long long row, int attr, int value_id);

    long long missing_cells() const;
    bool is_complete() const { return missing_cells() == 0; }

    // Non-missing tokens observed in the column; empty if all-missing.
    std::set<std::string> active_domain(int attr) const;
    // Same, as value ids sorted by token string (deterministic order).
    std::vector<int> active_domain_ids(int attr) const;

    std::string provenance;

private:
    Schema schema_;
    std::vector<std::vector<std::string>> value_tokens_;  // [attr][id]
    std::vector<std::unordered_map<std::string, int>> value_ids_;
    std::vector<std::string> label_tokens_;
    std::unordered_map<std::string, int> label_ids_;
    std::vector<int> cells_;  // row-major, n*d
    std::vector<int> labels_;
};

Dataset load_csv(const std::string& path, const Schema& schema);
Dataset parse_csv(const std::string& text, const Schema& schema);
std::string to_csv(const Dataset& dataset);
void write_csv(const Dataset& dataset, const std::string& path);

// Marks exactly round(rate * n * d) distinct feature cells as missing,
// chosen uniformly without replacement. Label cells are never touched.
Dataset inject_missing(const Dataset& dataset, double rate, std::uint64_t seed);

// Seeded uniform shuffle, then prefix split of round(train_fraction * n) rows.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed);

// Encodes a complete test point (one token per feature attribute, schema
// order) against the dataset's dictionaries. Unseen tokens map to kUnseen.
// Throws IncompletePointError if a token equals the null token.
std::vector<int> encode_point(const Dataset& dataset,
                              const std::vector<std::string>& tokens);

// Loads test points from a CSV whose header contains the dataset's feature
// attributes (extra columns, e.g. the label, are ignored).
std::vector<std::vector<std::string>> load_points_csv(const std::string& path,
                                                      const Schema& schema);

}  // namespace nbcert
