#include "nbcert/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nbcert/errors.hpp"
#include "nbcert/rng.hpp"

namespace nbcert {

Dataset::Dataset(Schema schema) : schema_(std::move(schema)) {
    value_tokens_.resize(schema_.attributes.size());
    value_ids_.resize(schema_.attributes.size());
}

int Dataset::intern_value(int attr, const std::string& token) {
    auto& ids = value_ids_[attr];
    auto it = ids.find(token);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(value_tokens_[attr].size());
    value_tokens_[attr].push_back(token);
    ids.emplace(token, id);
    return id;
}

int Dataset::find_value(int attr, const std::string& token) const {
    auto it = value_ids_[attr].find(token);
    return it == value_ids_[attr].end() ? kUnseen : it->second;
}

int Dataset::intern_label(const std::string& token) {
    auto it = label_ids_.find(token);
    if (it != label_ids_.end()) return it->second;
    int id = static_cast<int>(label_tokens_.size());
    label_tokens_.push_back(token);
    label_ids_.emplace(token, id);
    return id;
}

int Dataset::find_label(const std::string& token) const {
    auto it = label_ids_.find(token);
    return it == label_ids_.end() ? -1 : it->second;
}

void Dataset::add_row(std::vector<int> cells, int label_id) {
    if (static_cast<int>(cells.size()) != d())
        throw SchemaMismatchError("row has " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(d()));
    cells_.insert(cells_.end(), cells.begin(), cells.end());
    labels_.push_back(label_id);
}

void Dataset::set_cell(long long row, int attr, int value_id) {
    cells_[static_cast<std::size_t>(row) * d() + attr] = value_id;
}

long long Dataset::missing_cells() const {
    return std::count(cells_.begin(), cells_.end(), kMissing);
}

std::set<std::string> Dataset::active_domain(int attr) const {
    std::set<std::string> out;
    for (long long r = 0; r < n(); ++r) {
        int v = cell(r, attr);
        if (v != kMissing) out.insert(value_tokens_[attr][v]);
    }
    return out;
}

std::vector<int> Dataset::active_domain_ids(int attr) const {
    std::vector<char> seen(value_tokens_[attr].size(), 0);
    for (long long r = 0; r < n(); ++r) {
        int v = cell(r, attr);
        if (v != kMissing) seen[v] = 1;
    }
    std::vector<int> ids;
    for (int v = 0; v < static_cast<int>(seen.size()); ++v)
        if (seen[v]) ids.push_back(v);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        return value_tokens_[attr][a] < value_tokens_[attr][b];
    });
    return ids;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

}  // namespace

Dataset parse_csv(const std::string& text, const Schema& schema) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw MalformedCsvError("empty file: no header row");
    std::vector<std::string> header = split_line(line);

    int label_col = -1;
    for (int i = 0; i < static_cast<int>(header.size()); ++i)
        if (header[i] == schema.label_attribute) label_col = i;
    if (label_col < 0)
        throw SchemaMismatchError("label column '" + schema.label_attribute +
                                  "' not found in header");

    Schema resolved = schema;
    if (resolved.attributes.empty()) {
        for (int i = 0; i < static_cast<int>(header.size()); ++i)
            if (i != label_col) resolved.attributes.push_back(header[i]);
    }
    if (resolved.attributes.size() + 1 != header.size())
        throw SchemaMismatchError("header has " + std::to_string(header.size()) +
                                  " columns, schema expects " +
                                  std::to_string(resolved.attributes.size() + 1));
    // header column -> feature attribute slot
    std::vector<int> attr_of_col(header.size(), -1);
    for (int i = 0, next = 0; i < static_cast<int>(header.size()); ++i) {
        if (i == label_col) continue;
        if (header[i] != resolved.attributes[next])
            throw SchemaMismatchError("header column '" + header[i] +
                                      "' does not match schema attribute '" +
                                      resolved.attributes[next] + "'");
        attr_of_col[i] = next++;
    }

    Dataset ds(resolved);
    long long row_no = 1;
    bool any_row = false;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size())
            throw MalformedCsvError("row " + std::to_string(row_no) + " has " +
                                    std::to_string(fields.size()) +
                                    " fields, expected " +
                                    std::to_string(header.size()));
        if (fields[label_col] == resolved.null_token)
            throw NullLabelError("row " + std::to_string(row_no) +
                                 ": label cell is the null token");
        std::vector<int> cells(resolved.attributes.size());
        for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
            if (i == label_col) continue;
            int a = attr_of_col[i];
            cells[a] = fields[i] == resolved.null_token
                           ? Dataset::kMissing
                           : ds.intern_value(a, fields[i]);
        }
        ds.add_row(std::move(cells), ds.intern_label(fields[label_col]));
        any_row = true;
    }
    if (!any_row) throw MalformedCsvError("no data rows");
    return ds;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedCsvError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Dataset ds = parse_csv(buf.str(), schema);
    ds.provenance = path;
    return ds;
}

std::string to_csv(const Dataset& dataset) {
    std::ostringstream out;
    const Schema& s = dataset.schema();
    for (int j = 0; j < dataset.d(); ++j) out << s.attributes[j] << ',';
    out << s.label_attribute << '\n';
    for (long long r = 0; r < dataset.n(); ++r) {
        for (int j = 0; j < dataset.d(); ++j) {
            int v = dataset.cell(r, j);
            out << (v == Dataset::kMissing ? s.null_token
                                           : dataset.value_token(j, v));
            out << ',';
        }
        out << dataset.label_token(dataset.label(r)) << '\n';
    }
    return out.str();
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << to_csv(dataset);
}

Dataset inject_missing(const Dataset& dataset, double rate, std::uint64_t seed) {
    if (!dataset.is_complete())
        throw NotCompleteError("inject_missing requires a complete dataset");
    const long long total = dataset.n() * dataset.d();
    const long long count = std::llround(rate * static_cast<double>(total));
    Dataset out = dataset;
    if (count == 0) return out;

    std::vector<long long> cells(total);
    for (long long i = 0; i < total; ++i) cells[i] = i;
    Rng rng(seed);
    // partial Fisher-Yates: the first `count` entries are a uniform sample
    for (long long i = 0; i < count; ++i) {
        long long j = i + static_cast<long long>(draw_below(rng, total - i));
        std::swap(cells[i], cells[j]);
    }
    for (long long i = 0; i < count; ++i) {
        out.set_cell(cells[i] / dataset.d(),
                     static_cast<int>(cells[i] % dataset.d()), Dataset::kMissing);
    }
    out.provenance = dataset.provenance + " +missing(rate=" + std::to_string(rate) +
                     ",seed=" + std::to_string(seed) + ")";
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed) {
    std::vector<long long> order(dataset.n());
    for (long long i = 0; i < dataset.n(); ++i) order[i] = i;
    Rng rng(seed);
    fisher_yates(rng, order);
    const long long n_train =
        std::llround(train_fraction * static_cast<double>(dataset.n()));

    Dataset train(dataset.schema()), test(dataset.schema());
    auto copy_row = [&](Dataset& dst, long long r) {
        std::vector<int> cells(dataset.d());
        for (int j = 0; j < dataset.d(); ++j) {
            int v = dataset.cell(r, j);
            cells[j] = v == Dataset::kMissing
                           ? Dataset::kMissing
                           : dst.intern_value(j, dataset.value_token(j, v));
        }
        dst.add_row(std::move(cells),
                    dst.intern_label(dataset.label_token(dataset.label(r))));
    };
    for (long long i = 0; i < dataset.n(); ++i)
        copy_row(i < n_train ? train : test, order[i]);
    return {std::move(train), std::move(test)};
}

std::vector<int> encode_point(const Dataset& dataset,
                              const std::vector<std::string>& tokens) {
    if (static_cast<int>(tokens.size()) != dataset.d())
        throw SchemaMismatchError("point has " + std::to_string(tokens.size()) +
                                  " values, expected " + std::to_string(dataset.d()));
    std::vector<int> ids(tokens.size());
    for (int j = 0; j < dataset.d(); ++j) {
        if (tokens[j] == dataset.schema().null_token)
            throw IncompletePointError("test point has a missing value at attribute " +
                                       dataset.schema().attributes[j]);
        ids[j] = dataset.find_value(j, tokens[j]);
    }
    return ids;
}

std::vector<std::vector<std::string>> load_points_csv(const std::string& path,
                                                      const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedCsvError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw MalformedCsvError("empty points file");
    std::vector<std::string> header = split_line(line);
    std::vector<int> col_of_attr(schema.attributes.size(), -1);
    for (int a = 0; a < static_cast<int>(schema.attributes.size()); ++a) {
        for (int i = 0; i < static_cast<int>(header.size()); ++i)
            if (header[i] == schema.attributes[a]) col_of_attr[a] = i;
        if (col_of_attr[a] < 0)
            throw SchemaMismatchError("points file lacks attribute '" +
                                      schema.attributes[a] + "'");
    }
    std::vector<std::vector<std::string>> points;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size())
            throw MalformedCsvError("ragged row in points file");
        std::vector<std::string> point(schema.attributes.size());
        for (int a = 0; a < static_cast<int>(schema.attributes.size()); ++a)
            point[a] = fields[col_of_attr[a]];
        points.push_back(std::move(point));
    }
    return points;
}

}  // namespace nbcert
