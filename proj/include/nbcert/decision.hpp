#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbcert/dataset.hpp"
#include "nbcert/index.hpp"
#include "nbcert/support.hpp"

namespace nbcert {

enum class Outcome { Robust, NonRobust };

struct LabelBounds {
    int label_id = -1;  // dataset label id
    std::string label_token;
    Support lo;  // support when every fill disagrees with the point
    Support hi;  // support when every fill agrees with the point
};

struct CertifyVerdict {
    Outcome outcome = Outcome::NonRobust;
    int robust_label = -1;
    std::string robust_label_token;
    std::vector<LabelBounds> table;
};

// Support of a complete test point for one label on a complete dataset.
// Labels absent from the dataset get the zero support.
Support support_of(const Dataset& dataset, int label_id, const std::vector<int>& point);

// NBC prediction on a complete dataset: strict argmax of support, or nullopt
// when the argmax ties.
std::optional<int> nbc_predict(const Dataset& dataset, const std::vector<int>& point);

// Per-label extreme supports over all possible worlds. With the active-domain
// guard on (the default), the agree-fill term M is added only when the point
// value actually occurs in the attribute's active domain, and the disagree
// fill is forced to agree when that domain is the singleton {t_j}.
std::vector<LabelBounds> min_max_support(const FrequencyIndex& index,
                                         const PointCounts& counts,
                                         const std::vector<int>& point,
                                         bool domain_guard = true);

CertifyVerdict certify(const FrequencyIndex& index, const std::vector<int>& point,
                       bool domain_guard = true);

std::vector<CertifyVerdict> certify_batch(const FrequencyIndex& index,
                                          const std::vector<std::vector<int>>& points,
                                          bool domain_guard = true);

// Index-free baseline: one O(nd) dataset scan per call.
CertifyVerdict certify_scan(const Dataset& dataset, const std::vector<int>& point,
                            bool domain_guard = true);

// A possible world: the completed dataset plus the chosen fill value per
// missing cell (row-major cell order).
struct PossibleWorld {
    Dataset world;
    std::vector<int> fill;
};

// Streams every possible world of an incomplete dataset: each missing cell
// independently ranges over its attribute's active domain, tokens in sorted
// order, last missing cell varying fastest.
class WorldEnumerator {
public:
    WorldEnumerator(const Dataset& dataset, std::uint64_t cap);
    std::uint64_t world_count() const { return count_; }
    std::optional<PossibleWorld> next();

private:
    Dataset base_;
    std::vector<std::pair<long long, int>> missing_;  // (row, attr)
    std::vector<std::vector<int>> domains_;           // per missing cell
    std::vector<std::size_t> odometer_;
    std::uint64_t count_ = 0;
    bool done_ = false;
};

// Brute-force validation oracle: NBC prediction on every possible world;
// robust iff every world has the same strict argmax.
CertifyVerdict oracle_certify(const Dataset& dataset, const std::vector<int>& point,
                              std::uint64_t cap = 1000000);

// Sampling baseline: predicts on `samples` uniformly filled worlds; robust iff
// all sampled predictions are strict and agree. May report false robust.
CertifyVerdict approx_certify(const Dataset& dataset, const std::vector<int>& point,
                              int samples, std::uint64_t seed);

std::string verdict_to_json(const CertifyVerdict& verdict, int point_id);

}  // namespace nbcert
