#include "nbcert/decision.hpp"

#include <json.hpp>

#include "nbcert/errors.hpp"
#include "nbcert/rng.hpp"

namespace nbcert {

namespace {

void check_complete_point(const std::vector<int>& point) {
    for (int v : point)
        if (v == Dataset::kMissing)
            throw IncompletePointError("test point has a missing value");
}

// Robust(l_i) iff lo_i strictly exceeds every other hi_j. The two largest hi
// values suffice: compare against the top one, or the runner-up when i itself
// holds the top spot.
CertifyVerdict decide(std::vector<LabelBounds> table) {
    CertifyVerdict verdict;
    int top = -1, second = -1;
    for (int i = 0; i < static_cast<int>(table.size()); ++i) {
        if (top < 0 || compare(table[i].hi, table[top].hi) > 0) {
            second = top;
            top = i;
        } else if (second < 0 || compare(table[i].hi, table[second].hi) > 0) {
            second = i;
        }
    }
    for (int i = 0; i < static_cast<int>(table.size()); ++i) {
        const int rival = (i == top) ? second : top;
        if (rival < 0 || compare(table[i].lo, table[rival].hi) > 0) {
            verdict.outcome = Outcome::Robust;
            verdict.robust_label = table[i].label_id;
            verdict.robust_label_token = table[i].label_token;
            break;
        }
    }
    verdict.table = std::move(table);
    return verdict;
}

}  // namespace

Support support_of(const Dataset& dataset, int label_id,
                   const std::vector<int>& point) {
    check_complete_point(point);
    Support s;
    s.total = dataset.n();
    s.dim = dataset.d();
    if (label_id < 0 || label_id >= dataset.label_dict_size()) return s;
    std::vector<long long> e(dataset.d(), 0);
    long long count = 0;
    for (long long r = 0; r < dataset.n(); ++r) {
        if (dataset.label(r) != label_id) continue;
        ++count;
        for (int j = 0; j < dataset.d(); ++j)
            if (dataset.cell(r, j) == point[j]) ++e[j];
    }
    s.label_count = count;
    if (count == 0) return s;
    s.prod = 1;
    for (long long ej : e) s.prod *= static_cast<long>(ej);
    return s;
}

std::optional<int> nbc_predict(const Dataset& dataset, const std::vector<int>& point) {
    int best = -1;
    bool tied = false;
    std::vector<Support> supports(dataset.label_dict_size());
    for (int l = 0; l < dataset.label_dict_size(); ++l) {
        supports[l] = support_of(dataset, l, point);
        if (supports[l].label_count == 0) continue;
        if (best < 0) {
            best = l;
            continue;
        }
        const int c = compare(supports[l], supports[best]);
        if (c > 0) {
            best = l;
            tied = false;
        } else if (c == 0) {
            tied = true;
        }
    }
    if (best < 0 || tied) return std::nullopt;
    return best;
}

std::vector<LabelBounds> min_max_support(const FrequencyIndex& index,
                                         const PointCounts& counts,
                                         const std::vector<int>& point,
                                         bool domain_guard) {
    std::vector<LabelBounds> table(index.m());
    for (int li = 0; li < index.m(); ++li) {
        LabelBounds& row = table[li];
        row.label_id = index.labels[li];
        row.label_token = index.label_tokens[li];
        mpz_class lo_prod = 1, hi_prod = 1;
        for (int j = 0; j < index.d; ++j) {
            const long long e = counts.E[li][j];
            const long long miss = index.M[li][j];
            long long hi_num, lo_num;
            if (domain_guard) {
                // a fill can realize t_j only if t_j is in the active domain;
                // it is forced to when the domain is the singleton {t_j}
                hi_num = e + (index.in_domain(j, point[j]) ? miss : 0);
                lo_num = e + (index.domain_is_singleton(j, point[j]) ? miss : 0);
            } else {
                hi_num = e + miss;
                lo_num = e;
            }
            lo_prod *= static_cast<long>(lo_num);
            hi_prod *= static_cast<long>(hi_num);
        }
        row.lo = Support{std::move(lo_prod), index.N[li], index.n, index.d};
        row.hi = Support{std::move(hi_prod), index.N[li], index.n, index.d};
    }
    return table;
}

CertifyVerdict certify(const FrequencyIndex& index, const std::vector<int>& point,
                       bool domain_guard) {
    check_complete_point(point);
    return decide(min_max_support(index, counts_for(index, point), point, domain_guard));
}

std::vector<CertifyVerdict> certify_batch(const FrequencyIndex& index,
                                          const std::vector<std::vector<int>>& points,
                                          bool domain_guard) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (int v : points[i])
            if (v == Dataset::kMissing)
                throw IncompletePointError("test point " + std::to_string(i) +
                                           " has a missing value");
    }
    std::vector<CertifyVerdict> verdicts;
    verdicts.reserve(points.size());
    for (const auto& point : points)
        verdicts.push_back(certify(index, point, domain_guard));
    return verdicts;
}

CertifyVerdict certify_scan(const Dataset& dataset, const std::vector<int>& point,
                            bool domain_guard) {
    check_complete_point(point);
    if (dataset.n() == 0) throw EmptyDatasetError("cannot certify on an empty dataset");
    const int d = dataset.d();
    const int L = dataset.label_dict_size();
    std::vector<long long> n_rows(L, 0);
    std::vector<std::vector<long long>> e(L, std::vector<long long>(d, 0));
    std::vector<std::vector<long long>> miss(L, std::vector<long long>(d, 0));
    std::vector<std::vector<char>> seen(d);
    for (int j = 0; j < d; ++j) seen[j].assign(dataset.value_dict_size(j), 0);

    for (long long r = 0; r < dataset.n(); ++r) {
        const int l = dataset.label(r);
        ++n_rows[l];
        for (int j = 0; j < d; ++j) {
            const int v = dataset.cell(r, j);
            if (v == Dataset::kMissing)
                ++miss[l][j];
            else {
                seen[j][v] = 1;
                if (v == point[j]) ++e[l][j];
            }
        }
    }

    std::vector<LabelBounds> table;
    for (int l = 0; l < L; ++l) {
        if (n_rows[l] == 0) continue;
        LabelBounds row;
        row.label_id = l;
        row.label_token = dataset.label_token(l);
        mpz_class lo_prod = 1, hi_prod = 1;
        for (int j = 0; j < d; ++j) {
            long long domain = 0;
            for (char s : seen[j]) domain += s;
            const bool point_in_domain =
                point[j] >= 0 && point[j] < static_cast<int>(seen[j].size()) &&
                seen[j][point[j]];
            long long hi_num, lo_num;
            if (domain_guard) {
                hi_num = e[l][j] + (point_in_domain ? miss[l][j] : 0);
                lo_num = e[l][j] + (domain == 1 && point_in_domain ? miss[l][j] : 0);
            } else {
                hi_num = e[l][j] + miss[l][j];
                lo_num = e[l][j];
            }
            lo_prod *= static_cast<long>(lo_num);
            hi_prod *= static_cast<long>(hi_num);
        }
        row.lo = Support{std::move(lo_prod), n_rows[l], dataset.n(), d};
        row.hi = Support{std::move(hi_prod), n_rows[l], dataset.n(), d};
        table.push_back(std::move(row));
    }
    return decide(std::move(table));
}

WorldEnumerator::WorldEnumerator(const Dataset& dataset, std::uint64_t cap)
    : base_(dataset) {
    for (long long r = 0; r < dataset.n(); ++r)
        for (int j = 0; j < dataset.d(); ++j)
            if (dataset.cell(r, j) == Dataset::kMissing) missing_.emplace_back(r, j);

    std::vector<std::vector<int>> domain_of_attr(dataset.d());
    unsigned __int128 count = 1;
    for (const auto& [row, attr] : missing_) {
        if (domain_of_attr[attr].empty())
            domain_of_attr[attr] = dataset.active_domain_ids(attr);
        if (domain_of_attr[attr].empty())
            throw EmptyDomainError("attribute '" + dataset.schema().attributes[attr] +
                                   "' is all-missing: no fill value exists");
        domains_.push_back(domain_of_attr[attr]);
        count *= domain_of_attr[attr].size();
        if (count > cap)
            throw TooManyWorldsError("possible-world count exceeds cap " +
                                     std::to_string(cap));
    }
    count_ = static_cast<std::uint64_t>(count);
    odometer_.assign(missing_.size(), 0);
}

std::optional<PossibleWorld> WorldEnumerator::next() {
    if (done_) return std::nullopt;
    PossibleWorld world{base_, {}};
    world.fill.resize(missing_.size());
    for (std::size_t c = 0; c < missing_.size(); ++c) {
        const int v = domains_[c][odometer_[c]];
        world.fill[c] = v;
        world.world.set_cell(missing_[c].first, missing_[c].second, v);
    }
    // advance, last cell fastest
    done_ = true;
    for (std::size_t c = missing_.size(); c-- > 0;) {
        if (++odometer_[c] < domains_[c].size()) {
            done_ = false;
            break;
        }
        odometer_[c] = 0;
    }
    return world;
}

CertifyVerdict oracle_certify(const Dataset& dataset, const std::vector<int>& point,
                              std::uint64_t cap) {
    check_complete_point(point);
    WorldEnumerator worlds(dataset, cap);
    CertifyVerdict verdict;
    int agreed = -1;
    bool robust = true;
    bool first = true;
    std::vector<LabelBounds> table;
    while (auto world = worlds.next()) {
        for (int l = 0; l < dataset.label_dict_size(); ++l) {
            Support s = support_of(world->world, l, point);
            if (s.label_count == 0) continue;
            if (first) {
                LabelBounds row;
                row.label_id = l;
                row.label_token = dataset.label_token(l);
                row.lo = s;
                row.hi = std::move(s);
                table.push_back(std::move(row));
            } else {
                for (auto& row : table) {
                    if (row.label_id != l) continue;
                    if (compare(s, row.lo) < 0) row.lo = s;
                    if (compare(s, row.hi) > 0) row.hi = std::move(s);
                    break;
                }
            }
        }
        first = false;
        if (!robust) continue;  // keep scanning to finish the min/max table
        auto predicted = nbc_predict(world->world, point);
        if (!predicted.has_value() || (agreed >= 0 && *predicted != agreed))
            robust = false;
        else
            agreed = *predicted;
    }
    verdict.table = std::move(table);
    if (robust && agreed >= 0) {
        verdict.outcome = Outcome::Robust;
        verdict.robust_label = agreed;
        verdict.robust_label_token = dataset.label_token(agreed);
    }
    return verdict;
}

CertifyVerdict approx_certify(const Dataset& dataset, const std::vector<int>& point,
                              int samples, std::uint64_t seed) {
    check_complete_point(point);
    std::vector<std::pair<long long, int>> missing;
    for (long long r = 0; r < dataset.n(); ++r)
        for (int j = 0; j < dataset.d(); ++j)
            if (dataset.cell(r, j) == Dataset::kMissing) missing.emplace_back(r, j);
    std::vector<std::vector<int>> domain_of_attr(dataset.d());
    for (const auto& [row, attr] : missing) {
        if (domain_of_attr[attr].empty()) {
            domain_of_attr[attr] = dataset.active_domain_ids(attr);
            if (domain_of_attr[attr].empty())
                throw EmptyDomainError("attribute '" +
                                       dataset.schema().attributes[attr] +
                                       "' is all-missing: no fill value exists");
        }
    }
    if (missing.empty()) samples = 1;

    Rng rng(seed);
    CertifyVerdict verdict;
    int agreed = -1;
    Dataset world = dataset;
    for (int s = 0; s < samples; ++s) {
        for (const auto& [row, attr] : missing) {
            const auto& dom = domain_of_attr[attr];
            world.set_cell(row, attr, dom[draw_below(rng, dom.size())]);
        }
        auto predicted = nbc_predict(world, point);
        if (!predicted.has_value() || (agreed >= 0 && *predicted != agreed))
            return verdict;  // NonRobust
        agreed = *predicted;
    }
    verdict.outcome = Outcome::Robust;
    verdict.robust_label = agreed;
    verdict.robust_label_token = dataset.label_token(agreed);
    return verdict;
}

std::string verdict_to_json(const CertifyVerdict& verdict, int point_id) {
    nlohmann::ordered_json out;
    out["point_id"] = point_id;
    out["outcome"] = verdict.outcome == Outcome::Robust ? "robust" : "non_robust";
    if (verdict.outcome == Outcome::Robust)
        out["robust_label"] = verdict.robust_label_token;
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (const auto& row : verdict.table) {
        nlohmann::ordered_json entry;
        entry["label"] = row.label_token;
        entry["min_support"] = to_fraction(row.lo);
        entry["max_support"] = to_fraction(row.hi);
        table.push_back(std::move(entry));
    }
    out["table"] = std::move(table);
    return out.dump();
}

}  // namespace nbcert
