#include "nbcert/poisoning.hpp"

#include <algorithm>
#include <chrono>

#include <json.hpp>

#include "nbcert/errors.hpp"
#include "nbcert/index.hpp"
#include "nbcert/rng.hpp"

namespace nbcert {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

mpz_class pow_ll(long long base, int exp) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base),
                  static_cast<unsigned long>(exp));
    return out;
}

mpz_class product(const std::vector<long long>& factors) {
    mpz_class out = 1;
    for (long long f : factors) out *= static_cast<long>(f);
    return out;
}

// Encodes tokens into a working copy, interning tokens the dataset has never
// seen so alteration targets always have a value id.
std::vector<int> intern_point(Dataset& working, const std::vector<std::string>& tokens) {
    if (static_cast<int>(tokens.size()) != working.d())
        throw SchemaMismatchError("point dimension mismatch");
    std::vector<int> ids(tokens.size());
    for (int j = 0; j < working.d(); ++j) {
        if (tokens[j] == working.schema().null_token)
            throw IncompletePointError("test point has a missing value");
        ids[j] = working.intern_value(j, tokens[j]);
    }
    return ids;
}

int predicted_label_strict(const Dataset& dataset, const std::vector<int>& point) {
    auto predicted = nbc_predict(dataset, point);
    if (!predicted.has_value())
        throw AmbiguousPredictionError(
            "NBC prediction on the clean dataset is not a strict argmax");
    return *predicted;
}

std::vector<Cell> sorted_unique(std::vector<Cell> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
}

Dataset null_cells(const Dataset& dataset, const std::vector<Cell>& cells) {
    Dataset out = dataset;
    for (const auto& [row, attr] : cells) out.set_cell(row, attr, Dataset::kMissing);
    return out;
}

// Labels eligible as challengers: present in the data, not the winner.
std::vector<int> challenger_labels(const Dataset& dataset, int label_star) {
    std::vector<long long> rows(dataset.label_dict_size(), 0);
    for (long long r = 0; r < dataset.n(); ++r) ++rows[dataset.label(r)];
    std::vector<int> out;
    for (int l = 0; l < dataset.label_dict_size(); ++l)
        if (l != label_star && rows[l] > 0) out.push_back(l);
    return out;
}

}  // namespace

AttackState::AttackState(Dataset& working, std::vector<int> point, int label_star,
                         int label_challenger)
    : data_(&working),
      point_(std::move(point)),
      label_star_(label_star),
      label_chal_(label_challenger) {
    if (!working.is_complete())
        throw NotCompleteError("poisoning requires a complete dataset");
    e_star_.assign(working.d(), 0);
    e_chal_.assign(working.d(), 0);
    for (long long r = 0; r < working.n(); ++r) {
        const int l = working.label(r);
        if (l != label_star_ && l != label_chal_) continue;
        auto& e = (l == label_star_) ? e_star_ : e_chal_;
        auto& count = (l == label_star_) ? n_star_ : n_chal_;
        ++count;
        for (int j = 0; j < working.d(); ++j)
            if (working.cell(r, j) == point_[j]) ++e[j];
    }
}

bool AttackState::legal(Branch op) const {
    if (op == Branch::A1) {
        // a disagreeing challenger row exists unless every numerator is maxed
        return *std::min_element(e_chal_.begin(), e_chal_.end()) < n_chal_;
    }
    // once the smallest winner numerator hits zero the product is zero and no
    // further A2 step can move Delta
    return *std::min_element(e_star_.begin(), e_star_.end()) > 0;
}

int AttackState::fresh_token(int attr) {
    std::string token;
    do {
        token = "__c" + std::to_string(fresh_counter_++) + "_" +
                data_->schema().attributes[attr];
    } while (data_->find_value(attr, token) != Dataset::kUnseen);
    return data_->intern_value(attr, token);
}

Cell AttackState::step(Branch op) {
    if (!legal(op)) throw StuckNoLegalStepError("no legal alteration for this branch");
    const auto& e = (op == Branch::A1) ? e_chal_ : e_star_;
    const int target_label = (op == Branch::A1) ? label_chal_ : label_star_;
    const int attr = static_cast<int>(
        std::min_element(e.begin(), e.end()) - e.begin());  // ties -> lowest index

    for (long long r = 0; r < data_->n(); ++r) {
        if (data_->label(r) != target_label) continue;
        const bool agrees = data_->cell(r, attr) == point_[attr];
        if (op == Branch::A1 && !agrees) {
            data_->set_cell(r, attr, point_[attr]);
            ++e_chal_[attr];
            return {r, attr};
        }
        if (op == Branch::A2 && agrees) {
            data_->set_cell(r, attr, fresh_token(attr));
            --e_star_[attr];
            return {r, attr};
        }
    }
    throw StuckNoLegalStepError("no eligible row found");  // unreachable if legal()
}

mpz_class AttackState::prod_star() const { return product(e_star_); }
mpz_class AttackState::prod_challenger() const { return product(e_chal_); }

mpz_class AttackState::delta_numerator() const {
    return prod_star() * pow_ll(n_chal_, data_->d() - 1) -
           prod_challenger() * pow_ll(n_star_, data_->d() - 1);
}

mpz_class AttackState::denominator() const {
    return mpz_class(static_cast<long>(data_->n())) * pow_ll(n_star_, data_->d() - 1) *
           pow_ll(n_chal_, data_->d() - 1);
}

BranchTrace run_branch(Dataset& working, const std::vector<int>& point,
                       int label_star, int label_challenger, Branch op,
                       std::vector<Cell>* cells) {
    AttackState state(working, point, label_star, label_challenger);
    BranchTrace trace;
    trace.branch = op;
    trace.n = working.n();
    trace.d = working.d();
    trace.n_star = state.n_star();
    trace.n_chal = state.n_challenger();
    trace.denom = state.denominator();
    trace.prod_star0 = state.prod_star();
    trace.prod_chal0 = state.prod_challenger();
    trace.delta_num0 = state.delta_numerator();

    mpz_class delta = trace.delta_num0;
    const long long step_cap = working.n() * working.d() + 1;
    while (delta >= 0) {
        if (!state.legal(op) || static_cast<long long>(trace.steps.size()) >= step_cap) {
            trace.saturated = true;
            break;
        }
        Cell cell = state.step(op);
        if (cells != nullptr) cells->push_back(cell);
        delta = state.delta_numerator();
        trace.steps.push_back(BranchStep{cell, state.prod_star(),
                                         state.prod_challenger(), delta});
    }
    return trace;
}

AlterResult alter_prediction(const Dataset& dataset,
                             const std::vector<std::string>& point_tokens,
                             int label_challenger) {
    if (!dataset.is_complete())
        throw NotCompleteError("alter_prediction requires a complete dataset");

    Dataset a1_world = dataset;
    std::vector<int> point = intern_point(a1_world, point_tokens);
    const int label_star = predicted_label_strict(dataset, encode_point(dataset, point_tokens));
    if (label_challenger == label_star)
        throw Error("challenger label equals the predicted label");

    Dataset a2_world = a1_world;  // shares the interned point tokens

    AlterResult result;
    result.label_star = label_star;
    result.label_challenger = label_challenger;
    std::vector<Cell> a1_cells, a2_cells;
    result.a1 = run_branch(a1_world, point, label_star, label_challenger, Branch::A1,
                           &a1_cells);
    result.a2 = run_branch(a2_world, point, label_star, label_challenger, Branch::A2,
                           &a2_cells);
    result.k_plus = result.a1.saturated ? -1 : result.a1.k();
    result.k_minus = result.a2.saturated ? -1 : result.a2.k();
    if (result.a1.saturated && result.a2.saturated)
        throw InfeasibleError("both alteration branches saturate before Delta < 0");

    const bool take_a2 =
        !result.a2.saturated && (result.a1.saturated || result.k_minus < result.k_plus);
    result.chosen = take_a2 ? Branch::A2 : Branch::A1;
    result.altered = take_a2 ? std::move(a2_world) : std::move(a1_world);
    result.cells = take_a2 ? std::move(a2_cells) : std::move(a1_cells);
    result.k = static_cast<long long>(result.cells.size());
    return result;
}

PoisonPlan poison_single(const Dataset& dataset,
                         const std::vector<std::string>& point_tokens) {
    const auto start = Clock::now();
    const int label_star =
        predicted_label_strict(dataset, encode_point(dataset, point_tokens));

    std::optional<AlterResult> best;
    for (int challenger : challenger_labels(dataset, label_star)) {
        try {
            AlterResult result = alter_prediction(dataset, point_tokens, challenger);
            if (!best.has_value() || result.k < best->k) best = std::move(result);
        } catch (const InfeasibleError&) {
            continue;
        }
    }
    if (!best.has_value())
        throw AllInfeasibleError("no challenger label admits a finite attack");

    PoisonPlan plan;
    plan.algorithm = "GS";
    plan.cells = sorted_unique(best->cells);
    plan.poisoned = null_cells(dataset, plan.cells);

    PointTrace trace;
    trace.point_id = 0;
    trace.label_attacked = best->label_challenger;
    trace.label_attacked_token = dataset.label_token(best->label_challenger);
    trace.branch = best->chosen;
    trace.k_plus = best->k_plus;
    trace.k_minus = best->k_minus;
    trace.k = best->k;
    trace.a1 = std::move(best->a1);
    trace.a2 = std::move(best->a2);
    plan.per_point.push_back(std::move(trace));
    plan.runtime_ms = ms_since(start);
    return plan;
}

PoisonPlan poison_multi(const Dataset& dataset,
                        const std::vector<std::vector<std::string>>& points) {
    const auto start = Clock::now();
    PoisonPlan plan;
    plan.algorithm = "MULTI";
    std::vector<Cell> all_cells;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        PoisonPlan single;
        try {
            single = poison_single(dataset, points[i]);
        } catch (const Error& e) {
            throw AllInfeasibleError("point " + std::to_string(i) + ": " + e.what());
        }
        all_cells.insert(all_cells.end(), single.cells.begin(), single.cells.end());
        PointTrace trace = std::move(single.per_point.front());
        trace.point_id = i;
        plan.per_point.push_back(std::move(trace));
    }
    plan.cells = sorted_unique(std::move(all_cells));
    plan.poisoned = null_cells(dataset, plan.cells);
    plan.runtime_ms = ms_since(start);
    return plan;
}

PoisonPlan poison_random(const Dataset& dataset,
                         const std::vector<std::vector<std::string>>& points,
                         std::uint64_t seed, long long budget_cap) {
    const auto start = Clock::now();
    if (!dataset.is_complete())
        throw NotCompleteError("poisoning requires a complete dataset");
    if (budget_cap < 0) budget_cap = dataset.n() * dataset.d();

    std::vector<std::vector<int>> encoded;
    for (const auto& tokens : points) encoded.push_back(encode_point(dataset, tokens));

    FrequencyIndex index = build_index(dataset);
    Dataset working = dataset;
    std::vector<long long> cells(dataset.n() * dataset.d());
    for (long long i = 0; i < static_cast<long long>(cells.size()); ++i) cells[i] = i;
    Rng rng(seed);

    // Stopping rule (and every poisoning re-check) uses the ungated extreme
    // supports: the alteration <-> NULL-set equivalence the attacks rely on
    // is stated for those bounds, and the closed-world domain guard can break
    // it when an attack empties a value's active domain.
    auto all_non_robust = [&]() {
        for (const auto& point : encoded)
            if (certify(index, point, false).outcome == Outcome::Robust)
                return false;
        return true;
    };

    PoisonPlan plan;
    plan.algorithm = "RP";
    long long used = 0;
    while (!all_non_robust()) {
        if (used >= budget_cap)
            throw BudgetExhaustedError("random poisoning exceeded budget of " +
                                       std::to_string(budget_cap) + " cells");
        const long long pick =
            used + static_cast<long long>(draw_below(rng, cells.size() - used));
        std::swap(cells[used], cells[pick]);
        const long long row = cells[used] / dataset.d();
        const int attr = static_cast<int>(cells[used] % dataset.d());
        null_cell(index, working.label(row), attr, working.cell(row, attr));
        working.set_cell(row, attr, Dataset::kMissing);
        plan.cells.emplace_back(row, attr);
        ++used;
    }
    plan.cells = sorted_unique(std::move(plan.cells));
    plan.poisoned = std::move(working);
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        PointTrace trace;
        trace.point_id = i;
        trace.k = used;
        plan.per_point.push_back(std::move(trace));
    }
    plan.runtime_ms = ms_since(start);
    return plan;
}

PoisonPlan poison_smart_random(const Dataset& dataset,
                               const std::vector<std::vector<std::string>>& points,
                               std::uint64_t seed, long long budget_cap) {
    const auto start = Clock::now();
    if (!dataset.is_complete())
        throw NotCompleteError("poisoning requires a complete dataset");
    if (budget_cap < 0) budget_cap = dataset.n() * dataset.d();

    const FrequencyIndex base_index = build_index(dataset);
    Rng rng(seed);

    PoisonPlan plan;
    plan.algorithm = "SR";
    std::vector<Cell> all_cells;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        const std::vector<int> point_vs_original = encode_point(dataset, points[i]);
        const int label_star = predicted_label_strict(dataset, point_vs_original);
        const std::vector<int> challengers = challenger_labels(dataset, label_star);
        if (challengers.empty())
            throw AllInfeasibleError("point " + std::to_string(i) +
                                     ": no alternative label exists");
        const int challenger =
            challengers[draw_below(rng, challengers.size())];

        Dataset working = dataset;
        const std::vector<int> point = intern_point(working, points[i]);
        AttackState state(working, point, label_star, challenger);
        FrequencyIndex nulled = base_index;  // tracks the dataset with altered
                                             // cells set to missing
        PointTrace trace;
        trace.point_id = i;
        trace.label_attacked = challenger;
        trace.label_attacked_token = dataset.label_token(challenger);

        long long steps = 0;
        while (certify(nulled, point_vs_original, false).outcome ==
               Outcome::Robust) {
            if (steps >= budget_cap)
                throw BudgetExhaustedError("smart random poisoning exceeded budget of " +
                                           std::to_string(budget_cap) + " steps");
            Branch op = draw_below(rng, 2) == 0 ? Branch::A1 : Branch::A2;
            if (!state.legal(op)) op = (op == Branch::A1) ? Branch::A2 : Branch::A1;
            if (!state.legal(op))
                throw StuckNoLegalStepError("point " + std::to_string(i) +
                                            ": neither A1 nor A2 has a legal step");
            const Cell cell = state.step(op);
            // in the nulled dataset this cell loses its original value
            null_cell(nulled, dataset.label(cell.first), cell.second,
                      dataset.cell(cell.first, cell.second));
            all_cells.push_back(cell);
            ++steps;
        }
        trace.k = steps;
        plan.per_point.push_back(std::move(trace));
    }
    plan.cells = sorted_unique(std::move(all_cells));
    plan.poisoned = null_cells(dataset, plan.cells);
    plan.runtime_ms = ms_since(start);
    return plan;
}

double poisoning_rate(const PoisonPlan& plan, const Dataset& dataset) {
    const long long total = dataset.n() * dataset.d();
    return total == 0 ? 0.0
                      : static_cast<double>(plan.cells.size()) /
                            static_cast<double>(total);
}

std::string plan_to_json(const PoisonPlan& plan, const Dataset& dataset) {
    nlohmann::ordered_json out;
    out["algorithm"] = plan.algorithm;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& [row, attr] : plan.cells)
        cells.push_back({{"row", row}, {"attribute", attr}});
    out["cells"] = std::move(cells);
    nlohmann::ordered_json per_point = nlohmann::ordered_json::array();
    for (const auto& trace : plan.per_point) {
        nlohmann::ordered_json entry;
        entry["point_id"] = trace.point_id;
        if (trace.label_attacked >= 0)
            entry["label_attacked"] = trace.label_attacked_token;
        else
            entry["label_attacked"] = nullptr;
        if (trace.branch.has_value())
            entry["branch"] = *trace.branch == Branch::A1 ? "A1" : "A2";
        else
            entry["branch"] = nullptr;
        if (trace.k_plus >= 0)
            entry["k_plus"] = trace.k_plus;
        else
            entry["k_plus"] = nullptr;
        if (trace.k_minus >= 0)
            entry["k_minus"] = trace.k_minus;
        else
            entry["k_minus"] = nullptr;
        entry["k"] = trace.k;
        per_point.push_back(std::move(entry));
    }
    out["per_point"] = std::move(per_point);
    out["poisoning_rate"] = poisoning_rate(plan, dataset);
    out["runtime_ms"] = plan.runtime_ms;
    return out.dump(2);
}

}  // namespace nbcert
