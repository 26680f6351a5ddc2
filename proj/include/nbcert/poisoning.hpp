#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "nbcert/dataset.hpp"
#include "nbcert/decision.hpp"

namespace nbcert {

// A1 raises the challenger's smallest per-attribute match count; A2 lowers
// the winner's smallest per-attribute match count.
enum class Branch { A1, A2 };

using Cell = std::pair<long long, int>;  // (row, attribute)

// Mutable view over a complete working dataset for one (t, l*, l) attack.
// Tracks the exact numerator vectors for both labels and applies greedy
// alteration steps. Delta = S(l*|t) - S(l|t) is kept as an exact integer
// numerator over the constant denominator n * N*^(d-1) * N_l^(d-1).
class AttackState {
public:
    AttackState(Dataset& working, std::vector<int> point, int label_star,
                int label_challenger);

    bool legal(Branch op) const;
    // Applies the greedy step: smallest numerator attribute (ties -> lowest
    // index), lowest eligible row. Returns the altered cell.
    Cell step(Branch op);

    mpz_class delta_numerator() const;
    mpz_class prod_star() const;
    mpz_class prod_challenger() const;
    long long n_star() const { return n_star_; }
    long long n_challenger() const { return n_chal_; }
    mpz_class denominator() const;
    const std::vector<long long>& e_star() const { return e_star_; }
    const std::vector<long long>& e_challenger() const { return e_chal_; }

private:
    Dataset* data_;
    std::vector<int> point_;
    int label_star_, label_chal_;
    long long n_star_ = 0, n_chal_ = 0;
    std::vector<long long> e_star_, e_chal_;
    int fresh_counter_ = 0;

    int fresh_token(int attr);
};

struct BranchStep {
    Cell cell;
    mpz_class prod_star;   // after the step
    mpz_class prod_chal;
    mpz_class delta_num;   // after the step
};

// Full record of one pure-A1 or pure-A2 run. The branch succeeded iff
// !saturated; then k() alterations brought Delta strictly below zero.
struct BranchTrace {
    Branch branch = Branch::A1;
    bool saturated = false;
    long long n = 0;
    int d = 0;
    long long n_star = 0, n_chal = 0;
    mpz_class denom;
    mpz_class prod_star0, prod_chal0, delta_num0;
    std::vector<BranchStep> steps;

    long long k() const { return static_cast<long long>(steps.size()); }
};

// Runs one pure branch on `working` (mutated in place) until Delta < 0 or
// the branch saturates. Altered cells are appended to `cells` if given.
BranchTrace run_branch(Dataset& working, const std::vector<int>& point,
                       int label_star, int label_challenger, Branch op,
                       std::vector<Cell>* cells = nullptr);

struct AlterResult {
    Dataset altered;       // the complete dataset of the winning branch
    std::vector<Cell> cells;
    Branch chosen = Branch::A1;
    int label_star = -1;
    int label_challenger = -1;
    long long k = 0;
    long long k_plus = -1;   // -1 encodes infinity (saturated branch)
    long long k_minus = -1;
    BranchTrace a1, a2;
};

// Minimum-alteration attack for a fixed challenger label. The point is given
// as tokens; values unseen in the dataset are interned into the working copy.
// Throws InfeasibleError when both branches saturate.
AlterResult alter_prediction(const Dataset& dataset,
                             const std::vector<std::string>& point_tokens,
                             int label_challenger);

struct PointTrace {
    int point_id = -1;
    int label_attacked = -1;
    std::string label_attacked_token;
    std::optional<Branch> branch;  // nullopt for RP
    long long k_plus = -1;         // -1 = infinity / not applicable
    long long k_minus = -1;
    long long k = 0;
    BranchTrace a1, a2;            // populated by GS/MULTI
};

struct PoisonPlan {
    std::string algorithm;       // "GS" | "RP" | "SR" | "MULTI"
    std::vector<Cell> cells;     // sorted by (row, attribute), deduplicated
    std::vector<PointTrace> per_point;
    Dataset poisoned;
    double runtime_ms = 0.0;
};

// Optimal single-point attack: label sweep over alter_prediction, then the
// winning branch's cells are set to missing.
PoisonPlan poison_single(const Dataset& dataset,
                         const std::vector<std::string>& point_tokens);

// Union heuristic: independent single-point attacks against the original
// dataset, poisoned cells unioned. Not minimal for multiple points.
PoisonPlan poison_multi(const Dataset& dataset,
                        const std::vector<std::vector<std::string>>& points);

// Baseline RP: nulls uniformly random fresh cells until every point is
// certifiably non-robust.
PoisonPlan poison_random(const Dataset& dataset,
                         const std::vector<std::vector<std::string>>& points,
                         std::uint64_t seed, long long budget_cap = -1);

// Baseline SR: per point, fixes a random challenger label and applies random
// legal A1/A2 steps until the point is certifiably non-robust.
PoisonPlan poison_smart_random(const Dataset& dataset,
                               const std::vector<std::vector<std::string>>& points,
                               std::uint64_t seed, long long budget_cap = -1);

double poisoning_rate(const PoisonPlan& plan, const Dataset& dataset);

std::string plan_to_json(const PoisonPlan& plan, const Dataset& dataset);

}  // namespace nbcert
