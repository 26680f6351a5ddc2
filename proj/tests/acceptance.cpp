// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the process exits non-zero if any criterion fails. Tolerances and
// time budgets are pinned in the constants below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "helpers.hpp"
#include "nbcert/dataset.hpp"
#include "nbcert/decision.hpp"
#include "nbcert/errors.hpp"
#include "nbcert/index.hpp"
#include "nbcert/poisoning.hpp"
#include "nbcert/rng.hpp"
#include "nbcert/support.hpp"
#include "nbcert/synth.hpp"
#include "oracles.hpp"

using namespace nbcert;
using namespace nbcert::testing;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok,
            const std::string& detail = "") {
    std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string frac(const Support& s) { return to_fraction(s); }

// ---------------------------------------------------------------------------

void criterion_1() {
    Dataset ds = decision_walkthrough_dataset();
    Dataset world = ds;
    world.set_cell(3, 1, world.intern_value(1, "b"));
    world.set_cell(6, 0, world.intern_value(0, "a"));
    world.set_cell(7, 0, world.intern_value(0, "u6"));

    FrequencyIndex idx = build_index(ds);
    std::vector<int> t = encode_point(ds, {"a", "b"});
    std::vector<int> tw = encode_point(world, {"a", "b"});

    // warm-up, then time one full decision
    CertifyVerdict v = certify(idx, t);
    const auto t0 = Clock::now();
    v = certify(idx, t);
    const double elapsed = ms_since(t0);

    const bool values_ok =
        frac(support_of(world, world.find_label("lstar"), tw)) == "1/4" &&
        frac(support_of(world, world.find_label("l"), tw)) == "2/45" &&
        frac(v.table[0].lo) == "1/6" && frac(v.table[1].hi) == "1/15";
    const bool verdict_ok =
        v.outcome == Outcome::Robust && v.robust_label_token == "lstar";
    const bool time_ok = elapsed < 1.0;
    report(1, "golden decision values (exact rationals, Robust(l*), < 1 ms)",
           values_ok && verdict_ok && time_ok,
           "lo=" + frac(v.table[0].lo) + " hi=" + frac(v.table[1].hi) +
               " certify_ms=" + std::to_string(elapsed));
}

// traces recorded for criterion 9
std::vector<AlterResult> recorded_traces;
// (dataset, point, result) for the exhaustive interleaving check
struct TinyCase {
    Dataset ds;
    std::vector<int> t;
    int star, chal;
    long long k;
};
std::vector<TinyCase> tiny_cases;
int effectiveness_runs = 0, effectiveness_ok = 0;

bool recheck(const PoisonPlan& plan,
             const std::vector<std::vector<std::string>>& points) {
    ++effectiveness_runs;
    FrequencyIndex idx = build_index(plan.poisoned);
    for (const auto& tokens : points) {
        std::vector<int> t = encode_point(plan.poisoned, tokens);
        // plans guarantee non-robustness of the ungated extreme supports;
        // see the stopping-rule comment in the attack implementation
        if (certify(idx, t, false).outcome != Outcome::NonRobust) return false;
    }
    ++effectiveness_ok;
    return true;
}

void criterion_2() {
    const auto t0 = Clock::now();
    Dataset ds = poisoning_walkthrough_dataset();
    std::vector<int> t = encode_point(ds, {"a", "b"});

    AlterResult res = alter_prediction(ds, {"a", "b"}, ds.find_label("l"));
    recorded_traces.push_back(res);
    tiny_cases.push_back(
        {ds, t, ds.find_label("lstar"), ds.find_label("l"), res.k});

    // printed supports along the trace, as exact reduced fractions
    auto ratio = [](const mpz_class& prod, long long n, long long N) {
        mpq_class q(prod, mpz_class(static_cast<long>(n)) * static_cast<long>(N));
        q.canonicalize();
        return q.get_str();
    };
    const bool supports_ok =
        ratio(res.a1.prod_star0, 9, 4) == "1/6" &&
        ratio(res.a1.prod_chal0, 9, 5) == "2/45" &&
        ratio(res.a1.steps[0].prod_chal, 9, 5) == "4/45" &&
        ratio(res.a2.steps[0].prod_star, 9, 4) == "1/12";
    const bool branch_ok =
        res.k_minus == 2 && res.k_plus == 3 && res.chosen == Branch::A2;

    const long long brute = brute_min_alterations(ds, t, 3);
    PoisonPlan plan = poison_single(ds, {"a", "b"});
    const bool plan_ok = recheck(plan, {{"a", "b"}});
    const double elapsed = ms_since(t0);
    report(2,
           "golden attack trace (1/6, 2/45, 4/45, 1/12; k-=2 < k+=3; A2; brute "
           "force optimum 2; < 1 s)",
           supports_ok && branch_ok && brute == 2 && plan_ok && elapsed < 1000.0,
           "brute=" + std::to_string(brute) + " ms=" + std::to_string(elapsed));
}

void criterion_3() {
    const auto t0 = Clock::now();
    Rng rng(30303);
    int compared = 0, agreed = 0;
    while (compared < 1000) {
        Dataset ds = random_tiny(rng);
        std::vector<int> t = random_point(ds, rng);
        CertifyVerdict slow;
        try {
            slow = oracle_certify(ds, t);
        } catch (const EmptyDomainError&) {
            continue;  // an all-missing column has no possible worlds
        }
        CertifyVerdict fast = certify(build_index(ds), t);
        ++compared;
        if (fast.outcome == slow.outcome &&
            (fast.outcome != Outcome::Robust ||
             fast.robust_label == slow.robust_label))
            ++agreed;
    }
    const double elapsed = ms_since(t0);
    report(3, "certify == world-enumeration oracle on 1000 random instances",
           agreed == compared && elapsed < 60000.0,
           std::to_string(agreed) + "/" + std::to_string(compared) +
               " ms=" + std::to_string(elapsed));
}

void criterion_4() {
    const auto t0 = Clock::now();
    Rng rng(40404);
    int compared = 0, agreed = 0;
    while (compared < 200) {
        Dataset ds = random_tiny(rng, {.max_missing = 0});
        FrequencyIndex idx = build_index(ds);
        if (idx.m() < 2) continue;
        std::vector<int> t = random_point(ds, rng);
        if (!nbc_predict(ds, t).has_value()) continue;

        PoisonPlan plan;
        try {
            plan = poison_single(ds, point_tokens(ds, t));
        } catch (const AllInfeasibleError&) {
            // the pure-branch attack deliberately reports infeasible when
            // both branches saturate; no minimality claim is made there
            continue;
        }
        ++compared;
        const long long gs_k = static_cast<long long>(plan.cells.size());
        recheck(plan, {point_tokens(ds, t)});
        if (!plan.per_point.empty()) {
            AlterResult res = alter_prediction(ds, point_tokens(ds, t),
                                               plan.per_point[0].label_attacked);
            recorded_traces.push_back(res);
            if (res.k <= 10 && tiny_cases.size() < 60)
                tiny_cases.push_back({ds, t, *nbc_predict(ds, t),
                                      plan.per_point[0].label_attacked, res.k});
        }
        const long long brute = brute_min_alterations(ds, t, gs_k);
        if (brute == gs_k) ++agreed;
    }
    const double elapsed = ms_since(t0);
    report(4, "greedy attack size == exhaustive minimum on 200 instances",
           agreed == compared && elapsed < 600000.0,
           std::to_string(agreed) + "/" + std::to_string(compared) +
               " ms=" + std::to_string(elapsed));
}

void criterion_5_and_6() {
    const auto t0 = Clock::now();
    Dataset base = make_synthetic(100000, 12, 3, 5, 505);
    std::vector<std::vector<std::string>> pts = sample_points(base, 16, 506);

    // --- criterion 5: batch == iterate, and the index is >= 5x faster -------
    Dataset holes = inject_missing(base, 0.3, 507);
    std::vector<std::vector<int>> points;
    for (const auto& tokens : pts) points.push_back(encode_point(holes, tokens));

    FrequencyIndex idx = build_index(holes);
    std::vector<CertifyVerdict> batch = certify_batch(idx, points);  // warm-up
    auto q0 = Clock::now();
    batch = certify_batch(idx, points);
    const double index_ms = ms_since(q0);

    q0 = Clock::now();
    std::vector<CertifyVerdict> iter;
    for (const auto& p : points) iter.push_back(certify_scan(holes, p));
    const double iterate_ms = ms_since(q0);

    bool equal = batch.size() == iter.size();
    for (std::size_t i = 0; equal && i < batch.size(); ++i)
        equal = batch[i].outcome == iter[i].outcome &&
                batch[i].robust_label == iter[i].robust_label;
    const double elapsed5 = ms_since(t0);
    report(5,
           "batch == iterate on 100k x 12 x 3, and index query >= 5x faster",
           equal && index_ms <= iterate_ms / 5.0 && elapsed5 < 120000.0,
           "index_ms=" + std::to_string(index_ms) +
               " iterate_ms=" + std::to_string(iterate_ms));

    // --- criterion 6: index runtime nearly flat across missing rates --------
    const auto t6 = Clock::now();
    const std::vector<double> rates{0.2, 0.4, 0.6, 0.8};
    std::vector<Dataset> sets;
    std::vector<std::vector<std::vector<int>>> pt_sets;
    for (double rate : rates) {
        sets.push_back(inject_missing(base, rate, 600 + std::llround(rate * 10)));
        std::vector<std::vector<int>> ps;
        for (const auto& tokens : pts) ps.push_back(encode_point(sets.back(), tokens));
        pt_sets.push_back(std::move(ps));
    }
    // interleave the rates round-robin and keep the best run per rate, so a
    // slow patch on a shared machine cannot skew one rate's estimate
    std::vector<double> best(rates.size(), 1e18);
    for (int r = 0; r < 15; ++r) {
        for (std::size_t i = 0; i < rates.size(); ++i) {
            const auto r0 = Clock::now();
            for (int rep = 0; rep < 5; ++rep) {  // widen the timed region
                FrequencyIndex ix = build_index(sets[i]);
                certify_batch(ix, pt_sets[i]);
            }
            best[i] = std::min(best[i], ms_since(r0) / 5.0);
        }
    }
    const double lo = *std::min_element(best.begin(), best.end());
    const double hi = *std::max_element(best.begin(), best.end());
    const double spread = (hi - lo) / lo;
    const double elapsed6 = ms_since(t6);
    std::string detail = "ms per rate:";
    for (double m : best) detail += " " + std::to_string(m);
    report(6, "index runtime spread <= 25% across missing rates 0.2-0.8",
           spread <= 0.25 && elapsed6 < 300000.0,
           detail + " spread=" + std::to_string(spread));
}

void criterion_7() {
    const auto t0 = Clock::now();
    int runs = 0, dominated = 0;
    for (int inst = 0; inst < 10; ++inst) {
        Dataset ds = make_synthetic(1000, 8, 3, 4, 7000 + inst);
        std::vector<std::vector<std::string>> candidates =
            sample_points(ds, 40, 7100 + inst);
        std::size_t next = 0;
        for (int run = 0; run < 10; ++run) {
            const std::uint64_t seed = 7200 + inst * 100 + run;
            PoisonPlan gs;
            std::vector<std::string> point;
            for (; next < candidates.size(); ++next) {
                try {
                    gs = poison_single(ds, candidates[next]);
                    point = candidates[next];
                    ++next;
                    break;
                } catch (const Error&) {
                    continue;  // ambiguous prediction; try the next point
                }
            }
            if (point.empty()) break;
            PoisonPlan sr = poison_smart_random(ds, {point}, seed);
            PoisonPlan rp = poison_random(ds, {point}, seed);
            ++runs;
            if (gs.cells.size() <= sr.cells.size() &&
                gs.cells.size() <= rp.cells.size())
                ++dominated;
            recheck(gs, {point});
            recheck(sr, {point});
            recheck(rp, {point});
            if (!gs.per_point.empty()) {
                AlterResult res = alter_prediction(
                    ds, point, gs.per_point[0].label_attacked);
                recorded_traces.push_back(res);
            }
        }
    }
    const double elapsed = ms_since(t0);
    report(7, "greedy plan never larger than SR or RP over 100 medium runs",
           runs == 100 && dominated == runs && elapsed < 600000.0,
           std::to_string(dominated) + "/" + std::to_string(runs) +
               " ms=" + std::to_string(elapsed));
}

void criterion_8() {
    report(8, "every emitted plan passes the certify re-check",
           effectiveness_runs > 0 && effectiveness_ok == effectiveness_runs,
           std::to_string(effectiveness_ok) + "/" +
               std::to_string(effectiveness_runs));
}

void criterion_9() {
    // O1 / O2 on every recorded trace
    bool laws_ok = !recorded_traces.empty();
    for (const AlterResult& res : recorded_traces) {
        mpz_class prev = res.a1.delta_num0, last_dec = 0;
        for (const BranchStep& s : res.a1.steps) {
            mpz_class dec = prev - s.delta_num;
            if (dec < last_dec) laws_ok = false;
            last_dec = dec;
            prev = s.delta_num;
        }
        if (res.a2.k() >= 2) {
            const mpz_class dec0 = res.a2.delta_num0 - res.a2.steps[0].delta_num;
            prev = res.a2.steps[0].delta_num;
            for (std::size_t i = 1; i < res.a2.steps.size(); ++i) {
                if (res.a2.steps[i].delta_num != prev - dec0) laws_ok = false;
                prev = res.a2.steps[i].delta_num;
            }
        }
    }

    // exhaustive op-sequence enumeration on the recorded tiny instances:
    // no interleaving drops the gap below the pure-branch lower bound, and
    // the returned pure branch attains the bound exactly where applicable
    bool bound_ok = !tiny_cases.empty();
    long long equality_cases = 0;
    for (const TinyCase& c : tiny_cases) {
        AlterResult res;
        try {
            res = alter_prediction(c.ds, point_tokens(c.ds, c.t), c.chal);
        } catch (const InfeasibleError&) {
            continue;
        }
        nbcert::testing::MixedBoundCheck chk = nbcert::testing::check_mixed_bound(
            c.ds, c.t, c.star, c.chal, res, 10);
        if (chk.bound_violations != 0) bound_ok = false;
        if (chk.equality_checked) {
            ++equality_cases;
            if (!chk.equality) bound_ok = false;
        }
    }
    if (equality_cases == 0) bound_ok = false;
    report(9,
           "trace laws: O1/O2 on all traces; interleaving lower bound tight "
           "on the returned branch",
           laws_ok && bound_ok,
           std::to_string(recorded_traces.size()) + " traces, " +
               std::to_string(tiny_cases.size()) + " tiny instances, " +
               std::to_string(equality_cases) + " equality cases");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5_and_6();
    criterion_7();
    criterion_8();
    criterion_9();
    return failures == 0 ? 0 : 1;
}
