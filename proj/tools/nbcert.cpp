// nbcert: certifiable-robustness decisions and data-poisoning attacks for
// naive Bayes over incomplete categorical data.
//
// Exit codes: 0 ok, 2 input error, 3 resource cap exceeded, 4 attack
// infeasible or budget exhausted.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbcert/dataset.hpp"
#include "nbcert/decision.hpp"
#include "nbcert/discretize.hpp"
#include "nbcert/errors.hpp"
#include "nbcert/index.hpp"
#include "nbcert/poisoning.hpp"
#include "nbcert/support.hpp"
#include "nbcert/synth.hpp"

using namespace nbcert;
using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitResource = 3;
constexpr int kExitInfeasible = 4;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double missing_rate_of(const Dataset& ds) {
    return ds.n() == 0 ? 0.0
                       : static_cast<double>(ds.missing_cells()) /
                             (static_cast<double>(ds.n()) * ds.d());
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text << "\n";
}

// ---------------------------------------------------------------------------

struct CertifyOptions {
    std::string train, points, algo = "index", json_out;
    std::string label = "label", null_token = "NULL";
    int samples = 100, repeat = 5;
    std::uint64_t seed = 1;
};

int cmd_certify(const CertifyOptions& opt) {
    Dataset train = load_csv(opt.train, Schema{{}, opt.label, opt.null_token});
    std::vector<std::vector<std::string>> point_rows =
        load_points_csv(opt.points, train.schema());
    std::vector<std::vector<int>> points;
    for (const auto& tokens : point_rows)
        points.push_back(encode_point(train, tokens));

    std::vector<double> build_runs, query_runs;
    std::vector<CertifyVerdict> verdicts;
    for (int run = 0; run < opt.repeat; ++run) {
        verdicts.clear();
        if (opt.algo == "index") {
            auto t0 = Clock::now();
            FrequencyIndex idx = build_index(train);
            build_runs.push_back(ms_since(t0));
            t0 = Clock::now();
            verdicts = certify_batch(idx, points);
            query_runs.push_back(ms_since(t0));
        } else if (opt.algo == "iterate") {
            build_runs.push_back(0.0);
            const auto t0 = Clock::now();
            for (const auto& p : points) verdicts.push_back(certify_scan(train, p));
            query_runs.push_back(ms_since(t0));
        } else if (opt.algo == "approx") {
            build_runs.push_back(0.0);
            const auto t0 = Clock::now();
            for (std::size_t i = 0; i < points.size(); ++i)
                verdicts.push_back(
                    approx_certify(train, points[i], opt.samples,
                                   opt.seed + static_cast<std::uint64_t>(i)));
            query_runs.push_back(ms_since(t0));
        } else if (opt.algo == "oracle") {
            build_runs.push_back(0.0);
            const auto t0 = Clock::now();
            for (const auto& p : points) verdicts.push_back(oracle_certify(train, p));
            query_runs.push_back(ms_since(t0));
        } else {
            throw Error("unknown --algo '" + opt.algo + "'");
        }
    }

    ordered_json report;
    report["command"] = "certify";
    report["algo"] = opt.algo;
    report["n"] = train.n();
    report["d"] = train.d();
    report["m"] = build_index(train).m();
    report["missing_rate"] = missing_rate_of(train);
    report["k_points"] = points.size();
    report["repeat"] = opt.repeat;
    report["seed"] = opt.seed;
    report["build_ms"] =
        std::accumulate(build_runs.begin(), build_runs.end(), 0.0) / opt.repeat;
    report["query_ms"] =
        std::accumulate(query_runs.begin(), query_runs.end(), 0.0) / opt.repeat;
    if (opt.algo == "approx")
        report["note"] = "sampled worlds only; robust verdicts may be false";
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < verdicts.size(); ++i)
        rows.push_back(ordered_json::parse(
            verdict_to_json(verdicts[i], static_cast<int>(i))));
    report["verdicts"] = std::move(rows);
    write_text(opt.json_out, report.dump(2));
    return 0;
}

// ---------------------------------------------------------------------------

struct PoisonOptions {
    std::string train, points, algo = "gs", json_out, out_dataset;
    std::string label = "label", null_token = "NULL";
    std::uint64_t seed = 1;
    long long budget = -1;
};

int cmd_poison(const PoisonOptions& opt) {
    Dataset train = load_csv(opt.train, Schema{{}, opt.label, opt.null_token});
    if (!train.is_complete())
        throw NotCompleteError("poisoning requires a complete training set");
    std::vector<std::vector<std::string>> points =
        load_points_csv(opt.points, train.schema());
    if (points.empty()) throw Error("points file has no rows");

    PoisonPlan plan;
    if (opt.algo == "gs") {
        if (points.size() != 1)
            throw Error("--algo gs attacks exactly one point; use --algo multi");
        plan = poison_single(train, points[0]);
    } else if (opt.algo == "multi") {
        plan = poison_multi(train, points);
    } else if (opt.algo == "rp") {
        plan = poison_random(train, points, opt.seed, opt.budget);
    } else if (opt.algo == "sr") {
        plan = poison_smart_random(train, points, opt.seed, opt.budget);
    } else {
        throw Error("unknown --algo '" + opt.algo + "'");
    }

    // a plan is only reported after every target re-checks as non-robust
    // under the ungated extreme supports the attacks are stated for
    FrequencyIndex idx = build_index(plan.poisoned);
    for (const auto& tokens : points) {
        std::vector<int> t = encode_point(plan.poisoned, tokens);
        if (certify(idx, t, false).outcome != Outcome::NonRobust)
            throw InfeasibleError("re-check failed: a target is still robust");
    }

    write_text(opt.json_out, plan_to_json(plan, train));
    if (!opt.out_dataset.empty()) write_csv(plan.poisoned, opt.out_dataset);
    return 0;
}

// ---------------------------------------------------------------------------

struct BenchRow {
    std::string dataset;
    long long n = 0;
    int d = 0, m = 0;
    double missing_rate = 0.0;
    int k_points = 0;
    std::string algo;
    // -1 marks a failed cell or a field the algorithm does not produce
    double build_ms = -1, query_ms = -1;
    long long robust = -1, nonrobust = -1;
    double poisoning_rate_ = -1;
    long long cells_poisoned = -1;
    std::uint64_t seed = 0;
};

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out =
        "dataset,n,d,m,missing_rate,k_points,algo,build_ms,query_ms,"
        "verdicts_robust,verdicts_nonrobust,poisoning_rate,cells_poisoned,seed";
    char buf[512];
    for (const BenchRow& r : rows) {
        std::snprintf(buf, sizeof buf,
                      "\n%s,%lld,%d,%d,%g,%d,%s,%g,%g,%lld,%lld,%g,%lld,%llu",
                      r.dataset.c_str(), r.n, r.d, r.m, r.missing_rate,
                      r.k_points, r.algo.c_str(), r.build_ms, r.query_ms,
                      r.robust, r.nonrobust, r.poisoning_rate_, r.cells_poisoned,
                      static_cast<unsigned long long>(r.seed));
        out += buf;
    }
    return out;
}

bool is_decision_algo(const std::string& algo) {
    return algo == "index" || algo == "iterate" || algo == "approx" ||
           algo == "oracle";
}

int cmd_bench(const std::string& config_path, const std::string& out_csv) {
    std::ifstream in(config_path);
    if (!in) throw Error("cannot read '" + config_path + "'");
    nlohmann::json cfg = nlohmann::json::parse(in);

    const std::uint64_t seed = cfg.value("seed", 1ull);
    const int repeat = cfg.value("repeat", 5);
    const int samples = cfg.value("samples", 100);
    std::vector<BenchRow> rows;

    for (const auto& dspec : cfg.at("datasets")) {
        const std::string name = dspec.value("name", std::string("dataset"));
        Dataset full =
            dspec.contains("path")
                ? load_csv(dspec.at("path").get<std::string>(),
                           Schema{{},
                                  dspec.value("label", std::string("label")),
                                  dspec.value("null_token", std::string("NULL"))})
                : make_synthetic(dspec.at("rows").get<long long>(),
                                 dspec.at("attrs").get<int>(),
                                 dspec.value("labels", 3),
                                 dspec.value("domain", 5), seed);
        auto [train, test] = split(full, cfg.value("train_fraction", 0.8), seed);

        for (int k : cfg.value("k_points", std::vector<int>{16})) {
            std::vector<std::vector<std::string>> pts =
                sample_points(test.n() >= k ? test : train, k, seed + 1);
            for (const std::string& algo :
                 cfg.value("algos", std::vector<std::string>{"index"})) {
                const auto rates =
                    is_decision_algo(algo)
                        ? cfg.value("missing_rates", std::vector<double>{0.2})
                        : std::vector<double>{0.0};  // poisoning needs complete data
                for (double rate : rates) {
                    BenchRow row;
                    row.dataset = name;
                    row.k_points = k;
                    row.algo = algo;
                    row.missing_rate = rate;
                    row.seed = seed;
                    try {
                        Dataset d = rate > 0 ? inject_missing(train, rate, seed + 2)
                                             : train;
                        row.n = d.n();
                        row.d = d.d();
                        row.m = build_index(d).m();
                        std::vector<std::vector<int>> ps;
                        for (const auto& tokens : pts)
                            ps.push_back(encode_point(d, tokens));

                        if (is_decision_algo(algo)) {
                            double build_total = 0, query_total = 0;
                            std::vector<CertifyVerdict> verdicts;
                            for (int r = 0; r < repeat; ++r) {
                                verdicts.clear();
                                auto t0 = Clock::now();
                                if (algo == "index") {
                                    FrequencyIndex idx = build_index(d);
                                    build_total += ms_since(t0);
                                    t0 = Clock::now();
                                    verdicts = certify_batch(idx, ps);
                                } else if (algo == "iterate") {
                                    for (const auto& p : ps)
                                        verdicts.push_back(certify_scan(d, p));
                                } else if (algo == "approx") {
                                    for (std::size_t i = 0; i < ps.size(); ++i)
                                        verdicts.push_back(approx_certify(
                                            d, ps[i], samples,
                                            seed + 3 + static_cast<std::uint64_t>(i)));
                                } else {
                                    for (const auto& p : ps)
                                        verdicts.push_back(oracle_certify(d, p));
                                }
                                query_total += ms_since(t0);
                            }
                            row.build_ms = build_total / repeat;
                            row.query_ms = query_total / repeat;
                            row.robust = row.nonrobust = 0;
                            for (const CertifyVerdict& v : verdicts)
                                (v.outcome == Outcome::Robust ? row.robust
                                                              : row.nonrobust)++;
                        } else {
                            const auto t0 = Clock::now();
                            PoisonPlan plan;
                            if (algo == "gs" || algo == "multi")
                                plan = poison_multi(d, pts);
                            else if (algo == "rp")
                                plan = poison_random(d, pts, seed + 4);
                            else if (algo == "sr")
                                plan = poison_smart_random(d, pts, seed + 4);
                            else
                                throw Error("unknown algo '" + algo + "'");
                            row.query_ms = ms_since(t0);
                            row.build_ms = 0;
                            row.cells_poisoned =
                                static_cast<long long>(plan.cells.size());
                            row.poisoning_rate_ = poisoning_rate(plan, d);
                        }
                    } catch (const Error& e) {
                        // failed grid cell: keep the -1 markers, note and go on
                        std::cerr << "bench cell failed (" << name << ", " << algo
                                  << ", rate " << rate << "): " << e.what() << "\n";
                    }
                    rows.push_back(row);
                }
            }
        }
    }
    write_text(out_csv, bench_csv(rows));
    return 0;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{"certifiable robustness and data poisoning for naive Bayes "
                 "over incomplete data"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    long long gen_rows = 1000;
    int gen_attrs = 8, gen_labels = 3, gen_domain = 5, gen_points = 0;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_points_out;
    gen->add_option("--rows", gen_rows);
    gen->add_option("--attrs", gen_attrs);
    gen->add_option("--labels", gen_labels);
    gen->add_option("--domain", gen_domain);
    gen->add_option("--seed", gen_seed);
    gen->add_option("--out", gen_out)->required();
    gen->add_option("--points", gen_points, "also sample this many test points");
    gen->add_option("--points-out", gen_points_out);

    // discretize
    auto* disc = app.add_subcommand("discretize", "bin numeric columns");
    std::string disc_in, disc_out, disc_strategy = "uniform";
    std::string disc_label = "label", disc_null = "NULL";
    std::vector<std::string> disc_cols;
    int disc_bins = 5;
    disc->add_option("input", disc_in)->required();
    disc->add_option("output", disc_out)->required();
    disc->add_option("--bins", disc_bins);
    disc->add_option("--strategy", disc_strategy)
        ->check(CLI::IsMember({"uniform", "quantile"}));
    disc->add_option("--numeric-cols", disc_cols)->delimiter(',');
    disc->add_option("--label", disc_label);
    disc->add_option("--null-token", disc_null);

    // perturb
    auto* pert = app.add_subcommand("perturb", "inject missing values");
    std::string pert_in, pert_out, pert_label = "label", pert_null = "NULL";
    double pert_rate = 0.2;
    std::uint64_t pert_seed = 1;
    pert->add_option("input", pert_in)->required();
    pert->add_option("output", pert_out)->required();
    pert->add_option("--rate", pert_rate)->check(CLI::Range(0.0, 1.0));
    pert->add_option("--seed", pert_seed);
    pert->add_option("--label", pert_label);
    pert->add_option("--null-token", pert_null);

    // certify
    auto* cert = app.add_subcommand("certify", "decide certifiable robustness");
    CertifyOptions copt;
    cert->add_option("train", copt.train)->required();
    cert->add_option("points", copt.points)->required();
    cert->add_option("--algo", copt.algo)
        ->check(CLI::IsMember({"index", "iterate", "approx", "oracle"}));
    cert->add_option("--samples", copt.samples);
    cert->add_option("--seed", copt.seed);
    cert->add_option("--repeat", copt.repeat)->check(CLI::PositiveNumber);
    cert->add_option("--json", copt.json_out);
    cert->add_option("--label", copt.label);
    cert->add_option("--null-token", copt.null_token);

    // poison
    auto* poi = app.add_subcommand("poison", "compute a poisoning plan");
    PoisonOptions popt;
    poi->add_option("train", popt.train)->required();
    poi->add_option("points", popt.points)->required();
    poi->add_option("--algo", popt.algo)
        ->check(CLI::IsMember({"gs", "rp", "sr", "multi"}));
    poi->add_option("--seed", popt.seed);
    poi->add_option("--budget", popt.budget);
    poi->add_option("--json", popt.json_out);
    poi->add_option("--out-dataset", popt.out_dataset);
    poi->add_option("--label", popt.label);
    poi->add_option("--null-token", popt.null_token);

    // bench
    auto* bench = app.add_subcommand("bench", "run a benchmark grid");
    std::string bench_config, bench_out;
    bench->add_option("config", bench_config)->required();
    bench->add_option("--out", bench_out, "summary CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (gen->parsed()) {
            Dataset ds = make_synthetic(gen_rows, gen_attrs, gen_labels,
                                        gen_domain, gen_seed);
            write_csv(ds, gen_out);
            if (gen_points > 0) {
                std::string csv;
                for (int j = 0; j < ds.d(); ++j)
                    csv += (j ? "," : "") + ds.schema().attributes[j];
                for (const auto& p : sample_points(ds, gen_points, gen_seed + 1)) {
                    csv += "\n";
                    for (std::size_t j = 0; j < p.size(); ++j)
                        csv += (j ? "," : "") + p[j];
                }
                write_text(gen_points_out.empty() ? "-" : gen_points_out, csv);
            }
            return 0;
        }
        if (disc->parsed()) {
            Dataset ds = load_csv(disc_in, Schema{{}, disc_label, disc_null});
            if (disc_cols.empty()) {
                write_csv(ds, disc_out);  // nothing to bin: passthrough
                return 0;
            }
            BinStrategy strategy = disc_strategy == "uniform"
                                       ? BinStrategy::Uniform
                                       : BinStrategy::Quantile;
            Binner binner = fit_discretizer(ds, disc_cols, disc_bins, strategy);
            for (const auto& col : binner.columns) {
                std::cerr << ds.schema().attributes[col.attr] << ": cuts [";
                for (std::size_t i = 0; i < col.cuts.size(); ++i)
                    std::cerr << (i ? ", " : "") << col.cuts[i];
                std::cerr << "]" << (col.constant ? " (constant column)" : "")
                          << "\n";
            }
            write_csv(apply_discretizer(ds, binner), disc_out);
            return 0;
        }
        if (pert->parsed()) {
            Dataset ds = load_csv(pert_in, Schema{{}, pert_label, pert_null});
            if (!ds.is_complete())
                throw NotCompleteError("perturb requires a complete input");
            write_csv(inject_missing(ds, pert_rate, pert_seed), pert_out);
            return 0;
        }
        if (cert->parsed()) return cmd_certify(copt);
        if (poi->parsed()) return cmd_poison(popt);
        if (bench->parsed()) return cmd_bench(bench_config, bench_out);
    } catch (const TooManyWorldsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const AllInfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const AmbiguousPredictionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const BudgetExhaustedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const StuckNoLegalStepError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
