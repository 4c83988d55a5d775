// Command-line harness: seeded experiment orchestration over the library
// tasks, Matrix Market I/O, JSON reports, CSV traces.
//
// Exit codes: 0 = report passed, 1 = report failed, 2 = usage/runtime error.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rnla/basis.hpp"
#include "rnla/embed.hpp"
#include "rnla/error.hpp"
#include "rnla/instances.hpp"
#include "rnla/leverage.hpp"
#include "rnla/linalg.hpp"
#include "rnla/matrix_market.hpp"
#include "rnla/regression.hpp"
#include "rnla/report.hpp"
#include "rnla/rng.hpp"
#include "rnla/sketch.hpp"

namespace {

struct Options {
    std::string task;
    std::uint64_t seed = 0;
    double alpha = 0.25;
    double epsilon = 0.25;
    std::string mtx;
    std::string rhs;
    std::string out;
    std::string csv;
    bool oracle = false;
    bool no_timing = false;
    std::size_t threads = 1;
    std::size_t n = 256;
    std::size_t d = 16;
    std::size_t k = 0;
    double kappa = 100.0;
    std::string instance = "gaussian";
    std::vector<std::string> constants;
};

std::map<std::string, double> parse_constants(
    const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const std::string& kv : kvs) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw rnla::Error("usage", "bad --constants entry: " + kv);
        out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return out;
}

double get_const(const std::map<std::string, double>& c, const std::string& k,
                 double fallback) {
    const auto it = c.find(k);
    return it == c.end() ? fallback : it->second;
}

rnla::DenseMatrix load_or_generate(const Options& opt) {
    if (!opt.mtx.empty()) return rnla::read_matrix_market(opt.mtx).to_dense();
    if (opt.instance == "gaussian")
        return rnla::gaussian_instance(opt.n, opt.d, opt.seed);
    if (opt.instance == "rank-deficient")
        return rnla::rank_deficient_instance(
            opt.n, opt.d, opt.k == 0 ? std::max<std::size_t>(opt.d / 2, 1) : opt.k,
            opt.seed);
    if (opt.instance == "duplicated-rows")
        return rnla::duplicated_rows_instance(opt.n, opt.d, opt.seed);
    if (opt.instance == "single-heavy-row")
        return rnla::single_heavy_row_instance(opt.n, opt.d, opt.seed);
    if (opt.instance == "ill-conditioned")
        return rnla::ill_conditioned_instance(opt.n, opt.d, opt.kappa, opt.seed);
    throw rnla::Error("usage", "unknown instance generator: " + opt.instance);
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
    std::ofstream out(path);
    if (!out.good()) throw rnla::Error("io", "cannot write " + path);
    out << header << "\n";
    for (const std::string& r : rows) out << r << "\n";
}

rnla::EmbedConfig embed_config(const Options& opt,
                               const std::map<std::string, double>& c) {
    rnla::EmbedConfig cfg;
    cfg.alpha = get_const(c, "alpha", opt.alpha);
    cfg.osnap_s2_rows_const = get_const(c, "s2_const", cfg.osnap_s2_rows_const);
    cfg.osnap_s1_rows_const = get_const(c, "s1_const", cfg.osnap_s1_rows_const);
    cfg.srht_blocks = static_cast<std::size_t>(
        get_const(c, "srht_blocks", static_cast<double>(cfg.srht_blocks)));
    cfg.sample_const = get_const(c, "sample_const", cfg.sample_const);
    cfg.sdp = get_const(c, "sdp", 1.0) != 0.0;
    cfg.sdp_accuracy = get_const(c, "sdp_accuracy", cfg.sdp_accuracy);
    cfg.sdp_max_iter = static_cast<std::size_t>(
        get_const(c, "sdp_max_iter", static_cast<double>(cfg.sdp_max_iter)));
    cfg.effective_dim = static_cast<std::size_t>(get_const(c, "effective_dim", 0));
    cfg.seed = opt.seed;
    return cfg;
}

rnla::RunReport run_embed(const Options& opt,
                          const std::map<std::string, double>& c) {
    const rnla::DenseMatrix a = load_or_generate(opt);
    const rnla::EmbedConfig cfg = embed_config(opt, c);
    rnla::EmbedResult res =
        cfg.sdp ? rnla::constant_embed(a, cfg) : rnla::polylog_embed(a, cfg);
    if (!opt.csv.empty()) {
        std::vector<std::string> rows;
        if (res.weights) {
            for (std::size_t i = 0; i < res.weights->w.size(); ++i)
                rows.push_back(std::to_string(i) + "," +
                               std::to_string(res.weights->w[i]));
        }
        write_csv(opt.csv, "row,weight", rows);
    }
    return res.report;
}

rnla::RunReport run_levscore(const Options& opt,
                             const std::map<std::string, double>& c) {
    const rnla::DenseMatrix a = load_or_generate(opt);
    rnla::LevSampleConfig cfg;
    cfg.epsilon = get_const(c, "epsilon", opt.epsilon);
    cfg.alpha = get_const(c, "alpha", opt.alpha);
    cfg.sample_const = get_const(c, "lev_sample_const", cfg.sample_const);
    cfg.stage1_oversample = get_const(c, "stage1_oversample", cfg.stage1_oversample);
    cfg.jl_cols_stage1 = static_cast<std::size_t>(
        get_const(c, "jl_cols_stage1", static_cast<double>(cfg.jl_cols_stage1)));
    cfg.seed = opt.seed;
    rnla::EpsEmbedResult res = rnla::eps_subspace_embed(a, cfg);
    if (!opt.csv.empty()) {
        std::vector<std::string> rows;
        for (std::size_t k = 0; k < res.rows.indices.size(); ++k)
            rows.push_back(std::to_string(res.rows.indices[k]) + "," +
                           std::to_string(res.rows.probs[k]));
        write_csv(opt.csv, "index,f", rows);
    }
    return res.report;
}

rnla::RunReport run_basis(const Options& opt,
                          const std::map<std::string, double>& c) {
    const rnla::DenseMatrix a = load_or_generate(opt);
    const double alpha = get_const(c, "alpha", opt.alpha);
    rnla::BasisResult res = rnla::select_independent_rows(a, opt.seed, alpha);

    rnla::RunReport rep;
    rep.task = "basis";
    rep.seed = opt.seed;
    rep.rows_in = a.rows();
    rep.cols_in = a.cols();
    rep.rows_out = res.indices.size();
    rep.params["alpha"] = alpha;
    const std::size_t k_true = rnla::numerical_rank(a);
    const std::size_t k_sub =
        res.indices.empty()
            ? 0
            : rnla::numerical_rank(a.row_block(res.indices));
    rep.metrics["rank"] = static_cast<double>(res.k);
    rep.metrics["rank_oracle"] = static_cast<double>(k_true);
    rep.metrics["submatrix_rank"] = static_cast<double>(k_sub);
    rep.metrics["iterations"] = static_cast<double>(res.iterations);
    if (res.fallback) rep.flags.push_back("fallback");
    rep.pass = res.k == k_true && k_sub == res.k;
    if (!opt.csv.empty()) {
        std::vector<std::string> rows;
        for (const rnla::BasisIteration& it : res.trace)
            rows.push_back(std::to_string(it.iteration) + "," +
                           std::to_string(it.residual_rank) + "," +
                           std::to_string(it.sampled) + "," +
                           std::to_string(it.gained));
        write_csv(opt.csv, "iteration,residual_rank,sampled,gained", rows);
    }
    return rep;
}

rnla::RunReport run_regress(const Options& opt,
                            const std::map<std::string, double>& c) {
    rnla::DenseMatrix a;
    std::vector<double> b;
    if (!opt.mtx.empty()) {
        a = rnla::read_matrix_market(opt.mtx).to_dense();
        if (opt.rhs.empty())
            throw rnla::Error("usage", "regress with --mtx also needs --rhs");
        b = rnla::read_matrix_market_vector(opt.rhs);
    } else {
        a = load_or_generate(opt);
        // Planted noisy right-hand side b = A x + 0.1 * noise.
        const std::vector<double> x =
            rnla::gaussian_vector(a.cols(), rnla::mix64(opt.seed ^ 0xB1ULL));
        const std::vector<double> noise =
            rnla::gaussian_vector(a.rows(), rnla::mix64(opt.seed ^ 0xB2ULL));
        b.assign(a.rows(), 0.0);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const double* row = a.row_ptr(i);
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
            b[i] = s + 0.1 * noise[i];
        }
    }
    const double eps = get_const(c, "epsilon", opt.epsilon);
    const double alpha = get_const(c, "alpha", opt.alpha);
    rnla::RegressionResult res =
        rnla::solve_regression(a, b, eps, alpha, opt.seed, opt.oracle);
    if (!opt.csv.empty()) {
        std::vector<std::string> rows;
        for (std::size_t t = 0; t < res.objective_trace.size(); ++t)
            rows.push_back(std::to_string(t) + "," +
                           std::to_string(res.objective_trace[t]));
        write_csv(opt.csv, "iteration,objective", rows);
    }
    return res.report;
}

rnla::RunReport run_selftest(const Options& opt,
                             const std::map<std::string, double>&) {
    rnla::RunReport rep;
    rep.task = "selftest";
    rep.seed = opt.seed;
    bool ok = true;

    // FWHT involution: H(Hx) = L x.
    {
        std::vector<double> x = rnla::gaussian_vector(64, opt.seed);
        const std::vector<double> hx = rnla::fwht(rnla::fwht(x));
        double err = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            err = std::max(err, std::abs(hx[i] - 64.0 * x[i]));
        rep.metrics["fwht_involution_err"] = err;
        ok = ok && err <= 1e-9;
    }
    // Foster: leverage scores sum to the rank.
    {
        const rnla::DenseMatrix a = rnla::rank_deficient_instance(40, 12, 5, opt.seed);
        double sum = 0.0;
        for (double t : rnla::exact_leverage_scores(a)) sum += t;
        const double err =
            std::abs(sum - static_cast<double>(rnla::numerical_rank(a)));
        rep.metrics["foster_err"] = err;
        ok = ok && err <= 1e-8;
    }
    // Sketch linearity.
    {
        const rnla::SketchOperator op = rnla::osnap_build(50, 20, 3, opt.seed);
        const std::vector<double> x = rnla::gaussian_vector(50, opt.seed + 1);
        const std::vector<double> y = rnla::gaussian_vector(50, opt.seed + 2);
        std::vector<double> xy(50);
        for (std::size_t i = 0; i < 50; ++i) xy[i] = 2.0 * x[i] - 3.0 * y[i];
        const std::vector<double> lhs = op.apply(xy);
        const std::vector<double> sx = op.apply(x);
        const std::vector<double> sy = op.apply(y);
        double err = 0.0;
        for (std::size_t i = 0; i < lhs.size(); ++i)
            err = std::max(err, std::abs(lhs[i] - (2.0 * sx[i] - 3.0 * sy[i])));
        rep.metrics["sketch_linearity_err"] = err;
        ok = ok && err <= 1e-10;
    }
    // Report JSON round trip.
    {
        rnla::RunReport probe;
        probe.task = "embed";
        probe.seed = 7;
        probe.metrics["distortion"] = 1.5;
        probe.pass = true;
        const rnla::RunReport back = rnla::RunReport::from_json(probe.to_json());
        ok = ok && back.task == probe.task && back.seed == probe.seed &&
             back.metrics.at("distortion") == 1.5;
    }
    rep.pass = ok;
    return rep;
}

rnla::RunReport run_bench(const Options& opt,
                          const std::map<std::string, double>& c) {
    rnla::RunReport rep;
    rep.task = "bench";
    rep.seed = opt.seed;
    std::vector<std::string> csv_rows;

    const std::size_t n = opt.n;
    const std::size_t d = opt.d;
    const std::vector<std::pair<std::string, rnla::DenseMatrix>> suite = {
        {"gaussian", rnla::gaussian_instance(n, d, opt.seed)},
        {"rank-deficient",
         rnla::rank_deficient_instance(n, d, std::max<std::size_t>(d / 2, 1),
                                       opt.seed)},
        {"duplicated-rows", rnla::duplicated_rows_instance(n / 2, d, opt.seed)},
        {"single-heavy-row", rnla::single_heavy_row_instance(n, d, opt.seed)},
        {"ill-conditioned",
         rnla::ill_conditioned_instance(n, d, opt.kappa, opt.seed)},
    };
    bool ok = true;
    for (const auto& [name, a] : suite) {
        rnla::EmbedConfig cfg = embed_config(opt, c);
        if (name == "rank-deficient")
            cfg.effective_dim = rnla::rank_adaptive_dims(a).k;
        const rnla::EmbedResult res = rnla::constant_embed(a, cfg);
        const double xi = res.report.metrics.at("distortion");
        rep.metrics["distortion_" + name] = xi;
        ok = ok && std::isfinite(xi);
        csv_rows.push_back(name + "," + std::to_string(xi) + "," +
                           std::to_string(res.sketched.rows()));
    }
    rep.rows_in = n;
    rep.cols_in = d;
    rep.pass = ok;
    if (!opt.csv.empty()) write_csv(opt.csv, "instance,distortion,rows", csv_rows);
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    // Accept the task either as a leading subcommand word or via --task.
    std::vector<std::string> args(argv + 1, argv + argc);
    static const std::vector<std::string> kTasks = {
        "embed", "levscore", "basis", "regress", "selftest", "bench"};
    if (!args.empty() &&
        std::find(kTasks.begin(), kTasks.end(), args.front()) != kTasks.end()) {
        args.front() = "--task=" + args.front();
    }

    Options opt;
    CLI::App app{"randomized sketching and sampling toolkit"};
    app.add_option("--task", opt.task, "embed|levscore|basis|regress|selftest|bench")
        ->required();
    app.add_option("--seed", opt.seed, "64-bit RNG seed");
    app.add_option("--alpha", opt.alpha, "sparsity/dimension tradeoff in (0,1]");
    app.add_option("--epsilon", opt.epsilon, "target accuracy in (0,1)");
    app.add_option("--mtx", opt.mtx, "input matrix (Matrix Market)");
    app.add_option("--rhs", opt.rhs, "right-hand side vector (Matrix Market)");
    app.add_option("--out", opt.out, "write the JSON report here instead of stdout");
    app.add_option("--csv", opt.csv, "write the task trace as CSV");
    app.add_flag("--oracle", opt.oracle, "compare against the exact solver");
    app.add_flag("--no-timing", opt.no_timing, "omit runtime_ms from the report");
    app.add_option("--threads", opt.threads, "internal parallelism bound");
    app.add_option("--n", opt.n, "generated instance rows");
    app.add_option("--d", opt.d, "generated instance columns");
    app.add_option("--k", opt.k, "generated instance rank (rank-deficient)");
    app.add_option("--kappa", opt.kappa, "condition number (ill-conditioned)");
    app.add_option("--instance", opt.instance,
                   "gaussian|rank-deficient|duplicated-rows|single-heavy-row|"
                   "ill-conditioned");
    app.add_option("--constants", opt.constants,
                   "key=val overrides for tuning constants");

    std::vector<const char*> cargv;
    cargv.push_back("rnla_cli");
    for (const std::string& a : args) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const std::map<std::string, double> consts =
            parse_constants(opt.constants);
        const auto t0 = std::chrono::steady_clock::now();
        rnla::RunReport rep;
        if (opt.task == "embed")
            rep = run_embed(opt, consts);
        else if (opt.task == "levscore")
            rep = run_levscore(opt, consts);
        else if (opt.task == "basis")
            rep = run_basis(opt, consts);
        else if (opt.task == "regress")
            rep = run_regress(opt, consts);
        else if (opt.task == "selftest")
            rep = run_selftest(opt, consts);
        else if (opt.task == "bench")
            rep = run_bench(opt, consts);
        else
            throw rnla::Error("usage", "unknown task: " + opt.task);

        if (!opt.no_timing) {
            const auto t1 = std::chrono::steady_clock::now();
            rep.runtime_ms =
                std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
        const std::string json = rep.to_json();
        if (opt.out.empty()) {
            std::cout << json << "\n";
        } else {
            std::ofstream out(opt.out);
            if (!out.good()) throw rnla::Error("io", "cannot write " + opt.out);
            out << json << "\n";
        }
        return rep.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
