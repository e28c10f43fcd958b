// dsbsvd: row-pair one-sided Jacobi SVD with a block/cyclic PU schedule.
// Subcommands: decompose, verify, bench, schedule.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 validation error,
// 4 assertion failure (verify --assert-*).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsbsvd/bench.hpp"
#include "dsbsvd/matrix_io.hpp"
#include "dsbsvd/metrics.hpp"
#include "dsbsvd/schedule.hpp"
#include "dsbsvd/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;
constexpr int kExitAssert = 4;

struct DecomposeOpts {
    std::string input;
    std::string out_prefix;
    std::string format = "csv";
    std::size_t sweeps = 10;
    std::size_t rows_per_pu = 2;
    unsigned workers = 0;
    bool no_sort = false;
    double skip_tol = 0.0;
    bool full_sigma = false;
};

struct VerifyOpts {
    std::string a_path, u_path, s_path, v_path;
    std::string format = "csv";
    std::optional<double> assert_svd, assert_uq, assert_vq;
    std::string out_json;
};

struct BenchOpts {
    std::string mode = "iterations";
    std::vector<std::size_t> sizes;
    std::string sweeps_expr = "10";
    std::string rows_per_pu_expr = "2";
    std::uint64_t seed = 1;
    std::size_t repetitions = 1;
    std::string distribution = "standard_normal";
    std::string out = "bench.csv";
};

struct ScheduleOpts {
    std::size_t n_rows = 0;
    std::size_t rows_per_pu = 2;
    std::string out;
};

// "1..6" or "2,4,8" or "5"
std::vector<std::size_t> parse_count_list(const std::string& expr) {
    std::vector<std::size_t> out;
    if (auto dots = expr.find(".."); dots != std::string::npos) {
        std::size_t lo = std::stoull(expr.substr(0, dots));
        std::size_t hi = std::stoull(expr.substr(dots + 2));
        if (lo == 0 || hi < lo) throw dsb::ConfigError("bad range '" + expr + "'");
        for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::stringstream ss(expr);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
    if (out.empty()) throw dsb::ConfigError("empty list '" + expr + "'");
    return out;
}

std::string sigma_csv(const std::vector<double>& sigma) {
    std::string s;
    for (double v : sigma) {
        s += dsb::io_detail::format_scalar(v);
        s += '\n';
    }
    return s;
}

int run_decompose(const DecomposeOpts& o) {
    const dsb::FileFormat fmt = dsb::parse_format(o.format);
    const auto a = dsb::read_matrix<double>(o.input, fmt);

    dsb::SolverConfig<double> cfg;
    cfg.sweeps = o.sweeps;
    cfg.rows_per_pu = o.rows_per_pu;
    cfg.workers = o.workers;
    cfg.sort_output = !o.no_sort;
    cfg.skip_tol = o.skip_tol;

    const auto r = dsb::dsb_svd(a, cfg);

    const std::string ext = fmt == dsb::FileFormat::csv ? ".csv" : ".bin";
    dsb::write_matrix(r.u, o.out_prefix + "_u" + ext, fmt);
    dsb::write_matrix(r.v, o.out_prefix + "_v" + ext, fmt);
    if (o.full_sigma) {
        dsb::Matrix<double> s(r.sigma.size(), r.sigma.size());
        for (std::size_t i = 0; i < r.sigma.size(); ++i) s(i, i) = r.sigma[i];
        dsb::write_matrix(s, o.out_prefix + "_s" + ext, fmt);
    } else {
        // one-column CSV of the diagonal regardless of --format
        std::ofstream f(o.out_prefix + "_s.csv");
        if (!f) throw dsb::IoError("cannot open sigma output file");
        f << sigma_csv(r.sigma);
    }

    const auto report = dsb::compute_report(a, r.u, r.sigma, r.v);
    nlohmann::json j = dsb::to_json(report);
    j["sweeps_run"] = r.sweeps_run;
    j["rotations_applied"] = r.rotations_applied;
    j["rotations_skipped"] = r.rotations_skipped;
    std::ofstream jf(o.out_prefix + "_metrics.json");
    if (!jf) throw dsb::IoError("cannot open metrics output file");
    jf << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

int run_verify(const VerifyOpts& o) {
    const dsb::FileFormat fmt = dsb::parse_format(o.format);
    const auto a = dsb::read_matrix<double>(o.a_path, fmt);
    const auto u = dsb::read_matrix<double>(o.u_path, fmt);
    const auto v = dsb::read_matrix<double>(o.v_path, fmt);

    // sigma file: one-column CSV diagonal or a dense diagonal matrix
    const auto s_mat = dsb::read_matrix<double>(o.s_path, dsb::FileFormat::csv);
    std::vector<double> sigma;
    if (s_mat.cols() == 1) {
        for (std::size_t i = 0; i < s_mat.rows(); ++i) sigma.push_back(s_mat(i, 0));
    } else {
        for (std::size_t i = 0; i < std::min(s_mat.rows(), s_mat.cols()); ++i)
            sigma.push_back(s_mat(i, i));
    }

    const auto report = dsb::compute_report(a, u, sigma, v);
    const nlohmann::json j = dsb::to_json(report);
    std::cout << j.dump(2) << '\n';
    if (!o.out_json.empty()) {
        std::ofstream jf(o.out_json);
        if (!jf) throw dsb::IoError("cannot open '" + o.out_json + "' for writing");
        jf << j.dump(2) << '\n';
    }

    bool failed = false;
    if (o.assert_svd && report.norm_error_svd > *o.assert_svd) failed = true;
    if (o.assert_uq && report.norm_error_uq_gram > *o.assert_uq) failed = true;
    if (o.assert_vq && report.norm_error_vq > *o.assert_vq) failed = true;
    if (failed) {
        std::cerr << "assertion failed: error exceeds threshold\n";
        return kExitAssert;
    }
    return kExitOk;
}

int run_bench(const BenchOpts& o) {
    dsb::ExperimentSpec spec;
    for (std::size_t s : o.sizes) spec.sizes.emplace_back(s, s);
    spec.sweeps_list = parse_count_list(o.sweeps_expr);
    spec.rows_per_pu_list = parse_count_list(o.rows_per_pu_expr);
    spec.seed = o.seed;
    spec.repetitions = o.repetitions;
    spec.distribution = dsb::parse_distribution(o.distribution);
    spec.validate();

    std::vector<dsb::BenchRow> rows;
    if (o.mode == "iterations")
        rows = dsb::run_iteration_sweep(spec);
    else if (o.mode == "pu")
        rows = dsb::run_pu_sweep(spec);
    else
        throw dsb::ConfigError("unknown bench mode '" + o.mode + "'");

    std::ofstream csv(o.out);
    if (!csv) throw dsb::IoError("cannot open '" + o.out + "' for writing");
    dsb::write_bench_csv(rows, csv);
    std::ofstream meta(o.out + ".meta.json");
    if (!meta) throw dsb::IoError("cannot open metadata sidecar for writing");
    meta << dsb::bench_metadata(spec).dump(2) << '\n';
    std::cout << "wrote " << rows.size() << " rows to " << o.out << '\n';
    return kExitOk;
}

int run_schedule(const ScheduleOpts& o) {
    const auto cfg = dsb::PuConfig::for_rows(o.n_rows, o.rows_per_pu);
    const auto sched = dsb::build_schedule(o.n_rows, cfg);
    if (o.out.empty()) {
        dsb::dump_schedule(sched, std::cout);
    } else {
        std::ofstream f(o.out);
        if (!f) throw dsb::IoError("cannot open '" + o.out + "' for writing");
        dsb::dump_schedule(sched, f);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DSB Jacobi SVD: decompose, verify, bench, schedule"};
    app.require_subcommand(1);

    DecomposeOpts dec;
    auto* cmd_dec = app.add_subcommand("decompose", "Run the SVD and write U/S/V + metrics");
    cmd_dec->add_option("--input", dec.input, "input matrix file")->required();
    cmd_dec->add_option("--out-prefix", dec.out_prefix, "output file prefix")->required();
    cmd_dec->add_option("--format", dec.format, "matrix file format (csv|bin)");
    cmd_dec->add_option("--sweeps", dec.sweeps, "number of sweeps");
    cmd_dec->add_option("--rows-per-pu", dec.rows_per_pu, "rows per processing unit");
    cmd_dec->add_option("--workers", dec.workers, "worker threads (0 = sequential)");
    cmd_dec->add_flag("--no-sort", dec.no_sort, "keep raw singular value order");
    cmd_dec->add_option("--skip-tol", dec.skip_tol, "relative gamma skip threshold");
    cmd_dec->add_flag("--full-sigma", dec.full_sigma, "emit sigma as a dense diagonal matrix");

    VerifyOpts ver;
    auto* cmd_ver = app.add_subcommand("verify", "Compute error metrics for given factors");
    cmd_ver->add_option("--a", ver.a_path, "original matrix")->required();
    cmd_ver->add_option("--u", ver.u_path, "U factor")->required();
    cmd_ver->add_option("--s", ver.s_path, "sigma file (one-column CSV or dense diagonal)")->required();
    cmd_ver->add_option("--v", ver.v_path, "V factor")->required();
    cmd_ver->add_option("--format", ver.format, "matrix file format (csv|bin)");
    cmd_ver->add_option("--out-json", ver.out_json, "also write the report to this file");
    double asvd, auq, avq;
    auto* o1 = cmd_ver->add_option("--assert-svd", asvd, "fail if norm_error_svd exceeds");
    auto* o2 = cmd_ver->add_option("--assert-uq", auq, "fail if norm_error_uq_gram exceeds");
    auto* o3 = cmd_ver->add_option("--assert-vq", avq, "fail if norm_error_vq exceeds");

    BenchOpts ben;
    auto* cmd_ben = app.add_subcommand("bench", "Run experiment sweeps, emit CSV + JSON sidecar");
    cmd_ben->add_option("--mode", ben.mode, "iterations | pu");
    cmd_ben->add_option("--sizes", ben.sizes, "square matrix sizes")->required();
    cmd_ben->add_option("--sweeps", ben.sweeps_expr, "sweeps list, e.g. 10 or 1..12 or 2,4");
    cmd_ben->add_option("--rows-per-pu", ben.rows_per_pu_expr, "rows-per-PU list");
    cmd_ben->add_option("--seed", ben.seed, "PRNG seed");
    cmd_ben->add_option("--repetitions", ben.repetitions, "timing repetitions per cell");
    cmd_ben->add_option("--distribution", ben.distribution, "standard_normal | uniform01");
    cmd_ben->add_option("--out", ben.out, "output CSV path");

    ScheduleOpts sch;
    auto* cmd_sch = app.add_subcommand("schedule", "Dump the per-sweep stage plan");
    cmd_sch->add_option("n_rows", sch.n_rows, "number of rows")->required();
    cmd_sch->add_option("rows_per_pu", sch.rows_per_pu, "rows per PU")->required();
    cmd_sch->add_option("--out", sch.out, "write dump to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*cmd_dec) return run_decompose(dec);
        if (*cmd_ver) {
            if (*o1) ver.assert_svd = asvd;
            if (*o2) ver.assert_uq = auq;
            if (*o3) ver.assert_vq = avq;
            return run_verify(ver);
        }
        if (*cmd_ben) return run_bench(ben);
        if (*cmd_sch) return run_schedule(sch);
    } catch (const dsb::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const dsb::DimensionError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const dsb::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const dsb::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitIo;
    } catch (const dsb::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitUsage;
}
