#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsbsvd/matrix.hpp"
#include "dsbsvd/metrics.hpp"
#include "dsbsvd/schedule.hpp"
#include "dsbsvd/solver.hpp"

namespace dsb {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class Distribution { standard_normal, uniform01 };

inline Distribution parse_distribution(const std::string& s) {
    if (s == "standard_normal") return Distribution::standard_normal;
    if (s == "uniform01") return Distribution::uniform01;
    throw ConfigError("unknown distribution '" + s + "'");
}

inline const char* to_string(Distribution d) {
    return d == Distribution::standard_normal ? "standard_normal" : "uniform01";
}

/// Deterministic cross-platform generator: mt19937_64 (bit-exact per the
/// standard) with uniforms taken as (x >> 11) * 2^-53 and normals via
/// Box-Muller. Golden files produced on one platform replay on any other.
inline Matrix<double> generate_matrix(std::size_t m, std::size_t n,
                                      std::uint64_t seed, Distribution dist) {
    std::mt19937_64 eng(seed);
    auto uniform = [&eng] { return static_cast<double>(eng() >> 11) * 0x1p-53; };

    Matrix<double> a(m, n);
    if (dist == Distribution::uniform01) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = uniform();
        return a;
    }
    bool have_spare = false;
    double spare = 0;
    auto normal = [&] {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double u1 = (static_cast<double>(eng() >> 11) + 1.0) * 0x1p-53;  // (0,1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare = r * std::sin(2.0 * std::numbers::pi * u2);
        have_spare = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = normal();
    return a;
}

struct ExperimentSpec {
    std::vector<std::pair<std::size_t, std::size_t>> sizes;
    std::vector<std::size_t> rows_per_pu_list{2};
    std::vector<std::size_t> sweeps_list{10};
    std::uint64_t seed = 1;
    std::size_t repetitions = 1;
    Distribution distribution = Distribution::standard_normal;

    void validate() const {
        if (sizes.empty()) throw ConfigError("experiment spec: no sizes given");
        for (auto [m, n] : sizes)
            if (m == 0 || n == 0) throw ConfigError("experiment spec: zero dimension");
        if (repetitions < 1) throw ConfigError("experiment spec: repetitions must be >= 1");
        if (rows_per_pu_list.empty() || sweeps_list.empty())
            throw ConfigError("experiment spec: empty parameter list");
    }
};

/// PU memory footprint model: four RAM blocks per PU (row i and j of U, row
/// i and j of V); informational, not a hardware reproduction.
struct ResourceModel {
    std::size_t num_pus = 0;
    std::size_t rams_per_pu = 4;
    std::size_t total_ram_blocks = 0;
    std::size_t words_per_u_ram = 0;
    std::size_t words_per_v_ram = 0;
    std::size_t rotations_per_sweep = 0;
    std::size_t stages_per_sweep = 0;

    static ResourceModel build(std::size_t m, std::size_t n, std::size_t rows_per_pu) {
        const std::size_t pad = (rows_per_pu - n % rows_per_pu) % rows_per_pu;
        PuConfig pu = PuConfig::for_rows(n + pad, rows_per_pu);
        ResourceModel r;
        r.num_pus = pu.num_pus;
        r.total_ram_blocks = 4 * pu.num_pus;
        r.words_per_u_ram = m;
        r.words_per_v_ram = n;
        r.rotations_per_sweep = dsb::rotations_per_sweep(n + pad, pu);
        r.stages_per_sweep = 2 * pu.num_pus - 1;
        return r;
    }
};

struct BenchRow {
    std::string experiment_id;
    std::size_t m = 0, n = 0, rows_per_pu = 0, sweeps = 0;
    std::uint64_t seed = 0;
    Distribution distribution = Distribution::standard_normal;
    double time_ms = 0;
    ErrorReport<double> errors;
    std::size_t rotations_applied = 0;
    std::size_t rotations_skipped = 0;
    std::size_t stages_per_sweep = 0;
    std::size_t total_ram_blocks = 0;
};

namespace bench_detail {

inline BenchRow run_cell(const std::string& id, std::size_t m, std::size_t n,
                         std::size_t rows_per_pu, std::size_t sweeps,
                         const ExperimentSpec& spec) {
    BenchRow row;
    row.experiment_id = id;
    row.m = m;
    row.n = n;
    row.rows_per_pu = rows_per_pu;
    row.sweeps = sweeps;
    row.seed = spec.seed;
    row.distribution = spec.distribution;

    const Matrix<double> a = generate_matrix(m, n, spec.seed, spec.distribution);
    SolverConfig<double> cfg;
    cfg.sweeps = sweeps;
    cfg.rows_per_pu = rows_per_pu;

    SvdResult<double> result = dsb_svd(a, cfg);  // warm-up, excluded from timing
    std::vector<double> times;
    times.reserve(spec.repetitions);
    for (std::size_t r = 0; r < spec.repetitions; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        result = dsb_svd(a, cfg);
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    row.time_ms = times[times.size() / 2];  // median

    row.errors = compute_report(a, result.u, result.sigma, result.v);
    row.rotations_applied = result.rotations_applied;
    row.rotations_skipped = result.rotations_skipped;
    const ResourceModel rm = ResourceModel::build(m, n, rows_per_pu);
    row.stages_per_sweep = rm.stages_per_sweep;
    row.total_ram_blocks = rm.total_ram_blocks;
    return row;
}

}  // namespace bench_detail

/// Sweep-count experiment: fixed rows_per_pu (first list entry), one row per
/// (size, sweeps) cell.
inline std::vector<BenchRow> run_iteration_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<BenchRow> rows;
    std::size_t idx = 0;
    for (auto [m, n] : spec.sizes)
        for (std::size_t sweeps : spec.sweeps_list)
            rows.push_back(bench_detail::run_cell("iter-" + std::to_string(idx++), m, n,
                                                  spec.rows_per_pu_list.front(), sweeps,
                                                  spec));
    return rows;
}

/// PU-size experiment: fixed sweeps (first list entry), one row per
/// (size, rows_per_pu) cell.
inline std::vector<BenchRow> run_pu_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<BenchRow> rows;
    std::size_t idx = 0;
    for (auto [m, n] : spec.sizes)
        for (std::size_t rpp : spec.rows_per_pu_list)
            rows.push_back(bench_detail::run_cell("pu-" + std::to_string(idx++), m, n,
                                                  rpp, spec.sweeps_list.front(), spec));
    return rows;
}

inline std::string io_detail_csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& os) {
    os << "experiment_id,m,n,rows_per_pu,sweeps,seed,distribution,time_ms,"
          "norm_error_svd,norm_error_uq_literal,norm_error_uq_gram,norm_error_vq,"
          "rotations_applied,rotations_skipped,stages_per_sweep,total_ram_blocks\n";
    for (const auto& r : rows) {
        os << r.experiment_id << ',' << r.m << ',' << r.n << ',' << r.rows_per_pu << ','
           << r.sweeps << ',' << r.seed << ',' << to_string(r.distribution) << ','
           << io_detail_csv_num(r.time_ms) << ',' << io_detail_csv_num(r.errors.norm_error_svd)
           << ',' << io_detail_csv_num(r.errors.norm_error_uq) << ','
           << io_detail_csv_num(r.errors.norm_error_uq_gram) << ','
           << io_detail_csv_num(r.errors.norm_error_vq) << ',' << r.rotations_applied << ','
           << r.rotations_skipped << ',' << r.stages_per_sweep << ',' << r.total_ram_blocks
           << '\n';
    }
}

inline nlohmann::json bench_metadata(const ExperimentSpec& spec) {
    nlohmann::json sizes = nlohmann::json::array();
    for (auto [m, n] : spec.sizes) sizes.push_back({m, n});
    return {{"library_version", kLibraryVersion},
            {"platform", "software"},
            {"sizes", sizes},
            {"rows_per_pu_list", spec.rows_per_pu_list},
            {"sweeps_list", spec.sweeps_list},
            {"seed", spec.seed},
            {"repetitions", spec.repetitions},
            {"distribution", to_string(spec.distribution)}};
}

}  // namespace dsb
