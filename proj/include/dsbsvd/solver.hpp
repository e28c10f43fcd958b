#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <vector>

#include "dsbsvd/matrix.hpp"
#include "dsbsvd/rotation.hpp"
#include "dsbsvd/schedule.hpp"

namespace dsb {

template <typename T = double>
struct SolverConfig {
    std::size_t sweeps = 10;
    std::size_t rows_per_pu = 2;
    T skip_tol = T{0};
    // guards the normalization divide on rank-deficient inputs
    T sigma_zero_tol = std::numeric_limits<T>::min();
    bool sort_output = true;
    unsigned workers = 0;  // 0 = sequential
};

template <typename T = double>
struct SvdResult {
    Matrix<T> u;            // m x k, orthonormal columns
    std::vector<T> sigma;   // k = min(m, n) singular values
    Matrix<T> v;            // n x k
    std::size_t sweeps_run = 0;
    std::size_t rotations_applied = 0;
    std::size_t rotations_skipped = 0;
};

namespace solver_detail {

// Orthogonalize one PU's pair list on the working matrix and the V
// accumulator. Touches only rows owned by this PU, so PUs of one stage can
// run on any worker with no synchronization.
template <typename T>
void run_pu(Matrix<T>& w, Matrix<T>& v_acc,
            const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
            T skip_tol, std::size_t& applied, std::size_t& skipped) {
    for (auto [i, j] : pairs) {
        auto p = compute_params<T>(w.row(i), w.row(j), skip_tol);
        if (p.skipped) {
            ++skipped;
            continue;
        }
        apply_rotation(w.row(i), w.row(j), p);
        apply_rotation(v_acc.row(i), v_acc.row(j), p);
        ++applied;
    }
}

// Stage execution: PUs own disjoint row sets and each PU's internal pair
// order is fixed, so results are bit-identical for any worker count.
template <typename T>
void run_stage(Matrix<T>& w, Matrix<T>& v_acc, const Stage& stage, T skip_tol,
               unsigned workers, std::vector<std::size_t>& applied_per_pu,
               std::vector<std::size_t>& skipped_per_pu) {
    const std::size_t n_pus = stage.pu_pairs.size();
    if (workers <= 1 || n_pus == 1) {
        for (std::size_t p = 0; p < n_pus; ++p)
            run_pu(w, v_acc, stage.pu_pairs[p], skip_tol, applied_per_pu[p],
                   skipped_per_pu[p]);
        return;
    }
    const unsigned n_threads = static_cast<unsigned>(
        std::min<std::size_t>(workers, n_pus));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t p = t; p < n_pus; p += n_threads)
                run_pu(w, v_acc, stage.pu_pairs[p], skip_tol,
                       applied_per_pu[p], skipped_per_pu[p]);
        });
    }
    for (auto& th : pool) th.join();  // barrier before row migration
}

}  // namespace solver_detail

/// Normalize the post-sweep working matrix (rows of B) and assemble the
/// final factors: sigma_j is the Euclidean norm of row j, the row is divided
/// by it (rows with sigma below sigma_zero_tol become zero rows with
/// sigma = 0), then both matrices are transposed to column orientation and
/// optionally sorted by descending sigma.
template <typename T>
SvdResult<T> normalize_and_assemble(Matrix<T> working_u, const Matrix<T>& v_acc,
                                    const SolverConfig<T>& cfg) {
    const std::size_t n = working_u.rows();
    std::vector<T> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto row = working_u.row(j);
        T s2 = T{0};
        for (T v : row) s2 += v * v;
        const T s = std::sqrt(s2);
        if (s > cfg.sigma_zero_tol) {
            sigma[j] = s;
            for (T& v : row) v /= s;
        } else {
            sigma[j] = T{0};
            std::fill(row.begin(), row.end(), T{0});
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (cfg.sort_output) {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });
    }

    SvdResult<T> r;
    r.u = Matrix<T>(working_u.cols(), n);
    r.v = Matrix<T>(v_acc.cols(), n);
    r.sigma.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        r.sigma[k] = sigma[src];
        for (std::size_t i = 0; i < working_u.cols(); ++i) r.u(i, k) = working_u(src, i);
        for (std::size_t i = 0; i < v_acc.cols(); ++i) r.v(i, k) = v_acc(src, i);
    }
    return r;
}

namespace solver_detail {

// Shared sweep driver: the two solvers differ only in how the per-sweep
// pair lists are produced.
template <typename T, typename SweepFn>
SvdResult<T> one_sided_svd(const Matrix<T>& a, const SolverConfig<T>& cfg,
                           SweepFn&& run_sweep) {
    if (!a.all_finite())
        throw ValidationError("input matrix contains non-finite values");
    if (cfg.sweeps < 1) throw ConfigError("sweeps must be >= 1");

    if (a.rows() < a.cols()) {
        // the sweep kernel needs m >= n; decompose the transpose and swap factors
        SvdResult<T> r = one_sided_svd(transpose(a), cfg, run_sweep);
        std::swap(r.u, r.v);
        return r;
    }

    const std::size_t n = a.cols();
    Matrix<T> w = transpose(a);  // n x m, rows are columns of A
    Matrix<T> v_acc = Matrix<T>::identity(n);

    SvdResult<T> r = run_sweep(w, v_acc);
    r.sweeps_run = cfg.sweeps;
    return r;
}

}  // namespace solver_detail

/// DSB Jacobi SVD: transpose, block-tournament sweeps over the PU schedule,
/// normalization. When n is not a multiple of rows_per_pu the working matrix
/// is padded with zero rows (zero columns of A); padded rows never rotate
/// (their gamma is 0) and are stripped before assembly.
template <typename T>
SvdResult<T> dsb_svd(const Matrix<T>& a, const SolverConfig<T>& cfg) {
    return solver_detail::one_sided_svd(a, cfg, [&](Matrix<T>& w, Matrix<T>& v_acc) {
        const std::size_t n = w.rows();
        const std::size_t pad = (cfg.rows_per_pu - n % cfg.rows_per_pu) % cfg.rows_per_pu;
        const std::size_t n_pad = n + pad;

        Matrix<T> wp(n_pad, w.cols());
        for (std::size_t i = 0; i < n; ++i)
            std::copy(w.row(i).begin(), w.row(i).end(), wp.row(i).begin());
        Matrix<T> vp = Matrix<T>::identity(n_pad);

        const PuConfig pu = PuConfig::for_rows(n_pad, cfg.rows_per_pu);
        const SweepSchedule sched = build_schedule(n_pad, pu);

        std::vector<std::size_t> applied(pu.num_pus, 0), skipped(pu.num_pus, 0);
        for (std::size_t s = 0; s < cfg.sweeps; ++s)
            for (const Stage& stage : sched.stages)
                solver_detail::run_stage(wp, vp, stage, cfg.skip_tol, cfg.workers,
                                         applied, skipped);

        // strip padded rows/columns: padded rows of W stayed zero and padded
        // rows of V stayed unit, so the top-left blocks are the exact factors
        Matrix<T> w_out(n, w.cols());
        Matrix<T> v_out(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            std::copy(wp.row(i).begin(), wp.row(i).end(), w_out.row(i).begin());
            for (std::size_t j = 0; j < n; ++j) v_out(i, j) = vp(i, j);
        }

        SvdResult<T> r = normalize_and_assemble(std::move(w_out), v_out, cfg);
        r.rotations_applied = std::accumulate(applied.begin(), applied.end(), std::size_t{0});
        r.rotations_skipped = std::accumulate(skipped.begin(), skipped.end(), std::size_t{0});
        return r;
    });
}

/// Classic sequential Hestenes baseline: cyclic-by-rows pair ordering,
/// pairs (i,j) with i < j in lexicographic order, one global pass per sweep.
template <typename T>
SvdResult<T> hestenes_svd(const Matrix<T>& a, std::size_t sweeps,
                          SolverConfig<T> cfg = {}) {
    cfg.sweeps = sweeps;
    return solver_detail::one_sided_svd(a, cfg, [&](Matrix<T>& w, Matrix<T>& v_acc) {
        const std::size_t n = w.rows();
        std::size_t applied = 0, skipped = 0;
        for (std::size_t s = 0; s < cfg.sweeps; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    auto p = compute_params<T>(w.row(i), w.row(j), cfg.skip_tol);
                    if (p.skipped) {
                        ++skipped;
                        continue;
                    }
                    apply_rotation(w.row(i), w.row(j), p);
                    apply_rotation(v_acc.row(i), v_acc.row(j), p);
                    ++applied;
                }
            }
        }
        SvdResult<T> r = normalize_and_assemble(std::move(w), v_acc, cfg);
        r.rotations_applied = applied;
        r.rotations_skipped = skipped;
        return r;
    });
}

}  // namespace dsb
