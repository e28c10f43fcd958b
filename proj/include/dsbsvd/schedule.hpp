#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dsbsvd/matrix.hpp"

namespace dsb {

/// PU layout: each processing unit holds rows_per_pu rows per stage.
struct PuConfig {
    std::size_t rows_per_pu = 2;
    std::size_t num_pus = 1;

    static PuConfig for_rows(std::size_t n_rows, std::size_t rows_per_pu) {
        if (rows_per_pu < 2)
            throw ConfigError("rows_per_pu must be >= 2 (got " +
                              std::to_string(rows_per_pu) + ")");
        if (rows_per_pu % 2 != 0)
            throw ConfigError("rows_per_pu must be even (got " +
                              std::to_string(rows_per_pu) + ")");
        if (n_rows == 0 || n_rows % rows_per_pu != 0)
            throw ConfigError("n_rows (" + std::to_string(n_rows) +
                              ") must be a positive multiple of rows_per_pu (" +
                              std::to_string(rows_per_pu) + ")");
        return {rows_per_pu, n_rows / rows_per_pu};
    }
};

struct Stage {
    // pu_rows[p]: the rows_per_pu global row indices PU p holds this stage
    std::vector<std::vector<std::size_t>> pu_rows;
    // pu_pairs[p]: the (i,j) global index pairs PU p orthogonalizes, in
    // lexicographic order of the local positions
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pu_pairs;
};

struct SweepSchedule {
    std::size_t n_rows = 0;
    PuConfig cfg;
    std::vector<Stage> stages;
};

/// Block tournament on half-blocks of rows_per_pu/2 rows. PU p starts with
/// half-blocks (2p, 2p+1); half-block 0 stays pinned while the rest rotate
/// one slot per stage around the ring
///   top[1] .. top[G-1] -> bot[G-1] .. bot[0] -> top[1]
/// (the circle method), so every half-block pair is co-resident exactly once
/// in 2G-1 stages. Each stage a PU orthogonalizes all C(rows_per_pu, 2)
/// pairs among its held rows; intra-half-block pairs therefore repeat across
/// stages, which is harmless since re-orthogonalizing an orthogonal pair is
/// a skip. With rows_per_pu == 2 this degenerates to the row-level
/// round-robin and every row pair appears exactly once.
inline SweepSchedule build_schedule(std::size_t n_rows, const PuConfig& cfg) {
    // re-validate so hand-built configs cannot bypass the invariants
    PuConfig c = PuConfig::for_rows(n_rows, cfg.rows_per_pu);

    const std::size_t g = c.num_pus;
    const std::size_t half = c.rows_per_pu / 2;

    std::vector<std::size_t> top(g), bot(g);
    for (std::size_t p = 0; p < g; ++p) {
        top[p] = 2 * p;
        bot[p] = 2 * p + 1;
    }

    SweepSchedule sched;
    sched.n_rows = n_rows;
    sched.cfg = c;
    const std::size_t n_stages = 2 * g - 1;
    sched.stages.reserve(n_stages);

    for (std::size_t s = 0; s < n_stages; ++s) {
        Stage stage;
        stage.pu_rows.resize(g);
        stage.pu_pairs.resize(g);
        for (std::size_t p = 0; p < g; ++p) {
            auto& rows = stage.pu_rows[p];
            rows.reserve(c.rows_per_pu);
            for (std::size_t k = 0; k < half; ++k) rows.push_back(top[p] * half + k);
            for (std::size_t k = 0; k < half; ++k) rows.push_back(bot[p] * half + k);
            auto& pairs = stage.pu_pairs[p];
            pairs.reserve(c.rows_per_pu * (c.rows_per_pu - 1) / 2);
            for (std::size_t a = 0; a < rows.size(); ++a)
                for (std::size_t b = a + 1; b < rows.size(); ++b)
                    pairs.emplace_back(rows[a], rows[b]);
        }
        sched.stages.push_back(std::move(stage));

        if (g > 1 && s + 1 < n_stages) {
            // rotate everything except top[0] one step around the ring
            const std::size_t incoming_top = bot[0];
            for (std::size_t p = 0; p + 1 < g; ++p) bot[p] = bot[p + 1];
            bot[g - 1] = top[g - 1];
            for (std::size_t p = g - 1; p >= 2; --p) top[p] = top[p - 1];
            top[1] = incoming_top;
        }
    }
    return sched;
}

/// Total (i,j) pair slots in one sweep: (2G-1) * G * C(p,2) with G = num_pus.
inline std::size_t rotations_per_sweep(std::size_t n_rows, const PuConfig& cfg) {
    PuConfig c = PuConfig::for_rows(n_rows, cfg.rows_per_pu);
    const std::size_t pairs_per_pu = c.rows_per_pu * (c.rows_per_pu - 1) / 2;
    return (2 * c.num_pus - 1) * c.num_pus * pairs_per_pu;
}

/// Text dump: one line per stage and PU, "stage,pu,rows...,pairs...".
inline void dump_schedule(const SweepSchedule& s, std::ostream& os) {
    os << "n_rows=" << s.n_rows << " rows_per_pu=" << s.cfg.rows_per_pu
       << " num_pus=" << s.cfg.num_pus << " stages=" << s.stages.size() << '\n';
    for (std::size_t st = 0; st < s.stages.size(); ++st) {
        for (std::size_t p = 0; p < s.cfg.num_pus; ++p) {
            os << st << ',' << p << ",rows:";
            for (std::size_t r : s.stages[st].pu_rows[p]) os << ' ' << r;
            os << ",pairs:";
            for (auto [i, j] : s.stages[st].pu_pairs[p]) os << " (" << i << ' ' << j << ')';
            os << '\n';
        }
    }
}

}  // namespace dsb
