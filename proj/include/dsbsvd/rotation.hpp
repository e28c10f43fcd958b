#pragma once

#include <cmath>
#include <span>

#include "dsbsvd/matrix.hpp"

namespace dsb {

/// Parameters of one Jacobi row-pair step: alpha and beta are the squared
/// norms of the two rows, gamma their inner product. skipped means the pair
/// was already orthogonal (or below skip_tol) and no rotation is applied.
template <typename T = double>
struct RotationParams {
    T alpha{};
    T beta{};
    T gamma{};
    T cos_theta{1};
    T sin_theta{0};
    bool skipped{false};
};

/// Hestenes closed form: zeta = (beta-alpha)/(2*gamma), the smaller-root
/// tangent t = sign(zeta)/(|zeta| + sqrt(1+zeta^2)) keeps |t| <= 1, so the
/// rotation angle never exceeds 45 degrees. sign(0) = +1 fixes the alpha==beta
/// tie deterministically.
template <typename T>
RotationParams<T> compute_params(std::span<const T> row_i, std::span<const T> row_j,
                                 T skip_tol = T{0}) {
    if (row_i.empty() || row_j.empty())
        throw DimensionError("compute_params: zero-length row");
    if (row_i.size() != row_j.size())
        throw DimensionError("compute_params: row lengths differ");

    RotationParams<T> p;
    for (std::size_t k = 0; k < row_i.size(); ++k) {
        p.alpha += row_i[k] * row_i[k];
        p.beta += row_j[k] * row_j[k];
        p.gamma += row_i[k] * row_j[k];
    }

    if (p.gamma == T{0} ||
        std::abs(p.gamma) <= skip_tol * std::sqrt(p.alpha * p.beta)) {
        p.skipped = true;
        return p;
    }

    const T zeta = (p.beta - p.alpha) / (T{2} * p.gamma);
    const T sign = zeta < T{0} ? T{-1} : T{1};
    const T t = sign / (std::abs(zeta) + std::sqrt(T{1} + zeta * zeta));
    p.cos_theta = T{1} / std::sqrt(T{1} + t * t);
    p.sin_theta = p.cos_theta * t;
    return p;
}

/// In-place plane rotation of a row pair:
///   row_i' = c*row_i - s*row_j,  row_j' = s*row_i + c*row_j.
template <typename T>
void apply_rotation(std::span<T> row_i, std::span<T> row_j,
                    const RotationParams<T>& p) {
    if (row_i.size() != row_j.size())
        throw DimensionError("apply_rotation: row lengths differ");
    const T c = p.cos_theta, s = p.sin_theta;
    for (std::size_t k = 0; k < row_i.size(); ++k) {
        const T ui = row_i[k], uj = row_j[k];
        row_i[k] = c * ui - s * uj;
        row_j[k] = s * ui + c * uj;
    }
}

}  // namespace dsb
