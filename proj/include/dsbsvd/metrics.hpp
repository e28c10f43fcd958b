#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsbsvd/matrix.hpp"

namespace dsb {

/// Squared-entry-sum error metrics. norm_error_uq is the literal U*U^T - I_m
/// form; for m > n that has an analytic floor of m - n (U*U^T has rank at
/// most n), so the Gram variant U^T*U - I_n is reported alongside it as the
/// usable convergence measure. Both coincide for square U.
template <typename T = double>
struct ErrorReport {
    T norm_error_svd{};
    T norm_error_uq{};
    T norm_error_uq_gram{};
    T norm_error_vq{};
    T max_abs_offdiag_utu{};
};

namespace metrics_detail {

template <typename T>
T column_dot(const Matrix<T>& m, std::size_t a, std::size_t b) {
    T s{};
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, a) * m(i, b);
    return s;
}

}  // namespace metrics_detail

/// Sum of squared entries of A - U*diag(sigma)*V^T.
template <typename T>
T error_svd(const Matrix<T>& a, const Matrix<T>& u, const std::vector<T>& sigma,
            const Matrix<T>& v) {
    if (u.rows() != a.rows() || v.rows() != a.cols() || u.cols() != sigma.size() ||
        v.cols() != sigma.size())
        throw DimensionError("error_svd: factor shapes inconsistent with A");
    T total{};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            T r = a(i, j);
            for (std::size_t k = 0; k < sigma.size(); ++k)
                r -= u(i, k) * sigma[k] * v(j, k);
            total += r * r;
        }
    }
    return total;
}

/// Sum of squared entries of U*U^T - I_m.
template <typename T>
T error_u_orth(const Matrix<T>& u) {
    const std::size_t m = u.rows();
    T total{};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            T s{};
            for (std::size_t k = 0; k < u.cols(); ++k) s += u(i, k) * u(j, k);
            if (i == j) s -= T{1};
            total += s * s;
        }
    }
    return total;
}

/// Sum of squared entries of U^T*U - I_n (Gram variant).
template <typename T>
T error_u_orth_gram(const Matrix<T>& u) {
    T total{};
    for (std::size_t a = 0; a < u.cols(); ++a) {
        for (std::size_t b = 0; b < u.cols(); ++b) {
            T s = metrics_detail::column_dot(u, a, b);
            if (a == b) s -= T{1};
            total += s * s;
        }
    }
    return total;
}

/// Sum of squared entries of V*V^T - I_n.
template <typename T>
T error_v_orth(const Matrix<T>& v) {
    return error_u_orth(v);
}

template <typename T>
T max_abs_offdiag_gram(const Matrix<T>& u) {
    T worst{};
    for (std::size_t a = 0; a < u.cols(); ++a)
        for (std::size_t b = a + 1; b < u.cols(); ++b)
            worst = std::max(worst, std::abs(metrics_detail::column_dot(u, a, b)));
    return worst;
}

template <typename T>
ErrorReport<T> compute_report(const Matrix<T>& a, const Matrix<T>& u,
                              const std::vector<T>& sigma, const Matrix<T>& v) {
    ErrorReport<T> r;
    r.norm_error_svd = error_svd(a, u, sigma, v);
    r.norm_error_uq = error_u_orth(u);
    r.norm_error_uq_gram = error_u_orth_gram(u);
    r.norm_error_vq = error_v_orth(v);
    r.max_abs_offdiag_utu = max_abs_offdiag_gram(u);
    return r;
}

template <typename T>
nlohmann::json to_json(const ErrorReport<T>& r) {
    return {{"norm_error_svd", r.norm_error_svd},
            {"norm_error_uq", r.norm_error_uq},
            {"norm_error_uq_gram", r.norm_error_uq_gram},
            {"norm_error_vq", r.norm_error_vq},
            {"max_abs_offdiag_utu", r.max_abs_offdiag_utu}};
}

}  // namespace dsb
