#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "hc3/errors.hpp"
#include "hc3/fertile_graphs.hpp"

namespace hc3 {

struct ModelParams {
    int k = 1;            // children per non-root vertex, k >= 1
    double lambda = 1.0;  // activity, > 0
};

// Normalized boundary-law values (the vacant-state weight is 1).
struct Field {
    double z1 = 1.0;
    double z2 = 1.0;
};

struct Jacobian2 {
    double j11 = 0.0, j12 = 0.0;
    double j21 = 0.0, j22 = 0.0;
};

inline Field swapped(const Field& z) { return Field{z.z2, z.z1}; }

inline double max_norm(const Field& a, const Field& b) {
    return std::max(std::abs(a.z1 - b.z1), std::abs(a.z2 - b.z2));
}

inline void check_params(const ModelParams& p) {
    if (p.k < 1) throw std::invalid_argument("tree order k must be >= 1");
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda))
        throw std::invalid_argument("activity lambda must be positive and finite");
}

inline void check_field(const Field& z) {
    if (!(z.z1 > 0.0) || !(z.z2 > 0.0) || !std::isfinite(z.z1) || !std::isfinite(z.z2))
        throw NonFiniteInput("field entries must be positive and finite");
}

// One application of the translation-invariant boundary-law map
//
//   F_i(z) = lambda * ((a_i0 + a_i1 z1 + a_i2 z2) / (a_00 + a_01 z1 + a_02 z2))^k
//
// for i = 1, 2. The map is written through the adjacency matrix so all four
// graphs share one code path; the ratio is powered as a whole to keep large
// k away from overflow.
inline Field recursion_map(const FertileGraph& g, const ModelParams& p, const Field& z) {
    check_params(p);
    check_field(z);
    const auto& a = g.a;
    const double den = a[0][0] + a[0][1] * z.z1 + a[0][2] * z.z2;
    const double n1 = a[1][0] + a[1][1] * z.z1 + a[1][2] * z.z2;
    const double n2 = a[2][0] + a[2][1] * z.z1 + a[2][2] * z.z2;
    return Field{p.lambda * std::pow(n1 / den, p.k), p.lambda * std::pow(n2 / den, p.k)};
}

// z - F(z); the zero vector exactly at a fixed point.
inline std::array<double, 2> residual(const FertileGraph& g, const ModelParams& p, const Field& z) {
    const Field f = recursion_map(g, p, z);
    return {z.z1 - f.z1, z.z2 - f.z2};
}

inline double residual_norm(const FertileGraph& g, const ModelParams& p, const Field& z) {
    const auto r = residual(g, p, z);
    return std::max(std::abs(r[0]), std::abs(r[1]));
}

// Analytic partial derivatives dF_i/dz_j. With N_i = a_i0 + a_i1 z1 + a_i2 z2
// and D = N_0:
//
//   dF_i/dz_j = lambda k (N_i/D)^(k-1) (a_ij D - N_i a_0j) / D^2.
inline Jacobian2 jacobian(const FertileGraph& g, const ModelParams& p, const Field& z) {
    check_params(p);
    check_field(z);
    const auto& a = g.a;
    const double den = a[0][0] + a[0][1] * z.z1 + a[0][2] * z.z2;
    const double n1 = a[1][0] + a[1][1] * z.z1 + a[1][2] * z.z2;
    const double n2 = a[2][0] + a[2][1] * z.z1 + a[2][2] * z.z2;
    const double c1 = p.lambda * p.k * std::pow(n1 / den, p.k - 1) / (den * den);
    const double c2 = p.lambda * p.k * std::pow(n2 / den, p.k - 1) / (den * den);
    Jacobian2 j;
    j.j11 = c1 * (a[1][1] * den - n1 * a[0][1]);
    j.j12 = c1 * (a[1][2] * den - n1 * a[0][2]);
    j.j21 = c2 * (a[2][1] * den - n2 * a[0][1]);
    j.j22 = c2 * (a[2][2] * den - n2 * a[0][2]);
    return j;
}

}  // namespace hc3
