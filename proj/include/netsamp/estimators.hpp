#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>

#include "netsamp/graph.hpp"

namespace netsamp {

/// Point estimate with its variance and normal-theory interval.
struct Estimate {
    double value = 0.0;
    double variance = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double alpha = 0.05;
    std::string method;
    bool clamped = false;
};

/// Variance estimate from one of the approximate forms that can go negative.
struct VarianceResult {
    double value = 0.0;
    bool clamped = false;     // raw value was negative and has been set to 0
    double raw = 0.0;         // value before clamping
    std::size_t skipped = 0;  // pair terms dropped because f_ij = 0
};

enum class VarianceMethod { simple, diagonal, diagonal_conservative, edge, full };

std::string to_string(VarianceMethod method);
VarianceMethod parse_variance_method(const std::string &text);

/// Σ(y_i / w_i) / Σ(1 / w_i). Throws DomainError unless every weight is > 0.
double gupe_mean(std::span<const double> y, std::span<const double> weights);

/// gupe_mean with population degrees as weights. Throws DomainError on a
/// degree below 1.
double vh_mean(std::span<const double> y, std::span<const double> degrees);

double sample_mean(std::span<const double> y);

/// (1 / (Σ 1/f)^2) · Σ (y_i - mu)^2 / f_i^2
double variance_simple(std::span<const double> y, std::span<const double> f, double mu);

/// Diagonal-only linearization variance, Σ (1 - f_i)(y_i - mu)^2 / f_i scaled
/// by (Σ 1/f)^-2. The conservative variant drops the (1 - f_i) factor.
double variance_diagonal(std::span<const double> y, std::span<const double> f, double mu, bool conservative);

/// Linearization variance restricted to sample edges:
/// (Σ 1/f)^-2 [ Σ_i (f_i - 1)(y_i - mu)^2 / f_i
///              + Σ_{(i,j) in E_s} ((f_ij - f_i f_j) / f_ij) ((y_i - mu)/f_i) ((y_j - mu)/f_j) ]
/// Each edge contributes once. `edges` use indices into y and f.
VarianceResult variance_edge(std::span<const double> y, std::span<const double> f, std::span<const Edge> edges,
                             std::span<const double> pair_f, double mu);

/// Full double-sum linearization variance over all ordered pairs i != j with
/// Δ_ij = (f_ij - f_i f_j) / f_ij, plus the diagonal in the same form as
/// variance_diagonal, so that independent inclusions reduce to it exactly.
/// pair_f is the upper triangle in triangle_index() order.
VarianceResult variance_full(std::span<const double> y, std::span<const double> f, std::span<const double> pair_f,
                             double mu);

/// Standard normal quantile. Acklam's rational approximation followed by one
/// Halley step against erfc.
double normal_quantile(double p);

/// mu ± z_{1-alpha/2} · sqrt(variance).
std::pair<double, double> confidence_interval(double mu, double variance, double alpha);

/// With-replacement estimator Σ(m_i y_i / g_i) / Σ(m_i / g_i).
double wr_mean(std::span<const double> y, std::span<const double> m, std::span<const double> g);
/// (Σ m_i/g_i)^-2 · Σ m_i (y_i - mu)^2 / g_i^2
double wr_variance(std::span<const double> y, std::span<const double> m, std::span<const double> g, double mu);

/// R = Σ(y_i/f_i) / Σ(x_i/f_i). Throws DomainError on a zero denominator.
double ratio_estimate(std::span<const double> y, std::span<const double> x, std::span<const double> f);
/// (Σ x_i/f_i)^-2 · Σ (y_i - x_i R)^2 / f_i^2
double ratio_variance(std::span<const double> y, std::span<const double> x, std::span<const double> f, double ratio);

/// Packs a point estimate and variance into an Estimate with its interval.
Estimate make_estimate(std::string method, double value, double variance, double alpha, bool clamped = false);

}  // namespace netsamp
