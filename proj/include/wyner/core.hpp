#pragma once

// Shared domain types for the common-information bound library: 2x2
// covariances, correlation coefficients, bound reports.  All information
// quantities are in nats.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace wyner {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi_e = 2.0 * pi * 2.71828182845904523536;

// Relative PSD slack: covariances assembled in floating point may sit a
// round-off below the PSD boundary.
inline constexpr double psd_epsilon = 1e-12;

// Raised where a formula diverges (|rho| = 1 makes the Gaussian common
// information infinite).  Distinct type so callers can decide on a sentinel
// once, instead of comparing against inf/NaN downstream.
class InfiniteBoundError : public std::domain_error {
public:
    explicit InfiniteBoundError(const std::string& what) : std::domain_error(what) {}
};

class DegenerateCovarianceError : public std::domain_error {
public:
    explicit DegenerateCovarianceError(const std::string& what) : std::domain_error(what) {}
};

/// 2x2 symmetric covariance matrix [[var_x, cov_xy], [cov_xy, var_y]].
struct Covariance2 {
    double var_x = 1.0;
    double var_y = 1.0;
    double cov_xy = 0.0;

    double det() const { return var_x * var_y - cov_xy * cov_xy; }
    double trace() const { return var_x + var_y; }
};

/// true iff the matrix is PSD up to a relative slack of psd_epsilon * trace.
inline bool psd_check(const Covariance2& k) {
    const double eps = psd_epsilon * std::max(k.trace(), 1.0);
    return k.var_x >= -eps && k.var_y >= -eps && k.det() >= -eps;
}

/// Correlation coefficient, validated to [-1, 1] at construction.
class Correlation {
public:
    explicit Correlation(double rho) : rho_(rho) {
        if (!(std::abs(rho) <= 1.0))
            throw std::invalid_argument("Correlation: |rho| must be <= 1, got " +
                                        std::to_string(rho));
    }
    double value() const { return rho_; }
    double abs_value() const { return std::abs(rho_); }

private:
    double rho_;
};

/// rho = cov_xy / sqrt(var_x * var_y).  Requires strictly positive variances.
inline Correlation correlation_of(const Covariance2& k) {
    if (!(k.var_x > 0.0) || !(k.var_y > 0.0))
        throw DegenerateCovarianceError(
            "correlation_of: undefined for zero-variance input");
    double rho = k.cov_xy / std::sqrt(k.var_x * k.var_y);
    // PSD inputs can land a round-off outside [-1, 1].
    rho = std::clamp(rho, -1.0, 1.0);
    return Correlation(rho);
}

/// Slack level for the relaxed common-information constraint, in nats.
class Gamma {
public:
    explicit Gamma(double value) : value_(value) {
        if (!(value >= 0.0))
            throw std::invalid_argument("Gamma: must be >= 0 nats, got " +
                                        std::to_string(value));
    }
    double value() const { return value_; }

private:
    double value_;
};

/// Everything evaluated at one parameter point, in nats.  lower_unclamped
/// keeps the possibly-negative pre-max value next to the clamped bound.
struct BoundReport {
    double lower_bound = 0.0;
    double lower_unclamped = 0.0;
    std::optional<double> upper_bound;
    std::optional<double> exact;
    double mutual_information = 0.0;
    double joint_entropy = 0.0;
    double gaussian_joint_entropy = 0.0;
    double gaussian_wyner = 0.0;
};

}  // namespace wyner
