#pragma once

#include <string>
#include <vector>

namespace drift {

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

enum class FamilyKind { polynomial, linear_with_jump };

/// Parametric drift family. Polynomial families have independent per-axis
/// degrees d1, d2 and parameter vector
///   (a_{1,1}, ..., a_{1,d1}, a_{2,1}, ..., a_{2,d2})
/// giving delta_t = (sum_p a_{1,p} t^p, sum_p a_{2,p} t^p). There is no
/// intercept, so delta_0 = 0 for every parameter value.
///
/// The jump family is piecewise linear with parameters
///   (s1, s1', j1, s2, s2', j2, t0):
///   delta_t = (s1, s2) t                 for t <= t0,
///   delta_t = (s1', s2')(t - t0) + (j1, j2) for t > t0.
struct DriftFamily {
    FamilyKind kind = FamilyKind::polynomial;
    int deg1 = 1;
    int deg2 = 1;

    int dim() const { return kind == FamilyKind::polynomial ? deg1 + deg2 : 7; }

    static DriftFamily polynomial(int d1, int d2);
    static DriftFamily linear() { return polynomial(1, 1); }
    static DriftFamily quadratic() { return polynomial(2, 2); }
    static DriftFamily cubic() { return polynomial(3, 3); }
    static DriftFamily jump();

    /// Accepts "linear", "quadratic", "cubic", "poly:<d1>:<d2>", "jump".
    static DriftFamily parse(const std::string& spec);
    std::string str() const;

    bool operator==(const DriftFamily&) const = default;
};

struct DriftParams {
    DriftFamily family;
    std::vector<double> theta;

    DriftParams() = default;
    DriftParams(DriftFamily f, std::vector<double> th);

    double t0() const;  // jump family only
};

/// delta_t at t in [0, 1].
Vec2 evaluate_drift(const DriftParams& params, double t);

/// Nearest integer multiple of 1/N per component, ties rounding up:
/// floor(N x + 0.5) / N.
Vec2 round_drift(Vec2 delta, int N);

/// Row j holds (d delta_1 / d theta_j, d delta_2 / d theta_j); polynomial
/// families only.
std::vector<Vec2> drift_gradient(const DriftParams& params, double t);

/// Comma-separated parameter vector in family order.
std::string format_theta(const std::vector<double>& theta);
std::vector<double> parse_theta(const std::string& csv);

}  // namespace drift
