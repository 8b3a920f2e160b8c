#pragma once

// Interpolating B-spline machinery: chord-length parameterization, knot
// construction by averaging, the banded collocation solve for control
// points, and de Boor evaluation. Curves are planar (lon, lat) and live on
// the clamped parameter interval [0, 1].

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "flightpath/errors.hpp"
#include "flightpath/linalg.hpp"

namespace flightpath {

struct SplineCurve {
    int degree = 3;
    std::vector<double> knots;        // clamped, nondecreasing, in [0, 1]
    std::vector<Vec2> control_points; // knots.size() == control_points.size() + degree + 1
};

inline void validate(const SplineCurve& c) {
    if (c.degree < 1)
        throw DomainError("spline degree must be at least 1");
    if (c.knots.size() != c.control_points.size() + c.degree + 1)
        throw DomainError("knot count must equal control point count + degree + 1");
    for (std::size_t i = 1; i < c.knots.size(); ++i)
        if (c.knots[i] < c.knots[i - 1])
            throw DomainError("knot vector must be nondecreasing");
}

// Parameters in [0, 1] spaced proportionally to chord length. Consecutive
// duplicate points get a minimal 1e-9 step so hovering samples stay usable.
inline std::vector<double> chord_length_params(std::span<const Vec2> data) {
    if (data.size() < 2)
        throw DomainError("need at least 2 points to parameterize");
    double total = 0.0;
    for (std::size_t i = 1; i < data.size(); ++i)
        total += norm(data[i] - data[i - 1]);
    if (total == 0.0)
        throw DomainError("all points coincide; no chord to parameterize");

    std::vector<double> params(data.size());
    params[0] = 0.0;
    for (std::size_t i = 1; i < data.size(); ++i) {
        const double chord = norm(data[i] - data[i - 1]);
        params[i] = params[i - 1] + (chord > 0.0 ? chord / total : 1e-9);
    }
    // duplicate steps may push past 1; rescale so the last parameter is exact
    const double last = params.back();
    for (auto& t : params)
        t /= last;
    params.front() = 0.0;
    params.back() = 1.0;
    return params;
}

// Clamped knot vector with interior knots equal to running means of degree
// consecutive parameters (standard knot averaging).
inline std::vector<double> averaging_knots(std::span<const double> params, int degree) {
    const std::size_t n = params.size();
    if (degree < 1)
        throw DomainError("spline degree must be at least 1");
    if (n < static_cast<std::size_t>(degree) + 1)
        throw DomainError("need at least degree+1 parameters; degrade the degree first");
    for (std::size_t i = 0; i < n; ++i) {
        if (params[i] < 0.0 || params[i] > 1.0)
            throw DomainError("parameters must lie in [0, 1]");
        if (i > 0 && params[i] <= params[i - 1])
            throw DomainError("parameters must be strictly increasing");
    }

    std::vector<double> knots(n + degree + 1);
    for (int i = 0; i <= degree; ++i) {
        knots[i] = 0.0;
        knots[n + i] = 1.0;
    }
    for (std::size_t j = 1; j + degree < n; ++j) {
        double sum = 0.0;
        for (int i = 0; i < degree; ++i)
            sum += params[j + i];
        knots[j + degree] = sum / degree;
    }
    return knots;
}

namespace detail {

// Index of the knot span containing t; result is in [degree, n_ctrl-1].
inline std::size_t find_span(std::span<const double> knots, int degree,
                             std::size_t n_ctrl, double t) {
    if (t >= knots[n_ctrl])
        return n_ctrl - 1;
    std::size_t lo = degree, hi = n_ctrl;
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (t < knots[mid])
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

// The degree+1 basis values that are nonzero on the span (iterative
// Cox-de Boor, no recursion).
inline void basis_row(std::span<const double> knots, int degree, std::size_t span,
                      double t, std::vector<double>& out) {
    out.assign(degree + 1, 0.0);
    std::vector<double> left(degree + 1), right(degree + 1);
    out[0] = 1.0;
    for (int j = 1; j <= degree; ++j) {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = out[r] / (right[r + 1] + left[j - r]);
            out[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        out[j] = saved;
    }
}

} // namespace detail

// Control points of the curve that passes through every data point at its
// parameter. The collocation matrix has degree+1 nonzeros per row in a
// staircase band, so plain band elimination without pivoting applies
// (Schoenberg-Whitney guarantees nonzero pivots for interlacing knots).
inline std::vector<Vec2> solve_interpolating_control_points(
    std::span<const Vec2> data, std::span<const double> params,
    std::span<const double> knots, int degree) {
    const std::size_t n = data.size();
    if (params.size() != n)
        throw DomainError("one parameter per data point required");
    if (knots.size() != n + degree + 1)
        throw DomainError("knot count must equal data count + degree + 1");
    if (degree < 1)
        throw DomainError("spline degree must be at least 1");

    const std::size_t width = degree + 1;
    std::vector<double> band(n * width, 0.0);
    std::vector<std::size_t> first(n);
    std::vector<double> row;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t span = detail::find_span(knots, degree, n, params[k]);
        detail::basis_row(knots, degree, span, params[k], row);
        first[k] = span - degree;
        for (std::size_t j = 0; j < width; ++j)
            band[k * width + j] = row[j];
    }

    auto at = [&](std::size_t r, std::size_t col) -> double& {
        return band[r * width + (col - first[r])];
    };

    std::vector<Vec2> x(data.begin(), data.end());
    constexpr double pivot_floor = 1e-14;
    for (std::size_t k = 0; k < n; ++k) {
        if (k < first[k] || k > first[k] + degree)
            throw NumericError("collocation matrix has an empty pivot column");
        const double pivot = at(k, k);
        if (std::fabs(pivot) < pivot_floor)
            throw NumericError("singular collocation system");
        const std::size_t last_col = first[k] + degree;
        for (std::size_t r = k + 1; r < n && first[r] <= k; ++r) {
            const double factor = at(r, k) / pivot;
            if (factor == 0.0)
                continue;
            for (std::size_t col = k; col <= last_col; ++col)
                at(r, col) -= factor * at(k, col);
            x[r] = x[r] - x[k] * factor;
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t last_col = first[k] + degree;
        Vec2 acc = x[k];
        for (std::size_t col = k + 1; col <= last_col && col < n; ++col)
            acc = acc - x[col] * at(k, col);
        x[k] = acc * (1.0 / at(k, k));
    }
    return x;
}

// Evaluate the curve at t in [0, 1] by the de Boor triangular recursion.
inline Vec2 de_boor(const SplineCurve& curve, double t) {
    validate(curve);
    if (!(t >= 0.0 && t <= 1.0))
        throw DomainError("spline parameter outside [0, 1]");
    const int p = curve.degree;
    const std::size_t n = curve.control_points.size();
    const std::size_t s = detail::find_span(curve.knots, p, n, t);

    std::vector<Vec2> d(curve.control_points.begin() + (s - p),
                        curve.control_points.begin() + (s + 1));
    for (int r = 1; r <= p; ++r) {
        for (int j = p; j >= r; --j) {
            const std::size_t i = s - p + j;
            const double denom = curve.knots[i + p - r + 1] - curve.knots[i];
            const double alpha = (t - curve.knots[i]) / denom;
            d[j] = d[j - 1] * (1.0 - alpha) + d[j] * alpha;
        }
    }
    return d[p];
}

inline std::vector<Vec2> sample_curve(const SplineCurve& curve,
                                      std::span<const double> params) {
    std::vector<Vec2> out;
    out.reserve(params.size());
    for (double t : params)
        out.push_back(de_boor(curve, t));
    return out;
}

struct CurveInterpolation {
    SplineCurve curve;
    std::vector<double> params; // data-point parameters, one per input
};

// Full global-interpolation recipe. Degree degrades to n-1 when fewer than
// degree+1 points are given.
inline CurveInterpolation interpolate_points(std::span<const Vec2> data, int degree = 3) {
    if (data.size() < 2)
        throw DomainError("need at least 2 points to interpolate");
    const int p = std::min<std::size_t>(degree, data.size() - 1);
    CurveInterpolation result;
    result.params = chord_length_params(data);
    result.curve.degree = p;
    result.curve.knots = averaging_knots(result.params, p);
    result.curve.control_points =
        solve_interpolating_control_points(data, result.params, result.curve.knots, p);
    return result;
}

} // namespace flightpath
