#include "hcb/analysis.hpp"

#include "hcb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hcb {

FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 3 || y.size() != n)
        throw UsageError("fit_line: need >= 3 points, got " + std::to_string(n));
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw UsageError("fit_line: degenerate abscissa");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    f.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : (ss_res == 0.0 ? 1.0 : 0.0);
    f.n_points = static_cast<int>(n);
    f.t_min = *std::min_element(x.begin(), x.end());
    f.t_max = *std::max_element(x.begin(), x.end());
    return f;
}

FitResult fit_radius_window(const std::vector<double>& times, const std::vector<double>& radius,
                            double t_min, double t_max) {
    std::vector<double> x, y;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= t_min - 1e-12 && times[i] <= t_max + 1e-12) {
            x.push_back(times[i]);
            y.push_back(radius[i]);
        }
    }
    if (x.size() < 3)
        throw UsageError("fit window [" + std::to_string(t_min) + "," + std::to_string(t_max) +
                         "] holds only " + std::to_string(x.size()) +
                         " recorded points; widen it or shrink record_every");
    FitResult f = fit_line(x, y);
    f.t_min = t_min;
    f.t_max = t_max;
    return f;
}

FitResult fit_velocity(const ObservableSeries& series, double t_min, double t_max) {
    return fit_radius_window(series.times(), series.radius_col(), t_min, t_max);
}

FitResult fit_sqrt_t(const std::vector<double>& times, const std::vector<double>& radius,
                     double t_min, double t_max) {
    std::vector<double> x, y;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= t_min - 1e-12 && times[i] <= t_max + 1e-12) {
            x.push_back(std::sqrt(times[i]));
            y.push_back(radius[i]);
        }
    }
    if (x.size() < 3) throw UsageError("fit_sqrt_t: too few points in window");
    return fit_line(x, y);
}

ExtrapolationResult extrapolate_inverse_size(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw UsageError("extrapolate_inverse_size: need >= 3 sizes, got " +
                         std::to_string(points.size()));
    std::vector<double> x, y;
    for (const auto& [size, value] : points) {
        if (size <= 0.0) throw UsageError("extrapolate_inverse_size: sizes must be positive");
        x.push_back(1.0 / size);
        y.push_back(value);
    }
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first)
                throw UsageError("extrapolate_inverse_size: duplicate size " +
                                 std::to_string(points[i].first));
    const FitResult f = fit_line(x, y);
    ExtrapolationResult r;
    r.limit_value = f.intercept;
    r.coefficient = f.slope;
    r.r_squared = f.r_squared;
    r.inputs = points;
    std::sort(r.inputs.begin(), r.inputs.end());
    return r;
}

PeakResult find_velocity_peak(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 5)
        throw UsageError("find_velocity_peak: need >= 5 grid points, got " +
                         std::to_string(points.size()));
    std::vector<std::pair<double, double>> pts = points;
    std::sort(pts.begin(), pts.end());
    size_t imax = 0;
    for (size_t i = 1; i < pts.size(); ++i)
        if (pts[i].second > pts[imax].second) imax = i;
    if (imax == 0 || imax == pts.size() - 1)
        throw UsageError("find_velocity_peak: maximum sits at the grid edge (W=" +
                         std::to_string(pts[imax].first) + "); widen the scan");
    // parabola through (x0,y0),(x1,y1),(x2,y2); vertex in closed form
    const double x0 = pts[imax - 1].first, y0 = pts[imax - 1].second;
    const double x1 = pts[imax].first, y1 = pts[imax].second;
    const double x2 = pts[imax + 1].first, y2 = pts[imax + 1].second;
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curv = (d1 - d0) / (x2 - x0); // second divided difference
    PeakResult p;
    if (curv >= 0.0) { // flat or concave-up triplet: keep the grid point
        p.w_peak = x1;
        p.v_peak = y1;
        return p;
    }
    p.w_peak = 0.5 * (x0 + x1 - d0 / curv);
    const double a = curv, b = d0 - a * (x0 + x1), c = y0 - (a * x0 + b) * x0;
    p.v_peak = (a * p.w_peak + b) * p.w_peak + c;
    return p;
}

} // namespace hcb
