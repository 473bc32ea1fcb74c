#pragma once

#include "hcb/observables.hpp"

#include <utility>
#include <vector>

namespace hcb {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double t_min = 0.0, t_max = 0.0;
    int n_points = 0;
};

// Ordinary least squares of y against x (no weighting).
FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y);

// OLS of radius against time over the window; the slope is the expansion
// velocity V. Needs >= 3 recorded points inside [t_min, t_max].
FitResult fit_velocity(const ObservableSeries& series, double t_min, double t_max);
FitResult fit_radius_window(const std::vector<double>& times, const std::vector<double>& radius,
                            double t_min, double t_max);

// Same fit against sqrt(t): reported alongside the linear fit so diffusive
// curves show up as an r^2 contrast, never as a verdict.
FitResult fit_sqrt_t(const std::vector<double>& times, const std::vector<double>& radius,
                     double t_min, double t_max);

struct ExtrapolationResult {
    double limit_value = 0.0; // intercept at 1/size -> 0
    double coefficient = 0.0; // a (or c) in value ~ limit + coeff/size
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> inputs; // (size, value)
};

// value ~ limit + coefficient / size, fitted by OLS in 1/size.
ExtrapolationResult extrapolate_inverse_size(const std::vector<std::pair<double, double>>& points);

struct PeakResult {
    double w_peak = 0.0;
    double v_peak = 0.0;
};

// Grid maximum refined by a parabola through the maximum and its neighbors.
// The maximum must be interior; an edge maximum demands a wider scan.
PeakResult find_velocity_peak(const std::vector<std::pair<double, double>>& points);

} // namespace hcb
