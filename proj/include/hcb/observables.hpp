#pragma once

#include "hcb/model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hcb {

// Radius of the density distribution about i0 = L/2 + 1/2, with the t=0 second
// moment subtracted:  R_n(t) = sqrt( (1/N) sum_i n_i (i - i0)^2 - r0_sq ).
// Slightly negative arguments (>= -1e-9) clamp to 0; worse ones are integrity
// errors (corrupted density or wrong r0_sq).
double radius(const std::vector<double>& density, int particles, double i0, double r0_sq);

double chain_center(int sites); // i0 = L/2 + 1/2, 1-based

// Time-indexed record of one run. Append-only, single writer.
class ObservableSeries {
public:
    ObservableSeries(ModelParams params, int particles, std::string engine_tag);

    // Appends one row; the first call must be at time 0 and fixes r0_sq.
    void record(double time, const std::vector<double>& density, double half_current,
                double entropy_max, double discarded_weight);

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& radius_col() const { return radius_; }
    const std::vector<double>& half_current_col() const { return half_current_; }
    const std::vector<double>& entropy_max_col() const { return entropy_max_; }
    const std::vector<double>& total_n_col() const { return total_n_; }
    const std::vector<double>& discarded_weight_col() const { return discarded_; }
    const std::vector<std::vector<double>>& density_rows() const { return density_; }

    const ModelParams& params() const { return params_; }
    int particles() const { return particles_; }
    const std::string& engine_tag() const { return engine_; }
    double r0_sq() const { return r0_sq_; }
    size_t rows() const { return times_.size(); }

    // CSV: '#'-prefixed header block (format tag + the given key=value config
    // lines), then one row per time:
    //   time,radius,half_current,entropy_max,total_n,discarded_weight,n_1..n_L
    void write_csv(std::ostream& os, const std::vector<std::string>& header_kv) const;

private:
    ModelParams params_;
    int particles_;
    std::string engine_;
    double i0_;
    double r0_sq_ = 0.0;
    std::vector<double> times_, radius_, half_current_, entropy_max_, total_n_, discarded_;
    std::vector<std::vector<double>> density_;
};

inline constexpr const char* kSeriesFormatTag = "hcb-series-v1";

// First recorded time at which the density averaged over the central site(s)
// drops below threshold; nullopt if it never does.
std::optional<double> melt_time(const ObservableSeries& series, double threshold);

} // namespace hcb
