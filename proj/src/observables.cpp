#include "hcb/observables.hpp"

#include "hcb/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace hcb {

namespace {

// %.17g round-trips doubles exactly and is locale-independent: byte-identical
// CSVs for identical runs.
std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double second_moment(const std::vector<double>& density, int particles, double i0) {
    double m2 = 0.0;
    for (size_t i = 0; i < density.size(); ++i) {
        const double d = (static_cast<double>(i) + 1.0) - i0;
        m2 += density[i] * d * d;
    }
    return m2 / static_cast<double>(particles);
}

} // namespace

double chain_center(int sites) { return sites / 2.0 + 0.5; }

double radius(const std::vector<double>& density, int particles, double i0, double r0_sq) {
    if (particles <= 0) throw UsageError("radius: N must be > 0");
    const double arg = second_moment(density, particles, i0) - r0_sq;
    if (arg < -1e-9)
        throw IntegrityError("radius: second moment fell " + std::to_string(-arg) +
                             " below its t=0 value; density corrupted or wrong r0_sq");
    return std::sqrt(std::max(0.0, arg));
}

ObservableSeries::ObservableSeries(ModelParams params, int particles, std::string engine_tag)
    : params_(params), particles_(particles), engine_(std::move(engine_tag)),
      i0_(chain_center(params.sites)) {}

void ObservableSeries::record(double time, const std::vector<double>& density, double half_current,
                              double entropy_max, double discarded_weight) {
    if (static_cast<int>(density.size()) != params_.sites)
        throw UsageError("ObservableSeries::record: density length != L");
    if (times_.empty()) {
        if (time != 0.0)
            throw UsageError("ObservableSeries::record: first row must be at time 0");
        r0_sq_ = second_moment(density, particles_, i0_);
    } else if (time <= times_.back()) {
        throw UsageError("ObservableSeries::record: non-monotone time " + std::to_string(time));
    }
    times_.push_back(time);
    radius_.push_back(radius(density, particles_, i0_, r0_sq_));
    half_current_.push_back(half_current);
    entropy_max_.push_back(entropy_max);
    double total = 0.0;
    for (double x : density) total += x;
    total_n_.push_back(total);
    discarded_.push_back(discarded_weight);
    density_.push_back(density);
}

void ObservableSeries::write_csv(std::ostream& os, const std::vector<std::string>& header_kv) const {
    os << "# format = " << kSeriesFormatTag << "\n";
    os << "# engine = " << engine_ << "\n";
    for (const auto& kv : header_kv) os << "# " << kv << "\n";
    os << "time,radius,half_current,entropy_max,total_n,discarded_weight";
    for (int i = 1; i <= params_.sites; ++i) os << ",n_" << i;
    os << "\n";
    for (size_t r = 0; r < times_.size(); ++r) {
        os << fmt_g17(times_[r]) << ',' << fmt_g17(radius_[r]) << ',' << fmt_g17(half_current_[r])
           << ',' << fmt_g17(entropy_max_[r]) << ',' << fmt_g17(total_n_[r]) << ','
           << fmt_g17(discarded_[r]);
        for (double x : density_[r]) os << ',' << fmt_g17(x);
        os << "\n";
    }
}

std::optional<double> melt_time(const ObservableSeries& series, double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0)
        throw UsageError("melt_time: threshold must be in (0,1)");
    const double i0 = chain_center(series.params().sites);
    const int lo = static_cast<int>(std::floor(i0));
    const int hi = static_cast<int>(std::ceil(i0));
    for (size_t r = 0; r < series.rows(); ++r) {
        const auto& n = series.density_rows()[r];
        const double central = 0.5 * (n[static_cast<size_t>(lo - 1)] + n[static_cast<size_t>(hi - 1)]);
        if (central < threshold) return series.times()[r];
    }
    return std::nullopt;
}

} // namespace hcb
