#ifndef RCR_DRIVING_PATH_HPP
#define RCR_DRIVING_PATH_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "rcr/numeric.hpp"

namespace rcr {

// Sampled real driving function on a uniform grid, linear between samples.
// Radial drivers store unwrapped angles (no mod-2pi reduction).
struct DrivingPath {
    double dt = 0.0;
    std::vector<double> values; // values[k] = W(k*dt)

    DrivingPath() = default;
    DrivingPath(double step, std::vector<double> vals) : dt(step), values(std::move(vals)) {
        if (!(dt > 0.0) || values.size() < 2)
            throw ValidationError("DrivingPath: need dt > 0 and at least two samples");
    }

    static DrivingPath constant(double value, double horizon, double step) {
        const std::size_t n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
        return DrivingPath(step, std::vector<double>(n + 1, value));
    }

    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
    double horizon() const { return dt * static_cast<double>(steps()); }

    double value(double t) const {
        if (t <= 0.0) return values.front();
        const double x = t / dt;
        const auto k = static_cast<std::size_t>(x);
        if (k >= steps()) return values.back();
        const double frac = x - static_cast<double>(k);
        return values[k] * (1.0 - frac) + values[k + 1] * frac;
    }

    // Sub-path started at grid time index k0 (driver seen from time k0*dt).
    DrivingPath shifted(std::size_t k0) const {
        if (k0 >= values.size())
            throw ValidationError("DrivingPath::shifted: offset beyond horizon");
        return DrivingPath(dt, std::vector<double>(values.begin() + static_cast<long>(k0), values.end()));
    }
};

// Driving path plus force-point image path on the same grid.
struct DriverPair {
    DrivingPath w;
    DrivingPath v;
};

} // namespace rcr

#endif
