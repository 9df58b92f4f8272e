#include "trl/rng.hpp"

#include <cmath>

#include "trl/errors.hpp"

namespace trl {

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) fail(ErrorCode::BadParams, "gamma shape must be positive");
    if (shape < 1.0) {
        // boost via Gamma(shape + 1) and a uniform power
        const double g = gamma(shape + 1.0);
        const double u = 1.0 - uniform();  // (0, 1]
        return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - uniform();  // (0, 1], keeps log finite
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace trl
