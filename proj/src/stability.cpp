#include "perfsde/stability.hpp"

#include <cmath>
#include <numbers>

namespace perfsde {

double stability_margin(double beta, double gamma0, double rho0, double lambda1) {
    return lambda1 + rho0 - beta - 0.5 * gamma0;
}

double decay_bound(double beta, double gamma0, double rho0, double lambda1_perforated) {
    return 2.0 * beta + gamma0 - 2.0 * lambda1_perforated - 2.0 * rho0;
}

std::optional<double> stabilization_eps0(int dimension, double margin, std::span<const double> phi1_at_centers) {
    if (dimension != 2 && dimension != 3) throw InvalidSpec("eps0: dimension must be 2 or 3");
    if (!(margin > 0.0)) return std::nullopt;
    double shift_sum = 0.0;
    for (const double phi : phi1_at_centers) shift_sum += phi * phi;
    if (shift_sum <= 0.0) throw ZeroShiftDivisor("eps0: eigenfunction vanishes at every hole center");
    if (dimension == 2) return std::exp(-2.0 * std::numbers::pi * shift_sum / margin);
    return margin / (4.0 * std::numbers::pi * shift_sum);
}

StabilityReport stability_report(int dimension, double beta, const NoiseModel& noise, double lambda1_base,
                                 std::span<const double> phi1_at_centers) {
    StabilityReport r;
    r.margin = stability_margin(beta, noise.gamma0(), noise.rho0(), lambda1_base);
    r.predicted_exponent = decay_bound(beta, noise.gamma0(), noise.rho0(), lambda1_base);
    r.stabilized = r.margin > 0.0;
    if (r.stabilized && !phi1_at_centers.empty())
        r.epsilon0 = stabilization_eps0(dimension, r.margin, phi1_at_centers);
    return r;
}

}  // namespace perfsde
