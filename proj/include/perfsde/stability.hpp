#pragma once

#include <optional>
#include <span>

#include "perfsde/noise.hpp"

namespace perfsde {

struct StabilityReport {
    double margin = 0.0;              // lambda1 + rho0 - beta - gamma0/2
    double predicted_exponent = 0.0;  // rate bound for log ||u||^2
    std::optional<double> epsilon0;
    bool stabilized = false;
};

/// lambda1 + rho0 - beta - gamma0 / 2. Positive margin means the noise
/// stabilizes the zero state on the base domain.
double stability_margin(double beta, double gamma0, double rho0, double lambda1);

/// Almost-sure upper bound on limsup (1/t) log ||u(t)||^2.
double decay_bound(double beta, double gamma0, double rho0, double lambda1_perforated);

/// Break-even hole size: the eps at which the leading-order eigenvalue shift
/// sum_i phi1^2(x_i) * cap(B_eps) consumes the margin. Returns nullopt when
/// the margin is not positive. Throws ZeroShiftDivisor if every phi1(x_i)=0.
std::optional<double> stabilization_eps0(int dimension, double margin, std::span<const double> phi1_at_centers);

StabilityReport stability_report(int dimension, double beta, const NoiseModel& noise, double lambda1_base,
                                 std::span<const double> phi1_at_centers);

}  // namespace perfsde
