#pragma once

#include <functional>
#include <span>
#include <vector>

#include "perfsde/errors.hpp"

namespace perfsde {

/// Multiplicative diffusion coefficient h(t,u) together with its envelope
/// functions gamma(t), rho(t) and the Cesaro constants gamma0, rho0.
/// All built-in models have the form h(t,u) = m(t,u) * u with bounded m, so
/// h(t,0) = 0 holds exactly. Immutable value object.
class NoiseModel {
  public:
    enum class Kind { Zero, Linear, Rational, Custom };

    static NoiseModel zero();
    static NoiseModel linear(double alpha);
    static NoiseModel rational();
    static NoiseModel custom(std::function<double(double, double)> multiplier,
                             std::function<double(double)> gamma, std::function<double(double)> rho,
                             double gamma0, double rho0);

    double eval(double t, double u) const { return multiplier(t, u) * u; }
    double multiplier(double t, double u) const;
    double gamma(double t) const;
    double rho(double t) const;
    double gamma0() const { return gamma0_; }
    double rho0() const { return rho0_; }
    double alpha() const { return alpha_; }
    Kind kind() const { return kind_; }

  private:
    NoiseModel() = default;
    Kind kind_ = Kind::Zero;
    double alpha_ = 0.0;
    double gamma0_ = 0.0;
    double rho0_ = 0.0;
    std::function<double(double, double)> custom_multiplier_;
    std::function<double(double)> custom_gamma_;
    std::function<double(double)> custom_rho_;
};

struct HypothesisViolation {
    char hypothesis = '0';  // '0', '1' or '2'
    double t = 0.0;
    double u = 0.0;
    double amount = 0.0;
};

struct HypothesisReport {
    bool h0_ok = true;
    double worst_h1 = 0.0;  // max of |h|^2 - gamma |u|^2 (must be <= 0)
    double worst_h2 = 0.0;  // max of rho |u|^4 - |h u|^2 (must be <= 0)
    std::vector<HypothesisViolation> violations;
    bool clean() const { return violations.empty(); }
};

/// Samples the hypotheses H0-H2 over the Cartesian grid ts x us and reports
/// the worst-case violations with their locations.
HypothesisReport check_hypotheses(const NoiseModel& model, std::span<const double> ts, std::span<const double> us);

/// Composite-trapezoid value of (1/T) * integral_0^T f. Throws NonFinite.
double cesaro_estimate(const std::function<double(double)>& f, double T, int steps);

}  // namespace perfsde
