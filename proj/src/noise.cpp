#include "perfsde/noise.hpp"

#include <cmath>
#include <string>

namespace perfsde {

NoiseModel NoiseModel::zero() {
    NoiseModel m;
    m.kind_ = Kind::Zero;
    return m;
}

NoiseModel NoiseModel::linear(double alpha) {
    NoiseModel m;
    m.kind_ = Kind::Linear;
    m.alpha_ = alpha;
    m.gamma0_ = alpha * alpha;
    m.rho0_ = alpha * alpha;
    return m;
}

NoiseModel NoiseModel::rational() {
    NoiseModel m;
    m.kind_ = Kind::Rational;
    // Envelope constants as chosen alongside the model: gamma(0) and rho(0).
    m.gamma0_ = 64.0;
    m.rho0_ = 1.0;
    return m;
}

NoiseModel NoiseModel::custom(std::function<double(double, double)> multiplier, std::function<double(double)> gamma,
                              std::function<double(double)> rho, double gamma0, double rho0) {
    NoiseModel m;
    m.kind_ = Kind::Custom;
    m.custom_multiplier_ = std::move(multiplier);
    m.custom_gamma_ = std::move(gamma);
    m.custom_rho_ = std::move(rho);
    m.gamma0_ = gamma0;
    m.rho0_ = rho0;
    return m;
}

double NoiseModel::multiplier(double t, double u) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Linear:
            return alpha_;
        case Kind::Rational:
            return (2.0 + t * t) * (1.0 + u * u) / ((1.0 + t * t) * (2.0 + u * u));
        case Kind::Custom:
            return custom_multiplier_(t, u);
    }
    return 0.0;
}

double NoiseModel::gamma(double t) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Linear:
            return alpha_ * alpha_;
        case Kind::Rational: {
            const double q = (2.0 + t * t) / (1.0 + t * t);
            return 16.0 * q * q;
        }
        case Kind::Custom:
            return custom_gamma_(t);
    }
    return 0.0;
}

double NoiseModel::rho(double t) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Linear:
            return alpha_ * alpha_;
        case Kind::Rational: {
            const double q = (2.0 + t * t) / (2.0 * (1.0 + t * t));
            return q * q;
        }
        case Kind::Custom:
            return custom_rho_(t);
    }
    return 0.0;
}

HypothesisReport check_hypotheses(const NoiseModel& model, std::span<const double> ts, std::span<const double> us) {
    HypothesisReport report;
    for (const double t : ts) {
        const double h_at_zero = model.eval(t, 0.0);
        if (h_at_zero != 0.0) {
            report.h0_ok = false;
            report.violations.push_back({'0', t, 0.0, std::abs(h_at_zero)});
        }
        const double gamma_t = model.gamma(t);
        const double rho_t = model.rho(t);
        for (const double u : us) {
            const double h = model.eval(t, u);
            const double h1_gap = h * h - gamma_t * u * u;
            if (h1_gap > report.worst_h1) report.worst_h1 = h1_gap;
            if (h1_gap > 1e-12 * std::max(1.0, gamma_t * u * u))
                report.violations.push_back({'1', t, u, h1_gap});
            if (u != 0.0) {
                const double h2_gap = rho_t * u * u * u * u - h * h * u * u;
                if (h2_gap > report.worst_h2) report.worst_h2 = h2_gap;
                if (h2_gap > 1e-12 * std::max(1.0, rho_t * u * u * u * u))
                    report.violations.push_back({'2', t, u, h2_gap});
            }
        }
    }
    return report;
}

double cesaro_estimate(const std::function<double(double)>& f, double T, int steps) {
    if (!(T > 0.0)) throw InvalidSpec("cesaro: horizon must be positive");
    if (steps < 10) throw InvalidSpec("cesaro: need at least 10 steps");
    const double dt = T / steps;
    double sum = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double v = f(k * dt);
        if (!std::isfinite(v)) throw NonFinite("cesaro: integrand returned a non-finite value at t=" + std::to_string(k * dt));
        sum += (k == 0 || k == steps) ? 0.5 * v : v;
    }
    return sum * dt / T;
}

}  // namespace perfsde
