#include "perfsde/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace perfsde::io {

namespace {

Point parse_point(const nlohmann::json& j, int dimension) {
    if (!j.is_array() || static_cast<int>(j.size()) != dimension)
        throw InvalidSpec("io: coordinate list must have length " + std::to_string(dimension));
    Point p{0.0, 0.0, 0.0};
    for (int d = 0; d < dimension; ++d) p[static_cast<std::size_t>(d)] = j[static_cast<std::size_t>(d)].get<double>();
    return p;
}

nlohmann::json point_to_json(const Point& p, int dimension) {
    nlohmann::json j = nlohmann::json::array();
    for (int d = 0; d < dimension; ++d) j.push_back(p[static_cast<std::size_t>(d)]);
    return j;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

DomainSpec parse_domain(const nlohmann::json& j) {
    DomainSpec spec;
    spec.dimension = j.at("dimension").get<int>();
    const auto& outer = j.at("outer");
    const std::string kind = outer.at("kind").get<std::string>();
    if (kind == "box") {
        spec.outer = OuterShape::box(parse_point(outer.at("min"), spec.dimension),
                                     parse_point(outer.at("max"), spec.dimension));
    } else if (kind == "ball") {
        spec.outer = OuterShape::ball(parse_point(outer.at("center"), spec.dimension),
                                      outer.at("radius").get<double>());
    } else {
        throw InvalidSpec("io: unknown outer shape '" + kind + "'");
    }
    if (j.contains("holes")) {
        for (const auto& h : j.at("holes")) {
            HoleSpec hole;
            hole.center = parse_point(h.at("center"), spec.dimension);
            hole.eps = h.at("eps").get<double>();
            const std::string shape = h.value("shape", "ball");
            if (shape == "ball")
                hole.shape = HoleShape::Ball;
            else if (shape == "cube")
                hole.shape = HoleShape::Cube;
            else
                throw InvalidSpec("io: unknown hole shape '" + shape + "'");
            spec.holes.push_back(hole);
        }
    }
    spec.validate();
    return spec;
}

DomainSpec load_domain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidSpec("io: cannot open domain file '" + path + "'");
    nlohmann::json j;
    in >> j;
    return parse_domain(j);
}

nlohmann::json domain_to_json(const DomainSpec& spec) {
    nlohmann::json j;
    j["dimension"] = spec.dimension;
    if (spec.outer.kind == OuterKind::Box) {
        j["outer"] = {{"kind", "box"},
                      {"min", point_to_json(spec.outer.lo, spec.dimension)},
                      {"max", point_to_json(spec.outer.hi, spec.dimension)}};
    } else {
        j["outer"] = {{"kind", "ball"},
                      {"center", point_to_json(spec.outer.center, spec.dimension)},
                      {"radius", spec.outer.radius}};
    }
    j["holes"] = nlohmann::json::array();
    for (const HoleSpec& h : spec.holes)
        j["holes"].push_back({{"center", point_to_json(h.center, spec.dimension)},
                              {"eps", h.eps},
                              {"shape", h.shape == HoleShape::Ball ? "ball" : "cube"}});
    return j;
}

NoiseModel parse_noise(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return NoiseModel::zero();
    if (kind == "linear") return NoiseModel::linear(j.at("alpha").get<double>());
    if (kind == "rational") return NoiseModel::rational();
    throw InvalidSpec("io: unknown noise kind '" + kind + "'");
}

NoiseModel parse_noise_flag(const std::string& flag) {
    if (!flag.empty() && flag.front() == '{') return parse_noise(nlohmann::json::parse(flag));
    const auto colon = flag.find(':');
    const std::string kind = flag.substr(0, colon);
    if (kind == "zero") return NoiseModel::zero();
    if (kind == "rational") return NoiseModel::rational();
    if (kind == "linear") {
        if (colon == std::string::npos) throw InvalidSpec("io: linear noise needs alpha, e.g. linear:alpha=3.0");
        const std::string rest = flag.substr(colon + 1);
        const auto eq = rest.find('=');
        if (eq == std::string::npos || rest.substr(0, eq) != "alpha")
            throw InvalidSpec("io: expected linear:alpha=<value>");
        return NoiseModel::linear(std::stod(rest.substr(eq + 1)));
    }
    throw InvalidSpec("io: unknown noise spec '" + flag + "'");
}

nlohmann::json expansion_to_json(const ExpansionReport& r) {
    return {{"eps", r.eps},
            {"resolution", r.resolution},
            {"lambda_base", r.lambda_base},
            {"lambda_perforated", r.lambda_perforated},
            {"predicted_shift", r.predicted_shift},
            {"remainder", r.remainder},
            {"remainder_ratio", r.remainder_ratio},
            {"cap_total", r.cap_total},
            {"hole_caps", r.hole_caps},
            {"phi1_sq_at_centers", r.phi1_sq_at_centers}};
}

nlohmann::json stability_to_json(const StabilityReport& r) {
    nlohmann::json j;
    j["margin"] = r.margin;
    j["predicted_exponent"] = r.predicted_exponent;
    j["verdict"] = r.stabilized ? "stabilized" : "not-stabilized";
    if (r.epsilon0.has_value())
        j["epsilon0"] = *r.epsilon0;
    else
        j["epsilon0"] = nullptr;
    return j;
}

nlohmann::json ensemble_to_json(const EnsembleSummary& s, const SpdeConfig& cfg) {
    return {{"paths", cfg.paths},
            {"seed", cfg.seed},
            {"beta", cfg.beta},
            {"dt", cfg.dt},
            {"T", cfg.T},
            {"burn_in", cfg.effective_burn_in()},
            {"lambda1_grid", s.lambda1_grid},
            {"lyapunov_median", s.lyapunov_median},
            {"lyapunov_mean", s.lyapunov_mean},
            {"decayed_fraction", s.decayed_fraction},
            {"decay_bound", s.decay_bound_value},
            {"decay_rate_delta", s.decay_rate_delta},
            {"c_estimate", s.c_estimate}};
}

std::string expansion_csv(std::span<const ExpansionReport> reports) {
    std::ostringstream out;
    out << "eps,lambda_base,lambda_perforated,predicted_shift,remainder,remainder_ratio\n";
    for (const ExpansionReport& r : reports)
        out << format_double(r.eps) << ',' << format_double(r.lambda_base) << ','
            << format_double(r.lambda_perforated) << ',' << format_double(r.predicted_shift) << ','
            << format_double(r.remainder) << ',' << format_double(r.remainder_ratio) << '\n';
    return out.str();
}

std::string trajectory_csv(const TrajectoryStats& stats) {
    std::ostringstream out;
    out << "t,norm_sq,log_norm_sq,grad_term,nonlinear_term,ito_term,qv_term,martingale_term\n";
    for (std::size_t k = 0; k < stats.times.size(); ++k) {
        const auto& acc = stats.accumulators[k];
        out << format_double(stats.times[k]) << ',' << format_double(stats.norm_sq[k]) << ','
            << format_double(stats.log_norm_sq[k]) << ',' << format_double(acc[0]) << ',' << format_double(acc[1])
            << ',' << format_double(acc[2]) << ',' << format_double(acc[3]) << ',' << format_double(acc[4]) << '\n';
    }
    return out.str();
}

}  // namespace perfsde::io
