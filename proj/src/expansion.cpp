#include "perfsde/expansion.hpp"

#include <cmath>
#include <string>

namespace perfsde {

namespace {

struct BaseSolve {
    double lambda_coarse = 0.0;
    double lambda_fine = 0.0;
    std::vector<double> phi_sq_coarse;  // interpolated phi^2 at hole centers
    std::vector<double> phi_sq_fine;
};

BaseSolve solve_base(const DomainSpec& spec, int resolution, const ExpansionOptions& opts) {
    const DomainSpec base = spec.without_holes();
    BaseSolve out;
    for (const int scale : {1, 2}) {
        const Grid grid(base, scale * resolution);
        const DiscreteLaplacian lap = assemble(grid);
        const EigenResult eig = first_eigenpair(lap, opts.eigen);
        auto& lambda = scale == 1 ? out.lambda_coarse : out.lambda_fine;
        auto& phi_sq = scale == 1 ? out.phi_sq_coarse : out.phi_sq_fine;
        lambda = eig.lambda1;
        for (const HoleSpec& hole : spec.holes) {
            const double phi = interpolate(grid, eig.phi1, hole.center);
            phi_sq.push_back(phi * phi);
        }
    }
    return out;
}

}  // namespace

ExpansionReport expansion_report(const DomainSpec& spec, int resolution, CapacityMode mode,
                                 const ExpansionOptions& opts) {
    spec.validate();
    ExpansionReport report;
    report.resolution = resolution;
    report.eps = spec.holes.empty() ? 0.0 : spec.min_hole_eps();

    const BaseSolve base = solve_base(spec, resolution, opts);
    report.lambda_base_coarse = base.lambda_coarse;
    report.lambda_base_fine = base.lambda_fine;
    report.lambda_base = richardson_combine(base.lambda_coarse, base.lambda_fine, 1);

    if (spec.holes.empty()) {
        report.lambda_perf_coarse = base.lambda_coarse;
        report.lambda_perf_fine = base.lambda_fine;
        report.lambda_perforated = report.lambda_base;
        return report;
    }

    for (const int scale : {1, 2}) {
        const Grid grid(spec, scale * resolution);
        if (connected_components(grid) != 1)
            throw NotConnected("expansion: perforated domain is not connected at resolution " +
                               std::to_string(scale * resolution));
        const DiscreteLaplacian lap = assemble(grid);
        (scale == 1 ? report.lambda_perf_coarse : report.lambda_perf_fine) = first_eigenpair(lap, opts.eigen).lambda1;
    }
    report.lambda_perforated = richardson_combine(report.lambda_perf_coarse, report.lambda_perf_fine, 1);

    for (std::size_t i = 0; i < spec.holes.size(); ++i) {
        double cap = 0.0;
        if (mode == CapacityMode::Lemma1) {
            cap = ball_capacity_asymptotic(spec.holes[i].eps, spec.dimension);
        } else {
            cap = richardson_capacity(spec.with_single_hole(i), resolution, opts.capacity);
        }
        const double phi_sq = richardson_combine(base.phi_sq_coarse[i], base.phi_sq_fine[i], 1);
        report.hole_caps.push_back(cap);
        report.phi1_sq_at_centers.push_back(phi_sq);
        report.cap_total += cap;
        report.predicted_shift += phi_sq * cap;
    }
    report.remainder = report.lambda_perforated - report.lambda_base - report.predicted_shift;
    report.remainder_ratio = report.cap_total > 0.0 ? std::abs(report.remainder) / report.cap_total : 0.0;
    return report;
}

std::vector<ExpansionReport> remainder_study(const DomainSpec& spec_template, std::span<const double> eps_list,
                                             std::span<const int> resolutions, CapacityMode mode,
                                             const ExpansionOptions& opts) {
    if (eps_list.size() != resolutions.size())
        throw InvalidSpec("remainder_study: eps list and resolution schedule differ in length");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1])) throw InvalidSpec("remainder_study: eps list must be strictly decreasing");

    std::vector<ExpansionReport> out;
    out.reserve(eps_list.size());
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        DomainSpec spec = spec_template;
        for (HoleSpec& hole : spec.holes) hole.eps = eps_list[i];
        out.push_back(expansion_report(spec, resolutions[i], mode, opts));
    }
    return out;
}

int scheduled_resolution(double eps) {
    if (!(eps > 0.0)) throw InvalidEps("schedule: eps must be positive");
    const int fine = std::max(128, static_cast<int>(std::ceil(8.0 / eps)));
    return (fine + 1) / 2;
}

}  // namespace perfsde
