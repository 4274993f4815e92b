#pragma once

#include <span>
#include <vector>

#include "perfsde/capacity.hpp"
#include "perfsde/domain.hpp"
#include "perfsde/eigensolver.hpp"

namespace perfsde {

enum class CapacityMode { Computed, Lemma1 };

/// Comparison of the directly computed perforated-domain eigenvalue against
/// the small-hole prediction lambda_base + sum_i phi1^2(x_i) cap(E_i).
/// Extrapolated values come from the (resolution, 2*resolution) grid pair;
/// the raw per-resolution eigenvalues are kept for exact monotonicity checks.
struct ExpansionReport {
    double eps = 0.0;
    int resolution = 0;  // coarse resolution of the pair
    double lambda_base = 0.0;
    double lambda_perforated = 0.0;
    double lambda_base_coarse = 0.0, lambda_base_fine = 0.0;
    double lambda_perf_coarse = 0.0, lambda_perf_fine = 0.0;
    double predicted_shift = 0.0;
    double remainder = 0.0;        // lambda_perforated - lambda_base - predicted_shift
    double remainder_ratio = 0.0;  // |remainder| / total capacity (0 when no holes)
    double cap_total = 0.0;
    std::vector<double> hole_caps;
    std::vector<double> phi1_sq_at_centers;
};

struct ExpansionOptions {
    EigenOptions eigen;
    CapacityOptions capacity;
    ExpansionOptions() { eigen.tol = 1e-7; }
};

ExpansionReport expansion_report(const DomainSpec& spec, int resolution, CapacityMode mode,
                                 const ExpansionOptions& opts = {});

/// One report per eps, holes of the template rescaled to each eps. eps_list
/// must be strictly decreasing; resolutions pair up with eps_list entries.
std::vector<ExpansionReport> remainder_study(const DomainSpec& spec_template, std::span<const double> eps_list,
                                             std::span<const int> resolutions, CapacityMode mode,
                                             const ExpansionOptions& opts = {});

/// Coarse resolution for a hole of size eps: fine grid spacing <= eps/8.
int scheduled_resolution(double eps);

}  // namespace perfsde
