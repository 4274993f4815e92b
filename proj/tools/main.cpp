#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "perfsde/capacity.hpp"
#include "perfsde/eigensolver.hpp"
#include "perfsde/expansion.hpp"
#include "perfsde/io.hpp"
#include "perfsde/spde.hpp"
#include "perfsde/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw perfsde::InvalidSpec("cli: cannot write " + path.string());
    out << text;
}

void write_summary(const fs::path& out_dir, const json& j, const std::string& line) {
    write_text(out_dir / "summary.json", j.dump(2) + "\n");
    std::cout << line << "\n";
}

std::vector<double> parse_eps_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

struct BaseEigen {
    double lambda1 = 0.0;
    std::vector<double> phi_at_centers;
};

// Base-domain eigenvalue via p=2 Richardson on the (res, 2*res) pair, with
// the eigenfunction values at hole centers extrapolated alongside.
BaseEigen base_eigen(const perfsde::DomainSpec& spec, int resolution) {
    const perfsde::DomainSpec base = spec.without_holes();
    BaseEigen out;
    double lambda_c = 0.0, lambda_f = 0.0;
    std::vector<double> phi_c, phi_f;
    for (const int scale : {1, 2}) {
        const perfsde::Grid grid(base, scale * resolution);
        const auto lap = perfsde::assemble(grid);
        perfsde::EigenOptions eopts;
        eopts.tol = 1e-9;
        const auto eig = perfsde::first_eigenpair(lap, eopts);
        auto& lambda = scale == 1 ? lambda_c : lambda_f;
        auto& phi = scale == 1 ? phi_c : phi_f;
        lambda = eig.lambda1;
        for (const auto& hole : spec.holes) phi.push_back(perfsde::interpolate(grid, eig.phi1, hole.center));
    }
    out.lambda1 = perfsde::richardson_combine(lambda_c, lambda_f, 2);
    for (std::size_t i = 0; i < phi_c.size(); ++i)
        out.phi_at_centers.push_back(std::sqrt(
            std::max(0.0, perfsde::richardson_combine(phi_c[i] * phi_c[i], phi_f[i] * phi_f[i], 2))));
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Perforated-domain eigenvalue and stochastic Chafee-Infante laboratory"};
    app.require_subcommand(1);

    std::string domain_path;
    std::string out_dir = ".";
    int resolution = 128;
    bool richardson = false;

    auto* eigen_cmd = app.add_subcommand("eigen", "First Dirichlet eigenvalue of a (perforated) domain");
    eigen_cmd->add_option("--domain", domain_path, "domain JSON file")->required();
    eigen_cmd->add_option("--resolution", resolution, "grid resolution (cells per unit length)");
    eigen_cmd->add_flag("--richardson", richardson, "extrapolate from the (res, 2*res) pair");
    eigen_cmd->add_option("--out", out_dir, "output directory");

    auto* cap_cmd = app.add_subcommand("capacity", "Capacity of the single hole of a domain");
    cap_cmd->add_option("--domain", domain_path, "domain JSON file with exactly one hole")->required();
    cap_cmd->add_option("--resolution", resolution, "grid resolution");
    cap_cmd->add_flag("--richardson", richardson, "extrapolate from the (res, 2*res) pair");
    cap_cmd->add_option("--out", out_dir, "output directory");

    std::string eps_csv = "0.2,0.1,0.05";
    std::string cap_mode = "computed";
    int asym_resolution = 0;
    auto* asym_cmd = app.add_subcommand("asymptotics", "Eigenvalue expansion vs hole size");
    asym_cmd->add_option("--domain", domain_path, "domain JSON file (holes rescaled per eps)")->required();
    asym_cmd->add_option("--eps", eps_csv, "comma-separated hole sizes, strictly decreasing");
    asym_cmd->add_option("--mode", cap_mode, "capacity source: computed | lemma1")
        ->check(CLI::IsMember({"computed", "lemma1"}));
    asym_cmd->add_option("--resolution", asym_resolution, "coarse resolution (0 = schedule from eps)");
    asym_cmd->add_option("--out", out_dir, "output directory");

    double beta = 25.0;
    std::string noise_flag = "zero";
    double lambda1_override = -1.0;
    std::string phi1sq_csv;
    int thr_resolution = 64;
    auto* thr_cmd = app.add_subcommand("threshold", "Stabilization margin, decay exponent, and eps0");
    thr_cmd->add_option("--domain", domain_path, "domain JSON file")->required();
    thr_cmd->add_option("--beta", beta, "reaction coefficient")->required();
    thr_cmd->add_option("--noise", noise_flag, "zero | linear:alpha=A | rational | JSON object");
    thr_cmd->add_option("--resolution", thr_resolution, "grid resolution for lambda1");
    thr_cmd->add_option("--lambda1", lambda1_override, "closed-form lambda1 override (skips the eigensolve)");
    thr_cmd->add_option("--phi1sq", phi1sq_csv, "closed-form phi1^2 at hole centers, comma-separated");
    thr_cmd->add_option("--out", out_dir, "output directory");

    double dt = 0.005, T = 100.0, burn_in = -1.0, sample_dt = 0.1, init_norm = 1.0;
    int paths = 16, threads = 1, sim_resolution = 64;
    std::uint64_t seed = 0;
    std::string init = "random";
    bool save_paths = false;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo ensemble of the stochastic Chafee-Infante equation");
    sim_cmd->add_option("--domain", domain_path, "domain JSON file")->required();
    sim_cmd->add_option("--beta", beta, "reaction coefficient")->required();
    sim_cmd->add_option("--noise", noise_flag, "zero | linear:alpha=A | rational | JSON object");
    sim_cmd->add_option("--resolution", sim_resolution, "grid resolution");
    sim_cmd->add_option("--dt", dt, "time step");
    sim_cmd->add_option("--T", T, "final time");
    sim_cmd->add_option("--burn-in", burn_in, "burn-in time for the Lyapunov fit (default T/5)");
    sim_cmd->add_option("--sample-dt", sample_dt, "sampling interval for the CSV series");
    sim_cmd->add_option("--paths", paths, "number of independent paths");
    sim_cmd->add_option("--seed", seed, "master seed; path p uses stream id p");
    sim_cmd->add_option("--threads", threads, "worker threads (result is thread-count independent)");
    sim_cmd->add_option("--init", init, "initial data: random | eigen")->check(CLI::IsMember({"random", "eigen"}));
    sim_cmd->add_option("--init-norm", init_norm, "L2 norm of the initial data");
    sim_cmd->add_flag("--save-paths", save_paths, "write per-path CSV series under <out>/paths/");
    sim_cmd->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (eigen_cmd->parsed()) {
        const auto spec = perfsde::io::load_domain(domain_path);
        json j;
        j["domain"] = perfsde::io::domain_to_json(spec);
        j["resolution"] = resolution;
        if (richardson) {
            double lambda_c = 0.0, lambda_f = 0.0;
            for (const int scale : {1, 2}) {
                const perfsde::Grid grid(spec, scale * resolution);
                (scale == 1 ? lambda_c : lambda_f) = perfsde::first_eigenpair(perfsde::assemble(grid)).lambda1;
            }
            const int p = spec.holes.empty() ? 2 : 1;
            j["lambda1_coarse"] = lambda_c;
            j["lambda1_fine"] = lambda_f;
            j["lambda1"] = perfsde::richardson_combine(lambda_c, lambda_f, p);
        } else {
            const perfsde::Grid grid(spec, resolution);
            const auto eig = perfsde::first_eigenpair(perfsde::assemble(grid));
            j["lambda1"] = eig.lambda1;
            j["residual"] = eig.residual;
            j["iterations"] = eig.iterations;
        }
        std::ostringstream line;
        line << "lambda1 = " << j["lambda1"].get<double>() << " (resolution " << resolution << ")";
        write_summary(out_dir, j, line.str());
        return 0;
    }

    if (cap_cmd->parsed()) {
        const auto spec = perfsde::io::load_domain(domain_path);
        json j;
        j["domain"] = perfsde::io::domain_to_json(spec);
        j["resolution"] = resolution;
        double value = 0.0;
        if (richardson) {
            value = perfsde::richardson_capacity(spec, resolution);
        } else {
            value = perfsde::capacity(spec, resolution).value;
        }
        j["capacity"] = value;
        if (!spec.holes.empty()) {
            j["eps"] = spec.holes[0].eps;
            j["lemma1"] = perfsde::ball_capacity_asymptotic(spec.holes[0].eps, spec.dimension);
        }
        std::ostringstream line;
        line << "capacity = " << value << " (resolution " << resolution << ")";
        write_summary(out_dir, j, line.str());
        return 0;
    }

    if (asym_cmd->parsed()) {
        const auto spec = perfsde::io::load_domain(domain_path);
        const auto eps_list = parse_eps_list(eps_csv);
        std::vector<int> resolutions;
        for (const double eps : eps_list)
            resolutions.push_back(asym_resolution > 0 ? asym_resolution : perfsde::scheduled_resolution(eps));
        const auto mode = cap_mode == "lemma1" ? perfsde::CapacityMode::Lemma1 : perfsde::CapacityMode::Computed;
        const auto reports = perfsde::remainder_study(spec, eps_list, resolutions, mode);
        json j;
        j["domain"] = perfsde::io::domain_to_json(spec);
        j["mode"] = cap_mode;
        j["reports"] = json::array();
        for (const auto& r : reports) j["reports"].push_back(perfsde::io::expansion_to_json(r));
        write_text(fs::path(out_dir) / "expansion.csv", perfsde::io::expansion_csv(reports));
        std::ostringstream line;
        line << reports.size() << " eps values; remainder_ratio " << reports.front().remainder_ratio << " -> "
             << reports.back().remainder_ratio;
        write_summary(out_dir, j, line.str());
        return 0;
    }

    if (thr_cmd->parsed()) {
        const auto spec = perfsde::io::load_domain(domain_path);
        const auto noise = perfsde::io::parse_noise_flag(noise_flag);
        double lambda1 = lambda1_override;
        std::vector<double> phi;
        if (!phi1sq_csv.empty())
            for (const double v : parse_eps_list(phi1sq_csv)) phi.push_back(std::sqrt(v));
        if (lambda1 <= 0.0 || (phi.empty() && !spec.holes.empty())) {
            const BaseEigen base = base_eigen(spec, thr_resolution);
            if (lambda1 <= 0.0) lambda1 = base.lambda1;
            if (phi.empty()) phi = base.phi_at_centers;
        }
        const auto report = perfsde::stability_report(spec.dimension, beta, noise, lambda1, phi);
        json j = perfsde::io::stability_to_json(report);
        j["lambda1"] = lambda1;
        j["beta"] = beta;
        std::ostringstream line;
        line << (report.stabilized ? "stabilized" : "not-stabilized") << ", margin = " << report.margin;
        if (report.epsilon0) line << ", eps0 = " << *report.epsilon0;
        write_summary(out_dir, j, line.str());
        return 0;
    }

    const auto spec = perfsde::io::load_domain(domain_path);
    perfsde::SpdeConfig cfg;
    cfg.beta = beta;
    cfg.noise = perfsde::io::parse_noise_flag(noise_flag);
    cfg.dt = dt;
    cfg.T = T;
    cfg.burn_in = burn_in;
    cfg.init = init == "eigen" ? perfsde::SpdeConfig::Init::Eigenfunction : perfsde::SpdeConfig::Init::Random;
    cfg.init_norm = init_norm;
    cfg.paths = paths;
    cfg.seed = seed;
    cfg.sample_dt = sample_dt;
    cfg.validate();
    const perfsde::Grid grid(spec, sim_resolution);
    const auto lap = perfsde::assemble(grid);
    const auto summary = perfsde::ensemble(grid, lap, cfg, threads);
    if (save_paths) {
        for (const auto& path : summary.paths) {
            std::ostringstream name;
            name << "path_" << path.path_id << ".csv";
            write_text(fs::path(out_dir) / "paths" / name.str(), perfsde::io::trajectory_csv(path));
        }
    }
    std::ostringstream line;
    line << "lyapunov median = " << summary.lyapunov_median << ", decay bound = " << summary.decay_bound_value
         << ", decayed fraction = " << summary.decayed_fraction;
    write_summary(out_dir, perfsde::io::ensemble_to_json(summary, cfg), line.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const perfsde::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
