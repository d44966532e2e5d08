#include "qherm/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qherm/metric.hpp"
#include "qherm/numerics.hpp"
#include "qherm/observables.hpp"

namespace qherm {

namespace {

std::string format_number(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) {
            throw Error("cannot open output file '" + path + "'");
        }
    }

    void header(const std::string& columns) { out_ << columns << "\n"; }

    void row(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ",";
            out_ << fields[i];
        }
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

std::string resolve_path(const RunConfig& config, const RunOptions& options) {
    if (options.output_dir.empty()) return config.output_path;
    return (std::filesystem::path(options.output_dir) / config.output_path)
        .string();
}

DenseMatrix metric_for_config(const RunConfig& config, const DenseMatrix& h) {
    if (config.metric_rule == MetricRule::closed_form) {
        const ModelSpec& spec = *config.model;
        if (spec.family() == Family::two_level) {
            const auto& p = std::get<TwoLevelParams>(spec.params);
            if (!p.alpha_h || std::abs(*p.alpha_h) >= M_PI / 2.0) {
                throw ConstructionError(
                    "no closed-form metric outside |lambda| < 1");
            }
            return two_level_metric(*p.alpha_h, config.beta_m);
        }
        const auto& p = std::get<ThreeLevelParams>(spec.params);
        return three_level_metric(p.z, p.g, config.theta_a, config.theta_f,
                                  config.theta_m);
    }
    MetricFamily family = metric_basis(h);
    MetricWeights weights;
    if (config.kappa.empty()) {
        weights.kappa.assign(static_cast<size_t>(family.size()), 1.0);
    } else {
        weights.kappa = config.kappa;
    }
    return assemble_metric(family, weights);
}

int run_spectrum(const RunConfig& config, const std::string& path) {
    const DenseMatrix h = build_model(*config.model);
    const Spectrum spectrum = eig(h);
    CsvWriter csv(path);
    csv.header("index,re,im");
    for (size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
        csv.row({std::to_string(i), format_number(spectrum.eigenvalues[i].real()),
                 format_number(spectrum.eigenvalues[i].imag())});
    }
    return 0;
}

int run_metric(const RunConfig& config, const RunOptions& options,
               const std::string& path) {
    const DenseMatrix h = build_model(*config.model);
    const DenseMatrix theta = metric_for_config(config, h);
    CsvWriter csv(path);
    csv.header("i,j,value");
    const Eigen::MatrixXd mat = theta.real_part();
    for (int i = 0; i < theta.dim(); ++i) {
        for (int j = 0; j < theta.dim(); ++j) {
            csv.row({std::to_string(i), std::to_string(j),
                     format_number(mat(i, j))});
        }
    }
    if (!options.quiet) {
        const PositivityReport report = positivity(theta);
        std::cout << "metric min eigenvalue " << format_number(report.min_eigenvalue)
                  << (report.is_pd ? " (positive definite)" : " (not positive definite)")
                  << ", residual " << format_number(residual(h, theta)) << "\n";
    }
    return 0;
}

int run_scan(const RunConfig& config, const RunOptions& options,
             const std::string& path) {
    ScanRequest request;
    request.base = *config.model;
    request.axis1 = config.axis1;
    request.axis2 = config.axis2;
    request.rule = config.metric_rule;
    request.kappa = config.kappa;
    request.beta_m = config.beta_m;
    request.s = config.s;
    request.theta_a = config.theta_a;
    request.theta_f = config.theta_f;
    request.theta_m = config.theta_m;
    request.threads = options.threads;

    const DomainScanResult result = scan_grid(request);
    CsvWriter csv(path);
    csv.header("p1,p2,in_DH,in_DTheta,in_DQ,in_D,real_count,min_theta_eig");
    for (int i = 0; i < result.axis1.resolution; ++i) {
        const double p1 = result.axis1.range.at(i, result.axis1.resolution);
        for (int j = 0; j < result.axis2.resolution; ++j) {
            const double p2 = result.axis2.range.at(j, result.axis2.resolution);
            const ScanCell& cell = result.at(i, j);
            csv.row({format_number(p1), format_number(p2),
                     cell.flags.in_dh ? "1" : "0",
                     cell.flags.in_dtheta ? "1" : "0",
                     cell.flags.in_dq ? "1" : "0",
                     cell.flags.in_d ? "1" : "0",
                     std::to_string(cell.valid ? cell.spectrum_class.real_count
                                               : 0),
                     format_number(cell.min_theta_eig)});
        }
    }
    return 0;
}

int run_boundary(const RunConfig& config, const std::string& path) {
    const bool truncated = config.truncated;
    const auto field = [truncated](double z, double g) {
        return evaluate_g_boundary(z, g, truncated);
    };
    const BoundaryTrace trace =
        trace_zero_line(field, config.window1, config.window2,
                        config.resolution, truncated ? "G0" : "G");
    CsvWriter csv(path);
    csv.header("p1,p2,field_value");
    for (const auto& [p1, p2] : trace.points) {
        csv.row({format_number(p1), format_number(p2),
                 format_number(field(p1, p2))});
    }
    return 0;
}

int run_secular(const RunConfig& config, const std::string& path) {
    CsvWriter csv(path);
    csv.header("t,z1,z2,z3,z4,n_real");
    const int resolution = config.resolution;
    for (int i = 0; i < resolution; ++i) {
        const double t = config.t_range.at(i, resolution);
        const PolyCoeffs quartic = secular_quartic(t);
        // Companion-matrix roots of the monic quartic.
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(4, 4);
        for (int r = 1; r < 4; ++r) companion(r, r - 1) = 1.0;
        for (int r = 0; r < 4; ++r) {
            companion(r, 3) = -quartic.coeffs[static_cast<size_t>(r)];
        }
        const auto roots = detail::sorted_eigenvalues(companion);
        double scale = 1.0;
        for (const auto& root : roots) scale = std::max(scale, std::abs(root));
        std::vector<double> real_roots;
        for (const auto& root : roots) {
            if (std::abs(root.imag()) <= 1e-8 * scale) {
                real_roots.push_back(root.real());
            }
        }
        std::sort(real_roots.begin(), real_roots.end());
        std::vector<std::string> fields{format_number(t)};
        for (int k = 0; k < 4; ++k) {
            fields.push_back(
                k < static_cast<int>(real_roots.size())
                    ? format_number(real_roots[static_cast<size_t>(k)])
                    : "nan");
        }
        fields.push_back(std::to_string(real_roots.size()));
        csv.row(fields);
    }
    return 0;
}

int run_critical_beta(const RunConfig& config, const std::string& path) {
    const auto beta = beta_critical(config.bracket);
    if (!beta) {
        throw Error("no reality-boundary transition inside bracket [" +
                    format_number(config.bracket.lo) + ", " +
                    format_number(config.bracket.hi) + "]");
    }
    CsvWriter csv(path);
    csv.header("beta_critical");
    csv.row({format_number(*beta)});
    return 0;
}

}  // namespace

int run(const RunConfig& config, const RunOptions& options) {
    const std::string path = resolve_path(config, options);
    try {
        int status = 0;
        switch (config.command) {
            case Command::spectrum: status = run_spectrum(config, path); break;
            case Command::metric:
                status = run_metric(config, options, path);
                break;
            case Command::scan: status = run_scan(config, options, path); break;
            case Command::boundary: status = run_boundary(config, path); break;
            case Command::secular: status = run_secular(config, path); break;
            case Command::critical_beta:
                status = run_critical_beta(config, path);
                break;
        }
        if (status == 0 && !options.quiet) {
            std::cout << path << "\n";
        }
        return status;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace qherm
