#include "qherm/domains.hpp"

#include <cmath>
#include <thread>

#include "qherm/metric.hpp"
#include "qherm/numerics.hpp"
#include "qherm/observables.hpp"

namespace qherm {

double AxisRange::at(int i, int resolution) const {
    if (resolution <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(resolution - 1);
}

SpectrumClass classify_spectrum(const Spectrum& s) {
    const double tol = degeneracy_threshold(s.spectral_radius());
    SpectrumClass c;
    c.min_gap = s.min_pair_gap;
    c.max_abs_imag = s.max_abs_imag;
    c.real_count = 0;
    for (const auto& e : s.eigenvalues) {
        if (std::abs(e.imag()) <= tol) ++c.real_count;
    }
    if (s.max_abs_imag > tol) {
        c.kind = SpectrumKind::complex_pairs;
    } else if (s.min_pair_gap < tol) {
        c.kind = SpectrumKind::degenerate;
    } else {
        c.kind = SpectrumKind::real_nondegenerate;
    }
    return c;
}

double evaluate_g_boundary(double z, double g, bool truncated) {
    const double g2 = g * g;
    const double g4 = g2 * g2;
    const double g6 = g4 * g2;
    const double z2 = z * z;
    const double z3 = z2 * z;
    const double z4 = z2 * z2;
    if (truncated) {
        return 27.0 * g2 - 162.0 * z - 18.0 * g4 + 144.0 * z * g2 - g6 -
               153.0 * z2 - 6.0 * z * g4;
    }
    const double z5 = z4 * z;
    const double z6 = z3 * z3;
    return 60.0 * g2 * z2 - 6.0 * z * g4 - 12.0 * g2 * z3 - z6 - 162.0 * z +
           27.0 * g2 - 18.0 * g4 - g6 - 153.0 * z2 - 3.0 * g4 * z2 -
           3.0 * g2 * z4 - 6.0 * z5 - 30.0 * z4 - 80.0 * z3 + 144.0 * z * g2;
}

namespace {

constexpr int bisection_depth = 60;

// Refine a bracketed sign change of f along the segment between a and b.
template <typename F>
double bisect(F&& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < bisection_depth; ++i) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

BoundaryTrace trace_zero_line(const std::function<double(double, double)>& field,
                              const AxisRange& range1, const AxisRange& range2,
                              int resolution, const std::string& field_name) {
    if (resolution < 2) {
        throw ConstructionError("trace_zero_line needs resolution >= 2");
    }
    BoundaryTrace trace;
    trace.field_name = field_name;
    // Scan rows (fixed p2, varying p1), then columns.
    for (int j = 0; j < resolution; ++j) {
        const double p2 = range2.at(j, resolution);
        double prev = field(range1.at(0, resolution), p2);
        for (int i = 1; i < resolution; ++i) {
            const double p1 = range1.at(i, resolution);
            const double cur = field(p1, p2);
            if ((prev <= 0.0) != (cur <= 0.0)) {
                const double root =
                    bisect([&](double x) { return field(x, p2); },
                           range1.at(i - 1, resolution), p1);
                trace.points.emplace_back(root, p2);
            }
            prev = cur;
        }
    }
    for (int i = 0; i < resolution; ++i) {
        const double p1 = range1.at(i, resolution);
        double prev = field(p1, range2.at(0, resolution));
        for (int j = 1; j < resolution; ++j) {
            const double p2 = range2.at(j, resolution);
            const double cur = field(p1, p2);
            if ((prev <= 0.0) != (cur <= 0.0)) {
                const double root =
                    bisect([&](double y) { return field(p1, y); },
                           range2.at(j - 1, resolution), p2);
                trace.points.emplace_back(p1, root);
            }
            prev = cur;
        }
    }
    return trace;
}

PolyCoeffs secular_quartic(double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t2 * t2;
    const double t5 = t4 * t;
    // det(E I - H) = E (z^4 + c3 z^3 + c2 z^2 + c1 z + c0), z = E^2, for the
    // nine-level family at unit environment coupling; (z - 25)^4 at t = 0.
    const double c3 = 2.0 * t2 + 20.0 * t - 100.0;
    const double c2 = 34.0 * t3 - 80.0 * t2 - 500.0 * t + 3750.0;
    const double c1 = 158.0 * t4 - 360.0 * t3 + 4810.0 * t2 - 12500.0 * t -
                      62500.0;
    const double c0 = 126.0 * t5 - 3221.0 * t4 - 22450.0 * t3 -
                      23500.0 * t2 + 312500.0 * t + 390625.0;
    return PolyCoeffs{{c0, c1, c2, c3, 1.0}};
}

int reality_count(const DenseMatrix& h) {
    if (!h.is_real()) {
        throw ConstructionError("reality_count requires a real matrix");
    }
    const Spectrum s = eig(h);
    const double tol = degeneracy_threshold(s.spectral_radius());
    int count = 0;
    for (const auto& e : s.eigenvalues) {
        if (std::abs(e.imag()) <= tol) ++count;
    }
    return count;
}

std::optional<double> t_crit(double beta_env, const AxisRange& window,
                             int resolution) {
    if (resolution < 2) {
        throw ConstructionError("t_crit needs resolution >= 2");
    }
    const int full = 9;
    auto count_at = [&](double t) {
        return reality_count(build_nine(NineLevelParams::family(t, beta_env)));
    };
    // Largest grid cell where the count leaves "all real" as t increases;
    // later transitions between already-reduced counts are not boundaries of
    // the full-reality domain.
    std::optional<double> result;
    int prev = count_at(window.at(0, resolution));
    for (int i = 1; i < resolution; ++i) {
        const int cur = count_at(window.at(i, resolution));
        if (prev == full && cur < full) {
            double lo = window.at(i - 1, resolution);
            double hi = window.at(i, resolution);
            while (hi - lo > 1e-6) {
                const double mid = 0.5 * (lo + hi);
                if (count_at(mid) == full) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            result = 0.5 * (lo + hi);
        }
        prev = cur;
    }
    return result;
}

std::optional<double> beta_critical(const AxisRange& bracket) {
    const AxisRange window{-0.06, 0.06};
    const int resolution = 241;
    // t_crit is identically ~0 below the transition and strictly negative
    // above it; bisect the predicate with a margin absorbing the 1e-6
    // refinement tolerance.
    auto detached = [&](double beta) {
        const auto tc = t_crit(beta, window, resolution);
        return tc.has_value() && *tc < -1e-5;
    };
    double lo = bracket.lo;
    double hi = bracket.hi;
    const bool at_lo = detached(lo);
    const bool at_hi = detached(hi);
    if (at_lo == at_hi) return std::nullopt;
    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (detached(mid) == at_hi) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Grid scans
// ---------------------------------------------------------------------------

namespace {

ModelSpec with_param(const ModelSpec& base, const std::string& name,
                     double value) {
    ModelSpec spec = base;
    std::visit(
        [&](auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, TwoLevelParams>) {
                if (name == "lambda") {
                    p = TwoLevelParams::make(value);
                    return;
                }
            } else if constexpr (std::is_same_v<T, ThreeLevelParams>) {
                if (name == "z") {
                    p = ThreeLevelParams::make(value, p.g);
                    return;
                }
                if (name == "g") {
                    p = ThreeLevelParams::make(p.z, value);
                    return;
                }
            } else if constexpr (std::is_same_v<T, ChainParams>) {
                if (name == "t") {
                    p = ChainParams::make(p.n, value, p.g_list);
                    return;
                }
                if (name.size() > 1 && name[0] == 'g') {
                    int idx = 0;
                    try {
                        size_t consumed = 0;
                        idx = std::stoi(name.substr(1), &consumed);
                        if (consumed + 1 != name.size()) idx = 0;
                    } catch (const std::exception&) {
                        idx = 0;
                    }
                    auto g_list = p.g_list;
                    if (idx < 1 || idx > static_cast<int>(g_list.size())) {
                        throw ConstructionError("chain G index out of range: " +
                                                name);
                    }
                    g_list[static_cast<size_t>(idx - 1)] = value;
                    p = ChainParams::make(p.n, p.t, std::move(g_list));
                    return;
                }
            } else if constexpr (std::is_same_v<T, NineLevelParams>) {
                if (name == "t" || name == "beta_env") {
                    if (!p.t || !p.beta_env) {
                        throw ConstructionError(
                            "nine-level axis over t/beta_env needs the family "
                            "form");
                    }
                    const double t = (name == "t") ? value : *p.t;
                    const double beta = (name == "beta_env") ? value
                                                             : *p.beta_env;
                    p = NineLevelParams::family(t, beta);
                    return;
                }
            } else if constexpr (std::is_same_v<T, RobinLatticeParams>) {
                if (name == "lambda") {
                    p = RobinLatticeParams::make(p.n, value, p.mu);
                    return;
                }
                if (name == "mu") {
                    p = RobinLatticeParams::make(p.n, p.lambda, value);
                    return;
                }
            } else if constexpr (std::is_same_v<T, SecondObservableParams>) {
                if (name == "x") {
                    p = SecondObservableParams::make(value, p.y);
                    return;
                }
                if (name == "y") {
                    p = SecondObservableParams::make(p.x, value);
                    return;
                }
            }
            throw ConstructionError("unknown scan parameter '" + name +
                                    "' for family " +
                                    family_name(ModelSpec{p}.family()));
        },
        spec.params);
    return spec;
}

bool is_scan_level_param(const std::string& name) {
    return name == "s" || name == "beta_m";
}

ScanCell evaluate_cell_unguarded(const ScanRequest& request, double v1,
                                 double v2) {
    ScanCell cell;

    double beta_m = request.beta_m;
    double s = request.s;
    ModelSpec spec = request.base;
    try {
        auto apply = [&](const std::string& name, double value) {
            if (name == "beta_m") {
                beta_m = value;
            } else if (name == "s") {
                s = value;
            } else {
                spec = with_param(spec, name, value);
            }
        };
        apply(request.axis1.param, v1);
        apply(request.axis2.param, v2);
    } catch (const Error&) {
        return cell;  // invalid: parameters outside the family's domain
    }

    std::optional<DenseMatrix> built;
    try {
        built = build_model(spec);
    } catch (const Error&) {
        return cell;  // model build failure: invalid cell, scan continues
    }
    const DenseMatrix& h = *built;
    cell.valid = true;

    const Spectrum spectrum = eig(h);
    cell.spectrum_class = classify_spectrum(spectrum);
    const bool in_dh =
        cell.spectrum_class.kind == SpectrumKind::real_nondegenerate;

    // Metric per rule; a failed construction leaves the Theta flag down.
    std::optional<DenseMatrix> theta;
    try {
        if (request.rule == MetricRule::closed_form) {
            if (spec.family() == Family::two_level) {
                const auto& p = std::get<TwoLevelParams>(spec.params);
                if (p.alpha_h && std::abs(*p.alpha_h) < M_PI / 2.0) {
                    theta = two_level_metric(*p.alpha_h, beta_m);
                }
            } else if (spec.family() == Family::three_level) {
                const auto& p = std::get<ThreeLevelParams>(spec.params);
                theta = three_level_metric(p.z, p.g, request.theta_a,
                                           request.theta_f, request.theta_m);
            }
        } else {
            MetricFamily family = metric_basis(h);
            MetricWeights weights;
            if (request.kappa.empty()) {
                weights.kappa.assign(static_cast<size_t>(family.size()), 1.0);
            } else if (static_cast<int>(request.kappa.size()) ==
                       family.size()) {
                weights.kappa = request.kappa;
            } else {
                throw DimensionMismatchError("kappa size mismatch");
            }
            theta = assemble_metric(family, weights);
        }
    } catch (const Error&) {
        theta.reset();
    }

    // Second observable exists only for the two-level family.
    std::optional<DenseMatrix> q;
    bool q_applicable = false;
    if (spec.family() == Family::two_level) {
        q_applicable = true;
        try {
            const auto& p = std::get<TwoLevelParams>(spec.params);
            if (p.alpha_h && std::abs(*p.alpha_h) < M_PI / 2.0) {
                q = q_from_s(QConstraintParams::make(*p.alpha_h, beta_m, s));
            }
        } catch (const Error&) {
            q.reset();
        }
    }

    bool in_dtheta = false;
    if (theta) {
        try {
            const PositivityReport report = positivity(*theta);
            cell.min_theta_eig = report.min_eigenvalue;
            in_dtheta = report.is_pd && residual(h, *theta) <= 1e-8;
            if (in_dtheta && q) in_dtheta = residual(*q, *theta) <= 1e-8;
        } catch (const Error&) {
            in_dtheta = false;
        }
    }

    bool in_dq = true;
    if (q_applicable) {
        in_dq = q && classify_spectrum(eig(*q)).kind ==
                         SpectrumKind::real_nondegenerate;
    }

    cell.flags = DomainFlags::make(in_dh, in_dtheta, in_dq);
    return cell;
}

// Nothing may escape a scan worker thread; any stray failure marks the cell
// invalid and the scan continues.
ScanCell evaluate_cell(const ScanRequest& request, double v1, double v2) {
    try {
        return evaluate_cell_unguarded(request, v1, v2);
    } catch (const std::exception&) {
        return ScanCell{};
    }
}

}  // namespace

DomainScanResult scan_grid(const ScanRequest& request) {
    if (request.axis1.resolution < 1 || request.axis2.resolution < 1) {
        throw ConstructionError("scan resolution must be >= 1");
    }
    if (!is_scan_level_param(request.axis1.param)) {
        with_param(request.base, request.axis1.param,
                   request.axis1.range.lo);  // validates the axis name
    }
    if (!is_scan_level_param(request.axis2.param)) {
        with_param(request.base, request.axis2.param, request.axis2.range.lo);
    }

    DomainScanResult result;
    result.axis1 = request.axis1;
    result.axis2 = request.axis2;
    const int rows = request.axis1.resolution;
    const int cols = request.axis2.resolution;
    result.cells.resize(static_cast<size_t>(rows) * cols);

    auto worker = [&](int row_begin, int row_end) {
        for (int i = row_begin; i < row_end; ++i) {
            const double v1 = request.axis1.range.at(i, rows);
            for (int j = 0; j < cols; ++j) {
                const double v2 = request.axis2.range.at(j, cols);
                result.cells[static_cast<size_t>(i) * cols + j] =
                    evaluate_cell(request, v1, v2);
            }
        }
    };

    const int threads = std::max(1, request.threads);
    if (threads == 1 || rows == 1) {
        worker(0, rows);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (rows + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(rows, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return result;
}

}  // namespace qherm
