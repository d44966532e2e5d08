#pragma once

#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "qherm/models.hpp"
#include "qherm/observables.hpp"
#include "qherm/types.hpp"

namespace qherm {

enum class SpectrumKind { real_nondegenerate, degenerate, complex_pairs };

struct SpectrumClass {
    SpectrumKind kind = SpectrumKind::real_nondegenerate;
    int real_count = 0;
    double min_gap = 0.0;
    double max_abs_imag = 0.0;
};

SpectrumClass classify_spectrum(const Spectrum& s);

// Boundary polynomial of the three-level reality domain in the (z, g) plane;
// `truncated` selects the low-order form valid near the origin. The full
// form is one quarter of the characteristic-polynomial discriminant.
double evaluate_g_boundary(double z, double g, bool truncated);

struct BoundaryTrace {
    std::vector<std::pair<double, double>> points;  // scan order
    std::string field_name;
};

struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;

    double at(int i, int resolution) const;
};

// Scanline sign-change detection along both grid directions, each change
// refined by bisection until |field| <= 1e-9 * local scale.
BoundaryTrace trace_zero_line(const std::function<double(double, double)>& field,
                              const AxisRange& range1, const AxisRange& range2,
                              int resolution,
                              const std::string& field_name = "field");

// Secular quartic in z = E^2 of the nine-level family at unit environment
// coupling: det(E I - H) = E * Q(z). Coefficients are polynomials in t with
// integer coefficients; at t = 0 the quartic is exactly (z - 25)^4.
PolyCoeffs secular_quartic(double t);

// Number of eigenvalues with |Im| below the scale-free reality threshold.
int reality_count(const DenseMatrix& h);

// Largest t in the window at which the reality count of the nine-level
// family drops from full (all eigenvalues real) as t increases, refined by
// bisection to 1e-6. nullopt when the count never drops from full inside
// the window.
std::optional<double> t_crit(double beta_env, const AxisRange& window,
                             int resolution);

// Root of beta -> t_crit(beta) leaving zero: bisection on the predicate
// "t_crit strictly negative" to 1e-3. nullopt when the bracket does not
// straddle the transition.
std::optional<double> beta_critical(const AxisRange& bracket);

// ---------------------------------------------------------------------------
// Grid scans
// ---------------------------------------------------------------------------

enum class MetricRule { fixed_weights, closed_form };

struct ScanAxis {
    std::string param;  // parameter name within the model family
    AxisRange range;
    int resolution = 201;
};

struct ScanRequest {
    ModelSpec base;
    ScanAxis axis1;
    ScanAxis axis2;
    MetricRule rule = MetricRule::closed_form;
    std::vector<double> kappa;  // fixed-weights rule; empty = all ones
    // Parameters consumed by the two-level metric/observable construction.
    double beta_m = std::numbers::pi / 2.0;
    double s = 0.0;
    // Closed-form three-level metric diagonal (a, f, m).
    double theta_a = 1.0;
    double theta_f = 1.0;
    double theta_m = 1.0;
    int threads = 1;
};

struct ScanCell {
    DomainFlags flags;
    SpectrumClass spectrum_class;
    double min_theta_eig = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;  // false: model/metric construction failed here
};

struct DomainScanResult {
    ScanAxis axis1;
    ScanAxis axis2;
    std::vector<ScanCell> cells;  // row-major: axis1 slow, axis2 fast

    const ScanCell& at(int i, int j) const {
        return cells[static_cast<size_t>(i) * axis2.resolution + j];
    }
};

// Evaluates every grid cell (concurrently when request.threads > 1) into a
// canonical row-major layout; results are identical for any thread count.
DomainScanResult scan_grid(const ScanRequest& request);

// Default window used for the three-level boundary and positivity maps.
// Chosen to contain the analytically known reality interval z in [-2, 0] at
// g = 0 and the tongue reaching z ~ 0.5 at |g| = 1.5.
inline constexpr AxisRange default_z_window{-2.6, 0.9};
inline constexpr AxisRange default_g_window{-1.8, 1.8};

}  // namespace qherm
