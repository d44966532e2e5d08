#pragma once

#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "qherm/domains.hpp"
#include "qherm/models.hpp"

namespace qherm {

enum class Command {
    spectrum,
    metric,
    scan,
    boundary,
    secular,
    critical_beta,
};

const char* command_name(Command c);

// Config parse failure; line is 0 when the error is not tied to one line
// (e.g. missing keys).
struct ConfigError final : Error {
    ConfigError(int line, const std::string& what) : Error(what), line(line) {}
    int line;
};

// One run of the batch front-end, parsed from a flat key = value document.
struct RunConfig {
    Command command = Command::spectrum;
    std::optional<ModelSpec> model;

    // scan
    ScanAxis axis1;
    ScanAxis axis2;
    MetricRule metric_rule = MetricRule::closed_form;
    std::vector<double> kappa;

    // metric/observable parameters
    double beta_m = std::numbers::pi / 2.0;
    double s = 0.0;
    double theta_a = 1.0;
    double theta_f = 1.0;
    double theta_m = 1.0;

    // boundary
    AxisRange window1 = default_z_window;
    AxisRange window2 = default_g_window;
    bool truncated = false;

    // secular
    AxisRange t_range{-0.06, 0.06};

    // critical-beta
    AxisRange bracket{2.6, 2.9};

    int resolution = 201;
    std::string output_path;  // defaults to "<command>.csv"
};

// Parses a UTF-8 `key = value` document ('#' comments, blank lines allowed).
// Unknown commands/keys, missing model fields and malformed numbers are
// rejected with the offending line number.
RunConfig parse_config(const std::string& text);

struct RunOptions {
    std::string output_dir;  // prepended to output_path when nonempty
    int threads = 1;
    bool quiet = false;
};

// Executes the run, writing one CSV artifact. Returns the process exit
// status: 0 success, 1 domain failure, 2 config error. Messages go to
// stderr; the CSV location to stdout unless quiet.
int run(const RunConfig& config, const RunOptions& options);

}  // namespace qherm
