#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qherm/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "qherm: spectra, Hermitizing metrics and reality-domain maps for "
        "finite quasi-Hermitian matrix models"};

    std::string config_path;
    qherm::RunOptions options;
    app.add_option("config", config_path, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--output-dir", options.output_dir,
                   "directory prepended to the configured output path");
    app.add_option("--threads", options.threads, "scan worker threads")
        ->check(CLI::PositiveNumber);
    app.add_flag("--quiet", options.quiet, "suppress progress output");
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();

    try {
        const qherm::RunConfig config = qherm::parse_config(buffer.str());
        return qherm::run(config, options);
    } catch (const qherm::ConfigError& e) {
        if (e.line > 0) {
            std::cerr << "config error (line " << e.line << "): " << e.what()
                      << "\n";
        } else {
            std::cerr << "config error: " << e.what() << "\n";
        }
        return 2;
    } catch (const qherm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
