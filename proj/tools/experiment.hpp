#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chernlab/quadrature.hpp"
#include "chernlab/zoo.hpp"
#include "config.hpp"

namespace chernlab::cli {

enum class ReportFormat { csv, json };
enum class CompareKind { none, conformal, perturbed, twist };

struct ExperimentConfig {
    explicit ExperimentConfig(Surface s) : surface(std::move(s)) {}

    Surface surface;
    QuadratureSpec quadrature;
    CompareKind compare = CompareKind::none;
    std::string factor;  // conformal comparison
    std::uint64_t seed = 1;
    double amplitude = 0.0;
    int eta_n_u = 0;  // sampling grid for the connection difference
    int eta_n_v = 0;
    ReportFormat format = ReportFormat::csv;
    std::string out_path = "-";  // "-" is stdout
    bool timing = false;         // runtime_ms stays 0 unless set
};

/// Validates every section and key; throws ConfigError (with the offending
/// line when it came from a file) or chernlab::Error from surface builders.
ExperimentConfig build_experiment(const ConfigFile& config);

struct Comparison {
    double raw_chern_prime = 0.0;
    long rounded_prime = 0;
    bool converged_prime = false;
    double delta_raw = 0.0;  // raw' - raw
    double stokes_residual = 0.0;
    double eta_realness_max = 0.0;
};

struct ReportRow {
    std::string surface;
    int n_u = 0;
    int n_v = 0;
    double raw_chern = 0.0;
    long rounded = 0;
    double residual = 0.0;
    double max_lemma1_residual = 0.0;
    double runtime_ms = 0.0;
    bool converged = false;
    std::optional<Comparison> comparison;

    bool flagged() const { return !converged || (comparison && !comparison->converged_prime); }
};

/// The comparison metric g' named by the config, built from the surface.
MetricField comparison_field(const ExperimentConfig& config);

ReportRow run(const ExperimentConfig& config);

/// K sqrt(det g) on an n_u x n_v sampling grid of the domain.
struct GridDump {
    std::string surface;
    int n_u = 0;
    int n_v = 0;
    std::vector<Point2> points;
    std::vector<double> K;
    std::vector<double> area_coeff;
    std::vector<double> k_area;
};

GridDump sample_grid(const ExperimentConfig& config);

/// 17 significant digits, locale independent.
std::string format_number(double x);

std::string format_report(const ReportRow& row, ReportFormat format);
std::string format_grid(const GridDump& grid, const ReportRow& summary, ReportFormat format);

}  // namespace chernlab::cli
