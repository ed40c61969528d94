/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dclab/grid.hpp"
#include "dclab/solver.hpp"

namespace dclab {

enum class ExperimentKind { Solve, Convergence, Flatness, Borderline, LiouvillePlateau, PorosityStudy, ConditionAudit, Verify };

const char* to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& text);

/// How Dirichlet data is produced on the collar of the ball.
enum class BoundaryMode {
    Constant,    ///< value
    Exact,       ///< Upsilon (rho - R)_+^beta for the power source, R = plateau_radius
    Quadrature,  ///< first-integral profile of the source, shifted to plateau_radius
    Affine,      ///< slope . x + offset
};

struct GeometryConfig {
    int dim = 2;
    Point center{};
    double radius = 1.0;
    /// Nodes per unit length: h = 1 / n.
    int n = 32;
};

struct BoundaryConfig {
    BoundaryMode mode = BoundaryMode::Constant;
    double value = 1.0;
    double plateau_radius = 0.5;
    Point slope{};
    double offset = 0.0;
};

struct AnalysisConfig {
    double epsilon = 0.0;                 ///< positivity threshold; 0 selects 10 * tol
    std::vector<int> n_list{32, 64, 128};  ///< refinement levels (convergence, borderline)
    double min_order = 0.5;               ///< convergence: required order of the finest pair
    double max_rel_error = 0.0;           ///< solve: L-inf error bound relative to max data; 0 = none
    double plateau_tol_h = 0.0;           ///< solve: plateau radius tolerance in units of h; 0 = none
    double fit_r_min = 0.0;               ///< 0 selects 4h
    double fit_r_max = 0.2;
    int fit_count = 8;
    double exponent_tol = 0.15;
    /// Growth-fit center: `interface` is the lattice node nearest the predicted
    /// plateau edge on the first axis (falls back to free_boundary without a
    /// prediction); `free_boundary` is the discrete free-boundary node nearest it.
    std::string fit_center = "interface";
    std::vector<double> kappa_list{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    double mu = 0.25;
    double flat_eps = 1e-3;               ///< pinned surrogate: v(0) <= flat_eps * a
    int flat_bisections = 14;
    double theta = 0.25;
    std::vector<double> r_list{1.0, 2.0};
    double fraction_tol = 0.02;
    std::vector<double> porosity_radii{};  ///< empty selects 4h, 8h, 16h
    double sigma_floor = 0.05;
    double dim_min = 0.8;
    double dim_max = 1.4;
    int probes = 10000;
    int probe_radius = 2;
    double probe_tol = 1e-12;
    double probe_tol_f = 0.0;             ///< 0 selects 10h
    std::string candidate = "exact";      ///< verify: exact | solve | file:<path>
    std::string contrast_term = "power(32, 1)";
    int contrast_n = 64;
    double contrast_radius = 0.0;         ///< 0 selects the power-source plateau radius for data `value`
    double contrast_tol = 0.10;
    double stability_tol = 0.10;          ///< borderline: relative change of min u between levels
};

struct AuditConfig {
    std::vector<std::string> terms{"exp_minus_one", "log_one_plus_square"};
    std::vector<std::string> conditions{"upper"};
    double gamma = 0.0;
    double delta_max = 1.0;
    double t_max = 5.0;
    int samples = 200;
    /// Terms audited without an assertion on their pass flag.
    std::vector<std::string> report_only{};
};

struct OutputConfig {
    std::string dir = "out";
    bool binary = false;
    bool json = false;
    bool dump_field = true;
};

/// Declarative experiment description; round-trips through
/// serialize_config / parse_config.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Solve;
    std::uint64_t seed = 1;
    GeometryConfig geometry;
    BoundaryConfig boundary;
    std::string source = "power(1, 1)";
    int stencil_k = 2;
    GradientSurrogate gradient = GradientSurrogate::HalfSpread;
    SolveOptions solver;
    AnalysisConfig analysis;
    AuditConfig audit;
    OutputConfig output;

    /// FNV-1a 64 of the file text the config came from, or of its canonical
    /// serialization when built in memory.
    std::uint64_t hash = 0;
};

/// `key = value` lines under `[section]` headers; `#` starts a comment.
/// Unknown sections or keys are parse errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text: every key, shortest round-trip number formatting.
std::string serialize_config(const ExperimentConfig& cfg);

/// Sets one key as if it had appeared in the file. Leaves `hash` untouched.
void set_config_value(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value);

/// Canonical text of one key's value.
std::string get_config_value(const ExperimentConfig& cfg, const std::string& section, const std::string& key);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t hash);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace dclab
