#pragma once

#include <optional>
#include <string>
#include <vector>

#include "krein/models.hpp"

namespace krein {

struct CurveSpec {
    std::string type;  // circle | segment | polyline
    std::vector<double> center;
    double radius = 0;
    std::vector<double> from, to;
    std::vector<std::vector<double>> points;
    bool closed = false;
    std::string interpolation = "smooth";  // polyline only
    int samples = 64;

    Curve build() const;
    bool operator==(const CurveSpec&) const = default;
};

struct WindowSpec {
    double e_min = 0, e_max = 0;
    bool operator==(const WindowSpec&) const = default;
};

struct SweepSpec {
    std::string variable = "a";  // a | lambda | mu
    double from = 0, to = 0;
    int steps = 0;
    bool operator==(const SweepSpec&) const = default;
};

struct WavefunctionSpec {
    std::vector<double> lower, upper;
    std::vector<int> points;
    int state = 0;
    bool correction = false;
    bool operator==(const WavefunctionSpec&) const = default;
};

struct RunConfig {
    std::string family;
    std::vector<std::vector<double>> centers;
    std::vector<std::vector<double>> distance_matrix;
    std::vector<CurveSpec> curves;
    std::vector<double> couplings_lambda;
    std::vector<double> binding_energies;
    double mass_m = 1;
    double curvature_kappa = 1;
    bool degenerate = false;
    int quad_order = 32;
    double tol = 1e-15;
    std::optional<WindowSpec> window;
    std::optional<SweepSpec> sweep;
    std::optional<WavefunctionSpec> wavefunction;

    ModelSpec model;  // built and validated from the fields above

    bool operator==(const RunConfig& o) const;
};

// Throws ConfigError (path = JSON pointer, line = approximate source line).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Resolved config as JSON text; parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& c);

// Rebuild c.model from the raw fields (used after CLI overrides).
void build_model(RunConfig& c);

}  // namespace krein
