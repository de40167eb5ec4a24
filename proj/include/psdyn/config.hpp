#pragma once

#include <string>
#include <vector>

#include "psdyn/hamiltonian.hpp"
#include "psdyn/propagator.hpp"

namespace psdyn {

struct ScenarioConfig {
    HamiltonianKind potential = HamiltonianKind::free;
    std::vector<double> coefficients;  // polynomial potential only
    double hbar = 0.1;
    int dim = 1;
    std::vector<double> times{0.5};
    GridSpec grid{-4, 4, -4, 4, 101, 101};
    std::vector<Method> methods{Method::exact};
    SourceQuad quad;        // superposition quadrature (box/spacing auto by default)
    double dt = 1e-3;       // trajectory integrator step
    int beam_rays = 512;
    double tube_radius = 0.5;
    double alpha_min = -6.0, alpha_max = 6.0;
    std::string out_dir = "out";
    bool write_csv = true;
    bool write_bin = false;
    int threads = 0;  // 0 = auto

    void validate() const;
};

// Flat key = value document; '#' starts a comment; unknown keys rejected.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

}  // namespace psdyn
