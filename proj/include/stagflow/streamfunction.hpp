#pragma once

#include <vector>

#include "stagflow/convection.hpp"
#include "stagflow/grid.hpp"

namespace stagflow {

/// Streamfunction integrated from the face-normal velocities along grid
/// lines, defined at cell corners; psi(0,0) = 0. Path independence holds
/// exactly when the discrete divergence vanishes, and path_residual reports
/// max_K |K| |div(u)_K| otherwise.
struct StreamfunctionMetrics {
    std::vector<double> psi; // (nx+1) x (ny+1), node (i,j) at i + (nx+1) j
    double amplitude = 0.0;  // psi_max - psi_min
    Vec2 primary{0.0, 0.0};  // argmin of psi
    Vec2 secondary{0.0, 0.0}; // argmax over the lower-right quadrant
    double path_residual = 0.0;
};

StreamfunctionMetrics streamfunction_metrics(const Grid& g, const FaceField& u);

} // namespace stagflow
