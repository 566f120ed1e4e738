#pragma once

// Zeros of Delta in a rectangle, each with its order. The order of a zero of
// Delta equals the algebraic multiplicity of the eigenvalue.
//
// count_zeros   argument principle on the rectangle boundary
// localize      subdivision until each box holds one cluster
// refine        Newton on Delta/Delta' from the box center, then the
//               winding number on a small circle confirms the order
// find_spectrum all of the above, boxes processed concurrently

#include <string>
#include <vector>

#include "jumpspec/contour.hpp"
#include "jumpspec/ode.hpp"
#include "jumpspec/problem.hpp"
#include "jumpspec/region.hpp"

namespace jumpspec {

struct RootfinderSettings {
  ContourSettings contour;
  double isolation_fraction = 1e-2;  ///< box diameter at which a cluster may stop subdividing, relative to the region
  int max_depth = 40;
  int newton_max_iterations = 50;
  double newton_step_tolerance = 1e-12;  ///< relative to 1 + |lambda|
  std::size_t circle_nodes = 64;
  int multiplicity_warning = 8;
  double residual_factor = 1e-8;
  double split_clearance_ratio = 1e-3;
};

struct Eigenvalue {
  cplx location;
  int multiplicity = 1;
  double residual = 0.0;    ///< |Delta(location)|
  double separation = 0.0;  ///< distance to the nearest other located zero (infinity if alone)
  int iterations = 0;       ///< Newton iterations
  double winding_radius = 0.0;
};

struct SpectrumDiagnostics {
  ContourRegion integrated_region;  ///< the (possibly perturbed) rectangle of the total count
  int perturbations = 0;
  double total_winding_residual = 0.0;
  std::vector<double> winding_residuals;  ///< one per accepted box count
  std::vector<std::string> notes;
};

struct SpectrumResult {
  ContourRegion region;
  std::vector<Eigenvalue> eigenvalues;  ///< sorted by real part, then imaginary part
  int total_count = 0;
  SpectrumDiagnostics diagnostics;
};

struct IsolatedBox {
  ContourRegion box;
  int count = 0;
};

int count_zeros(const Problem& problem, const ContourRegion& region, const ToleranceSettings& tol = {},
                const RootfinderSettings& settings = {});

/// Boxes holding one simple zero, or one tight cluster in a box of diameter
/// below isolation_fraction * region diameter; boxes with no zeros are dropped.
std::vector<IsolatedBox> localize(const Problem& problem, const ContourRegion& region,
                                  const ToleranceSettings& tol = {}, const RootfinderSettings& settings = {});

/// Refines the zero in `box`. `isolation_radius` bounds the circles used for
/// the cluster mean and for the multiplicity check (default: the box diameter).
Eigenvalue refine(const Problem& problem, const IsolatedBox& box, const ToleranceSettings& tol = {},
                  const RootfinderSettings& settings = {}, double isolation_radius = 0.0);

SpectrumResult find_spectrum(const Problem& problem, const ContourRegion& region, const ToleranceSettings& tol = {},
                             const RootfinderSettings& settings = {});

/// Smallest real part over the eigenvalues in `search`, which must keep a
/// distance of at least 1e-6 from 0. Throws NotFoundError when none are found.
double spectral_gap(const Problem& problem, const ContourRegion& search, const ToleranceSettings& tol = {},
                    const RootfinderSettings& settings = {});

}  // namespace jumpspec
