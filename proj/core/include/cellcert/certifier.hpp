#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cellcert/frame.hpp"
#include "cellcert/subsets.hpp"
#include "cellcert/unit_vector.hpp"

namespace cellcert {

/// Projected-descent solver knobs. The solver minimizes <x, y> over the
/// sign-consistent cone intersected with the unit ball, one Dykstra projection
/// cycle per descent step, restarting from several deterministic starts and
/// keeping the best witness. The step halves once progress stalls so the
/// witness settles onto a vertex.
struct SolverOptions {
  long max_iterations = 50000;  // per restart
  double tolerance = 1e-10;     // objective-stall threshold
  int dykstra_cycles = 1;
  double step = 0.1;
  double min_step = 1e-5;
  int reflection_starts = 32;  // starts mirrored across the nearest faces
  int random_starts = 8;
  bool antipode_start = true;
  std::uint64_t seed = 0xCE11CE57u;
  // Optional extra unit-vector starts (e.g. witnesses from a superset run).
  std::vector<std::vector<double>> extra_starts;
};

/// Feasible far-point certificate for a spherical cell. The witness satisfies
/// every subset constraint to -1e-9 and radius = ||x - witness||.
struct CellCertificate {
  UnitVector witness;
  double radius = 0.0;
  long iterations = 0;
  double residual = 0.0;  // max constraint violation before final projection
  bool converged = false;
};

/// Max distance from x over the cell cut out by the subset's sign constraints
/// (signs taken from x itself). Empty subset: the cell is the whole sphere,
/// radius 2 with witness -x.
CellCertificate cell_radius(const GaussianFrame& frame,
                            std::span<const int> subset, const UnitVector& x,
                            const SolverOptions& opts = {});

CellCertificate cell_radius(const GaussianFrame& frame,
                            const SubsetSelection& subset, const UnitVector& x,
                            const SolverOptions& opts = {});

/// Same solve with explicit signs (one per subset entry, in subset order).
/// The anchor must satisfy the constraints to -1e-9; otherwise
/// InconsistentInput.
CellCertificate cell_radius_signed(const GaussianFrame& frame,
                                   std::span<const int> subset,
                                   std::span<const std::int8_t> signs,
                                   const UnitVector& anchor,
                                   const SolverOptions& opts = {});

/// A strictly feasible unit vector for the signed constraints, or nullopt if
/// alternating projections cannot find one (empty or razor-thin cell).
std::optional<UnitVector> feasible_point(const GaussianFrame& frame,
                                         std::span<const int> subset,
                                         std::span<const std::int8_t> signs,
                                         RngStream stream,
                                         int max_starts = 8);

/// Closed-form radius bound C5 d ln(d) ln(M) / sqrt(M^2 + d^2 ln^2(d) ln^2(M)).
double theorem_radius_bound(int d, int M, const ConstantsConfig& cfg);

/// Radius bound sqrt(2 - 2 sqrt(1 - tau^2/(q^2 + tau^2))) from a band width
/// tau and a lower bound q on the worst aligned projected row.
double margin_radius_bound(double tau, double q);

struct ConsistencyReport {
  bool ok = false;            // all strict sign matches on the subset
  double worst_margin = 0.0;  // min over subset of sigma_i <g_i, y>
};

ConsistencyReport check_sign_consistency(const GaussianFrame& frame,
                                         std::span<const int> subset,
                                         const UnitVector& x,
                                         const UnitVector& y);

}  // namespace cellcert
