#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "epictrl/dynamics.hpp"
#include "epictrl/rate_model.hpp"

namespace epictrl {

enum class RegionLabel { DMinus, DPlus, AboveThreshold, Trivial };

const char* region_label_name(RegionLabel r);

// States within this distance of the separatrix classify to the safe side.
inline constexpr double kSeparatrixTieTol = 1e-12;

// Precomputed geometry for a fixed model and threshold: the critical
// infection level tilde_y, the R=1 curve kappa, and the separatrix lambda
// through (xbar, ybar) that splits D into the safe region and the region
// needing intervention.
struct GeometryCache {
  ModelInstance model;
  double ybar{};
  std::optional<double> tilde_y;
  std::optional<double> xbar;  // kappa(ybar)
  double yhat{};               // lowest y of the separatrix; 0 when the
                               // backward orbit limits to an equilibrium
  std::vector<std::pair<double, double>> kappa_samples;   // (y, kappa(y)) on [0, tilde_y]
  std::vector<std::pair<double, double>> lambda_samples;  // (y, lambda(y)), y increasing
  bool trivial_regime{};
  // yhat = 0: lambda below the lowest sample is a flat extension.
  bool lambda_tail_extrapolated{};

  double kappa_at(double y) const;   // linear interpolation of kappa_samples
  double lambda_at(double y) const;  // linear interpolation of lambda_samples
};

// Unique root of R(1-y, y) = 1 on (0, 1). Requires beta(1,0) > gamma.
double compute_tilde_y(const ModelInstance& m);

// Unique x in [0, 1-y] with R(x, y) = 1, for y in [0, tilde_y].
double kappa(const ModelInstance& m, double y);

// Builds the full cache by backward integration from (kappa(ybar), ybar).
// Requires the non-trivial regime: beta(1,0) > gamma and ybar <= tilde_y.
GeometryCache compute_separatrix(const ModelInstance& m, double ybar,
                                 const IntegratorConfig& cfg = {});

// Like compute_separatrix, but returns a cache with trivial_regime set
// (and no curves) instead of throwing when the regime is trivial.
GeometryCache make_geometry(const ModelInstance& m, double ybar,
                            const IntegratorConfig& cfg = {});

RegionLabel classify(const GeometryCache& g, const EpidemicState& s);

struct HitResult {
  double h{};     // abscissa where the uncontrolled orbit first meets y = ybar
  double time{};  // hitting time
};

// Forward-integrates the uncontrolled system from a DPlus state until the
// threshold event, returning the event-refined abscissa and hitting time.
// h is a constant of motion of the uncontrolled flow.
HitResult hitting_abscissa_h(const GeometryCache& g, const EpidemicState& s,
                             const IntegratorConfig& cfg = {});

struct HPartials {
  double hx{};
  double hy{};
};

// Finite-difference step for the h partials.
inline constexpr double kHPartialsStep = 1e-5;

// Central finite differences of hitting_abscissa_h, with the y step shrunk so
// the offsets stay inside DPlus (y + step <= ybar). Throws
// PreconditionViolated when an x offset leaves DPlus.
HPartials h_partials(const GeometryCache& g, const EpidemicState& s,
                     const IntegratorConfig& cfg = {});

}  // namespace epictrl
