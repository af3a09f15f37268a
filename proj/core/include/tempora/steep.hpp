#ifndef TEMPORA_STEEP_HPP
#define TEMPORA_STEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tempora/causal.hpp"
#include "tempora/geroch.hpp"
#include "tempora/scalar_field.hpp"

namespace tempora {

/// Tuning knobs for the temporal-function synthesis. Defaults are calibrated
/// on flat charts at the shipped resolutions; all checks re-verify at runtime.
struct SteepOptions {
  int band_rows = 8;         // minimum grid rows per unit band of the reference
  int sub_band_rows = 4;     // safety width of the per-cone induction, in rows
  int cover_depth_rows = 3;  // apex depth below the nodes it certifies
  double cover_slope = 0.45; // max |dx/dt| cone angle for apex certification
  double margin_target = 1.0;
  double margin_slack = 0.25; // constants enforce margin >= target*(1+slack)
  double value_slack = 0.10;
  double constant_cap = 1e6; // escalation ceiling; beyond it synthesis fails
  double zero_floor_rel = 1e-9;
  double tol_h_coeff = 2.5; // tol_h = coeff * (ht + hx), calibrated on flat charts
  int threads = 1;
};

double default_tol_h(const SampledSpacetime& st, const SteepOptions& opt);

// ---------------------------------------------------------------------------
// Banded reference time. The input Cauchy time function is reparametrized
// monotonically so that consecutive integer levels are at least band_rows grid
// rows apart in every column; all band machinery and growth bounds run
// against this reference.
// ---------------------------------------------------------------------------
struct BandedTime {
  ScalarField t;               // reparametrized reference
  std::vector<double> levels;  // original-reference levels of integer values
  int n_down = 0, n_up = 0;    // integer range [-n_down, n_up]

  double level_of(int a) const { return levels[static_cast<std::size_t>(a + n_down)]; }
};

BandedTime build_banded_time(const CausalGraph& graph, const ScalarField& t_ref, int band_rows);

// ---------------------------------------------------------------------------
// Escalation constants.
// ---------------------------------------------------------------------------

/// Smallest c >= 1 on the half-integer grid with
/// g(grad(f + c*tau), grad(f + c*tau)) < -target on all of K.
/// Requires grad(tau) timelike on K; throws InputError naming the first node
/// where it is not.
double pick_constant(const SampledSpacetime& st, const ScalarField& f, const ScalarField& tau,
                     const std::vector<std::int32_t>& K, double target = 1.0);

// ---------------------------------------------------------------------------
// Cone bumps and fat cone coverings.
// ---------------------------------------------------------------------------

/// j(q) = exp(-eta0 / tau(apex, q)^2) with tau the graph proper time; zero
/// outside the chronological cone and decaying to zero at its boundary.
/// eta0 sets the proper-time scale of the bump.
struct ConeBump {
  std::int32_t apex = -1;
  double eta0 = 1.0;
  ScalarField j;
};

ConeBump make_cone_bump(const CausalGraph& graph, std::int32_t apex, double eta0);

struct ConePair {
  std::int32_t inner = -1; // strictly chronologically below outer
  std::int32_t outer = -1;
};

struct FatConeCovering {
  std::vector<ConePair> pairs;
  std::vector<std::int32_t> surface_nodes;
  std::vector<int> outer_multiplicity; // per surface node
  std::vector<int> inner_multiplicity;

  bool complete() const;
  int min_multiplicity() const;
};

/// Greedy covering of a surface by chronological-future cones anchored
/// depth_t below it. Throws ConfigError when the band dips outside the chart.
FatConeCovering fat_cone_covering(const CausalGraph& graph, const SurfaceGraph& surface, double depth_t);

// ---------------------------------------------------------------------------
// Synthesis results and traces.
// ---------------------------------------------------------------------------
struct BandTrace {
  int band = 0;
  int direction = +1;
  std::size_t pairs = 0;
  std::size_t bumps = 0;
  double max_constant = 0.0;
  double value_scale = 1.0;
  double min_margin = 0.0;    // over the band's certified region, after scaling
  double surface_value = 0.0; // min over the target surface band
};

struct SynthesisTrace {
  std::vector<BandTrace> bands;
  std::vector<std::string> notes;
  std::string to_text() const;
};

struct SteepResult {
  ScalarField field; // the synthesized temporal function
  BandedTime bands;  // reference the growth bounds are stated against
  SynthesisTrace trace;
  double tol_h = 0.0;
  std::vector<std::uint8_t> interior; // nodes carrying the margin claim
  double min_interior_margin = 0.0;
  std::size_t monotonicity_violations = 0;
};

/// Steep Cauchy temporal function built from cone bumps over integer bands of
/// the (reparametrized) reference. Post-checks: margin >= 1 - tol_h on the
/// interior, zero monotonicity violations, field > floor(reference)+1 beyond
/// the first band and |field| > |reference|/2 - 1 on covered bands.
SteepResult steep_temporal(const CausalGraph& graph, const ScalarField& t_ref, const SteepOptions& opt = {});

struct BoundedPair {
  ScalarField t2_plus;
  ScalarField t2_minus;
  ScalarField base; // the underlying steep temporal function
  BandedTime bands;
  SynthesisTrace trace;
  double tol_h = 0.0;
  std::vector<std::uint8_t> interior;
};

/// Steep temporal pair dominating given surface data: t2_plus exceeds f_plus
/// on s_plus and reference/2 - 1 above it; t2_minus time-dually.
BoundedPair steep_bounded(const CausalGraph& graph, const SurfaceGraph& s_plus, const SurfaceGraph& s_minus,
                          const std::vector<double>& f_plus, const std::vector<double>& f_minus,
                          const ScalarField& t_ref, const SteepOptions& opt = {});

/// Signed Lorentzian distance to a spacelike surface along each column's
/// normal line: positive above, negative below, unit margin on the surface.
ScalarField signed_distance(const SampledSpacetime& st, const SurfaceGraph& surface);

struct AdaptedOptions {
  SteepOptions steep;
  double delta_gain = 8.0; // gradient gain of the collar profile at the surface
  int collar_rows = 6;     // ramp extent of the collar fields, in rows
  int anchor_rows = 3;     // where the outer steep halves take over
};

struct AdaptedResult {
  ScalarField field; // t3: zero on the surface
  ScalarField theta; // collar profile, exactly -1 / +1 outside the collar
  ScalarField delta; // signed distance
  SynthesisTrace trace;
  double tol_h = 0.0;
  std::vector<std::uint8_t> interior;
  double min_interior_margin = 0.0;
  double max_surface_value = 0.0; // max |t3| at surface-interpolated points
  double level_zero_hausdorff = 0.0;
  std::size_t monotonicity_violations = 0;
};

/// Steep temporal function vanishing on S, exceeding f_plus / f_minus on the
/// outer surfaces and growing at least like the reference above/below them.
AdaptedResult adapted_temporal(const CausalGraph& graph, const SurfaceGraph& surface, const SurfaceGraph& s_minus,
                               const SurfaceGraph& s_plus, const std::vector<double>& f_minus,
                               const std::vector<double>& f_plus, const ScalarField& t_ref,
                               const AdaptedOptions& opt = {});

// ---------------------------------------------------------------------------
// Banded synthesizer: the per-band operations, exposed for direct use and
// testing. direction = +1 builds future cone functions against the banded
// reference; -1 builds the time dual.
// ---------------------------------------------------------------------------
class BandedSynthesizer {
public:
  BandedSynthesizer(const CausalGraph& graph, ScalarField banded_reference, int n_bands, int direction,
                    SteepOptions opt, double apex_floor = -1e300);

  int n_bands() const { return n_bands_; }
  double s(std::size_t x) const { return dir_ * s_ref_[x]; }

  /// Column-crossing nodes of the integer level a of the directed reference.
  std::vector<std::int32_t> surface_band(double a) const;

  /// Covering of the level-a surface band by cone pairs from the band below.
  FatConeCovering band_covering(int a) const;

  /// Single steep forward cone function for (a, pair): support inside the
  /// inner cone below level a+2, exceeds 1 on the level-(a+1) band inside the
  /// outer cone, almost-temporal below level a+1, margin > 1 on the outer
  /// cone up to level a+1. All four properties are re-verified before return.
  ScalarField steep_cone_function(int a, const ConePair& pair, BandTrace* trace = nullptr) const;

  /// (|a|+1)-scaled escalated sum of cone functions over a covering, with the
  /// running band sum as base for the cross-band margin requirement.
  ScalarField globalize(int a, const FatConeCovering& covering, const ScalarField* base,
                        BandTrace* trace = nullptr) const;

  /// Sum over all bands; nonnegative, zero below the first band's support.
  ScalarField half_sum(SynthesisTrace& trace, std::vector<ScalarField>* band_fields = nullptr) const;

private:
  struct CoverContext;
  std::vector<double> tau_from(std::int32_t apex, double s_max) const;
  bool in_dir_future(std::size_t p, std::size_t q) const;
  bool in_dir_chron(std::size_t p, std::size_t q) const;
  std::int32_t node_toward_past(std::size_t x, int rows) const;
  bool is_last_band(int a) const { return a == n_bands_ - 1; }

  const CausalGraph& g_;
  const SampledSpacetime& st_;
  ScalarField s_ref_; // undirected banded reference
  int n_bands_;
  int dir_;
  SteepOptions opt_;
  double apex_floor_;
  double ht_proper_;
};

} // namespace tempora

#endif
