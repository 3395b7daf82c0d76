#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holorigid/map_engine.hpp"
#include "holorigid/orbits.hpp"
#include "holorigid/region.hpp"

namespace holorigid {

struct MarkovState {
  std::string id;
  Region region;
};

// One admissible symbol transition i -> j realized by a map branch, with a
// two-sided bound on |Df| over the part of state i the transition represents.
struct MarkovTransition {
  int from = 0;
  int to = 0;
  int branch = 0;
  double dmin = 0.0;
  double dmax = 0.0;
};

// Expansion certificate: every admissible length-n derivative product is
// >= c * kappa^n.
struct Expansion {
  double c = 1.0;
  double kappa = 1.0;
};

// Subshift of finite type with geometric cell data. Transitions are unique
// per (from, to) pair and sorted by (from, to); duplicates are merged by
// interval hull when models are built or loaded, because the pressure and
// entropy operators are matrix-valued over state pairs and parallel edges
// would double-count closed walks.
struct MarkovModel {
  std::vector<MarkovState> states;
  std::vector<MarkovTransition> transitions;
  std::optional<Expansion> expansion;
  // Generating map, carried so downstream tests can shadow symbolic cycles
  // by true orbits. Absent for synthetic models.
  std::optional<MapSpec> map;

  int state_count() const { return static_cast<int>(states.size()); }
  // Outgoing transition indices per state, sorted by target.
  std::vector<std::vector<int>> out_edges() const;
  int state_index(const std::string& id) const;  // -1 if absent

  nlohmann::ordered_json to_json() const;
  static MarkovModel from_json(const nlohmann::json& j);
};

MarkovModel load_model(const std::string& path);
void save_model(const MarkovModel& m, const std::string& path);

// Normalizes a transition list: sorts by (from, to, branch) and merges
// duplicate (from, to) pairs by interval hull (keeping the smallest branch
// label). Used by every constructor and the loader.
std::vector<MarkovTransition> merge_transitions(
    std::vector<MarkovTransition> ts);

// --- Grid model over the off-critical part of the Julia approximation -----
//
// States are grid squares of side cell_size that meet the Julia boundary
// samples and are disjoint from the critical neighborhood
// N = disc(critical point, critical_radius). Transitions are conservative:
// i -> j (via branch b) iff some image of a sample of cell i under branch b
// comes within the propagated cover radius of a sample of cell j. Derivative
// bounds are sample values of |Df| widened by a second-derivative Lipschitz
// bound times the cover radius, so they hold on the full represented set.
// States with no outgoing or no incoming transition are pruned iteratively.
// Throws EmptyModelError when nothing survives.
MarkovModel build_AN(const MapSpec& map, double critical_radius,
                     double cell_size, int depth);

// One forward orbit segment y, f(y), ..., f^s(y) = target anchor point,
// starting inside the configured neighborhood of the source anchor's orbit.
struct Bridge {
  int target_anchor = 0;  // the orbit the bridge lands on (at its point 0)
  int source_anchor = 0;  // the orbit whose neighborhood the bridge starts in
  int source_point = 0;   // index of the nearest source orbit point
  std::vector<Complex> points;  // y ... f^{s-1}(y); the endpoint is implicit
  std::vector<int> branches;    // branch applied at each listed point
};

struct BridgePlan {
  std::vector<PeriodicOrbit> anchors;
  std::vector<Bridge> bridges;  // ordered by (target, source)
  double neighborhood_radius = 0.0;

  nlohmann::ordered_json to_json() const;
};

struct BnOptions {
  double state_radius_factor = 0.5;  // state disc radius / neighborhood radius
  double post_critical_guard = 1e-6;
  int max_depth = 40;
  // When set, bridge (target, source) must have exactly the given length;
  // used to match a previously built plan on another map.
  std::optional<std::vector<std::vector<int>>> required_lengths;
  // When set, bridge (target, source) must start nearest to the given source
  // orbit point. Entry edges replicate the in-edges of that orbit state, so
  // matching both lengths and source points forces identical transition
  // graphs (not merely identical state sets).
  std::optional<std::vector<std::vector<int>>> required_source_points;
};

// Builds the symbolic model generated by the anchor cycles plus one bridge
// per ordered anchor pair (found by breadth-first search over inverse
// branches from the target anchor point). State regions are discs of radius
// state_radius_factor * neighborhood_radius around the orbit and bridge
// points; derivative bounds are interval evaluations of |Df| over those
// discs. Extending the anchor list reuses all previously found bridges, so
// the earlier model's states and admissible words embed in the later one.
// Throws InputError on post-critical anchors, BridgeNotFoundError when the
// search budget is exhausted.
std::pair<BridgePlan, MarkovModel> build_Bn(const MapSpec& map,
                                            const std::vector<PeriodicOrbit>& anchors,
                                            double neighborhood_radius,
                                            const BnOptions& opts = {});

// Bridge lengths of a plan as a [target][source] matrix (-1 on the diagonal
// and for absent pairs); feeds BnOptions::required_lengths so a second map
// can be built with an isomorphic transition graph.
std::vector<std::vector<int>> bridge_lengths(const BridgePlan& plan);

// Bridge source-point indices as a [target][source] matrix (-1 on the
// diagonal and for absent pairs); feeds BnOptions::required_source_points.
std::vector<std::vector<int>> bridge_source_points(const BridgePlan& plan);

// Largest distance from a Julia boundary sample to the model's state set;
// reported as a coverage diagnostic alongside bridge plans.
double density_gap(const MarkovModel& m, const JuliaApprox& julia);

// Expansion certificate. kappa is exp of the minimum cycle mean of
// log(dmin) (Karp's algorithm per strongly connected component); c covers
// transient paths via the minimum path deficit relative to kappa. Returns
// nullopt when kappa <= 1 (expansion not certified at this resolution).
std::optional<Expansion> verify_hyperbolic(const MarkovModel& m,
                                           int max_cycle_len = 12);

// True iff the transition digraph is strongly connected.
bool is_transitive(const MarkovModel& m);

// A closed walk of length n up to rotation. multiplicity counts the pointed
// versions (= n / smallest rotation symmetry), so summing multiplicity *
// exp(cycle sums) over the list reproduces pointed partition sums exactly.
struct PeriodicWord {
  std::vector<int> edges;   // transition indices, canonical rotation
  std::vector<int> states;  // visited states, aligned with edges
  int multiplicity = 1;
  double dmin_product = 1.0;
  double dmax_product = 1.0;

  int length() const { return static_cast<int>(edges.size()); }
  std::string label(const MarkovModel& m) const;  // dash-joined state ids
};

// All closed walks of length exactly n up to rotation, lexicographically
// ordered by edge sequence. Throws InputError when the enumeration would
// exceed the configured budget.
std::vector<PeriodicWord> periodic_words(const MarkovModel& m, int n);

// (period, geometric-midpoint multiplier) pairs for all periodic words of
// period <= max_period; feeds the constant-multiplier test on cell models.
std::vector<std::pair<int, double>> model_spectrum(const MarkovModel& m,
                                                   int max_period);

// True orbit shadowing a symbolic cycle: the periodic point of the embedded
// map whose itinerary follows the word's branch labels, found by contracting
// inverse iteration. Returns the per-step points; nullopt when the model has
// no embedded map or the contraction leaves the state regions.
std::optional<std::vector<Complex>> shadow_cycle(const MarkovModel& m,
                                                 const PeriodicWord& w);

// --- Synthetic model constructors (analytic fixtures) ----------------------

// k states, all k^2 edges admissible; every edge out of state i carries the
// degenerate derivative interval [derivs[i], derivs[i]].
MarkovModel make_full_shift(const std::vector<double>& derivs);

// Two states, edges 00, 01, 10 (word "11" forbidden).
MarkovModel make_golden_mean(double d0, double d1);

// Single n-cycle, every edge with derivative interval [deriv, deriv].
MarkovModel make_cycle(int n, double deriv);

// Doubling map on M aligned circle arcs (M >= 4, even): arc i covers arcs
// 2i mod M and 2i+1 mod M; derivative bounds 2*(1 -+ pi/M) reflect the
// variation of |2z| over the arc's covering disc.
MarkovModel make_circle_doubling(int arcs);

}  // namespace holorigid
