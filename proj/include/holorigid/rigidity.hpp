#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "holorigid/map_engine.hpp"
#include "holorigid/markov.hpp"
#include "holorigid/thermo.hpp"

namespace holorigid {

// Outcome of one linearity / cohomology / multiplier-comparison test.
// kind is one of: cohomologous, not_cohomologous, linear, non_linear,
// multipliers_preserved, multipliers_diverge. Positive kinds guarantee
// residual <= tolerance; negative kinds carry a witness with
// residual > tolerance.
struct RigidityVerdict {
  struct Witness {
    std::string word;
    int period = 0;
    std::vector<double> values;
  };

  std::string kind;
  double residual = 0.0;
  double tolerance = 0.0;
  std::optional<Witness> witness;
  std::array<int, 2> tested_periods{1, 1};
  std::optional<double> lambda;  // fitted multiplier base for linear verdicts
  std::vector<std::string> warnings;
  nlohmann::ordered_json provenance;  // model_files, config_hash (set by CLI)

  bool positive() const {
    return kind == "cohomologous" || kind == "linear" ||
           kind == "multipliers_preserved";
  }
  nlohmann::ordered_json to_json() const;
};

// Periodic-sum cohomology test: phi and psi are cohomologous up to a
// constant iff every period-n word satisfies
//   S_n(phi) - S_n(psi) = n (P(phi) - P(psi)).
// The residual is the largest absolute defect over all closed words of
// period <= max_period (including repeated shorter words, whose defects
// grow linearly and expose per-period mean differences). Pressures are
// evaluated at the given partition-sum order.
RigidityVerdict livshitz_test(const MarkovModel& m, const PotentialSpec& phi,
                              const PotentialSpec& psi, int max_period,
                              double tol, int order = 64);

// Constant-multiplier criterion on a spectrum of (period, |Df^period|)
// pairs: fits lambda = exp(mean per-period log multiplier) and accepts
// (kind "linear") iff every per-period mean agrees with log lambda within
// tol; otherwise "non_linear" with the extreme pair as witness.
RigidityVerdict constant_multiplier_test(
    const std::vector<std::pair<int, double>>& spectrum, double tol);

// Locally-constant-cohomology detector: fits one weight per transition so
// that weighted edge sums reproduce the log-derivative sums of every closed
// word of period <= max_period, by ridge-damped least squares (damping
// 1e-12), and reports the max cycle residual. Word targets use the true
// shadowed orbit sums when the model embeds its map, else the midpoint of
// the propagated derivative interval. Verdict "cohomologous" iff the
// residual is <= tol, else "non_linear". Adds a warning when the tested
// words do not span the cycle space (rank < edges - states + 1).
RigidityVerdict affine_structure_test(const MarkovModel& m, int max_period,
                                      double tol);

// Multiplier-preservation comparison across two models sharing a transition
// graph. The isomorphism is the identity when state ids and edges agree;
// otherwise a backtracking search restricted to degree/branch-signature
// compatible relabelings. Divergence = max over matched closed words of
// |(1/n)(S_f - S_g)| of log-derivative sums (shadowed when both models
// embed maps, interval midpoints otherwise). Throws GraphMismatchError when
// no isomorphism exists.
RigidityVerdict pair_and_compare(const MarkovModel& model_f,
                                 const MarkovModel& model_g, int max_period,
                                 double tol);

// End-to-end rigidity pipeline over two maps: degenerate-class gate,
// matched anchor/bridge model construction, affine-structure test on each
// model (expected non_linear for genuinely nonlinear maps), and the
// multiplier comparison. certificate = CONFORMAL_CONJUGACY_CRITERIA_MET
// iff both models are non_linear and multipliers are preserved; otherwise
// the failing step (AFFINE_STRUCTURE_PRESENT or MULTIPLIERS_DIVERGE).
struct RigidityReport {
  std::string certificate;
  RigidityVerdict affine_f;
  RigidityVerdict affine_g;
  RigidityVerdict comparison;
  BridgePlan plan_f;
  BridgePlan plan_g;
  MarkovModel model_f;
  MarkovModel model_g;

  nlohmann::ordered_json to_json() const;
};

RigidityReport rigidity_verdict(const MapSpec& f, const MapSpec& g,
                                int max_period = 6, double tol = 1e-6);

// Anchor cycles used by rigidity_verdict: the lexicographically first
// repelling orbit of period 1 and of the smallest period >= 2 that stays
// clear of the post-critical set. skip controls how many admissible orbits
// of the second period to skip (used to probe alternate anchor choices).
std::vector<PeriodicOrbit> select_anchor_orbits(const MapSpec& f, int skip = 0);

}  // namespace holorigid
