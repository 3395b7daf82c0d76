#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "holorigid/markov.hpp"

namespace holorigid {

// Potential function on a symbolic model, evaluated on periodic words.
//   log_deriv_scaled(t): -t * sum(log |Df|) along the cycle; the scalar value
//     uses the geometric midpoint of each edge's derivative interval and the
//     interval endpoints give rigorous two-sided bounds.
//   constant(v): v per step.
//   edge_weights(w): one exact value per transition (locally constant).
//   tabulated(values): an explicit value per canonical periodic word.
struct PotentialSpec {
  enum class Kind { log_deriv_scaled, constant, edge_weights, tabulated };
  Kind kind = Kind::constant;
  double t = 0.0;
  double value = 0.0;
  std::vector<double> weights;
  std::map<std::vector<int>, double> table;  // canonical edge seq -> cycle sum

  static PotentialSpec log_deriv_scaled(double t);
  static PotentialSpec constant(double value);
  static PotentialSpec edge_weights(std::vector<double> w);
  static PotentialSpec tabulated(std::map<std::vector<int>, double> table);
};

// Cycle sum S_n(phi) over one periodic word: midpoint scalar and the
// two-sided interval implied by the edge derivative bounds.
double potential_on_word(const MarkovModel& m, const PotentialSpec& phi,
                         const PeriodicWord& w);
std::pair<double, double> potential_interval_on_word(const MarkovModel& m,
                                                     const PotentialSpec& phi,
                                                     const PeriodicWord& w);

// Order-n periodic partition-sum pressure with a two-sided enclosure:
// P_n = (1/n) log sum over pointed closed n-walks of exp(S_n phi). For
// per-edge potentials the sum is the trace of the weighted transfer matrix,
// evaluated exactly by sparse matrix powers; tabulated potentials fall back
// to explicit word enumeration. Requires an expansion certificate.
std::pair<double, double> pressure(const MarkovModel& m,
                                   const PotentialSpec& phi, int order);

// log of the spectral radius of the 0/1 transition matrix (power iteration
// on I + T, which is aperiodic whenever T is irreducible).
double entropy(const MarkovModel& m);

// Bracket of the zero of the order-n pressure of t -> -t*log|Df|: the lower
// end is the zero of the lower pressure bound, the upper end the zero of the
// upper bound, each bisected to tol/2. Requires a certificate; throws
// NoSignChangeError when P(0) <= 0.
std::pair<double, double> bowen_dimension(const MarkovModel& m, int order,
                                          double tol);

// Stationary edge probabilities of the maximal-entropy (Shannon-Parry)
// measure, aligned with m.transitions. Requires transitivity.
std::vector<double> max_entropy_weights(const MarkovModel& m);

// Lyapunov exponent interval of an edge-probability vector:
// chi = sum weight * log|Df| with the per-edge derivative bounds.
std::pair<double, double> lyapunov(const MarkovModel& m,
                                   const std::vector<double>& weights);

struct ThermoReport {
  std::vector<std::array<double, 3>> pressure_samples;  // t, P_lower, P_upper
  double entropy = 0.0;
  std::pair<double, double> bowen_dim{0.0, 0.0};
  std::pair<double, double> lyapunov_interval{0.0, 0.0};
  double lyapunov_max_entropy = 0.0;  // interval midpoint
  std::pair<double, double> hd_interval{0.0, 0.0};  // entropy / lyapunov
  double hd_max_entropy = 0.0;
  bool equality_case = false;  // HD(m) and Bowen intervals overlap within tol
  int order = 0;
  double tol = 0.0;

  nlohmann::ordered_json to_json() const;
};

// Assembles pressure samples, entropy, the Bowen bracket, and the
// maximal-entropy dimension; equality_case is true iff the hd and Bowen
// intervals overlap after inflating both by tol. Requires a transitive,
// certified model.
ThermoReport dimension_report(const MarkovModel& m, int order, double tol);

}  // namespace holorigid
