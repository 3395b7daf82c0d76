#include "holorigid/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "holorigid/errors.hpp"
#include "holorigid/numeric.hpp"
#include "holorigid/parallel.hpp"

namespace holorigid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-edge potential bounds [lo, hi] for the locally constant kinds.
std::pair<double, double> edge_phi_bounds(const MarkovModel& m,
                                          const PotentialSpec& phi,
                                          std::size_t edge) {
  const MarkovTransition& tr = m.transitions[edge];
  switch (phi.kind) {
    case PotentialSpec::Kind::log_deriv_scaled: {
      double a = -phi.t * std::log(tr.dmin);
      double b = -phi.t * std::log(tr.dmax);
      return {std::min(a, b), std::max(a, b)};
    }
    case PotentialSpec::Kind::constant:
      return {phi.value, phi.value};
    case PotentialSpec::Kind::edge_weights: {
      if (phi.weights.size() != m.transitions.size())
        throw InputError("edge-weight potential length " +
                         std::to_string(phi.weights.size()) +
                         " does not match transition count " +
                         std::to_string(m.transitions.size()));
      double w = phi.weights[edge];
      return {w, w};
    }
    case PotentialSpec::Kind::tabulated:
      throw InputError("tabulated potential has no per-edge values");
  }
  throw InputError("unknown potential kind");
}

// (1/n) log trace(L^n) for the sparse nonnegative matrix with entry
// weight[e] on edge e. Exact pointed-walk partition sum at order n.
double trace_pressure(const MarkovModel& m, const std::vector<double>& weight,
                      int n) {
  const std::size_t V = m.states.size();
  std::vector<double> contribution(V, 0.0);
  parallel_for(V, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> cur(V), next(V);
    for (std::size_t v = lo; v < hi; ++v) {
      std::fill(cur.begin(), cur.end(), 0.0);
      cur[v] = 1.0;
      for (int step = 0; step < n; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t e = 0; e < m.transitions.size(); ++e) {
          const MarkovTransition& tr = m.transitions[e];
          next[tr.to] += weight[e] * cur[tr.from];
        }
        cur.swap(next);
      }
      contribution[v] = cur[v];
    }
  });
  double trace = 0.0;
  for (double c : contribution) trace += c;
  if (trace <= 0.0) return -kInf;
  return std::log(trace) / n;
}

struct PerronData {
  double rho = 0.0;
  std::vector<double> right;
  std::vector<double> left;
};

// Power iteration on I + T (aperiodic whenever T is irreducible) for the
// 0/1 transition matrix; Rayleigh-quotient stop at relative 1e-12.
PerronData perron(const MarkovModel& m) {
  const std::size_t V = m.states.size();
  PerronData out;
  out.right.assign(V, 1.0);
  out.left.assign(V, 1.0);
  auto iterate = [&](std::vector<double>& x, bool transpose) {
    double lambda = 0.0;
    std::vector<double> y(V);
    for (int it = 0; it < 200000; ++it) {
      for (std::size_t v = 0; v < V; ++v) y[v] = x[v];
      for (const MarkovTransition& tr : m.transitions) {
        if (transpose)
          y[tr.to] += x[tr.from];
        else
          y[tr.from] += x[tr.to];
      }
      double num = 0.0, den = 0.0;
      for (std::size_t v = 0; v < V; ++v) {
        num += x[v] * y[v];
        den += x[v] * x[v];
      }
      double est = num / den;
      double scale = 0.0;
      for (double v : y) scale = std::max(scale, std::abs(v));
      if (scale == 0.0) return 0.0;
      // the Rayleigh quotient converges twice as fast as the vector, so the
      // stop requires both: quotient settled to 1e-12 and vector to 1e-13
      double drift = 0.0;
      for (std::size_t v = 0; v < V; ++v) {
        double nv = y[v] / scale;
        drift = std::max(drift, std::abs(nv - x[v]));
        x[v] = nv;
      }
      if (it > 0 && std::abs(est - lambda) <= 1e-12 * std::abs(est) &&
          drift <= 1e-13) {
        lambda = est;
        break;
      }
      lambda = est;
    }
    return lambda - 1.0;  // spectral radius of T itself
  };
  out.rho = iterate(out.right, false);
  iterate(out.left, true);
  return out;
}

void require_certificate(const MarkovModel& m, const char* what) {
  if (!m.expansion)
    throw UncertifiedModelError(std::string(what) +
                                " requires an expansion certificate; run "
                                "hyperbolicity verification first");
}

}  // namespace

PotentialSpec PotentialSpec::log_deriv_scaled(double t) {
  PotentialSpec p;
  p.kind = Kind::log_deriv_scaled;
  p.t = t;
  return p;
}

PotentialSpec PotentialSpec::constant(double value) {
  PotentialSpec p;
  p.kind = Kind::constant;
  p.value = value;
  return p;
}

PotentialSpec PotentialSpec::edge_weights(std::vector<double> w) {
  PotentialSpec p;
  p.kind = Kind::edge_weights;
  p.weights = std::move(w);
  return p;
}

PotentialSpec PotentialSpec::tabulated(std::map<std::vector<int>, double> table) {
  PotentialSpec p;
  p.kind = Kind::tabulated;
  p.table = std::move(table);
  return p;
}

std::pair<double, double> potential_interval_on_word(const MarkovModel& m,
                                                     const PotentialSpec& phi,
                                                     const PeriodicWord& w) {
  if (phi.kind == PotentialSpec::Kind::tabulated) {
    auto it = phi.table.find(w.edges);
    if (it == phi.table.end())
      throw InputError("tabulated potential has no value for word " +
                       w.label(m));
    return {it->second, it->second};
  }
  if (phi.kind == PotentialSpec::Kind::log_deriv_scaled) {
    double a = -phi.t * std::log(w.dmax_product);
    double b = -phi.t * std::log(w.dmin_product);
    return {std::min(a, b), std::max(a, b)};
  }
  double lo = 0.0, hi = 0.0;
  for (int e : w.edges) {
    auto [a, b] = edge_phi_bounds(m, phi, static_cast<std::size_t>(e));
    lo += a;
    hi += b;
  }
  return {lo, hi};
}

double potential_on_word(const MarkovModel& m, const PotentialSpec& phi,
                         const PeriodicWord& w) {
  if (phi.kind == PotentialSpec::Kind::log_deriv_scaled)
    return -phi.t * 0.5 * (std::log(w.dmin_product) + std::log(w.dmax_product));
  auto [lo, hi] = potential_interval_on_word(m, phi, w);
  return 0.5 * (lo + hi);
}

std::pair<double, double> pressure(const MarkovModel& m,
                                   const PotentialSpec& phi, int order) {
  if (order <= 0) throw InputError("pressure order must be positive");
  require_certificate(m, "pressure");
  if (phi.kind == PotentialSpec::Kind::tabulated) {
    double sum_lo = 0.0;
    for (const PeriodicWord& w : periodic_words(m, order)) {
      auto [lo, hi] = potential_interval_on_word(m, phi, w);
      (void)hi;
      sum_lo += w.multiplicity * std::exp(lo);
    }
    if (sum_lo <= 0.0) return {-kInf, -kInf};
    double p = std::log(sum_lo) / order;
    return {p, p};
  }
  const std::size_t E = m.transitions.size();
  std::vector<double> w_lo(E), w_hi(E);
  for (std::size_t e = 0; e < E; ++e) {
    auto [a, b] = edge_phi_bounds(m, phi, e);
    w_lo[e] = std::exp(a);
    w_hi[e] = std::exp(b);
  }
  return {trace_pressure(m, w_lo, order), trace_pressure(m, w_hi, order)};
}

double entropy(const MarkovModel& m) {
  double rho = perron(m).rho;
  if (rho <= 0.0) return -kInf;
  return std::log(rho);
}

std::pair<double, double> bowen_dimension(const MarkovModel& m, int order,
                                          double tol) {
  if (tol <= 0.0) throw InputError("bowen_dimension tolerance must be positive");
  require_certificate(m, "bowen_dimension");
  double h = entropy(m);
  if (!(h > 1e-9))
    throw NoSignChangeError(
        "spectral entropy is " + fmt_double(h) +
        "; the model carries no positive entropy so the dimension "
        "equation has no sign change");
  auto p_at = [&](double t) {
    return pressure(m, PotentialSpec::log_deriv_scaled(t), order);
  };
  auto [p0_lo, p0_hi] = p_at(0.0);
  (void)p0_hi;
  if (p0_lo <= 0.0)
    throw SolverFailureError(
        "order-" + std::to_string(order) + " pressure at exponent 0 is " +
        fmt_double(p0_lo) +
        " although entropy is positive; pick an order compatible with the "
        "graph period");
  double t_hi = std::log(static_cast<double>(m.states.size()) + 1.0) /
                    std::log(m.expansion->kappa) +
                1.0;
  for (int tries = 0;; ++tries) {
    if (p_at(t_hi).second < 0.0) break;
    if (tries >= 60)
      throw SolverFailureError("pressure does not become negative; expansion "
                               "certificate too weak for a dimension bracket");
    t_hi *= 2.0;
  }
  // Zero of the lower pressure bound brackets the dimension from below,
  // zero of the upper bound from above; bisect each to tol/4.
  auto bisect = [&](bool upper_bound) {
    double a = 0.0, b = t_hi;
    for (int it = 0; it < 200 && (b - a) > tol / 4.0; ++it) {
      double mid = 0.5 * (a + b);
      auto [lo, hi] = p_at(mid);
      double v = upper_bound ? hi : lo;
      if (v > 0.0)
        a = mid;
      else
        b = mid;
    }
    return upper_bound ? b : a;
  };
  double lower = bisect(false);
  double upper = bisect(true);
  if (lower > upper) std::swap(lower, upper);
  return {lower, upper};
}

std::vector<double> max_entropy_weights(const MarkovModel& m) {
  if (!is_transitive(m))
    throw NonTransitiveError(
        "maximal-entropy weights need a transitive transition graph");
  PerronData pd = perron(m);
  double z = 0.0;
  for (std::size_t v = 0; v < m.states.size(); ++v)
    z += pd.left[v] * pd.right[v];
  std::vector<double> weights(m.transitions.size());
  for (std::size_t e = 0; e < m.transitions.size(); ++e) {
    const MarkovTransition& tr = m.transitions[e];
    weights[e] = pd.left[tr.from] * pd.right[tr.to] / (pd.rho * z);
  }
  return weights;
}

std::pair<double, double> lyapunov(const MarkovModel& m,
                                   const std::vector<double>& weights) {
  if (weights.size() != m.transitions.size())
    throw InputError("weight vector length " + std::to_string(weights.size()) +
                     " does not match transition count " +
                     std::to_string(m.transitions.size()));
  double lo = 0.0, hi = 0.0;
  for (std::size_t e = 0; e < m.transitions.size(); ++e) {
    lo += weights[e] * std::log(m.transitions[e].dmin);
    hi += weights[e] * std::log(m.transitions[e].dmax);
  }
  return {lo, hi};
}

nlohmann::ordered_json ThermoReport::to_json() const {
  nlohmann::ordered_json j;
  j["order"] = order;
  j["tol"] = tol;
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  for (const auto& s : pressure_samples) {
    nlohmann::ordered_json row;
    row["t"] = s[0];
    row["pressure_lower"] = s[1];
    row["pressure_upper"] = s[2];
    samples.push_back(row);
  }
  j["pressure_samples"] = samples;
  j["entropy"] = entropy;
  j["bowen_dim"] = {{"lower", bowen_dim.first}, {"upper", bowen_dim.second}};
  j["lyapunov_max_entropy"] = {{"lower", lyapunov_interval.first},
                               {"upper", lyapunov_interval.second},
                               {"mid", lyapunov_max_entropy}};
  j["hd_max_entropy"] = {{"lower", hd_interval.first},
                         {"upper", hd_interval.second},
                         {"mid", hd_max_entropy}};
  j["equality_case"] = equality_case;
  return j;
}

ThermoReport dimension_report(const MarkovModel& m, int order, double tol) {
  if (!is_transitive(m))
    throw NonTransitiveError("dimension report needs a transitive model");
  require_certificate(m, "dimension_report");
  ThermoReport rep;
  rep.order = order;
  rep.tol = tol;
  rep.bowen_dim = bowen_dimension(m, order, tol);
  rep.entropy = entropy(m);
  double t_span = 1.5 * rep.bowen_dim.second;
  for (int k = 0; k <= 8; ++k) {
    double t = t_span * k / 8.0;
    auto [lo, hi] = pressure(m, PotentialSpec::log_deriv_scaled(t), order);
    rep.pressure_samples.push_back({t, lo, hi});
  }
  std::vector<double> weights = max_entropy_weights(m);
  rep.lyapunov_interval = lyapunov(m, weights);
  rep.lyapunov_max_entropy =
      0.5 * (rep.lyapunov_interval.first + rep.lyapunov_interval.second);
  double chi_lo = rep.lyapunov_interval.first;
  double chi_hi = rep.lyapunov_interval.second;
  rep.hd_interval = {rep.entropy / chi_hi,
                     chi_lo > 0.0 ? rep.entropy / chi_lo : kInf};
  rep.hd_max_entropy = rep.entropy / rep.lyapunov_max_entropy;
  rep.equality_case = rep.hd_interval.first - tol <= rep.bowen_dim.second &&
                      rep.bowen_dim.first <= rep.hd_interval.second + tol;
  return rep;
}

}  // namespace holorigid
