#include "holorigid/rigidity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "holorigid/errors.hpp"
#include "holorigid/numeric.hpp"
#include "holorigid/orbits.hpp"

namespace holorigid {

namespace {

// neighborhood radius per unit of range radius; 0.15 on the standard
// quadratic normalization (range radius 5.0625) keeps bridge states clear
// of each other while the derivative intervals stay well inside the
// expansion regime
constexpr double kNeighborhoodFraction = 0.15 / 5.0625;
constexpr double kRidge = 1e-12;

void require_usable(const MarkovModel& m, const char* what) {
  if (!m.expansion)
    throw UncertifiedModelError(std::string(what) +
                                " requires an expansion certificate");
  if (!is_transitive(m))
    throw NonTransitiveError(std::string(what) +
                             " requires a transitive model");
}

std::vector<PeriodicWord> words_up_to(const MarkovModel& m, int max_period) {
  std::vector<PeriodicWord> all;
  for (int n = 1; n <= max_period; ++n) {
    std::vector<PeriodicWord> ws = periodic_words(m, n);
    all.insert(all.end(), ws.begin(), ws.end());
  }
  return all;
}

// Log-derivative cycle sum of a word: the true orbit sum via shadowing when
// the model embeds its map, otherwise the midpoint of the propagated
// derivative interval. Returns {value, true when shadowed}.
std::pair<double, bool> log_deriv_sum(const MarkovModel& m,
                                      const PeriodicWord& w) {
  if (m.map) {
    std::optional<std::vector<Complex>> pts = shadow_cycle(m, w);
    if (pts) {
      double s = 0.0;
      for (std::size_t k = 0; k < w.edges.size(); ++k) {
        const MarkovTransition& tr = m.transitions[w.edges[k]];
        s += std::log(std::abs(m.map->branches[tr.branch].dpoly.eval((*pts)[k])));
      }
      return {s, true};
    }
  }
  return {0.5 * (std::log(w.dmin_product) + std::log(w.dmax_product)), false};
}

// Graph isomorphism restricted to degree/branch-signature compatible
// relabelings; returns the f-state -> g-state mapping or nullopt.
std::optional<std::vector<int>> find_isomorphism(const MarkovModel& f,
                                                 const MarkovModel& g) {
  const std::size_t V = f.states.size();
  if (g.states.size() != V || f.transitions.size() != g.transitions.size())
    return std::nullopt;

  // identity shortcut: matched constructions carry identical ids and edges
  bool identical = true;
  for (std::size_t v = 0; v < V && identical; ++v)
    identical = f.states[v].id == g.states[v].id;
  for (std::size_t e = 0; e < f.transitions.size() && identical; ++e)
    identical = f.transitions[e].from == g.transitions[e].from &&
                f.transitions[e].to == g.transitions[e].to &&
                f.transitions[e].branch == g.transitions[e].branch;
  if (identical) {
    std::vector<int> id(V);
    for (std::size_t v = 0; v < V; ++v) id[v] = static_cast<int>(v);
    return id;
  }

  using Signature = std::tuple<std::vector<int>, std::vector<int>>;
  auto signatures = [&](const MarkovModel& m) {
    std::vector<Signature> sig(m.states.size());
    for (const MarkovTransition& tr : m.transitions) {
      std::get<0>(sig[tr.from]).push_back(tr.branch);
      std::get<1>(sig[tr.to]).push_back(tr.branch);
    }
    for (Signature& s : sig) {
      std::sort(std::get<0>(s).begin(), std::get<0>(s).end());
      std::sort(std::get<1>(s).begin(), std::get<1>(s).end());
    }
    return sig;
  };
  std::vector<Signature> sf = signatures(f), sg = signatures(g);

  std::map<std::pair<int, int>, int> g_edge;
  for (const MarkovTransition& tr : g.transitions)
    g_edge[{tr.from, tr.to}] = tr.branch;

  std::vector<int> mapping(V, -1);
  std::vector<char> used(V, 0);
  long nodes = 0;
  std::function<bool(std::size_t)> assign = [&](std::size_t v) -> bool {
    if (v == V) return true;
    if (++nodes > 1000000) return false;
    for (std::size_t c = 0; c < V; ++c) {
      if (used[c] || !(sf[v] == sg[c])) continue;
      bool ok = true;
      for (const MarkovTransition& tr : f.transitions) {
        int a = -1, b = -1;
        if (tr.from == static_cast<int>(v))
          a = static_cast<int>(c), b = mapping[tr.to];
        else if (tr.to == static_cast<int>(v))
          a = mapping[tr.from], b = static_cast<int>(c);
        else
          continue;
        if (a < 0 || b < 0) continue;
        auto it = g_edge.find({a, b});
        if (it == g_edge.end() || it->second != tr.branch) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      mapping[v] = static_cast<int>(c);
      used[c] = 1;
      if (assign(v + 1)) return true;
      mapping[v] = -1;
      used[c] = 0;
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;
  // edge counts are equal and every f-edge was matched, so this is a bijection
  return mapping;
}

}  // namespace

nlohmann::ordered_json RigidityVerdict::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["residual"] = residual;
  j["tolerance"] = tolerance;
  if (lambda) j["lambda"] = *lambda;
  if (witness) {
    j["witness"] = {{"word", witness->word},
                    {"period", witness->period},
                    {"values", witness->values}};
  } else {
    j["witness"] = nullptr;
  }
  j["tested_periods"] = tested_periods;
  if (!warnings.empty()) j["warnings"] = warnings;
  j["provenance"] = provenance.is_null() ? nlohmann::ordered_json::object()
                                         : provenance;
  return j;
}

RigidityVerdict livshitz_test(const MarkovModel& m, const PotentialSpec& phi,
                              const PotentialSpec& psi, int max_period,
                              double tol, int order) {
  if (max_period < 1) throw InputError("max_period must be at least 1");
  require_usable(m, "livshitz_test");
  auto [pf_lo, pf_hi] = pressure(m, phi, order);
  auto [pg_lo, pg_hi] = pressure(m, psi, order);
  double dp = 0.5 * (pf_lo + pf_hi) - 0.5 * (pg_lo + pg_hi);

  RigidityVerdict v;
  v.kind = "cohomologous";
  v.tolerance = tol;
  v.tested_periods = {1, max_period};
  std::optional<RigidityVerdict::Witness> worst;
  for (const PeriodicWord& w : words_up_to(m, max_period)) {
    double s_phi = potential_on_word(m, phi, w);
    double s_psi = potential_on_word(m, psi, w);
    double shift = w.length() * dp;
    double defect = std::abs(s_phi - s_psi - shift);
    if (defect > v.residual) {
      v.residual = defect;
      worst = RigidityVerdict::Witness{
          w.label(m), w.length(), {s_phi, s_psi, shift}};
    }
  }
  if (v.residual > tol) {
    v.kind = "not_cohomologous";
    v.witness = worst;
  }
  return v;
}

RigidityVerdict constant_multiplier_test(
    const std::vector<std::pair<int, double>>& spectrum, double tol) {
  if (spectrum.empty())
    throw InputError("constant-multiplier test needs a non-empty spectrum");
  std::vector<double> mean(spectrum.size());
  double total = 0.0;
  int p_min = spectrum.front().first, p_max = spectrum.front().first;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    auto [p, mult] = spectrum[i];
    if (p < 1 || !(mult > 0.0))
      throw InputError("spectrum entries need period >= 1 and multiplier > 0");
    mean[i] = std::log(mult) / p;
    total += mean[i];
    p_min = std::min(p_min, p);
    p_max = std::max(p_max, p);
  }
  double log_lambda = total / static_cast<double>(spectrum.size());

  RigidityVerdict v;
  v.tolerance = tol;
  v.tested_periods = {p_min, p_max};
  v.lambda = std::exp(log_lambda);
  std::size_t i_dev = 0, i_lo = 0, i_hi = 0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    double dev = std::abs(mean[i] - log_lambda);
    if (dev > v.residual) {
      v.residual = dev;
      i_dev = i;
    }
    if (mean[i] < mean[i_lo]) i_lo = i;
    if (mean[i] > mean[i_hi]) i_hi = i;
  }
  if (v.residual <= tol) {
    v.kind = "linear";
  } else {
    v.kind = "non_linear";
    v.witness = RigidityVerdict::Witness{
        "period " + std::to_string(spectrum[i_lo].first) + " multiplier " +
            fmt_double(spectrum[i_lo].second) + " vs period " +
            std::to_string(spectrum[i_hi].first) + " multiplier " +
            fmt_double(spectrum[i_hi].second),
        spectrum[i_dev].first,
        {mean[i_lo], mean[i_hi], log_lambda}};
  }
  return v;
}

RigidityVerdict affine_structure_test(const MarkovModel& m, int max_period,
                                      double tol) {
  if (max_period < 1) throw InputError("max_period must be at least 1");
  require_usable(m, "affine_structure_test");
  RigidityVerdict v;
  v.tolerance = tol;
  v.tested_periods = {1, max_period};

  std::vector<PeriodicWord> words = words_up_to(m, max_period);

  // Targets must come from one consistent source (mixing routes would fake
  // cell-width residuals): the true shadowed orbit sums with unshadowable
  // words dropped when the model embeds a map, interval midpoints otherwise.
  std::vector<double> targets;
  if (m.map) {
    std::vector<PeriodicWord> kept;
    int skipped = 0;
    for (const PeriodicWord& w : words) {
      auto [target, shadowed] = log_deriv_sum(m, w);
      if (shadowed) {
        kept.push_back(w);
        targets.push_back(target);
      } else {
        ++skipped;
      }
    }
    if (!kept.empty()) {
      if (skipped > 0)
        v.warnings.push_back("skipped " + std::to_string(skipped) + " of " +
                             std::to_string(words.size()) +
                             " words with no certified shadow orbit");
      words = std::move(kept);
    } else {
      targets.clear();
      v.warnings.push_back(
          "no word shadows onto a certified orbit; targets use interval "
          "midpoints");
    }
  }
  if (targets.empty())
    for (const PeriodicWord& w : words)
      targets.push_back(0.5 *
                        (std::log(w.dmin_product) + std::log(w.dmax_product)));

  std::map<int, int> col_of;
  for (const PeriodicWord& w : words)
    for (int e : w.edges)
      if (!col_of.count(e)) {
        int c = static_cast<int>(col_of.size());
        col_of[e] = c;
      }
  const int C = static_cast<int>(col_of.size());

  // accumulate ridge-damped normal equations word by word; rows are edge
  // visit counts, targets the log-derivative cycle sums
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(C, C);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(C);
  std::vector<std::vector<std::pair<int, double>>> rows;
  rows.reserve(words.size());
  for (std::size_t iw = 0; iw < words.size(); ++iw) {
    std::map<int, double> counts;
    for (int e : words[iw].edges) counts[col_of[e]] += 1.0;
    std::vector<std::pair<int, double>> row(counts.begin(), counts.end());
    for (const auto& [ci, cv] : row) {
      rhs[ci] += cv * targets[iw];
      for (const auto& [cj, cw] : row) N(ci, cj) += cv * cw;
    }
    rows.push_back(std::move(row));
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(C);
  if (C > 0) {
    // rank of the count matrix versus the cycle-space dimension E - V + 1
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(N);
    double scale = es.eigenvalues().size() > 0
                       ? std::abs(es.eigenvalues().maxCoeff())
                       : 0.0;
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > 1e-12 * std::max(1.0, scale)) ++rank;
    int cycle_dim = static_cast<int>(m.transitions.size()) -
                    static_cast<int>(m.states.size()) + 1;
    if (rank < cycle_dim)
      v.warnings.push_back(
          "tested words span rank " + std::to_string(rank) + " of the " +
          std::to_string(cycle_dim) +
          "-dimensional cycle space; increase max_period");
    x = (N + kRidge * Eigen::MatrixXd::Identity(C, C)).ldlt().solve(rhs);
  }

  std::optional<RigidityVerdict::Witness> worst;
  for (std::size_t iw = 0; iw < rows.size(); ++iw) {
    double fit = 0.0;
    for (const auto& [ci, cv] : rows[iw]) fit += cv * x[ci];
    double defect = std::abs(fit - targets[iw]);
    if (defect > v.residual) {
      v.residual = defect;
      worst = RigidityVerdict::Witness{words[iw].label(m),
                                       words[iw].length(),
                                       {fit, targets[iw]}};
    }
  }
  if (v.residual <= tol) {
    v.kind = "cohomologous";
  } else {
    v.kind = "non_linear";
    v.witness = worst;
  }
  return v;
}

RigidityVerdict pair_and_compare(const MarkovModel& model_f,
                                 const MarkovModel& model_g, int max_period,
                                 double tol) {
  if (max_period < 1) throw InputError("max_period must be at least 1");
  std::optional<std::vector<int>> iso = find_isomorphism(model_f, model_g);
  if (!iso)
    throw GraphMismatchError(
        "no branch-compatible transition-graph isomorphism between the two "
        "models (" +
        std::to_string(model_f.states.size()) + "/" +
        std::to_string(model_g.states.size()) + " states, " +
        std::to_string(model_f.transitions.size()) + "/" +
        std::to_string(model_g.transitions.size()) + " transitions)");

  std::map<std::pair<int, int>, int> g_edge;
  for (std::size_t e = 0; e < model_g.transitions.size(); ++e)
    g_edge[{model_g.transitions[e].from, model_g.transitions[e].to}] =
        static_cast<int>(e);

  RigidityVerdict v;
  v.tolerance = tol;
  v.tested_periods = {1, max_period};
  const bool shadowable = model_f.map && model_g.map;
  int shadow_failures = 0;
  std::optional<RigidityVerdict::Witness> worst;
  for (const PeriodicWord& wf : words_up_to(model_f, max_period)) {
    PeriodicWord wg;
    wg.states.reserve(wf.states.size());
    wg.edges.reserve(wf.edges.size());
    for (std::size_t k = 0; k < wf.edges.size(); ++k) {
      const MarkovTransition& tr = model_f.transitions[wf.edges[k]];
      int ge = g_edge.at({(*iso)[tr.from], (*iso)[tr.to]});
      wg.edges.push_back(ge);
      wg.states.push_back(model_g.transitions[ge].from);
      wg.dmin_product *= model_g.transitions[ge].dmin;
      wg.dmax_product *= model_g.transitions[ge].dmax;
    }
    wg.multiplicity = wf.multiplicity;

    double s_f, s_g;
    if (shadowable) {
      auto [a, oka] = log_deriv_sum(model_f, wf);
      auto [b, okb] = log_deriv_sum(model_g, wg);
      if (oka && okb) {
        s_f = a;
        s_g = b;
      } else {
        ++shadow_failures;
        s_f = 0.5 * (std::log(wf.dmin_product) + std::log(wf.dmax_product));
        s_g = 0.5 * (std::log(wg.dmin_product) + std::log(wg.dmax_product));
      }
    } else {
      s_f = 0.5 * (std::log(wf.dmin_product) + std::log(wf.dmax_product));
      s_g = 0.5 * (std::log(wg.dmin_product) + std::log(wg.dmax_product));
    }
    double div = std::abs(s_f - s_g) / wf.length();
    if (div > v.residual) {
      v.residual = div;
      worst = RigidityVerdict::Witness{wf.label(model_f), wf.length(),
                                       {s_f, s_g}};
    }
  }
  if (shadow_failures > 0)
    v.warnings.push_back(std::to_string(shadow_failures) +
                         " word pair(s) compared by interval midpoints "
                         "because shadowing failed");
  if (v.residual <= tol) {
    v.kind = "multipliers_preserved";
  } else {
    v.kind = "multipliers_diverge";
    v.witness = worst;
  }
  return v;
}

std::vector<PeriodicOrbit> select_anchor_orbits(const MapSpec& f, int skip) {
  auto admissible = [](const PeriodicOrbit& o) {
    return !o.post_critical && o.multiplier_abs > 1.0 + 1e-9;
  };
  std::vector<PeriodicOrbit> anchors;
  for (const PeriodicOrbit& o : find_periodic(f, 1)) {
    if (admissible(o)) {
      anchors.push_back(o);
      break;
    }
  }
  if (anchors.empty())
    throw InputError("no repelling fixed orbit clear of the critical orbit");
  for (int p = 2; p <= 8 && anchors.size() < 2; ++p) {
    int seen = 0;
    for (const PeriodicOrbit& o : find_periodic(f, p)) {
      if (!admissible(o)) continue;
      if (seen++ < skip) continue;
      anchors.push_back(o);
      break;
    }
  }
  if (anchors.size() < 2)
    throw InputError(
        "no admissible anchor orbit of period >= 2 found (skip " +
        std::to_string(skip) + ")");
  return anchors;
}

nlohmann::ordered_json RigidityReport::to_json() const {
  nlohmann::ordered_json j;
  j["certificate"] = certificate;
  j["criteria_met"] = certificate == "CONFORMAL_CONJUGACY_CRITERIA_MET";
  j["affine_structure_first"] = affine_f.to_json();
  j["affine_structure_second"] = affine_g.to_json();
  j["comparison"] = comparison.to_json();
  j["plan_first"] = plan_f.to_json();
  j["plan_second"] = plan_g.to_json();
  auto summary = [](const MarkovModel& m) {
    nlohmann::ordered_json s;
    s["states"] = m.states.size();
    s["transitions"] = m.transitions.size();
    if (m.expansion) {
      s["kappa"] = m.expansion->kappa;
      s["c"] = m.expansion->c;
    }
    return s;
  };
  j["model_first"] = summary(model_f);
  j["model_second"] = summary(model_g);
  // multiplier divergence above tolerance rules out a conformal conjugacy;
  // divergence within tolerance is necessary, not sufficient
  j["note"] =
      "divergence > tolerance certifies the maps are not conformally "
      "conjugate; the certificate asserts the criteria chain only";
  return j;
}

RigidityReport rigidity_verdict(const MapSpec& f, const MapSpec& g,
                                int max_period, double tol) {
  DegenerateFlags df = classify_degenerate(f);
  if (df.chebyshev || df.power_like)
    throw DegenerateMapError("first map is in a degenerate rigidity class",
                             df.chebyshev, df.power_like);
  DegenerateFlags dg = classify_degenerate(g);
  if (dg.chebyshev || dg.power_like)
    throw DegenerateMapError("second map is in a degenerate rigidity class",
                             dg.chebyshev, dg.power_like);

  RigidityReport rep;
  std::vector<PeriodicOrbit> anchors_f = select_anchor_orbits(f);
  double nr_f = kNeighborhoodFraction * f.range.radius();
  std::tie(rep.plan_f, rep.model_f) = build_Bn(f, anchors_f, nr_f);

  BnOptions match;
  match.required_lengths = bridge_lengths(rep.plan_f);
  match.required_source_points = bridge_source_points(rep.plan_f);
  double nr_g = kNeighborhoodFraction * g.range.radius();
  // The indexing of points inside a periodic orbit starts at an arbitrary
  // base point, so matching bridge source points requires aligning the two
  // orbits' base points: try every cyclic rotation of the second map's
  // period-p anchor.
  auto rotate_orbit = [](const PeriodicOrbit& o, int r) {
    PeriodicOrbit out = o;
    for (int k = 0; k < o.period; ++k) {
      out.points[k] = o.points[(k + r) % o.period];
      out.word[k] = o.word[(k + r) % o.period];
    }
    return out;
  };
  bool built = false;
  for (int skip = 0; skip < 4 && !built; ++skip) {
    std::vector<PeriodicOrbit> anchors_g;
    try {
      anchors_g = select_anchor_orbits(g, skip);
    } catch (const InputError&) {
      break;
    }
    if (anchors_g[1].period != anchors_f[1].period) continue;
    for (int rot = 0; rot < anchors_g[1].period && !built; ++rot) {
      std::vector<PeriodicOrbit> rotated = anchors_g;
      rotated[1] = rotate_orbit(anchors_g[1], rot);
      try {
        std::tie(rep.plan_g, rep.model_g) = build_Bn(g, rotated, nr_g, match);
        built = true;
      } catch (const BridgeNotFoundError&) {
      }
    }
  }
  if (!built)
    throw BridgeNotFoundError(
        "no anchor choice for the second map reproduces the first map's "
        "bridge lengths; the symbolic graphs do not match");

  // Affine structure is only testable on words whose cycles overlap in
  // edges; the shortest such words chain two bridges, so the tested period
  // must reach one composite cycle plus anchor padding.
  std::vector<std::vector<int>> lengths = bridge_lengths(rep.plan_f);
  int composite = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (lengths[i][j] >= 0 && lengths[j][i] >= 0)
        composite = std::max(composite, lengths[i][j] + lengths[j][i]);
  int longest_anchor = 1;
  for (const PeriodicOrbit& o : anchors_f)
    longest_anchor = std::max(longest_anchor, o.period);
  int mp = std::min(24, std::max(max_period, composite + longest_anchor + 2));

  rep.affine_f = affine_structure_test(rep.model_f, mp, tol);
  rep.affine_g = affine_structure_test(rep.model_g, mp, tol);
  rep.comparison = pair_and_compare(rep.model_f, rep.model_g, mp, tol);

  if (rep.comparison.kind != "multipliers_preserved")
    rep.certificate = "MULTIPLIERS_DIVERGE";
  else if (rep.affine_f.kind != "non_linear" ||
           rep.affine_g.kind != "non_linear")
    rep.certificate = "AFFINE_STRUCTURE_PRESENT";
  else
    rep.certificate = "CONFORMAL_CONJUGACY_CRITERIA_MET";
  return rep;
}

}  // namespace holorigid
