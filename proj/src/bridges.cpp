#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "holorigid/errors.hpp"
#include "holorigid/markov.hpp"

namespace holorigid {

namespace {

constexpr int kLevelCap = 20000;        // widest inverse level kept per depth
constexpr int kPostCriticalHorizon = 64;
constexpr double kAnchorExclusion = 1e-9;

struct SearchNode {
  Complex z;
  int parent = -1;  // index into the previous level
  int branch = 0;   // forward branch: f_branch(z) = previous-level point
};

double dist_to_set(Complex z, const std::vector<Complex>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (Complex p : set) best = std::min(best, std::abs(z - p));
  return best;
}

// Backward breadth-first search from `target` until a point falls inside the
// source orbit's neighborhood. Levels are deduplicated, lexicographically
// sorted, and width-capped, so the search and its outcome are deterministic.
Bridge bridge_search(const MapSpec& f, int target_idx, int source_idx,
                     const std::vector<PeriodicOrbit>& anchors,
                     double neighborhood_radius,
                     const std::vector<Complex>& guard_pts,
                     const std::vector<Complex>& anchor_pts,
                     const BnOptions& opts, int required_length,
                     int required_source) {
  Complex target = anchors[target_idx].points[0];
  const std::vector<Complex>& source_orbit = anchors[source_idx].points;

  std::vector<std::vector<SearchNode>> levels;
  levels.push_back({{target, -1, 0}});

  for (int depth = 1; depth <= opts.max_depth; ++depth) {
    std::vector<SearchNode> next;
    std::map<std::pair<long long, long long>, char> seen;
    const auto& prev = levels.back();
    for (int pi = 0; pi < static_cast<int>(prev.size()); ++pi) {
      for (const Preimage& pre : inverse_images(f, prev[pi].z)) {
        if (dist_to_set(pre.z, guard_pts) <= opts.post_critical_guard)
          continue;
        if (dist_to_set(pre.z, anchor_pts) <= kAnchorExclusion) continue;
        auto key = grid_key(pre.z, 1e-9);
        if (seen.count(key)) continue;
        seen.emplace(key, 1);
        next.push_back({pre.z, pi, pre.branch});
      }
    }
    std::sort(next.begin(), next.end(),
              [](const SearchNode& a, const SearchNode& b) {
                return lex_less(a.z, b.z);
              });
    if (static_cast<int>(next.size()) > kLevelCap) next.resize(kLevelCap);
    if (next.empty()) break;
    levels.push_back(std::move(next));

    if (required_length >= 0 && depth != required_length) continue;
    // Lex-first qualifying node at this depth, if any.
    for (int ni = 0; ni < static_cast<int>(levels[depth].size()); ++ni) {
      const SearchNode& node = levels[depth][ni];
      if (dist_to_set(node.z, source_orbit) > neighborhood_radius) continue;

      Bridge b;
      b.target_anchor = target_idx;
      b.source_anchor = source_idx;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < source_orbit.size(); ++k) {
        double d = std::abs(node.z - source_orbit[k]);
        if (d < best) {
          best = d;
          b.source_point = static_cast<int>(k);
        }
      }
      if (required_source >= 0 && b.source_point != required_source) continue;
      int idx = ni;
      for (int d = depth; d >= 1; --d) {
        b.points.push_back(levels[d][idx].z);
        b.branches.push_back(levels[d][idx].branch);
        idx = levels[d][idx].parent;
      }
      return b;  // points run y_0 ... y_{s-1}; f(y_{s-1}) = target
    }
    if (required_length >= 0) break;  // only the prescribed depth qualifies
  }
  throw BridgeNotFoundError(
      "no bridge from anchor " + std::to_string(source_idx) + " to anchor " +
      std::to_string(target_idx) + " within depth " +
      std::to_string(opts.max_depth) +
      (required_length >= 0
           ? " at required length " + std::to_string(required_length)
           : std::string()) +
      (required_source >= 0
           ? " starting at source point " + std::to_string(required_source)
           : std::string()) +
      "; try a larger neighborhood radius or deeper search");
}

// |Df| interval of one branch over a disc, via the disc's bounding box.
std::pair<double, double> deriv_interval(const Branch& br, Complex center,
                                         double radius) {
  Interval d = br.dpoly.eval(ComplexBox::point(center).inflated(radius)).abs();
  return {d.lo, d.hi};
}

}  // namespace

std::pair<BridgePlan, MarkovModel> build_Bn(
    const MapSpec& map, const std::vector<PeriodicOrbit>& anchors,
    double neighborhood_radius, const BnOptions& opts) {
  if (anchors.empty()) throw InputError("at least one anchor orbit required");
  if (!(neighborhood_radius > 0.0))
    throw InputError("neighborhood_radius must be positive");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (anchors[i].post_critical)
      throw InputError("anchor " + std::to_string(i) +
                       " is post-critical and cannot seed the construction");
    for (std::size_t k = i + 1; k < anchors.size(); ++k)
      if (std::abs(anchors[i].points[0] - anchors[k].points[0]) <=
          kAnchorExclusion)
        throw InputError("anchors " + std::to_string(i) + " and " +
                         std::to_string(k) + " are the same orbit");
  }

  std::vector<Complex> guard_pts =
      critical_orbit(map, kPostCriticalHorizon).points;
  std::vector<Complex> anchor_pts;
  for (const auto& a : anchors)
    anchor_pts.insert(anchor_pts.end(), a.points.begin(), a.points.end());

  BridgePlan plan;
  plan.anchors = anchors;
  plan.neighborhood_radius = neighborhood_radius;
  int na = static_cast<int>(anchors.size());
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) {
      if (i == j) continue;
      int want = -1;
      if (opts.required_lengths) {
        const auto& rl = *opts.required_lengths;
        if (i < static_cast<int>(rl.size()) &&
            j < static_cast<int>(rl[i].size()))
          want = rl[i][j];
      }
      int want_sp = -1;
      if (opts.required_source_points) {
        const auto& rs = *opts.required_source_points;
        if (i < static_cast<int>(rs.size()) &&
            j < static_cast<int>(rs[i].size()))
          want_sp = rs[i][j];
      }
      plan.bridges.push_back(bridge_search(map, i, j, anchors,
                                           neighborhood_radius, guard_pts,
                                           anchor_pts, opts, want, want_sp));
    }

  // --- model assembly ------------------------------------------------------
  MarkovModel m;
  double rad = opts.state_radius_factor * neighborhood_radius;
  std::vector<int> anchor_base(na, 0);
  for (int a = 0; a < na; ++a) {
    anchor_base[a] = m.state_count();
    for (std::size_t k = 0; k < anchors[a].points.size(); ++k)
      m.states.push_back({"a" + std::to_string(a) + "." + std::to_string(k),
                          Region::disc(anchors[a].points[k], rad)});
  }
  std::vector<int> bridge_base(plan.bridges.size(), 0);
  for (std::size_t bi = 0; bi < plan.bridges.size(); ++bi) {
    const Bridge& b = plan.bridges[bi];
    bridge_base[bi] = m.state_count();
    for (std::size_t l = 0; l < b.points.size(); ++l)
      m.states.push_back({"b" + std::to_string(b.source_anchor) + "-" +
                              std::to_string(b.target_anchor) + "." +
                              std::to_string(l),
                          Region::disc(b.points[l], rad)});
  }

  std::vector<MarkovTransition> core;  // cycle + chain edges
  auto push_edge = [&](int from, int to, Complex at, int branch) {
    auto [lo, hi] = deriv_interval(map.branches[branch], at, rad);
    if (!(lo > 0.0))
      throw SolverFailureError(
          "state radius too large: derivative lower bound not positive at " +
          m.states[from].id);
    core.push_back({from, to, branch, lo, hi});
  };
  for (int a = 0; a < na; ++a) {
    const auto& pts = anchors[a].points;
    int n = static_cast<int>(pts.size());
    for (int k = 0; k < n; ++k) {
      auto br = map.branch_at(pts[k]);
      if (!br)
        throw InputError("anchor " + std::to_string(a) +
                         " leaves the branch domains");
      push_edge(anchor_base[a] + k, anchor_base[a] + (k + 1) % n, pts[k], *br);
    }
  }
  for (std::size_t bi = 0; bi < plan.bridges.size(); ++bi) {
    const Bridge& b = plan.bridges[bi];
    int s = static_cast<int>(b.points.size());
    for (int l = 0; l < s; ++l) {
      int to = l + 1 < s ? bridge_base[bi] + l + 1
                         : anchor_base[b.target_anchor];
      push_edge(bridge_base[bi] + l, to, b.points[l], b.branches[l]);
    }
  }

  // Entry edges: whoever can step onto the source orbit point nearest a
  // bridge head can equally step onto the bridge head itself (same branch of
  // the same inverse selection). Computed against the core edge set only, so
  // the wiring is independent of bridge ordering and extending the anchor
  // list strictly grows the edge set (the nesting property).
  std::vector<MarkovTransition> entries;
  for (std::size_t bi = 0; bi < plan.bridges.size(); ++bi) {
    const Bridge& b = plan.bridges[bi];
    int entry_state = anchor_base[b.source_anchor] + b.source_point;
    for (const auto& t : core)
      if (t.to == entry_state)
        entries.push_back({t.from, bridge_base[bi], t.branch, t.dmin, t.dmax});
  }
  m.transitions = core;
  m.transitions.insert(m.transitions.end(), entries.begin(), entries.end());
  m.transitions = merge_transitions(std::move(m.transitions));

  m.map = map;
  m.expansion = verify_hyperbolic(m);
  return {std::move(plan), std::move(m)};
}

std::vector<std::vector<int>> bridge_lengths(const BridgePlan& plan) {
  int na = static_cast<int>(plan.anchors.size());
  std::vector<std::vector<int>> lengths(na, std::vector<int>(na, -1));
  for (const auto& b : plan.bridges)
    lengths[b.target_anchor][b.source_anchor] =
        static_cast<int>(b.points.size());
  return lengths;
}

std::vector<std::vector<int>> bridge_source_points(const BridgePlan& plan) {
  int na = static_cast<int>(plan.anchors.size());
  std::vector<std::vector<int>> points(na, std::vector<int>(na, -1));
  for (const auto& b : plan.bridges)
    points[b.target_anchor][b.source_anchor] = b.source_point;
  return points;
}

double density_gap(const MarkovModel& m, const JuliaApprox& julia) {
  double gap = 0.0;
  for (Complex z : julia.boundary) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : m.states) best = std::min(best, s.region.distance(z));
    gap = std::max(gap, best);
  }
  return gap;
}

nlohmann::ordered_json BridgePlan::to_json() const {
  nlohmann::ordered_json j;
  j["neighborhood_radius"] = neighborhood_radius;
  j["anchors"] = nlohmann::ordered_json::array();
  for (const auto& a : anchors) {
    nlohmann::ordered_json ja;
    ja["period"] = a.period;
    ja["word"] = a.word;
    ja["multiplier_abs"] = a.multiplier_abs;
    ja["points"] = nlohmann::ordered_json::array();
    for (Complex p : a.points) ja["points"].push_back({p.real(), p.imag()});
    j["anchors"].push_back(std::move(ja));
  }
  j["bridges"] = nlohmann::ordered_json::array();
  for (const auto& b : bridges) {
    nlohmann::ordered_json jb;
    jb["source_anchor"] = b.source_anchor;
    jb["target_anchor"] = b.target_anchor;
    jb["source_point"] = b.source_point;
    jb["length"] = b.points.size();
    jb["points"] = nlohmann::ordered_json::array();
    for (Complex p : b.points) jb["points"].push_back({p.real(), p.imag()});
    jb["branches"] = b.branches;
    j["bridges"].push_back(std::move(jb));
  }
  return j;
}

}  // namespace holorigid
