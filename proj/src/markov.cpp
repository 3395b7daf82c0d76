#include "holorigid/markov.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "holorigid/errors.hpp"
#include "holorigid/parallel.hpp"

namespace holorigid {

namespace {

constexpr long long kWordBudget = 2'000'000;  // pointed closed-walk cap
constexpr double kShadowSlack = 1.0;  // region-size multiples a shadow may stray

double region_size(const Region& r) {
  if (r.kind() == Region::Kind::disc) return r.radius();
  ComplexBox b = r.bbox();
  return 0.5 * std::hypot(b.re.width(), b.im.width());
}

}  // namespace

std::vector<std::vector<int>> MarkovModel::out_edges() const {
  std::vector<std::vector<int>> out(states.size());
  for (std::size_t e = 0; e < transitions.size(); ++e)
    out[transitions[e].from].push_back(static_cast<int>(e));
  return out;
}

int MarkovModel::state_index(const std::string& id) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<MarkovTransition> merge_transitions(
    std::vector<MarkovTransition> ts) {
  std::sort(ts.begin(), ts.end(),
            [](const MarkovTransition& a, const MarkovTransition& b) {
              if (a.from != b.from) return a.from < b.from;
              if (a.to != b.to) return a.to < b.to;
              return a.branch < b.branch;
            });
  std::vector<MarkovTransition> out;
  for (const auto& t : ts) {
    if (!out.empty() && out.back().from == t.from && out.back().to == t.to) {
      out.back().dmin = std::min(out.back().dmin, t.dmin);
      out.back().dmax = std::max(out.back().dmax, t.dmax);
    } else {
      out.push_back(t);
    }
  }
  return out;
}

nlohmann::ordered_json MarkovModel::to_json() const {
  nlohmann::ordered_json j;
  j["states"] = nlohmann::ordered_json::array();
  for (const auto& s : states) {
    nlohmann::ordered_json js;
    js["id"] = s.id;
    js["region"] = s.region.to_json();
    j["states"].push_back(std::move(js));
  }
  j["transitions"] = nlohmann::ordered_json::array();
  for (const auto& t : transitions)
    j["transitions"].push_back({t.from, t.to, t.branch, t.dmin, t.dmax});
  if (expansion) {
    j["expansion"] = {{"c", expansion->c}, {"kappa", expansion->kappa}};
  }
  if (map) j["map"] = map_to_json(*map);
  return j;
}

MarkovModel MarkovModel::from_json(const nlohmann::json& j) {
  MarkovModel m;
  if (!j.is_object() || !j.contains("states") || !j.contains("transitions"))
    throw InputError("model: expected object with 'states' and 'transitions'");
  if (!j["states"].is_array() || j["states"].empty())
    throw InputError("model.states: expected non-empty array");
  for (std::size_t i = 0; i < j["states"].size(); ++i) {
    const auto& js = j["states"][i];
    std::string path = "model.states[" + std::to_string(i) + "]";
    if (!js.is_object() || !js.contains("id") || !js.contains("region"))
      throw InputError(path + ": expected object with 'id' and 'region'");
    if (!js["id"].is_string()) throw InputError(path + ".id: expected string");
    m.states.push_back(
        {js["id"].get<std::string>(),
         Region::from_json(js["region"], path + ".region")});
  }
  for (std::size_t i = 0; i < m.states.size(); ++i)
    for (std::size_t k = i + 1; k < m.states.size(); ++k)
      if (m.states[i].id == m.states[k].id)
        throw InputError("model.states: duplicate id '" + m.states[i].id + "'");
  if (!j["transitions"].is_array())
    throw InputError("model.transitions: expected array");
  int n = m.state_count();
  for (std::size_t i = 0; i < j["transitions"].size(); ++i) {
    const auto& jt = j["transitions"][i];
    std::string path = "model.transitions[" + std::to_string(i) + "]";
    if (!jt.is_array() || jt.size() != 5)
      throw InputError(path + ": expected [from, to, branch, dmin, dmax]");
    for (int k = 0; k < 3; ++k)
      if (!jt[k].is_number_integer())
        throw InputError(path + ": first three entries must be integers");
    MarkovTransition t;
    t.from = jt[0].get<int>();
    t.to = jt[1].get<int>();
    t.branch = jt[2].get<int>();
    t.dmin = jt[3].get<double>();
    t.dmax = jt[4].get<double>();
    if (t.from < 0 || t.from >= n || t.to < 0 || t.to >= n)
      throw InputError(path + ": state index out of range");
    if (t.branch < 0) throw InputError(path + ": negative branch label");
    if (!(t.dmin > 0.0)) throw InputError(path + ": dmin must be positive");
    if (!(t.dmin <= t.dmax)) throw InputError(path + ": dmin must be <= dmax");
    m.transitions.push_back(t);
  }
  m.transitions = merge_transitions(std::move(m.transitions));
  if (j.contains("expansion")) {
    const auto& je = j["expansion"];
    if (!je.is_object() || !je.contains("c") || !je.contains("kappa"))
      throw InputError("model.expansion: expected object with 'c' and 'kappa'");
    Expansion e;
    e.c = je["c"].get<double>();
    e.kappa = je["kappa"].get<double>();
    if (!(e.c > 0.0) || !(e.kappa > 1.0))
      throw InputError("model.expansion: requires c > 0 and kappa > 1");
    m.expansion = e;
  }
  if (j.contains("map")) m.map = map_from_json(j["map"]);
  return m;
}

MarkovModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("model file " + path + ": " + e.what());
  }
  return MarkovModel::from_json(j);
}

void save_model(const MarkovModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file: " + path);
  out << m.to_json().dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Grid model over the off-critical Julia approximation
// ---------------------------------------------------------------------------

namespace {

struct CellKey {
  long long ix, iy;
  bool operator<(const CellKey& o) const {
    return ix != o.ix ? ix < o.ix : iy < o.iy;
  }
};

CellKey cell_of(Complex z, double h) {
  return {static_cast<long long>(std::floor(z.real() / h)),
          static_cast<long long>(std::floor(z.imag() / h))};
}

Region cell_region(CellKey k, double h) {
  return Region::rect(k.ix * h, k.iy * h, (k.ix + 1) * h, (k.iy + 1) * h);
}

// Iteratively removes states with no outgoing or no incoming transition and
// reindexes. Idempotent once it reaches the fixed point.
void prune_model(MarkovModel& m) {
  std::vector<char> alive(m.states.size(), 1);
  for (;;) {
    std::vector<int> outdeg(m.states.size(), 0), indeg(m.states.size(), 0);
    for (const auto& t : m.transitions)
      if (alive[t.from] && alive[t.to]) {
        ++outdeg[t.from];
        ++indeg[t.to];
      }
    bool changed = false;
    for (std::size_t i = 0; i < m.states.size(); ++i)
      if (alive[i] && (outdeg[i] == 0 || indeg[i] == 0)) {
        alive[i] = 0;
        changed = true;
      }
    if (!changed) break;
  }
  std::vector<int> remap(m.states.size(), -1);
  std::vector<MarkovState> kept;
  for (std::size_t i = 0; i < m.states.size(); ++i)
    if (alive[i]) {
      remap[i] = static_cast<int>(kept.size());
      kept.push_back(std::move(m.states[i]));
    }
  std::vector<MarkovTransition> ts;
  for (auto t : m.transitions)
    if (alive[t.from] && alive[t.to]) {
      t.from = remap[t.from];
      t.to = remap[t.to];
      ts.push_back(t);
    }
  m.states = std::move(kept);
  m.transitions = std::move(ts);
}

}  // namespace

MarkovModel build_AN(const MapSpec& map, double critical_radius,
                     double cell_size, int depth) {
  if (!(critical_radius > 0.0))
    throw InputError("critical_radius must be positive");
  if (!(cell_size > 0.0)) throw InputError("cell_size must be positive");
  if (depth < 1) throw InputError("depth must be >= 1");

  // Sample resolution: the sample-cloud cover radius must sit well below the
  // cell size or image enclosures degenerate.
  ComplexBox bb = map.branches[0].domain.bbox();
  for (const auto& br : map.branches) {
    ComplexBox b = br.domain.bbox();
    bb.re = Interval(std::min(bb.re.lo, b.re.lo), std::max(bb.re.hi, b.re.hi));
    bb.im = Interval(std::min(bb.im.lo, b.im.lo), std::max(bb.im.hi, b.im.hi));
  }
  double span = std::max(bb.re.width(), bb.im.width());
  int res = static_cast<int>(std::ceil(4.0 * span / cell_size)) + 1;
  res = std::clamp(res, 201, 1401);
  if (res % 2 == 0) ++res;  // keep a grid line on each axis of symmetry

  JuliaApprox julia = julia_approx(map, depth, res);
  if (julia.boundary.empty())
    throw EmptyModelError(
        "julia approximation has no boundary samples at this depth");
  double rho = julia.spacing * std::sqrt(2.0);  // sample-cloud cover radius

  Region ncrit = Region::disc(map.critical_point, critical_radius);
  std::map<CellKey, std::vector<Complex>> cells;
  for (Complex z : julia.boundary) cells[cell_of(z, cell_size)].push_back(z);
  for (auto it = cells.begin(); it != cells.end();)
    it = cell_region(it->first, cell_size).intersects(ncrit) ? cells.erase(it)
                                                             : std::next(it);
  if (cells.empty())
    throw EmptyModelError(
        "critical neighborhood swallows the entire julia approximation");

  MarkovModel m;
  std::map<CellKey, int> index;
  for (const auto& [key, samples] : cells) {
    index.emplace(key, m.state_count());
    m.states.push_back({"c" + std::to_string(key.ix) + "_" +
                            std::to_string(key.iy),
                        cell_region(key, cell_size)});
  }

  std::vector<const std::vector<Complex>*> cloud(m.states.size());
  std::vector<CellKey> keys(m.states.size());
  for (const auto& [key, idx] : index) {
    cloud[idx] = &cells[key];
    keys[idx] = key;
  }

  std::vector<std::vector<MarkovTransition>> partial(m.states.size());
  std::vector<char> too_coarse(m.states.size(), 0);
  parallel_for(m.states.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t b = 0; b < map.branches.size(); ++b) {
        const Branch& br = map.branches[b];
        std::vector<Complex> sub;
        for (Complex s : *cloud[i])
          if (br.domain.contains(s)) sub.push_back(s);
        if (sub.empty()) continue;

        ComplexBox box = ComplexBox::point(sub[0]);
        for (Complex s : sub) {
          box.re = Interval(std::min(box.re.lo, s.real()),
                            std::max(box.re.hi, s.real()));
          box.im = Interval(std::min(box.im.lo, s.imag()),
                            std::max(box.im.hi, s.imag()));
        }
        box = box.inflated(rho);
        // First-derivative bound propagates the cover radius through the
        // image; second-derivative bound widens sampled |Df| values to hold
        // on the whole represented set.
        double lip1 = br.dpoly.eval(box).abs().hi;
        double lip2 = br.dpoly.derivative().eval(box).abs().hi;
        double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
        for (Complex s : sub) {
          double d = std::abs(br.dpoly.eval(s));
          dmin = std::min(dmin, d);
          dmax = std::max(dmax, d);
        }
        dmin -= lip2 * rho;
        dmax += lip2 * rho;
        if (!(dmin > 0.0)) {  // reported after the parallel region joins
          too_coarse[i] = 1;
          continue;
        }

        double reach = lip1 * rho + rho;
        int spread = static_cast<int>(std::ceil(reach / cell_size)) + 1;
        std::set<int> targets;
        for (Complex s : sub) {
          Complex y = br.poly.eval(s);
          CellKey cy = cell_of(y, cell_size);
          for (long long dx = -spread; dx <= spread; ++dx)
            for (long long dy = -spread; dy <= spread; ++dy) {
              auto it = index.find({cy.ix + dx, cy.iy + dy});
              if (it == index.end() || targets.count(it->second)) continue;
              for (Complex t : *cloud[it->second])
                if (std::abs(y - t) <= reach) {
                  targets.insert(it->second);
                  break;
                }
            }
        }
        for (int j : targets)
          partial[i].push_back(
              {static_cast<int>(i), j, static_cast<int>(b), dmin, dmax});
      }
    }
  });
  for (std::size_t i = 0; i < too_coarse.size(); ++i)
    if (too_coarse[i])
      throw SolverFailureError(
          "cell size too coarse: derivative lower bound not positive on "
          "cell " +
          m.states[i].id);
  for (auto& p : partial)
    m.transitions.insert(m.transitions.end(), p.begin(), p.end());
  m.transitions = merge_transitions(std::move(m.transitions));

  prune_model(m);
  if (m.states.empty())
    throw EmptyModelError("no recurrent cells survive off the critical "
                          "neighborhood at this resolution");
  m.map = map;
  m.expansion = verify_hyperbolic(m);
  return m;
}

// ---------------------------------------------------------------------------
// Expansion certificate and transitivity
// ---------------------------------------------------------------------------

namespace {

// Strongly connected components, iterative Tarjan; returns component id per
// state (ids in reverse topological order, but only membership is used).
std::vector<int> scc_ids(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<int> comp(n, -1), low(n, 0), num(n, -1), stack, call;
  std::vector<std::size_t> edge_pos(n, 0);
  std::vector<char> on_stack(n, 0);
  int counter = 0, comps = 0;
  for (int root = 0; root < n; ++root) {
    if (num[root] >= 0) continue;
    call.push_back(root);
    while (!call.empty()) {
      int v = call.back();
      if (num[v] < 0) {
        num[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (edge_pos[v] < adj[v].size()) {
        int w = adj[v][edge_pos[v]];
        if (num[w] < 0) {
          ++edge_pos[v];
          call.push_back(w);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], num[w]);
        ++edge_pos[v];
      }
      if (descended) continue;
      if (low[v] == num[v]) {
        for (;;) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
          if (w == v) break;
        }
        ++comps;
      }
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
    }
  }
  return comp;
}

}  // namespace

std::optional<Expansion> verify_hyperbolic(const MarkovModel& m,
                                           int max_cycle_len) {
  (void)max_cycle_len;  // the cycle-mean bound covers all lengths at once
  int n = m.state_count();
  if (n == 0 || m.transitions.empty()) return std::nullopt;

  std::vector<std::vector<int>> adj(n);
  for (const auto& t : m.transitions) adj[t.from].push_back(t.to);
  std::vector<int> comp = scc_ids(n, adj);

  const double inf = std::numeric_limits<double>::infinity();
  double min_mean = inf;
  int comps = *std::max_element(comp.begin(), comp.end()) + 1;
  for (int c = 0; c < comps; ++c) {
    std::vector<int> verts;
    for (int v = 0; v < n; ++v)
      if (comp[v] == c) verts.push_back(v);
    std::vector<std::pair<int, std::pair<int, double>>> edges;  // u -> (v, w)
    std::vector<int> local(n, -1);
    for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = (int)i;
    for (const auto& t : m.transitions)
      if (comp[t.from] == c && comp[t.to] == c)
        edges.push_back({local[t.from], {local[t.to], std::log(t.dmin)}});
    if (edges.empty()) continue;

    // Karp minimum cycle mean within this component.
    int k = static_cast<int>(verts.size());
    std::vector<std::vector<double>> F(k + 1, std::vector<double>(k, inf));
    F[0][0] = 0.0;
    for (int step = 1; step <= k; ++step)
      for (const auto& [u, vw] : edges)
        if (F[step - 1][u] < inf)
          F[step][vw.first] =
              std::min(F[step][vw.first], F[step - 1][u] + vw.second);
    double mu = inf;
    for (int v = 0; v < k; ++v) {
      if (F[k][v] == inf) continue;
      double worst = -inf;
      for (int s = 0; s < k; ++s)
        if (F[s][v] < inf)
          worst = std::max(worst, (F[k][v] - F[s][v]) / (k - s));
      mu = std::min(mu, worst);
    }
    min_mean = std::min(min_mean, mu);
  }
  if (min_mean == inf) return std::nullopt;  // acyclic graph: nothing to certify
  double kappa = std::exp(min_mean);
  if (!(kappa > 1.0)) return std::nullopt;

  // Transient deficit: minimum over all walks of sum(log dmin - log kappa).
  // Walks longer than the state count contain cycles of non-negative deficit,
  // so the DP horizon n suffices; a 1e-12 slack absorbs rounding drift.
  std::vector<double> dp(n, 0.0);
  double worst = 0.0;
  for (int step = 0; step < n; ++step) {
    std::vector<double> next(n, inf);
    for (const auto& t : m.transitions)
      next[t.to] = std::min(next[t.to],
                            dp[t.from] + std::log(t.dmin) - min_mean);
    dp = std::move(next);
    for (double v : dp)
      if (v < worst) worst = v;
  }
  return Expansion{std::exp(worst - 1e-12), kappa};
}

bool is_transitive(const MarkovModel& m) {
  int n = m.state_count();
  if (n == 0) return false;
  std::vector<std::vector<int>> fwd(n), bwd(n);
  for (const auto& t : m.transitions) {
    fwd[t.from].push_back(t.to);
    bwd[t.to].push_back(t.from);
  }
  for (int v = 0; v < n; ++v)
    if (fwd[v].empty() || bwd[v].empty()) return false;
  auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(bwd);
}

// ---------------------------------------------------------------------------
// Periodic words
// ---------------------------------------------------------------------------

namespace {

// Lexicographically minimal rotation (naive quadratic scan; words are short).
std::vector<int> min_rotation(const std::vector<int>& v) {
  std::size_t n = v.size(), best = 0;
  for (std::size_t s = 1; s < n; ++s)
    for (std::size_t k = 0; k < n; ++k) {
      int a = v[(s + k) % n], b = v[(best + k) % n];
      if (a != b) {
        if (a < b) best = s;
        break;
      }
    }
  std::vector<int> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = v[(best + k) % n];
  return out;
}

}  // namespace

std::vector<PeriodicWord> periodic_words(const MarkovModel& m, int n) {
  if (n < 1) throw InputError("periodic word length must be >= 1");
  auto out = m.out_edges();
  int ns = m.state_count();

  std::map<std::vector<int>, PeriodicWord> canon;
  long long pointed = 0;
  std::vector<int> path;  // transition indices
  for (int start = 0; start < ns; ++start) {
    // reach_back[k][v]: v can reach `start` in exactly k steps.
    std::vector<std::vector<char>> reach(n + 1, std::vector<char>(ns, 0));
    reach[0][start] = 1;
    for (int k = 1; k <= n; ++k)
      for (const auto& t : m.transitions)
        if (reach[k - 1][t.to]) reach[k][t.from] = 1;

    std::function<void(int, int)> dfs = [&](int state, int depth) {
      if (depth == n) {
        if (state != start) return;
        if (++pointed > kWordBudget)
          throw InputError("periodic-word enumeration exceeds the budget of " +
                           std::to_string(kWordBudget) + " pointed walks");
        std::vector<int> key = min_rotation(path);
        auto [it, fresh] = canon.try_emplace(key);
        if (fresh) {
          PeriodicWord w;
          w.edges = key;
          w.multiplicity = 0;
          w.dmin_product = 1.0;
          w.dmax_product = 1.0;
          for (int e : key) {
            w.states.push_back(m.transitions[e].from);
            w.dmin_product *= m.transitions[e].dmin;
            w.dmax_product *= m.transitions[e].dmax;
          }
          it->second = std::move(w);
        }
        ++it->second.multiplicity;
        return;
      }
      for (int e : out[state]) {
        if (!reach[n - depth - 1][m.transitions[e].to]) continue;
        path.push_back(e);
        dfs(m.transitions[e].to, depth + 1);
        path.pop_back();
      }
    };
    dfs(start, 0);
  }

  std::vector<PeriodicWord> words;
  words.reserve(canon.size());
  for (auto& [key, w] : canon) words.push_back(std::move(w));
  return words;
}

std::string PeriodicWord::label(const MarkovModel& m) const {
  std::string s;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (k) s += '-';
    s += m.states[states[k]].id;
  }
  return s;
}

std::vector<std::pair<int, double>> model_spectrum(const MarkovModel& m,
                                                   int max_period) {
  if (max_period < 1) throw InputError("max_period must be >= 1");
  std::vector<std::pair<int, double>> out;
  for (int p = 1; p <= max_period; ++p)
    for (const auto& w : periodic_words(m, p)) {
      // Skip powers of shorter words: they repeat an already-listed orbit.
      bool primitive = true;
      for (int q = 1; q < p; ++q) {
        if (p % q) continue;
        bool repeats = true;
        for (int k = 0; k < p && repeats; ++k)
          repeats = w.edges[k] == w.edges[(k + q) % p];
        if (repeats) {
          primitive = false;
          break;
        }
      }
      if (primitive)
        out.push_back({p, std::sqrt(w.dmin_product * w.dmax_product)});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Shadowing
// ---------------------------------------------------------------------------

namespace {

// All algebraic preimages of y under one branch, ignoring domain membership
// (transient backward iterates may wander before contraction sets in).
std::vector<Complex> algebraic_preimages(const Branch& br, Complex y) {
  if (!br.critical) {
    const auto& c = br.poly.coeffs();
    return {(y - c[0]) / c[1]};
  }
  std::vector<Complex> out;
  Complex r = (y - br.base) / br.lead;
  double mag = std::pow(std::abs(r), 1.0 / br.degree);
  double ang0 = std::arg(r) / br.degree;
  for (int s = 0; s < br.degree; ++s)
    out.push_back(br.crit_point +
                  std::polar(mag, ang0 + 2.0 * M_PI * s / br.degree));
  return out;
}

}  // namespace

std::optional<std::vector<Complex>> shadow_cycle(const MarkovModel& m,
                                                 const PeriodicWord& w) {
  if (!m.map) return std::nullopt;
  const MapSpec& f = *m.map;
  int n = w.length();

  Complex z = m.states[w.states[0]].region.center();
  for (int loop = 0; loop < 200; ++loop) {
    Complex prev = z;
    for (int k = n - 1; k >= 0; --k) {
      const MarkovTransition& t = m.transitions[w.edges[k]];
      if (t.branch >= static_cast<int>(f.branches.size())) return std::nullopt;
      const Region& home = m.states[t.from].region;
      Complex best{0.0, 0.0};
      double best_d = std::numeric_limits<double>::infinity();
      for (Complex cand : algebraic_preimages(f.branches[t.branch], z)) {
        double d = home.distance(cand);
        if (d < best_d || (d == best_d && lex_less(cand, best))) {
          best_d = d;
          best = cand;
        }
      }
      z = best;
    }
    if (std::abs(z - prev) <= 1e-13 * (1.0 + std::abs(z))) break;
  }

  // Newton polish on the branch sequence, then validate against regions.
  for (int it = 0; it < 40; ++it) {
    Complex v = z, der(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
      const Branch& br = f.branches[m.transitions[w.edges[k]].branch];
      der *= br.dpoly.eval(v);
      v = br.poly.eval(v);
    }
    Complex df = der - 1.0;
    if (std::abs(df) < 1e-18) break;
    Complex step = (v - z) / df;
    z -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z))) break;
  }

  std::vector<Complex> pts(n);
  Complex v = z;
  for (int k = 0; k < n; ++k) {
    const Region& home = m.states[m.transitions[w.edges[k]].from].region;
    if (home.distance(v) > kShadowSlack * region_size(home))
      return std::nullopt;
    pts[k] = v;
    v = f.branches[m.transitions[w.edges[k]].branch].poly.eval(v);
  }
  if (std::abs(v - z) > 1e-9 * (1.0 + std::abs(z))) return std::nullopt;
  return pts;
}

// ---------------------------------------------------------------------------
// Synthetic models
// ---------------------------------------------------------------------------

MarkovModel make_full_shift(const std::vector<double>& derivs) {
  if (derivs.empty()) throw InputError("full shift needs at least one symbol");
  MarkovModel m;
  int k = static_cast<int>(derivs.size());
  for (int i = 0; i < k; ++i) {
    if (!(derivs[i] > 0.0)) throw InputError("derivatives must be positive");
    m.states.push_back({"s" + std::to_string(i),
                        Region::disc({static_cast<double>(i), 0.0}, 0.25)});
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      m.transitions.push_back({i, j, i, derivs[i], derivs[i]});
  m.transitions = merge_transitions(std::move(m.transitions));
  m.expansion = verify_hyperbolic(m);
  return m;
}

MarkovModel make_golden_mean(double d0, double d1) {
  if (!(d0 > 0.0) || !(d1 > 0.0))
    throw InputError("derivatives must be positive");
  MarkovModel m;
  m.states.push_back({"s0", Region::disc({0.0, 0.0}, 0.25)});
  m.states.push_back({"s1", Region::disc({1.0, 0.0}, 0.25)});
  m.transitions = merge_transitions(
      {{0, 0, 0, d0, d0}, {0, 1, 0, d0, d0}, {1, 0, 1, d1, d1}});
  m.expansion = verify_hyperbolic(m);
  return m;
}

MarkovModel make_cycle(int n, double deriv) {
  if (n < 1) throw InputError("cycle length must be >= 1");
  if (!(deriv > 0.0)) throw InputError("derivatives must be positive");
  MarkovModel m;
  for (int i = 0; i < n; ++i) {
    double th = 2.0 * M_PI * i / n;
    m.states.push_back({"s" + std::to_string(i),
                        Region::disc({std::cos(th), std::sin(th)}, 0.3)});
    m.transitions.push_back({i, (i + 1) % n, 0, deriv, deriv});
  }
  m.transitions = merge_transitions(std::move(m.transitions));
  m.expansion = verify_hyperbolic(m);
  return m;
}

MarkovModel make_circle_doubling(int arcs) {
  if (arcs < 8) throw InputError("circle doubling needs at least 8 arcs");
  MarkovModel m;
  double slack = M_PI / arcs;
  for (int i = 0; i < arcs; ++i) {
    double mid = 2.0 * M_PI * (i + 0.5) / arcs;
    m.states.push_back({"arc" + std::to_string(i),
                        Region::disc({std::cos(mid), std::sin(mid)}, slack)});
  }
  for (int i = 0; i < arcs; ++i) {
    m.transitions.push_back(
        {i, (2 * i) % arcs, 0, 2.0 * (1.0 - slack), 2.0 * (1.0 + slack)});
    m.transitions.push_back(
        {i, (2 * i + 1) % arcs, 0, 2.0 * (1.0 - slack), 2.0 * (1.0 + slack)});
  }
  m.transitions = merge_transitions(std::move(m.transitions));
  m.expansion = verify_hyperbolic(m);
  return m;
}

}  // namespace holorigid
