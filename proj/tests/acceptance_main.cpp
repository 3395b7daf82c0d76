// Acceptance harness: nine numbered end-to-end criteria, one printed line
// each. Every tolerance is pinned in this file next to the check it guards.
// Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "holorigid/config.hpp"
#include "holorigid/errors.hpp"
#include "holorigid/map_engine.hpp"
#include "holorigid/markov.hpp"
#include "holorigid/orbits.hpp"
#include "holorigid/rigidity.hpp"
#include "holorigid/thermo.hpp"

using namespace holorigid;
namespace fs = std::filesystem;

namespace {

struct Failure {
  std::string reason;
};

void require(bool ok, const std::string& reason) {
  if (!ok) throw Failure{reason};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Deterministic xorshift64 mapped to [-1, 1]; mirrors the randomized
// property trials in the unit suite.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed * 2685821657736338717ULL + 1) {}
  double next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return 2.0 * (static_cast<double>(s >> 11) / 9007199254740992.0) - 1.0;
  }
};

struct NamedModel {
  std::string name;
  MarkovModel m;
};

std::vector<NamedModel> certified_suite() {
  std::vector<NamedModel> suite;
  suite.push_back({"full(2,2)", make_full_shift({2.0, 2.0})});
  suite.push_back({"full(3,3)", make_full_shift({3.0, 3.0})});
  suite.push_back({"full(2,4)", make_full_shift({2.0, 4.0})});
  suite.push_back({"golden(2,3)", make_golden_mean(2.0, 3.0)});
  suite.push_back({"golden(2.5,3.5)", make_golden_mean(2.5, 3.5)});
  suite.push_back({"circle(16)", make_circle_doubling(16)});
  suite.push_back(
      {"grid z^2", build_AN(quadratic_map({0.0, 0.0}), 0.3, 0.08, 14)});
  return suite;
}

const double kLog2 = std::log(2.0);

// --- criterion bodies -------------------------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  MarkovModel m33 = make_full_shift({3.0, 3.0});
  auto [lo33, hi33] = bowen_dimension(m33, 12, 1e-8);
  double root33 = kLog2 / std::log(3.0);
  require(lo33 <= root33 && root33 <= hi33,
          "(3,3) bracket misses log2/log3");
  require(hi33 - lo33 <= 1e-6, "(3,3) bracket wider than 1e-6");

  MarkovModel m24 = make_full_shift({2.0, 4.0});
  auto [lo24, hi24] = bowen_dimension(m24, 12, 1e-8);
  double root24 = std::log(0.5 * (1.0 + std::sqrt(5.0))) / kLog2;
  require(lo24 <= root24 && root24 <= hi24,
          "(2,4) bracket misses log(golden)/log2");
  require(seconds_since(t0) < 5.0, "dimension oracle exceeded 5 s");
}

void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  for (const NamedModel& s : certified_suite()) {
    // midpoints over a fixed exponent grid: non-increasing and convex
    std::vector<double> mid;
    for (int k = 0; k <= 10; ++k) {
      auto [lo, hi] =
          pressure(s.m, PotentialSpec::log_deriv_scaled(0.15 * k), 12);
      mid.push_back(0.5 * (lo + hi));
    }
    for (std::size_t k = 1; k < mid.size(); ++k)
      require(mid[k] <= mid[k - 1] + 1e-12,
              s.name + ": midpoints not non-increasing");
    for (std::size_t k = 1; k + 1 < mid.size(); ++k)
      require(mid[k - 1] + mid[k + 1] - 2.0 * mid[k] >= -1e-9,
              s.name + ": midpoints not discretely convex");

    auto [p0lo, p0hi] = pressure(s.m, PotentialSpec::constant(0.0), 64);
    require(std::abs(0.5 * (p0lo + p0hi) - entropy(s.m)) <= 1e-8,
            s.name + ": P(0) differs from log spectral radius");

    // bracket signs: upper bound still nonnegative at the lower end, lower
    // bound nonpositive at the upper end; with monotone decreasing pressure
    // this pins a unique sign change
    auto [dlo, dhi] = bowen_dimension(s.m, 12, 1e-8);
    auto [ulo, uhi] =
        pressure(s.m, PotentialSpec::log_deriv_scaled(dlo), 12);
    auto [llo, lhi] =
        pressure(s.m, PotentialSpec::log_deriv_scaled(dhi), 12);
    require(uhi >= -1e-7, s.name + ": upper pressure negative at bracket start");
    require(llo <= 1e-7, s.name + ": lower pressure positive at bracket end");
  }
  require(seconds_since(t0) < 10.0, "pressure property suite exceeded 10 s");
}

void criterion_3() {
  ThermoReport r24 = dimension_report(make_full_shift({2.0, 4.0}), 12, 1e-8);
  require(std::abs(r24.entropy - kLog2) <= 1e-10, "(2,4) entropy is not log 2");
  require(std::abs(r24.lyapunov_max_entropy - 1.5 * kLog2) <= 1e-10,
          "(2,4) exponent is not (3/2) log 2");
  require(std::abs(r24.hd_max_entropy - 2.0 / 3.0) <= 1e-9,
          "(2,4) measure dimension is not 2/3");
  require(r24.bowen_dim.first - r24.hd_max_entropy > 0.02,
          "(2,4) dimension gap not strict");

  ThermoReport r33 = dimension_report(make_full_shift({3.0, 3.0}), 12, 1e-8);
  double mid33 = 0.5 * (r33.bowen_dim.first + r33.bowen_dim.second);
  require(std::abs(r33.hd_max_entropy - mid33) <= 1e-6,
          "(3,3) measure dimension does not equal the root");

  // the equality flag must agree with multiplier linearity across the suite
  // (cell models are judged against 3x their propagated interval half-width)
  for (const NamedModel& s : certified_suite()) {
    ThermoReport rep = dimension_report(s.m, 12, 1e-8);
    double spread = 0.0;
    for (const auto& t : s.m.transitions)
      spread = std::max(spread, std::log(t.dmax) - std::log(t.dmin));
    double tol_cm = std::max(1e-6, 1.5 * spread);
    RigidityVerdict v = constant_multiplier_test(model_spectrum(s.m, 6), tol_cm);
    require(rep.equality_case == (v.kind == "linear"),
            s.name + ": equality flag disagrees with multiplier linearity");
  }
}

void criterion_4() {
  std::vector<std::pair<int, double>> spec;
  for (const SpectrumEntry& e :
       multiplier_spectrum(quadratic_map({0.0, 0.0}), 6))
    spec.push_back({e.period, e.multiplier_abs});
  RigidityVerdict v = constant_multiplier_test(spec, 1e-8);
  require(v.kind == "linear", "z^2 spectrum not declared linear");
  require(v.lambda.has_value() && std::abs(*v.lambda - 2.0) <= 1e-8,
          "z^2 base is not 2 within 1e-8");

  for (Complex c : {Complex{-2.0, 0.0}, Complex{0.0, 1.0}}) {
    std::vector<std::pair<int, double>> sp;
    for (const SpectrumEntry& e : multiplier_spectrum(quadratic_map(c), 3))
      sp.push_back({e.period, e.multiplier_abs});
    RigidityVerdict w = constant_multiplier_test(sp, 1e-6);
    require(w.kind == "non_linear", "degenerate-family spectrum passed");
    require(w.witness.has_value() && !w.witness->word.empty(),
            "failing spectrum lacks an explicit witness");
  }
}

void criterion_5() {
  DegenerateFlags cheb = classify_degenerate(quadratic_map({-2.0, 0.0}));
  require(cheb.chebyshev, "z^2-2 not flagged chebyshev");
  DegenerateFlags qi = classify_degenerate(quadratic_map({0.0, 1.0}));
  require(!qi.chebyshev && !qi.power_like, "z^2+i wrongly flagged");

  fs::path dir = fs::temp_directory_path() /
                 ("holorigid_acc5_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string cmd = "cd '" + dir.string() + "' && '" + HOLORIGID_CLI +
                    "' compare '" + HOLORIGID_DATA_DIR "/map_chebyshev.json' '" +
                    HOLORIGID_DATA_DIR "/map_quadratic_i.json'" +
                    " > log.txt 2>&1";
  int status = std::system(cmd.c_str());
  fs::remove_all(dir);
  require(status != -1 && WEXITSTATUS(status) == 4,
          "compare with z^2-2 did not exit with the degenerate code");
}

void criterion_6() {
  MarkovModel m = make_full_shift({2.0, 4.0});
  const int E = static_cast<int>(m.transitions.size());
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng(trial + 1);
    std::vector<double> s = {rng.next(), rng.next()};
    std::vector<double> base(E), shifted(E);
    for (int e = 0; e < E; ++e) base[e] = rng.next();
    for (int e = 0; e < E; ++e)
      shifted[e] = base[e] + s[m.transitions[e].to] - s[m.transitions[e].from];
    RigidityVerdict v =
        livshitz_test(m, PotentialSpec::edge_weights(base),
                      PotentialSpec::edge_weights(shifted), 6, 1e-9);
    require(v.kind == "cohomologous" && v.residual <= 1e-9,
            "coboundary trial " + std::to_string(trial) + " not cohomologous");
  }
  RigidityVerdict v =
      livshitz_test(m, PotentialSpec::log_deriv_scaled(1.0),
                    PotentialSpec::constant(0.0), 6, 1e-6);
  require(v.kind == "not_cohomologous",
          "(2,4) log potential vs constant not rejected");
  require(v.residual >= kLog2 - 1e-9, "witness defect below log 2");
  require(v.witness.has_value(), "rejection lacks a witness word");
}

void criterion_7() {
  MapSpec f = quadratic_map({0.0, 0.0});
  std::vector<PeriodicOrbit> anchors = select_anchor_orbits(f);
  require(anchors.size() == 2 && anchors[0].period == 1 &&
              anchors[1].period == 2,
          "z^2 anchors are not periods {1, 2}");
  auto [plan, m] = build_Bn(f, anchors, 0.15);  // default search depth 40
  require(plan.bridges.size() == 2, "not all bridges were found");
  require(is_transitive(m), "anchored model is not transitive");
  require(m.expansion && m.expansion->kappa >= 1.5,
          "expansion constant below 1.5");

  // word-language nesting: the single-anchor model embeds edge by edge
  auto [plan1, m1] = build_Bn(f, {anchors[0]}, 0.15);
  for (const auto& t1 : m1.transitions) {
    const std::string from = m1.states[t1.from].id;
    const std::string to = m1.states[t1.to].id;
    bool found = false;
    for (const auto& t2 : m.transitions)
      if (m.states[t2.from].id == from && m.states[t2.to].id == to &&
          t2.branch == t1.branch)
        found = true;
    require(found, "edge " + from + "->" + to + " missing from the larger model");
  }
}

void criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  MapSpec f = quadratic_map({0.0, 1.0});
  MapSpec g = affine_conjugate(f, {2.0, 0.0}, {0.0, 0.0});
  RigidityReport conj = rigidity_verdict(f, g, 6, 1e-6);
  require(conj.certificate == "CONFORMAL_CONJUGACY_CRITERIA_MET",
          "conjugate pair not certified");
  require(conj.affine_f.kind == "non_linear" &&
              conj.affine_g.kind == "non_linear",
          "conjugate pair models not both non-linear");
  require(conj.comparison.residual <= 1e-6,
          "conjugate pair divergence above the accepted slack");

  MapSpec h = quadratic_map({-1.5436890126920763, 0.0});
  RigidityReport mis = rigidity_verdict(f, h, 6, 1e-6);
  require(mis.comparison.kind == "multipliers_diverge",
          "distinct parameters did not diverge");
  require(mis.certificate == "MULTIPLIERS_DIVERGE",
          "divergence not certified");
  require(seconds_since(t0) < 60.0, "end-to-end pipeline exceeded 60 s");
}

void criterion_9() {
  fs::path root = fs::temp_directory_path() /
                  ("holorigid_acc9_" + std::to_string(::getpid()));
  auto run_all = [&](const std::string& threads) {
    fs::path dir = root / ("t" + threads);
    fs::create_directories(dir);
    std::string base = "cd '" + dir.string() + "' && HOLORIGID_THREADS=" +
                       threads + " '" + HOLORIGID_CLI + "' ";
    std::string tail = " > /dev/null 2>&1";
    // the distinct pair exits 1 (negative verdict) while still writing all
    // artifacts, so both 0 and 1 are successful pipeline completions here
    int status = std::system((base + "full '" HOLORIGID_DATA_DIR
                                     "/map_quadratic_i.json' '"
                                     HOLORIGID_DATA_DIR
                                     "/map_misiurewicz_real.json' "
                                     "--out pipeline" +
                              tail)
                                 .c_str());
    require(status != -1 && WEXITSTATUS(status) <= 1,
            "pipeline run failed under HOLORIGID_THREADS=" + threads);
    require(std::system((base + "build-an '" HOLORIGID_DATA_DIR
                                "/map_squaring.json' --cell 0.08 --out grid" +
                         tail)
                            .c_str()) == 0,
            "grid run failed under HOLORIGID_THREADS=" + threads);
    return dir;
  };
  fs::path d1 = run_all("1");
  fs::path d4 = run_all("4");

  std::vector<std::string> rels;
  for (const auto& entry : fs::recursive_directory_iterator(d1))
    if (entry.is_regular_file())
      rels.push_back(fs::relative(entry.path(), d1).string());
  std::sort(rels.begin(), rels.end());
  require(!rels.empty(), "no output files produced");
  for (const std::string& rel : rels) {
    std::ifstream a(d1 / rel, std::ios::binary);
    std::ifstream b(d4 / rel, std::ios::binary);
    require(a.good() && b.good(), rel + " missing in one of the runs");
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    require(sa.str() == sb.str(), rel + " differs between thread counts");
  }
  fs::remove_all(root);
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string summary;
    std::function<void()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "two-branch dimension brackets hit the analytic roots", criterion_1},
      {2, "pressure is decreasing, convex, spectral at 0, single-crossing",
       criterion_2},
      {3, "dimension gap, equality case, and multiplier linearity agree",
       criterion_3},
      {4, "multiplier spectra: z^2 linear, z^2-2 and z^2+i rejected",
       criterion_4},
      {5, "degenerate gate: chebyshev flagged and refused by compare",
       criterion_5},
      {6, "orbit-sum identity: coboundaries accepted, log potential rejected",
       criterion_6},
      {7, "anchored model: bridges, transitivity, expansion, nesting",
       criterion_7},
      {8, "end-to-end verdicts: conjugate pair met, distinct pair diverges",
       criterion_8},
      {9, "byte-identical artifacts across thread counts", criterion_9},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    try {
      c.body();
      std::printf("criterion %d: PASS - %s\n", c.number, c.summary.c_str());
    } catch (const Failure& f) {
      ++failures;
      std::printf("criterion %d: FAIL - %s\n", c.number, f.reason.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("criterion %d: FAIL - unexpected error: %s\n", c.number,
                  e.what());
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
