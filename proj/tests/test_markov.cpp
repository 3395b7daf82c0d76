#include "holorigid/markov.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "holorigid/errors.hpp"

using namespace holorigid;

namespace {

// Orbits of the squaring map used as anchors: the repelling fixed point z = 1
// and the period-2 cycle at the primitive cube roots of unity.
std::vector<PeriodicOrbit> squaring_anchors() {
  MapSpec f = quadratic_map({0.0, 0.0});
  std::vector<PeriodicOrbit> anchors;
  for (const auto& o : find_periodic(f, 1))
    if (!o.post_critical) anchors.push_back(o);
  REQUIRE(anchors.size() == 1);
  auto period2 = find_periodic(f, 2);
  REQUIRE(period2.size() == 1);
  anchors.push_back(period2[0]);
  return anchors;
}

}  // namespace

TEST_CASE("full-shift constructor carries the expected certificate") {
  MarkovModel m = make_full_shift({3.0, 3.0});
  CHECK(m.state_count() == 2);
  CHECK(m.transitions.size() == 4);
  REQUIRE(m.expansion.has_value());
  CHECK(m.expansion->kappa == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(m.expansion->c == doctest::Approx(1.0).epsilon(1e-9));

  MarkovModel u = make_full_shift({2.0, 4.0});
  REQUIRE(u.expansion.has_value());
  CHECK(u.expansion->kappa == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(u.expansion->c == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("certificates require genuine expansion") {
  MarkovModel m = make_full_shift({0.9, 3.0});
  CHECK_FALSE(m.expansion.has_value());
  CHECK_FALSE(verify_hyperbolic(m).has_value());
}

TEST_CASE("certificate bounds every admissible derivative product") {
  for (const MarkovModel& m :
       {make_full_shift({2.0, 4.0}), make_golden_mean(1.7, 2.6),
        make_circle_doubling(16)}) {
    REQUIRE(m.expansion.has_value());
    double c = m.expansion->c, kappa = m.expansion->kappa;
    for (int n = 1; n <= 6; ++n)
      for (const auto& w : periodic_words(m, n))
        CHECK(w.dmin_product >= c * std::pow(kappa, n) * (1.0 - 1e-9));
  }
}

TEST_CASE("periodic words enumerate closed walks up to rotation") {
  MarkovModel m = make_full_shift({3.0, 3.0});
  auto w2 = periodic_words(m, 2);
  REQUIRE(w2.size() == 3);  // 00, 01, 11
  int pointed = 0;
  for (const auto& w : w2) pointed += w.multiplicity;
  CHECK(pointed == 4);  // trace of T^2

  auto w3 = periodic_words(m, 3);
  CHECK(w3.size() == 4);  // 000, 001, 011, 111
  pointed = 0;
  for (const auto& w : w3) pointed += w.multiplicity;
  CHECK(pointed == 8);

  MarkovModel c3 = make_cycle(3, 2.0);
  CHECK(periodic_words(c3, 2).empty());
  auto w = periodic_words(c3, 3);
  REQUIRE(w.size() == 1);
  CHECK(w[0].multiplicity == 3);
  CHECK(w[0].dmin_product == doctest::Approx(8.0));
}

TEST_CASE("periodic word enumeration rejects blow-ups") {
  MarkovModel m = make_full_shift({2.0, 2.0, 2.0, 2.0});
  CHECK_THROWS_AS((void)periodic_words(m, 11), InputError);
}

TEST_CASE("transitivity is strong connectivity") {
  CHECK(is_transitive(make_cycle(5, 2.0)));
  CHECK(is_transitive(make_golden_mean(2.0, 2.0)));
  CHECK(is_transitive(make_circle_doubling(16)));

  // Two disjoint 2-cycles.
  MarkovModel m;
  for (int i = 0; i < 4; ++i)
    m.states.push_back({"s" + std::to_string(i),
                        Region::disc({static_cast<double>(i), 0.0}, 0.2)});
  m.transitions = merge_transitions({{0, 1, 0, 2.0, 2.0},
                                     {1, 0, 0, 2.0, 2.0},
                                     {2, 3, 0, 2.0, 2.0},
                                     {3, 2, 0, 2.0, 2.0}});
  CHECK_FALSE(is_transitive(m));
}

TEST_CASE("transitivity matches the power-positivity oracle on random graphs") {
  unsigned long long seed = 0x2545F4914F6CDD1Dull;
  auto next = [&seed]() {
    seed ^= seed << 13;
    seed ^= seed >> 7;
    seed ^= seed << 17;
    return seed;
  };
  for (int trial = 0; trial < 50; ++trial) {
    int n = 3 + static_cast<int>(next() % 4);
    MarkovModel m;
    for (int i = 0; i < n; ++i)
      m.states.push_back({"s" + std::to_string(i),
                          Region::disc({static_cast<double>(i), 0.0}, 0.2)});
    std::vector<MarkovTransition> ts;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (next() % 3 == 0) ts.push_back({i, j, 0, 2.0, 2.0});
    if (ts.empty()) ts.push_back({0, 0, 0, 2.0, 2.0});
    m.transitions = merge_transitions(std::move(ts));

    // Oracle: for every ordered pair some power T^m, m <= n, is positive.
    std::vector<std::vector<char>> t(n, std::vector<char>(n, 0)),
        reach(n, std::vector<char>(n, 0));
    for (const auto& e : m.transitions) t[e.from][e.to] = 1;
    auto cur = t;
    for (int m_pow = 1; m_pow <= n; ++m_pow) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (cur[i][j]) reach[i][j] = 1;
      std::vector<std::vector<char>> nxt(n, std::vector<char>(n, 0));
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          if (cur[i][k])
            for (int j = 0; j < n; ++j)
              if (t[k][j]) nxt[i][j] = 1;
      cur = std::move(nxt);
    }
    bool oracle = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!reach[i][j]) oracle = false;
    CHECK(is_transitive(m) == oracle);
  }
}

TEST_CASE("model spectrum lists primitive cycles with midpoint multipliers") {
  MarkovModel m = make_full_shift({2.0, 4.0});
  auto spec = model_spectrum(m, 2);
  REQUIRE(spec.size() == 3);
  CHECK(spec[0] == std::pair<int, double>(1, 2.0));
  CHECK(spec[1] == std::pair<int, double>(1, 4.0));
  CHECK(spec[2].first == 2);
  CHECK(spec[2].second == doctest::Approx(8.0));
}

TEST_CASE("grid model of the squaring map covers the unit circle") {
  MapSpec f = quadratic_map({0.0, 0.0});
  MarkovModel m = build_AN(f, 0.5, 0.1, 16);
  REQUIRE(m.state_count() > 20);

  Region ncrit = Region::disc({0.0, 0.0}, 0.5);
  auto out = m.out_edges();
  std::vector<int> indeg(m.state_count(), 0);
  for (const auto& t : m.transitions) ++indeg[t.to];
  for (int i = 0; i < m.state_count(); ++i) {
    CHECK_FALSE(m.states[i].region.intersects(ncrit));
    CHECK(std::abs(std::abs(m.states[i].region.center()) - 1.0) < 0.15);
    CHECK(out[i].size() > 0);
    CHECK(indeg[i] > 0);
  }
  for (const auto& t : m.transitions) {
    CHECK(t.dmin > 2.0 * (1.0 - 0.1));
    CHECK(t.dmax < 2.0 * (1.0 + 0.1));
  }
  CHECK(is_transitive(m));
  REQUIRE(m.expansion.has_value());
  CHECK(m.expansion->kappa > 1.3);
  REQUIRE(m.map.has_value());
}

TEST_CASE("shrinking the critical neighborhood never removes grid states") {
  MapSpec f = quadratic_map({0.0, 0.0});
  MarkovModel big_n = build_AN(f, 0.5, 0.1, 14);
  MarkovModel small_n = build_AN(f, 0.3, 0.1, 14);
  std::set<std::string> ids;
  for (const auto& s : small_n.states) ids.insert(s.id);
  for (const auto& s : big_n.states) CHECK(ids.count(s.id) == 1);
}

TEST_CASE("grid model of the real dendrite avoids the critical neighborhood") {
  MapSpec f = quadratic_map({-2.0, 0.0});
  MarkovModel m = build_AN(f, 0.3, 0.1, 18);
  REQUIRE(m.state_count() > 5);
  Region ncrit = Region::disc({0.0, 0.0}, 0.3);
  for (const auto& s : m.states) {
    CHECK_FALSE(s.region.intersects(ncrit));
    CHECK(std::abs(s.region.center().imag()) < 0.15);
    CHECK(std::abs(s.region.center().real()) < 2.1);
  }
}

TEST_CASE("an oversized critical neighborhood empties the grid model") {
  MapSpec f = quadratic_map({0.0, 0.0});
  CHECK_THROWS_AS((void)build_AN(f, 10.0, 0.1, 12), EmptyModelError);
}

TEST_CASE("single-anchor construction is one pure cycle") {
  MapSpec f = quadratic_map({0.0, 0.0});
  auto anchors = squaring_anchors();
  auto [plan, m] = build_Bn(f, {anchors[0]}, 0.15);
  CHECK(plan.bridges.empty());
  REQUIRE(m.state_count() == 1);
  REQUIRE(m.transitions.size() == 1);
  CHECK(m.transitions[0].from == 0);
  CHECK(m.transitions[0].to == 0);
  CHECK(m.transitions[0].dmin == doctest::Approx(2.0 * (1.0 - 0.075)));
  // The bound is taken over the state disc's bounding box, so the upper end
  // reaches the box corner.
  CHECK(m.transitions[0].dmax == doctest::Approx(2.0 * std::hypot(1.075, 0.075)));
  REQUIRE(m.expansion.has_value());
  CHECK(m.expansion->kappa >= 1.5);
}

TEST_CASE("two-anchor construction finds bridges and is transitive") {
  MapSpec f = quadratic_map({0.0, 0.0});
  auto anchors = squaring_anchors();
  auto [plan, m] = build_Bn(f, anchors, 0.15);

  REQUIRE(plan.bridges.size() == 2);
  for (const auto& b : plan.bridges) {
    REQUIRE_FALSE(b.points.empty());
    // The forward iterate of the bridge lands exactly on the target anchor.
    Complex z = b.points[0];
    for (std::size_t k = 0; k < b.points.size(); ++k) {
      CHECK(std::abs(z - b.points[k]) < 1e-12);
      auto img = f.eval(b.points[k]);
      REQUIRE(img.has_value());
      z = *img;
    }
    CHECK(std::abs(z - anchors[b.target_anchor].points[0]) < 1e-9);
    // The head sits inside the source orbit's neighborhood.
    double d = 1e18;
    for (Complex p : anchors[b.source_anchor].points)
      d = std::min(d, std::abs(b.points[0] - p));
    CHECK(d <= 0.15);
    // No bridge point is post-critical (the critical orbit of z^2 is {0}).
    for (Complex p : b.points) CHECK(std::abs(p) > 1e-6);
  }

  CHECK(is_transitive(m));
  REQUIRE(m.expansion.has_value());
  CHECK(m.expansion->kappa >= 1.5);
}

TEST_CASE("extending the anchor list embeds the smaller construction") {
  MapSpec f = quadratic_map({0.0, 0.0});
  auto anchors = squaring_anchors();
  auto [plan1, m1] = build_Bn(f, {anchors[0]}, 0.15);
  auto [plan2, m2] = build_Bn(f, anchors, 0.15);

  for (const auto& s : m1.states) {
    int idx = m2.state_index(s.id);
    REQUIRE(idx >= 0);
    CHECK(std::abs(s.region.center() - m2.states[idx].region.center()) <
          1e-12);
  }
  std::set<std::tuple<std::string, std::string, int>> edges2;
  for (const auto& t : m2.transitions)
    edges2.insert({m2.states[t.from].id, m2.states[t.to].id, t.branch});
  for (const auto& t : m1.transitions)
    CHECK(edges2.count({m1.states[t.from].id, m1.states[t.to].id, t.branch}) ==
          1);
}

TEST_CASE("post-critical anchors are rejected") {
  MapSpec f = quadratic_map({-2.0, 0.0});
  PeriodicOrbit pc;
  for (const auto& o : find_periodic(f, 1))
    if (o.post_critical) pc = o;
  REQUIRE(pc.period == 1);  // the fixed point z = 2 lies on the critical orbit
  CHECK_THROWS_AS((void)build_Bn(f, {pc}, 0.15), InputError);
}

TEST_CASE("matched construction reproduces the graph on an affine conjugate") {
  MapSpec f = quadratic_map({0.0, 0.0});
  auto anchors_f = squaring_anchors();
  auto [plan_f, mf] = build_Bn(f, anchors_f, 0.15);

  MapSpec g = affine_conjugate(f, {2.0, 0.0}, {0.0, 0.0});
  std::vector<PeriodicOrbit> anchors_g;
  for (const auto& o : find_periodic(g, 1))
    if (!o.post_critical) anchors_g.push_back(o);
  anchors_g.push_back(find_periodic(g, 2).at(0));

  BnOptions opts;
  opts.required_lengths = bridge_lengths(plan_f);
  auto [plan_g, mg] = build_Bn(g, anchors_g, 0.30, opts);

  REQUIRE(mf.state_count() == mg.state_count());
  for (int i = 0; i < mf.state_count(); ++i)
    CHECK(mf.states[i].id == mg.states[i].id);
  REQUIRE(mf.transitions.size() == mg.transitions.size());
  for (std::size_t e = 0; e < mf.transitions.size(); ++e) {
    CHECK(mf.transitions[e].from == mg.transitions[e].from);
    CHECK(mf.transitions[e].to == mg.transitions[e].to);
  }
}

TEST_CASE("shadowing recovers true periodic orbits from symbolic cycles") {
  MapSpec f = quadratic_map({0.0, 0.0});
  auto anchors = squaring_anchors();
  auto [plan, m] = build_Bn(f, anchors, 0.15);

  for (int n = 1; n <= 4; ++n)
    for (const auto& w : periodic_words(m, n)) {
      auto pts = shadow_cycle(m, w);
      if (!pts) continue;
      REQUIRE(pts->size() == static_cast<std::size_t>(n));
      Complex z = (*pts)[0];
      for (int k = 0; k < n; ++k) {
        CHECK(std::abs(std::abs((*pts)[k]) - 1.0) < 0.2);
        z = *f.eval((*pts)[k]);
      }
      CHECK(std::abs(z - (*pts)[0]) < 1e-9);
    }

  // The anchor self-loop shadows to the fixed point exactly.
  auto w1 = periodic_words(m, 1);
  bool found_fixed = false;
  for (const auto& w : w1) {
    auto pts = shadow_cycle(m, w);
    if (pts && std::abs((*pts)[0] - Complex(1.0, 0.0)) < 1e-9)
      found_fixed = true;
  }
  CHECK(found_fixed);
}

TEST_CASE("model JSON round-trips and validates") {
  MapSpec f = quadratic_map({0.0, 0.0});
  auto anchors = squaring_anchors();
  auto [plan, m] = build_Bn(f, anchors, 0.15);

  MarkovModel r = MarkovModel::from_json(m.to_json());
  REQUIRE(r.state_count() == m.state_count());
  for (int i = 0; i < m.state_count(); ++i) {
    CHECK(r.states[i].id == m.states[i].id);
    CHECK(std::abs(r.states[i].region.center() -
                   m.states[i].region.center()) == 0.0);
  }
  REQUIRE(r.transitions.size() == m.transitions.size());
  for (std::size_t e = 0; e < m.transitions.size(); ++e) {
    CHECK(r.transitions[e].from == m.transitions[e].from);
    CHECK(r.transitions[e].to == m.transitions[e].to);
    CHECK(r.transitions[e].branch == m.transitions[e].branch);
    CHECK(r.transitions[e].dmin == m.transitions[e].dmin);
    CHECK(r.transitions[e].dmax == m.transitions[e].dmax);
  }
  REQUIRE(r.expansion.has_value());
  CHECK(r.expansion->kappa == m.expansion->kappa);
  CHECK(r.map.has_value());

  SUBCASE("duplicate state pairs merge by interval hull") {
    nlohmann::json j = make_full_shift({2.0, 2.0}).to_json();
    j["transitions"] = {{0, 1, 0, 2.0, 3.0}, {0, 1, 0, 1.5, 4.0},
                        {1, 0, 0, 2.0, 2.0}, {0, 0, 0, 2.0, 2.0},
                        {1, 1, 0, 2.0, 2.0}};
    MarkovModel d = MarkovModel::from_json(j);
    REQUIRE(d.transitions.size() == 4);
    CHECK(d.transitions[1].dmin == 1.5);
    CHECK(d.transitions[1].dmax == 4.0);
  }
  SUBCASE("malformed inputs raise input errors with field paths") {
    nlohmann::json j = make_full_shift({2.0, 2.0}).to_json();
    j["transitions"][0][1] = 7;  // state index out of range
    CHECK_THROWS_AS((void)MarkovModel::from_json(j), InputError);
    nlohmann::json k = make_full_shift({2.0, 2.0}).to_json();
    k["transitions"][0][3] = -1.0;  // non-positive dmin
    CHECK_THROWS_AS((void)MarkovModel::from_json(k), InputError);
  }
}

TEST_CASE("coverage diagnostic reports the largest sample-to-state distance") {
  MapSpec f = quadratic_map({0.0, 0.0});
  JuliaApprox julia = julia_approx(f, 16, 401);
  auto anchors = squaring_anchors();
  auto [plan, m] = build_Bn(f, anchors, 0.15);
  double gap = density_gap(m, julia);
  CHECK(gap > 0.0);
  CHECK(gap < 2.0);  // states sit on the unit circle; samples nearby

  MarkovModel grid = build_AN(f, 0.5, 0.1, 16);
  CHECK(density_gap(grid, julia) < 0.25);
}

TEST_CASE("circle-arc doubling model has the documented structure") {
  MarkovModel m = make_circle_doubling(32);
  CHECK(m.state_count() == 32);
  CHECK(m.transitions.size() == 64);
  auto out = m.out_edges();
  for (const auto& edges : out) CHECK(edges.size() == 2);
  CHECK(is_transitive(m));
  REQUIRE(m.expansion.has_value());
  CHECK(m.expansion->kappa ==
        doctest::Approx(2.0 * (1.0 - M_PI / 32)).epsilon(1e-9));
}
