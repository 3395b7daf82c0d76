#include "holorigid/orbits.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>

#include "holorigid/errors.hpp"

namespace holorigid {

namespace {

constexpr int kMaxPeriod = 16;
constexpr int kCompanionCap = 300;       // max polynomial degree for eigen route
constexpr double kDedupTol = 1e-8;
constexpr int kPostCriticalHorizon = 64;

std::vector<int> proper_divisors(int n) {
  std::vector<int> d;
  for (int m = 1; m < n; ++m)
    if (n % m == 0) d.push_back(m);
  return d;
}

Polynomial iterate_poly(const Polynomial& p, int n) {
  Polynomial q = p;
  for (int k = 1; k < n; ++k) q = p.compose(q);
  return q;
}

std::vector<Complex> companion_eigenvalues(const Polynomial& q) {
  int d = q.degree();
  std::vector<Complex> c = q.coeffs();
  for (auto& v : c) v /= c[d];
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) m(i + 1, i) = 1.0;
  for (int i = 0; i < d; ++i) m(i, d - 1) = -c[i];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<Complex> out(d);
  for (int i = 0; i < d; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

// Newton on f^n(z) - z where step k applies the polynomial of branch seq[k]
// (unrestricted evaluation; domain membership is validated afterwards).
Complex polish(const MapSpec& f, const std::vector<int>& seq, Complex z) {
  for (int it = 0; it < 60; ++it) {
    Complex w = z, der(1.0, 0.0);
    for (int b : seq) {
      der *= f.branches[b].dpoly.eval(w);
      w = f.branches[b].poly.eval(w);
    }
    Complex df = der - 1.0;
    if (std::abs(df) < 1e-18) break;
    Complex step = (w - z) / df;
    z -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z))) break;
  }
  return z;
}

// Builds the exact-period-n orbit through z0 under the restricted map, or
// nullopt if z0 escapes, is not n-periodic, or has a smaller primitive period.
std::optional<PeriodicOrbit> build_orbit(const MapSpec& f, Complex z0, int n,
                                         double tol) {
  std::vector<Complex> pts;
  std::vector<int> branches;
  Complex z = z0;
  for (int k = 0; k < n; ++k) {
    auto b = f.branch_at(z);
    if (!b) return std::nullopt;
    pts.push_back(z);
    branches.push_back(*b);
    z = f.branches[*b].poly.eval(z);
  }
  double scale = 1.0 + std::abs(z0);
  if (std::abs(z - z0) > tol * scale) return std::nullopt;
  for (int m : proper_divisors(n))
    if (std::abs(pts[m] - z0) <= tol * scale) return std::nullopt;

  int best = 0;
  for (int k = 1; k < n; ++k)
    if (lex_less_tol(pts[k], pts[best], 1e-9 * scale)) best = k;
  std::rotate(pts.begin(), pts.begin() + best, pts.end());
  std::rotate(branches.begin(), branches.begin() + best, branches.end());

  Complex der(1.0, 0.0);
  for (int k = 0; k < n; ++k) der *= f.branches[branches[k]].dpoly.eval(pts[k]);

  PeriodicOrbit o;
  o.points = std::move(pts);
  o.period = n;
  o.multiplier_abs = std::abs(der);
  bool wide = f.branches.size() > 10;
  for (int k = 0; k < n; ++k) {
    if (wide && k) o.word += '-';
    o.word += std::to_string(branches[k]);
  }
  return o;
}

// Deduplicates cycles by quantizing every orbit point onto a grid of pitch
// kDedupTol. Lookups probe the 3x3 neighborhood of a point's cell so two
// renditions of the same point that straddle a cell edge still collide.
struct OrbitSet {
  std::map<std::pair<long long, long long>, int> cells;
  std::vector<PeriodicOrbit> orbits;

  bool contains(const PeriodicOrbit& o) const {
    for (Complex p : o.points) {
      auto [kx, ky] = grid_key(p, kDedupTol);
      for (long long dx = -1; dx <= 1; ++dx)
        for (long long dy = -1; dy <= 1; ++dy) {
          auto it = cells.find({kx + dx, ky + dy});
          if (it != cells.end() && orbits[it->second].period == o.period)
            return true;
        }
    }
    return false;
  }
};

void insert_orbit(OrbitSet& set, PeriodicOrbit&& o) {
  if (set.contains(o)) return;
  int idx = static_cast<int>(set.orbits.size());
  for (Complex p : o.points) set.cells.emplace(grid_key(p, kDedupTol), idx);
  set.orbits.push_back(std::move(o));
}

// Point set with the same grid-plus-neighbor-probe deduplication as OrbitSet.
struct PointSet {
  std::map<std::pair<long long, long long>, Complex> cells;

  bool insert(Complex z) {
    auto [kx, ky] = grid_key(z, kDedupTol);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        if (cells.count({kx + dx, ky + dy})) return false;
    cells.emplace(std::pair{kx, ky}, z);
    return true;
  }
};

// Exhaustive route for one-branch maps: eigenvalues of the companion matrix
// of f^n(z) - z, Newton-polished. Root count is reconciled against degree^n
// for n <= 8; shortfalls trigger perturbed re-polishes of the eigenvalues and
// finally a dense grid of fresh Newton seeds over the branch domain (a
// repelling root is an attracting Newton target, so a fine enough seed grid
// reaches every basin).
OrbitSet orbits_companion(const MapSpec& f, int n, double tol) {
  const Polynomial& p = f.branches[0].poly;
  Polynomial fn = iterate_poly(p, n);
  std::vector<Complex> qc = fn.coeffs();
  qc[1] -= 1.0;
  std::vector<Complex> eigs = companion_eigenvalues(Polynomial(qc));
  std::sort(eigs.begin(), eigs.end(), lex_less);

  std::vector<int> seq(n, 0);
  PointSet roots;
  // Accepts z only when the Newton correction |q(z)/q'(z)| for
  // q(z) = f^n(z) - z certifies the true root lies within a tenth of the
  // deduplication pitch, so every accepted rendition of one root lands in
  // colliding grid cells.
  auto residual_ok = [&](Complex z) {
    Complex w = z, der(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
      der *= f.branches[0].dpoly.eval(w);
      w = p.eval(w);
    }
    double slope = std::max(1.0, std::abs(der - 1.0));
    return std::abs(w - z) <= 1e-10 * (1.0 + std::abs(z)) * slope;
  };
  auto polish_round = [&](Complex jitter) {
    for (Complex e : eigs) {
      Complex z = polish(f, seq, e * (1.0 + jitter) + jitter);
      if (residual_ok(z)) roots.insert(z);
    }
  };
  polish_round({0.0, 0.0});
  long long expected = 1;
  for (int k = 0; k < n; ++k) expected *= f.degree();
  if (n <= 8) {
    const Complex jitters[] = {{1e-7, 0.0}, {-1e-7, 0.0}, {0.0, 1e-6},
                               {1e-5, 0.0}, {0.0, -1e-5}, {1e-4, 1e-4}};
    for (Complex jitter : jitters)
      if (static_cast<long long>(roots.cells.size()) < expected)
        polish_round(jitter);
    for (int res : {96, 192}) {
      if (static_cast<long long>(roots.cells.size()) >= expected) break;
      ComplexBox bb = f.branches[0].domain.bbox();
      for (int iy = 0; iy < res; ++iy)
        for (int ix = 0; ix < res; ++ix) {
          Complex seed(bb.re.lo + bb.re.width() * (ix + 0.5) / res,
                       bb.im.lo + bb.im.width() * (iy + 0.5) / res);
          Complex z = polish(f, seq, seed);
          if (residual_ok(z)) roots.insert(z);
        }
    }
    if (static_cast<long long>(roots.cells.size()) != expected)
      throw SolverFailureError(
          "periodic-point solve found " + std::to_string(roots.cells.size()) +
          " roots of f^" + std::to_string(n) + "(z)-z, expected " +
          std::to_string(expected));
  }

  OrbitSet out;
  for (auto& [key, z] : roots.cells) {
    auto o = build_orbit(f, z, n, tol);
    if (o) insert_orbit(out, std::move(*o));
  }
  return out;
}

Complex raw_inverse(const Branch& br, Complex y, int sheet) {
  if (!br.critical) {
    const auto& c = br.poly.coeffs();
    return (y - c[0]) / c[1];
  }
  Complex r = (y - br.base) / br.lead;
  double mag = std::pow(std::abs(r), 1.0 / br.degree);
  double ang = (std::arg(r) + 2.0 * M_PI * sheet) / br.degree;
  return br.crit_point + std::polar(mag, ang);
}

// General route: every length-n word over the inverse-sheet alphabet is
// contracted to a fixed point of the composed inverse and validated against
// the true branch domains.
OrbitSet orbits_words(const MapSpec& f, int n, double tol) {
  struct Sym {
    int branch, sheet;
  };
  std::vector<Sym> alpha;
  for (std::size_t i = 0; i < f.branches.size(); ++i) {
    int sheets = f.branches[i].critical ? f.branches[i].degree : 1;
    for (int s = 0; s < sheets; ++s)
      alpha.push_back({static_cast<int>(i), s});
  }
  double total = std::pow(static_cast<double>(alpha.size()), n);
  if (total > 2e6)
    throw InputError("symbolic periodic-point search too large: " +
                     std::to_string(alpha.size()) + "^" + std::to_string(n) +
                     " words");

  OrbitSet out;
  std::vector<int> w(n, 0);
  // Generic interior start point. The range center itself can be a fixed
  // point of every inverse sheet (the squaring map fixes 0 backwards), which
  // would pin the whole contraction there, so the seed is offset from it.
  ComplexBox rb = f.range.bbox();
  Complex start = f.range.center() +
                  Complex(0.1875 * rb.re.width(), 0.1171875 * rb.im.width());
  for (;;) {
    Complex z = start;
    for (int it = 0; it < 80; ++it) {
      Complex y = z;
      for (int k = n - 1; k >= 0; --k)
        y = raw_inverse(f.branches[alpha[w[k]].branch], y, alpha[w[k]].sheet);
      bool done = std::abs(y - z) <= 1e-13 * (1.0 + std::abs(z));
      z = y;
      if (done) break;
    }
    std::vector<int> seq(n);
    for (int k = 0; k < n; ++k) seq[k] = alpha[w[k]].branch;
    z = polish(f, seq, z);
    auto o = build_orbit(f, z, n, tol);
    if (o) insert_orbit(out, std::move(*o));

    int k = n - 1;
    while (k >= 0 && ++w[k] == static_cast<int>(alpha.size())) w[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

void mark_post_critical(const MapSpec& f, std::vector<PeriodicOrbit>& orbits) {
  std::vector<Complex> guard = critical_orbit(f, kPostCriticalHorizon).points;
  for (auto& o : orbits)
    for (Complex p : o.points) {
      for (Complex q : guard)
        if (std::abs(p - q) <= 1e-8) {
          o.post_critical = true;
          break;
        }
      if (o.post_critical) break;
    }
}

}  // namespace

std::vector<PeriodicOrbit> find_periodic(const MapSpec& f, int period,
                                         double tol) {
  if (period < 1) throw InputError("period must be >= 1");
  if (period > kMaxPeriod)
    throw InputError("period exceeds the configured maximum (" +
                     std::to_string(kMaxPeriod) + ")");
  bool one_branch = f.branches.size() == 1;
  double degree_pow = std::pow(static_cast<double>(f.degree()), period);
  OrbitSet set = (one_branch && degree_pow <= kCompanionCap)
                     ? orbits_companion(f, period, tol)
                     : orbits_words(f, period, tol);
  std::vector<PeriodicOrbit> out = std::move(set.orbits);
  std::sort(out.begin(), out.end(),
            [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
              return lex_less(a.points[0], b.points[0]);
            });
  mark_post_critical(f, out);
  return out;
}

std::vector<PeriodicOrbit> all_orbits_upto(const MapSpec& f, int max_period,
                                           double tol) {
  std::vector<PeriodicOrbit> out;
  for (int n = 1; n <= max_period; ++n) {
    auto part = find_periodic(f, n, tol);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<SpectrumEntry> multiplier_spectrum(const MapSpec& f, int max_period,
                                               double tol) {
  std::vector<SpectrumEntry> out;
  for (const auto& o : all_orbits_upto(f, max_period, tol)) {
    bool through_critical = false;
    for (Complex p : o.points)
      if (std::abs(p - f.critical_point) <= 1e-8) through_critical = true;
    if (through_critical) continue;
    if (o.multiplier_abs <= 1.0 + 1e-12) continue;
    out.push_back({o.period, o.multiplier_abs, o.points[0], o.word});
  }
  return out;
}

std::string orbit_csv_row(const PeriodicOrbit& o) {
  return std::to_string(o.period) + "," + fmt_double(o.points[0].real()) + "," +
         fmt_double(o.points[0].imag()) + "," + fmt_double(o.multiplier_abs) +
         "," + o.word + "," + (o.post_critical ? "true" : "false");
}

}  // namespace holorigid
