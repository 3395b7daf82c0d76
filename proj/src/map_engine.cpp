#include "holorigid/map_engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "holorigid/errors.hpp"
#include "holorigid/parallel.hpp"

namespace holorigid {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Complex ipow(Complex z, int n) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

const nlohmann::json& need(const nlohmann::json& j, const char* key,
                           const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(path + ": missing field '" + key + "'");
  return j.at(key);
}

double need_num(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path + ": expected a number");
  return j.get<double>();
}

Complex parse_complex(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw InputError(path + ": expected [re, im]");
  return {need_num(j[0], path + "[0]"), need_num(j[1], path + "[1]")};
}

}  // namespace

std::optional<int> MapSpec::branch_at(Complex z) const {
  for (std::size_t i = 0; i < branches.size(); ++i)
    if (branches[i].domain.contains(z)) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<Complex> MapSpec::eval(Complex z) const {
  auto b = branch_at(z);
  if (!b) return std::nullopt;
  return branches[*b].poly.eval(z);
}

std::optional<Complex> MapSpec::deriv(Complex z) const {
  auto b = branch_at(z);
  if (!b) return std::nullopt;
  return branches[*b].dpoly.eval(z);
}

std::optional<Complex> MapSpec::deriv_n(Complex z, int n) const {
  Complex acc(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    auto b = branch_at(z);
    if (!b) return std::nullopt;
    acc *= branches[*b].dpoly.eval(z);
    z = branches[*b].poly.eval(z);
  }
  return acc;
}

MapSpec make_map(std::vector<std::pair<Region, std::vector<Complex>>> branch_data,
                 Region range) {
  if (branch_data.empty()) throw InputError("map needs at least one branch");
  MapSpec m;
  m.range = range;
  for (auto& [region, coeffs] : branch_data) {
    if (coeffs.empty()) throw InputError("branch formula has no coefficients");
    Branch br;
    br.domain = region;
    br.poly = Polynomial(coeffs);
    br.dpoly = br.poly.derivative();
    br.degree = br.poly.degree();
    if (br.degree < 1)
      throw InputError("branch formula must be a non-constant polynomial");
    m.branches.push_back(std::move(br));
  }
  for (std::size_t i = 0; i < m.branches.size(); ++i)
    for (std::size_t k = i + 1; k < m.branches.size(); ++k)
      if (m.branches[i].domain.intersects(m.branches[k].domain))
        throw InputError("branch domains " + std::to_string(i) + " and " +
                         std::to_string(k) + " overlap");
  for (std::size_t i = 0; i < m.branches.size(); ++i)
    if (!m.branches[i].domain.inside(m.range))
      throw InputError("branch domain " + std::to_string(i) +
                       " is not inside the range region");
  int crit = -1;
  for (std::size_t i = 0; i < m.branches.size(); ++i) {
    if (m.branches[i].degree < 2) continue;
    if (crit >= 0)
      throw InputError("more than one branch of degree >= 2; all but one "
                       "branch must be affine");
    crit = static_cast<int>(i);
  }
  if (crit < 0) throw InputError("expected exactly one branch of degree >= 2");

  Branch& cb = m.branches[crit];
  const auto& c = cb.poly.coeffs();
  int d = cb.degree;
  Complex lead = c[d];
  Complex wc = -c[d - 1] / (lead * static_cast<double>(d));
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  for (int k = 1; k < d; ++k) {
    Complex expect = lead * binom(d, k) * ipow(-wc, d - k);
    if (std::abs(c[k] - expect) > 1e-9 * scale)
      throw InputError(
          "critical branch is not unicritical: its derivative must vanish to "
          "order degree-1 at a single point");
  }
  cb.critical = true;
  cb.crit_point = wc;
  cb.base = cb.poly.eval(wc);
  cb.lead = lead;
  if (!cb.domain.contains(wc))
    throw InputError("critical point lies outside its branch domain");
  m.critical_branch = crit;
  m.critical_point = wc;
  return m;
}

MapSpec quadratic_map(Complex c) {
  double r_dom = std::max(2.0, std::abs(c)) + 0.25;
  Region dom = Region::disc(Complex(0.0, 0.0), r_dom);
  Region range = Region::disc(c, r_dom * r_dom);
  return make_map({{dom, {c, Complex(0.0, 0.0), Complex(1.0, 0.0)}}}, range);
}

MapSpec affine_conjugate(const MapSpec& f, Complex a, Complex b) {
  if (std::abs(a) == 0.0) throw InputError("conjugation scale must be nonzero");
  Polynomial hinv({-b / a, Complex(1.0, 0.0) / a});
  std::vector<std::pair<Region, std::vector<Complex>>> data;
  for (const auto& br : f.branches) {
    Polynomial g = br.poly.compose(hinv) * a + Polynomial({b});
    data.emplace_back(br.domain.scaled_about_origin(a, b), g.coeffs());
  }
  return make_map(std::move(data), f.range.scaled_about_origin(a, b));
}

CriticalOrbit critical_orbit(const MapSpec& f, int n) {
  CriticalOrbit out;
  Complex z = f.critical_point;
  out.points.push_back(z);
  for (int k = 0; k < n; ++k) {
    auto fz = f.eval(z);
    if (!fz) {
      out.escaped = true;
      break;
    }
    z = *fz;
    out.points.push_back(z);
  }
  return out;
}

DegenerateFlags classify_degenerate(const MapSpec& f) {
  auto fixed = [&f](Complex u) {
    auto fu = f.eval(u);
    return fu && std::abs(*fu - u) <= 1e-9 * (1.0 + std::abs(u));
  };
  DegenerateFlags flags;
  auto w1 = f.eval(f.critical_point);
  if (!w1) return flags;
  flags.power_like = fixed(*w1);
  auto w2 = f.eval(*w1);
  if (!w2) return flags;
  flags.chebyshev = f.branches.size() == 1 && fixed(*w2);
  return flags;
}

JuliaApprox julia_approx(const MapSpec& f, int depth, int grid_resolution,
                         std::optional<double> escape_override) {
  if (depth < 0) throw InputError("julia depth must be >= 0");
  if (grid_resolution < 2) throw InputError("grid resolution must be >= 2");
  if (escape_override && f.branches.size() != 1)
    throw InputError("escape-radius override needs a one-branch map");

  ComplexBox bb = f.branches[0].domain.bbox();
  for (std::size_t i = 1; i < f.branches.size(); ++i) {
    ComplexBox b = f.branches[i].domain.bbox();
    bb.re = Interval(std::min(bb.re.lo, b.re.lo), std::max(bb.re.hi, b.re.hi));
    bb.im = Interval(std::min(bb.im.lo, b.im.lo), std::max(bb.im.hi, b.im.hi));
  }
  double span = std::max(bb.re.width(), bb.im.width());
  double spacing = span / (grid_resolution - 1);
  int nx = static_cast<int>(std::floor(bb.re.width() / spacing)) + 1;
  int ny = static_cast<int>(std::floor(bb.im.width() / spacing)) + 1;

  std::vector<char> alive(static_cast<std::size_t>(nx) * ny, 0);
  const Polynomial& p0 = f.branches[0].poly;
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double x = bb.re.lo + static_cast<double>(i) * spacing;
      for (int j = 0; j < ny; ++j) {
        Complex z(x, bb.im.lo + j * spacing);
        bool ok = true;
        for (int k = 0; k <= depth && ok; ++k) {
          if (escape_override) {
            if (std::abs(z) > *escape_override)
              ok = false;
            else if (k < depth)
              z = p0.eval(z);
          } else {
            auto b = f.branch_at(z);
            if (!b)
              ok = false;
            else if (k < depth)
              z = f.branches[*b].poly.eval(z);
          }
        }
        if (ok) alive[i * ny + j] = 1;
      }
    }
  });

  JuliaApprox out;
  out.depth = depth;
  out.spacing = spacing;
  out.escape_radius =
      escape_override ? *escape_override : f.range.bbox().abs().hi;
  auto at = [&](int i, int j) {
    return i >= 0 && i < nx && j >= 0 && j < ny &&
           alive[static_cast<std::size_t>(i) * ny + j];
  };
  for (int i = 0; i < nx; ++i) {
    double x = bb.re.lo + i * spacing;
    for (int j = 0; j < ny; ++j) {
      if (!at(i, j)) continue;
      Complex z(x, bb.im.lo + j * spacing);
      out.points.push_back(z);
      if (!at(i - 1, j) || !at(i + 1, j) || !at(i, j - 1) || !at(i, j + 1))
        out.boundary.push_back(z);
    }
  }
  return out;
}

std::optional<Complex> inverse_on_sheet(const MapSpec& f, Complex y, int branch,
                                        int sheet) {
  const Branch& br = f.branches[branch];
  Complex z;
  if (!br.critical) {
    const auto& c = br.poly.coeffs();
    z = (y - c[0]) / c[1];
  } else {
    Complex r = (y - br.base) / br.lead;
    double mag = std::pow(std::abs(r), 1.0 / br.degree);
    double ang = (std::arg(r) + 2.0 * M_PI * sheet) / br.degree;
    z = br.crit_point + std::polar(mag, ang);
  }
  if (!br.domain.contains(z)) return std::nullopt;
  return z;
}

std::vector<Preimage> inverse_images(const MapSpec& f, Complex y) {
  std::vector<Preimage> out;
  for (std::size_t i = 0; i < f.branches.size(); ++i) {
    int sheets = f.branches[i].critical ? f.branches[i].degree : 1;
    for (int s = 0; s < sheets; ++s) {
      auto z = inverse_on_sheet(f, y, static_cast<int>(i), s);
      if (z) out.push_back({*z, static_cast<int>(i), s});
    }
  }
  return out;
}

nlohmann::ordered_json map_to_json(const MapSpec& f) {
  nlohmann::ordered_json j;
  j["branches"] = nlohmann::ordered_json::array();
  for (const auto& br : f.branches) {
    nlohmann::ordered_json b;
    b["domain"] = br.domain.to_json();
    b["coeffs"] = nlohmann::ordered_json::array();
    for (const auto& c : br.poly.coeffs())
      b["coeffs"].push_back({c.real(), c.imag()});
    b["degree"] = br.degree;
    j["branches"].push_back(std::move(b));
  }
  j["critical_branch"] = f.critical_branch;
  j["critical_point"] = {f.critical_point.real(), f.critical_point.imag()};
  j["range"] = f.range.to_json();
  return j;
}

MapSpec map_from_json(const nlohmann::json& j) {
  const auto& jb = need(j, "branches", "map");
  if (!jb.is_array() || jb.empty())
    throw InputError("map.branches: expected a non-empty array");
  std::vector<std::pair<Region, std::vector<Complex>>> data;
  std::vector<int> degrees;
  for (std::size_t i = 0; i < jb.size(); ++i) {
    std::string path = "map.branches[" + std::to_string(i) + "]";
    Region dom = Region::from_json(need(jb[i], "domain", path), path + ".domain");
    const auto& jc = need(jb[i], "coeffs", path);
    if (!jc.is_array() || jc.empty())
      throw InputError(path + ".coeffs: expected a non-empty array");
    std::vector<Complex> coeffs;
    for (std::size_t k = 0; k < jc.size(); ++k)
      coeffs.push_back(
          parse_complex(jc[k], path + ".coeffs[" + std::to_string(k) + "]"));
    if (jb[i].contains("degree")) {
      if (!jb[i]["degree"].is_number_integer())
        throw InputError(path + ".degree: expected an integer");
      degrees.push_back(jb[i]["degree"].get<int>());
    } else {
      degrees.push_back(-1);
    }
    data.emplace_back(std::move(dom), std::move(coeffs));
  }
  Region range = Region::from_json(need(j, "range", "map"), "map.range");
  MapSpec m = make_map(std::move(data), range);
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] >= 0 && degrees[i] != m.branches[i].degree)
      throw InputError("map.branches[" + std::to_string(i) +
                       "].degree: declared " + std::to_string(degrees[i]) +
                       " but the formula has degree " +
                       std::to_string(m.branches[i].degree));
  }
  if (j.contains("critical_branch")) {
    const auto& jcb = j["critical_branch"];
    if (!jcb.is_number_integer() || jcb.get<int>() != m.critical_branch)
      throw InputError("map.critical_branch: does not match the unique branch "
                       "of degree >= 2 (index " +
                       std::to_string(m.critical_branch) + ")");
  }
  if (j.contains("critical_point")) {
    Complex w = parse_complex(j["critical_point"], "map.critical_point");
    if (std::abs(w - m.critical_point) >
        1e-9 * (1.0 + std::abs(m.critical_point)))
      throw InputError("map.critical_point: does not match the formula's "
                       "critical point " +
                       fmt_complex(m.critical_point));
  }
  return m;
}

MapSpec load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open map file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("map file " + path + ": " + e.what());
  }
  return map_from_json(j);
}

void save_map(const MapSpec& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write map file: " + path);
  out << map_to_json(f).dump(2) << '\n';
}

}  // namespace holorigid
