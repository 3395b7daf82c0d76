#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holorigid/numeric.hpp"
#include "holorigid/polynomial.hpp"
#include "holorigid/region.hpp"

namespace holorigid {

// One branch of a piecewise-polynomial covering map. The unique branch of
// degree >= 2 is "critical" and must have the unicritical normal form
// poly(z) = base + lead*(z - crit_point)^degree, which gives exact inverse
// sheets; all other branches are affine.
struct Branch {
  Region domain;
  Polynomial poly;
  Polynomial dpoly;  // derivative, cached
  int degree = 1;
  bool critical = false;
  Complex crit_point{0.0, 0.0};
  Complex base{0.0, 0.0};
  Complex lead{0.0, 0.0};
};

struct MapSpec {
  std::vector<Branch> branches;
  int critical_branch = -1;
  Complex critical_point{0.0, 0.0};
  Region range;

  int degree() const { return branches[critical_branch].degree; }

  // Lowest-index branch whose domain contains z, if any.
  std::optional<int> branch_at(Complex z) const;
  std::optional<Complex> eval(Complex z) const;
  // One-step derivative Df(z).
  std::optional<Complex> deriv(Complex z) const;
  // D(f^n)(z) by the chain rule along the orbit; nullopt if the orbit
  // escapes before n steps.
  std::optional<Complex> deriv_n(Complex z, int n) const;
};

// Validates branch structure and computes the critical decomposition.
// Throws InputError on violation of the map-class invariants.
MapSpec make_map(std::vector<std::pair<Region, std::vector<Complex>>> branch_data,
                 Region range);

// Classical one-branch quadratic z^2 + c restricted to a disc.
MapSpec quadratic_map(Complex c);

// Conjugate by h(z) = a*z + b: returns h o f o h^{-1} with transported
// domains. Rect domains require positive real a.
MapSpec affine_conjugate(const MapSpec& f, Complex a, Complex b);

struct CriticalOrbit {
  std::vector<Complex> points;  // w, f(w), ..., up to n applications
  bool escaped = false;
};

CriticalOrbit critical_orbit(const MapSpec& f, int n);

struct DegenerateFlags {
  bool chebyshev = false;
  bool power_like = false;
};

// chebyshev: connected domain (single branch) and f(f(w)) is fixed;
// power_like: f(w) is already fixed. Tolerance 1e-9 * (1 + |w|).
DegenerateFlags classify_degenerate(const MapSpec& f);

struct JuliaApprox {
  std::vector<Complex> points;    // grid survivors, lexicographic order
  std::vector<Complex> boundary;  // survivors with a non-surviving 4-neighbor
  int depth = 0;
  double escape_radius = 0.0;
  double spacing = 0.0;
};

// Grid over the bounding box of the branch domains; a point survives if its
// first `depth` iterates stay inside the branch domains (or inside
// |z| <= escape_override when given, using branch 0 everywhere -- the
// classical filled-set criterion for one-branch polynomials).
JuliaApprox julia_approx(const MapSpec& f, int depth, int grid_resolution,
                         std::optional<double> escape_override = std::nullopt);

struct Preimage {
  Complex z;
  int branch = 0;
  int sheet = 0;
};

// All solutions of f(z) = y across branches, exact per branch kind
// (d-th roots on the critical branch, affine solve elsewhere), restricted
// to the branch domains. Deterministic order: (branch, sheet).
std::vector<Preimage> inverse_images(const MapSpec& f, Complex y);

// Single sheet variant; nullopt if the solution leaves the branch domain.
std::optional<Complex> inverse_on_sheet(const MapSpec& f, Complex y, int branch,
                                        int sheet);

nlohmann::ordered_json map_to_json(const MapSpec& f);
MapSpec map_from_json(const nlohmann::json& j);
MapSpec load_map(const std::string& path);
void save_map(const MapSpec& f, const std::string& path);

}  // namespace holorigid
