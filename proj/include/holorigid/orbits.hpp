#pragma once

#include <string>
#include <vector>

#include "holorigid/map_engine.hpp"

namespace holorigid {

struct PeriodicOrbit {
  std::vector<Complex> points;  // rotated so the lexicographic minimum is first
  int period = 1;
  double multiplier_abs = 0.0;
  std::string word;  // branch index visited at each step
  bool post_critical = false;
};

// All cycles of exact primitive period `period`, deterministically ordered by
// canonical first point. One-branch maps with a small iterate degree use
// companion-matrix eigenvalues (exhaustive) plus Newton polishing; otherwise
// every symbolic inverse-sheet word is contracted to its fixed point. Throws
// SolverFailureError when the root count of the degree budget cannot be
// reconciled (checked for one-branch maps with period <= 8).
std::vector<PeriodicOrbit> find_periodic(const MapSpec& f, int period,
                                         double tol = 1e-9);

// find_periodic aggregated over periods 1..max_period (all orbits, flags set).
std::vector<PeriodicOrbit> all_orbits_upto(const MapSpec& f, int max_period,
                                           double tol = 1e-9);

struct SpectrumEntry {
  int period = 1;
  double multiplier_abs = 0.0;
  Complex point;     // canonical orbit representative
  std::string word;
};

// Spectrum used by the linearity tests: every orbit of period <= max_period
// except degenerate ones -- orbits passing through the critical point
// (multiplier 0) and non-repelling orbits. Repelling orbits that merely lie
// on the forward critical orbit stay in the spectrum.
std::vector<SpectrumEntry> multiplier_spectrum(const MapSpec& f, int max_period,
                                               double tol = 1e-9);

// CSV row "period,re,im,multiplier_abs,word,post_critical".
std::string orbit_csv_row(const PeriodicOrbit& o);

}  // namespace holorigid
