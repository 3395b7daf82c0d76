#pragma once

#include <string>

#include "holorigid/interval.hpp"
#include "holorigid/numeric.hpp"

#include <json.hpp>

namespace holorigid {

// Planar region descriptor: a closed disc or a closed axis-aligned rectangle.
class Region {
 public:
  enum class Kind { disc, rect };

  Region() : kind_(Kind::disc), center_(0.0, 0.0), radius_(1.0) {}
  static Region disc(Complex center, double radius);
  static Region rect(double x0, double y0, double x1, double y1);

  Kind kind() const { return kind_; }
  Complex center() const;
  double radius() const { return radius_; }  // disc only
  ComplexBox bbox() const;

  bool contains(Complex z) const;
  // Euclidean distance from z to the region (0 when inside).
  double distance(Complex z) const;
  bool intersects(const Region& o) const;
  // True when the closure of this region lies strictly inside the other.
  bool inside(const Region& o) const;
  Region scaled_about_origin(Complex a, Complex b) const;  // image under az+b

  nlohmann::ordered_json to_json() const;
  static Region from_json(const nlohmann::json& j, const std::string& path);

 private:
  Kind kind_;
  Complex center_;
  double radius_ = 0.0;         // disc
  double x0_ = 0.0, y0_ = 0.0;  // rect corners
  double x1_ = 0.0, y1_ = 0.0;
};

}  // namespace holorigid
