#include "holorigid/region.hpp"

#include <algorithm>
#include <cmath>

#include "holorigid/errors.hpp"

namespace holorigid {

Region Region::disc(Complex center, double radius) {
  if (!(radius > 0.0)) throw InputError("region: disc radius must be positive");
  Region r;
  r.kind_ = Kind::disc;
  r.center_ = center;
  r.radius_ = radius;
  return r;
}

Region Region::rect(double x0, double y0, double x1, double y1) {
  if (!(x0 < x1) || !(y0 < y1))
    throw InputError("region: rect corners must satisfy x0<x1, y0<y1");
  Region r;
  r.kind_ = Kind::rect;
  r.x0_ = x0;
  r.y0_ = y0;
  r.x1_ = x1;
  r.y1_ = y1;
  r.center_ = Complex(0.5 * (x0 + x1), 0.5 * (y0 + y1));
  return r;
}

Complex Region::center() const { return center_; }

ComplexBox Region::bbox() const {
  if (kind_ == Kind::disc)
    return {Interval(center_.real() - radius_, center_.real() + radius_),
            Interval(center_.imag() - radius_, center_.imag() + radius_)};
  return {Interval(x0_, x1_), Interval(y0_, y1_)};
}

bool Region::contains(Complex z) const {
  if (kind_ == Kind::disc) return std::abs(z - center_) <= radius_;
  return z.real() >= x0_ && z.real() <= x1_ && z.imag() >= y0_ && z.imag() <= y1_;
}

double Region::distance(Complex z) const {
  if (kind_ == Kind::disc) return std::max(0.0, std::abs(z - center_) - radius_);
  double dx = std::max({x0_ - z.real(), 0.0, z.real() - x1_});
  double dy = std::max({y0_ - z.imag(), 0.0, z.imag() - y1_});
  return std::hypot(dx, dy);
}

bool Region::intersects(const Region& o) const {
  if (kind_ == Kind::disc && o.kind_ == Kind::disc)
    return std::abs(center_ - o.center_) <= radius_ + o.radius_;
  if (kind_ == Kind::rect && o.kind_ == Kind::rect)
    return x0_ <= o.x1_ && o.x0_ <= x1_ && y0_ <= o.y1_ && o.y0_ <= y1_;
  const Region& d = kind_ == Kind::disc ? *this : o;
  const Region& r = kind_ == Kind::disc ? o : *this;
  return r.distance(d.center_) <= d.radius_;
}

bool Region::inside(const Region& o) const {
  if (o.kind_ == Kind::disc) {
    if (kind_ == Kind::disc)
      return std::abs(center_ - o.center_) + radius_ < o.radius_;
    // rect inside disc: all four corners strictly inside
    for (double x : {x0_, x1_})
      for (double y : {y0_, y1_})
        if (std::abs(Complex(x, y) - o.center_) >= o.radius_) return false;
    return true;
  }
  ComplexBox b = bbox();
  return b.re.lo > o.x0_ && b.re.hi < o.x1_ && b.im.lo > o.y0_ && b.im.hi < o.y1_;
}

Region Region::scaled_about_origin(Complex a, Complex b) const {
  if (kind_ == Kind::disc) return disc(a * center_ + b, std::abs(a) * radius_);
  if (std::abs(a.imag()) > 0.0 || a.real() <= 0.0)
    throw InputError(
        "region: rect regions only support scaling by positive real factors");
  Complex c0 = a * Complex(x0_, y0_) + b;
  Complex c1 = a * Complex(x1_, y1_) + b;
  return rect(c0.real(), c0.imag(), c1.real(), c1.imag());
}

nlohmann::ordered_json Region::to_json() const {
  nlohmann::ordered_json j;
  if (kind_ == Kind::disc) {
    j["kind"] = "disc";
    j["center"] = {center_.real(), center_.imag()};
    j["radius"] = radius_;
  } else {
    j["kind"] = "rect";
    j["corners"] = {{x0_, y0_}, {x1_, y1_}};
  }
  return j;
}

Region Region::from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind"))
    throw InputError(path + ": region must be an object with a \"kind\" field");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "disc") {
    if (!j.contains("center") || !j.contains("radius"))
      throw InputError(path + ": disc region needs \"center\" and \"radius\"");
    auto c = j["center"];
    if (!c.is_array() || c.size() != 2)
      throw InputError(path + ".center: expected [re, im]");
    return disc(Complex(c[0].get<double>(), c[1].get<double>()),
                j["radius"].get<double>());
  }
  if (kind == "rect") {
    if (!j.contains("corners"))
      throw InputError(path + ": rect region needs \"corners\"");
    auto c = j["corners"];
    if (!c.is_array() || c.size() != 2 || c[0].size() != 2 || c[1].size() != 2)
      throw InputError(path + ".corners: expected [[x0,y0],[x1,y1]]");
    return rect(c[0][0].get<double>(), c[0][1].get<double>(),
                c[1][0].get<double>(), c[1][1].get<double>());
  }
  throw InputError(path + ".kind: must be \"disc\" or \"rect\"");
}

}  // namespace holorigid
