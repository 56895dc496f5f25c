#include "snu/dyadic_cube.hpp"

#include <cmath>
#include <stdexcept>

namespace snu {

double DyadicCube::side() const { return std::ldexp(1.0, -m); }

double DyadicCube::lower(int axis) const {
  return std::ldexp(static_cast<double>(r.at(axis)), -m);
}

double DyadicCube::upper(int axis) const {
  return std::ldexp(static_cast<double>(r.at(axis) + 1), -m);
}

std::vector<double> DyadicCube::center() const {
  std::vector<double> c(r.size());
  for (std::size_t a = 0; a < r.size(); ++a) {
    c[a] = std::ldexp(2.0 * static_cast<double>(r[a]) + 1.0, -m - 1);
  }
  return c;
}

bool DyadicCube::contains_closed(std::span<const double> x) const {
  if (x.size() != r.size()) {
    throw std::invalid_argument("DyadicCube: point dimension mismatch");
  }
  for (std::size_t a = 0; a < r.size(); ++a) {
    const double t = x[a] - std::floor(x[a]);
    const int ax = static_cast<int>(a);
    if (t < lower(ax) || t > upper(ax)) return false;
  }
  return true;
}

bool DyadicCube::is_subcube_of(const DyadicCube& other) const {
  if (other.r.size() != r.size() || other.m > m) return false;
  const int shift = m - other.m;
  for (std::size_t a = 0; a < r.size(); ++a) {
    if ((r[a] >> shift) != other.r[a]) return false;
  }
  return true;
}

DyadicCube DyadicCube::containing(std::span<const double> x, int m) {
  if (m < 0 || m > 60) throw std::invalid_argument("DyadicCube: generation out of range");
  DyadicCube c;
  c.m = m;
  c.r.resize(x.size());
  const std::int64_t n = std::int64_t{1} << m;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const double t = x[a] - std::floor(x[a]);
    auto idx = static_cast<std::int64_t>(std::floor(std::ldexp(t, m)));
    c.r[a] = std::min(idx, n - 1);
  }
  return c;
}

DyadicCube DyadicCube::torus(int d) {
  DyadicCube c;
  c.r.assign(static_cast<std::size_t>(d), 0);
  return c;
}

std::vector<DyadicCube> dyadic_cubes(int m, int d) {
  if (m < 0) throw std::invalid_argument("dyadic_cubes: negative generation");
  if (d < 1 || d > 2) throw std::invalid_argument("dyadic_cubes: dimension must be 1 or 2");
  const std::int64_t n = std::int64_t{1} << m;
  std::vector<DyadicCube> out;
  if (d == 1) {
    for (std::int64_t a = 0; a < n; ++a) out.push_back({m, {a}});
  } else {
    for (std::int64_t a = 0; a < n; ++a)
      for (std::int64_t b = 0; b < n; ++b) out.push_back({m, {a, b}});
  }
  return out;
}

}  // namespace snu
