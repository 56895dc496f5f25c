#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace snu {

// Open dyadic cube T_{r,m} = prod_n (r_n / 2^m, (r_n + 1) / 2^m) of the torus.
struct DyadicCube {
  int m = 0;
  std::vector<std::int64_t> r;

  int dim() const { return static_cast<int>(r.size()); }
  double side() const;
  double lower(int axis) const;
  double upper(int axis) const;
  std::vector<double> center() const;

  // Closed-cube membership; points are taken modulo 1.
  bool contains_closed(std::span<const double> x) const;
  // True when this cube is contained in (or equal to) `other`.
  bool is_subcube_of(const DyadicCube& other) const;

  // The cube of generation m whose half-open cell [r/2^m, (r+1)/2^m) holds x.
  static DyadicCube containing(std::span<const double> x, int m);
  static DyadicCube torus(int d);

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

// All 2^{md} cubes of generation m, ordered with the last axis fastest.
std::vector<DyadicCube> dyadic_cubes(int m, int d);

}  // namespace snu
