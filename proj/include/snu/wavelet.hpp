#pragma once

// Periodized orthonormal wavelet analysis and synthesis on the torus T^d
// (d = 1 or 2) in L-infinity normalization:
//
//   c_{j,k}^{(i)} = 2^{dj} \int f(x) psi^{(i)}(2^j x - k) dx,
//
// i.e. 2^{jd/2} times the usual L^2 coefficient. A field with `levels() == J`
// stores details for scales 0 <= j < J, which is exactly what a 2^J-point
// grid carries.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snu/dyadic_cube.hpp"

namespace snu {

using Complex = std::complex<double>;

enum class WaveletKind { Haar, Daubechies };

class WaveletFamily {
 public:
  static WaveletFamily haar();
  // Daubechies with N vanishing moments, 2 <= N <= 10.
  static WaveletFamily daubechies(int vanishing_moments);
  // Accepts "haar", "db1" (= haar) and "db2" ... "db10".
  static WaveletFamily from_name(const std::string& name);

  WaveletKind kind() const { return kind_; }
  int vanishing_moments() const { return moments_; }
  std::string name() const;
  // Scaling filter h with phi(x) = sqrt(2) sum_n h_n phi(2x - n).
  std::span<const double> lowpass() const { return lowpass_; }
  // Wavelet filter g_n = (-1)^n h_{L-1-n}.
  std::span<const double> highpass() const { return highpass_; }
  // Taps - 1; supp psi = [0, support_width].
  int support_width() const { return static_cast<int>(lowpass_.size()) - 1; }

  friend bool operator==(const WaveletFamily& a, const WaveletFamily& b) {
    return a.kind_ == b.kind_ && a.moments_ == b.moments_;
  }

 private:
  WaveletFamily(WaveletKind kind, int moments, std::vector<double> lowpass);

  WaveletKind kind_;
  int moments_;
  std::vector<double> lowpass_;
  std::vector<double> highpass_;
};

struct DyadicIndex {
  int i = 1;  // orientation, 1 <= i < 2^d
  int j = 0;
  std::array<std::int64_t, 2> k{0, 0};

  friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

// Complex values of a 1-periodic function on the uniform 2^J grid per axis.
// Samples are stored row-major with the last axis fastest.
class SampledSignal {
 public:
  SampledSignal(int dim, int grid_scale);
  SampledSignal(int dim, int grid_scale, std::vector<Complex> values);

  int dim() const { return dim_; }
  int grid_scale() const { return grid_scale_; }
  std::int64_t points_per_axis() const { return std::int64_t{1} << grid_scale_; }
  std::size_t size() const { return values_.size(); }

  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }
  Complex& at(std::int64_t n1, std::int64_t n2 = 0);
  const Complex& at(std::int64_t n1, std::int64_t n2 = 0) const;

  double sup_distance(const SampledSignal& other) const;
  // Squared L^2 norm on [0,1]^d of the piecewise-constant interpolant.
  double l2_norm_squared() const;

 private:
  int dim_;
  int grid_scale_;
  std::vector<Complex> values_;
};

class CoefficientField {
 public:
  CoefficientField(int dim, int levels, WaveletFamily family);

  int dim() const { return dim_; }
  int levels() const { return levels_; }
  int finest_scale() const { return levels_ - 1; }
  int orientations() const { return (1 << dim_) - 1; }
  const WaveletFamily& family() const { return family_; }

  std::int64_t positions_per_axis(int j) const { return std::int64_t{1} << j; }
  std::size_t positions(int j) const;
  // Number of stored detail coefficients at scale j, all orientations.
  std::size_t scale_size(int j) const { return positions(j) * static_cast<std::size_t>(orientations()); }

  // Orientation-major flat storage of scale j: (i - 1) * positions(j) + flat(k).
  std::span<const Complex> scale(int j) const;
  std::span<Complex> scale(int j);

  std::size_t flat_index(const DyadicIndex& idx) const;
  DyadicIndex index_of(int j, std::size_t flat) const;
  bool contains(const DyadicIndex& idx) const;

  // Indices outside the stored range read as zero.
  Complex get(const DyadicIndex& idx) const;
  void set(const DyadicIndex& idx, Complex value);

  Complex scaling() const { return scaling_; }
  void set_scaling(Complex value) { scaling_ = value; }

  double max_modulus(int j) const;
  bool is_zero() const;

  CoefficientField& operator+=(const CoefficientField& other);
  CoefficientField& operator*=(Complex factor);
  friend CoefficientField operator+(CoefficientField a, const CoefficientField& b) { return a += b; }
  friend CoefficientField operator*(CoefficientField a, Complex factor) { return a *= factor; }
  friend bool operator==(const CoefficientField&, const CoefficientField&) = default;

 private:
  int dim_;
  int levels_;
  WaveletFamily family_;
  Complex scaling_{0.0, 0.0};
  std::vector<std::vector<Complex>> detail_;
};

// Pyramid filter bank with circular boundary handling. Details at scales
// >= jmax are discarded, so the result is the projection onto V_jmax.
CoefficientField forward_transform(const SampledSignal& signal, const WaveletFamily& family, int jmax);
CoefficientField forward_transform(const SampledSignal& signal, const WaveletFamily& family);

SampledSignal inverse_transform(const CoefficientField& field, int grid_scale);

// Per-axis closed range [lo, hi] of positions k whose wavelet support fits
// in the cube: r 2^{j-m} <= k <= (r + 1) 2^{j-m} - support_width.
struct IndexBox {
  int j = 0;
  int dim = 1;
  std::array<std::int64_t, 2> lo{0, 0};
  std::array<std::int64_t, 2> hi{-1, -1};

  bool empty() const;
  std::size_t count() const;  // positions, one orientation
};

IndexBox support_box(const WaveletFamily& family, const DyadicCube& cube, int j);

// I_j for the cube: every (i, k) with supp psi_{j,k}^{(i)} inside the cube.
std::vector<DyadicIndex> restrict_indices(const CoefficientField& field, const DyadicCube& cube, int j);

// Entry j is max |c_{j,k}^{(i)}| over I_j, or nullopt when I_j is empty.
std::vector<std::optional<double>> sup_norm_per_scale(const CoefficientField& field, const DyadicCube& cube);

}  // namespace snu
