#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "snu/irregularity.hpp"
#include "snu/prevalence.hpp"
#include "snu/random_series.hpp"

using namespace snu;

namespace {

int floor_log2(int j) { return j < 2 ? 0 : static_cast<int>(std::floor(std::log2(static_cast<double>(j)))); }

// Haar field with moduli 2^{-inner l} on wavelets supported in [0, 1/4], 2^{-outer l} elsewhere.
CoefficientField block_field(int levels, double inner, double outer) {
  CoefficientField f(1, levels, WaveletFamily::haar());
  for (int l = 0; l < levels; ++l) {
    const std::int64_t side = std::int64_t{1} << l;
    for (std::int64_t k = 0; k < side; ++k) {
      const bool in = 4 * (k + 1) <= side;
      f.set({1, l, {k, 0}}, std::pow(2.0, -(in ? inner : outer) * l));
    }
  }
  return f;
}

}  // namespace

TEST_CASE("finite_difference examples") {
  SampledSignal c(1, 6);
  for (auto& v : c.values()) v = 3.0;
  const auto z = finite_difference(c, {5, 0}, 1);
  for (const auto& v : z.values()) CHECK(v == Complex(0.0, 0.0));

  const int J = 6;
  const std::int64_t N = std::int64_t{1} << J;
  SampledSignal saw(1, J);
  for (std::int64_t n = 0; n < N; ++n) saw.at(n) = static_cast<double>(n) / static_cast<double>(N);
  const auto d2 = finite_difference(saw, {1, 0}, 2);
  for (std::int64_t n = 0; n + 2 < N; ++n) CHECK(std::abs(d2.at(n)) < 1e-14);
  CHECK(std::abs(d2.at(N - 1)) > 0.5);

  SampledSignal cs(1, J);
  const double tau = 2.0 * std::numbers::pi;
  for (std::int64_t n = 0; n < N; ++n) cs.at(n) = std::cos(tau * static_cast<double>(n) / static_cast<double>(N));
  const auto dc = finite_difference(cs, {N / 4, 0}, 1);
  for (std::int64_t n = 0; n < N; ++n) {
    const double x = static_cast<double>(n) / static_cast<double>(N);
    CHECK(std::abs(dc.at(n) - (std::cos(tau * (x + 0.25)) - std::cos(tau * x))) < 1e-12);
  }
  CHECK_THROWS(finite_difference(cs, {1, 0}, 0));
}

TEST_CASE("finite_difference is linear and commutes with translation") {
  std::mt19937_64 rng(4);
  for (int d = 1; d <= 2; ++d) {
    const int J = d == 1 ? 8 : 4;
    const auto a = oracle::random_signal(d, J, rng);
    const auto b = oracle::random_signal(d, J, rng);
    const GridOffset h{3, d == 2 ? -2 : 0};
    SampledSignal comb(d, J);
    for (std::size_t n = 0; n < comb.size(); ++n) comb.values()[n] = 2.0 * a.values()[n] + b.values()[n];
    const auto lhs = finite_difference(comb, h, 3);
    const auto da = finite_difference(a, h, 3);
    const auto db = finite_difference(b, h, 3);
    for (std::size_t n = 0; n < comb.size(); ++n) {
      REQUIRE(std::abs(lhs.values()[n] - (2.0 * da.values()[n] + db.values()[n])) < 1e-10);
    }
    // Translation by t: (tau_t f)(x) = f(x + t).
    const std::int64_t N = a.points_per_axis();
    const std::int64_t t1 = 5, t2 = d == 2 ? 7 : 0;
    SampledSignal shifted(d, J);
    for (std::int64_t x = 0; x < N; ++x) {
      for (std::int64_t y = 0; y < (d == 2 ? N : 1); ++y) shifted.at(x, y) = a.at(x + t1, y + t2);
    }
    const auto ds = finite_difference(shifted, h, 3);
    for (std::int64_t x = 0; x < N; ++x) {
      for (std::int64_t y = 0; y < (d == 2 ? N : 1); ++y) REQUIRE(ds.at(x, y) == da.at(x + t1, y + t2));
    }
  }
}

TEST_CASE("holder_modulus examples") {
  SampledSignal c(1, 8);
  for (auto& v : c.values()) v = 1.0;
  const auto zero = holder_modulus(c, DyadicCube::torus(1), 1, {0.5, 0.25, 0.125});
  for (double s : zero.S) CHECK(s == 0.0);

  const auto psi = oracle::haar_wavelet_samples(1, 8, {1, 0, {0, 0}});
  const auto hm = holder_modulus(psi, DyadicCube::torus(1), 1, {0.5});
  REQUIRE(hm.S.size() == 1);
  CHECK(hm.S[0] == doctest::Approx(2.0));

  // Radii too large for the cube are dropped.
  const auto dropped = holder_modulus(psi, DyadicCube{2, {1}}, 2, {0.25, 0.0625});
  CHECK(dropped.dropped_r == std::vector<double>{0.25});
  CHECK(dropped.r == std::vector<double>{0.0625});
}

TEST_CASE("holder_modulus slope on a synthesized monofractal") {
  const int J = 14;
  const auto fam = WaveletFamily::daubechies(4);
  const auto f = oracle::power_field(1, J, 0.5, fam);
  const auto s = inverse_transform(f, J);
  std::vector<double> r;
  for (int e = 4; e <= 10; ++e) r.push_back(std::ldexp(1.0, -e));
  const auto hm = holder_modulus(s, DyadicCube::torus(1), 1, r);
  CHECK(hm.slope >= 0.4);
  CHECK(hm.slope <= 0.6);
}

TEST_CASE("windowed statistic on a power law stays inside the closed-form bracket") {
  for (double a0 : {0.3, 0.7, 1.5}) {
    for (int M : {1, 2}) {
      // The bracket assumes M > a0, which M = [alpha] + 1 guarantees.
      if (M <= a0) continue;
      const int levels = 16;
      std::vector<std::optional<double>> norms;
      for (int l = 0; l < levels; ++l) norms.emplace_back(std::pow(2.0, -a0 * l));
      const auto w = windowed_statistic(norms, M, {2, levels - 1});
      for (int j = 2; j < levels; ++j) {
        const double K = w.K[static_cast<std::size_t>(j - 2)];
        const int lg = floor_log2(j);
        CAPTURE(a0);
        CAPTURE(M);
        CAPTURE(j);
        CHECK(K >= std::pow(2.0, -(j + lg) * a0) * (1 - 1e-12));
        CHECK(K <= std::pow(2.0, -j * a0) * std::pow(j, std::max(0.0, M - a0)) * (1 + 1e-12));
        CHECK(K >= *norms[static_cast<std::size_t>(j)]);
      }
    }
  }
}

TEST_CASE("windowed statistic: zero field and spike coverage") {
  const int levels = 16;
  std::vector<std::optional<double>> zero(levels, 0.0);
  const auto wz = windowed_statistic(zero, 1, {2, levels - 1});
  for (double K : wz.K) CHECK(K == 0.0);
  for (auto b : wz.branch) CHECK(b == WindowBranch::None);

  const int j0 = 10;
  for (int M : {1, 2}) {
    std::vector<std::optional<double>> spike(levels, 0.0);
    spike[j0] = 1.0;
    const auto w = windowed_statistic(spike, M, {2, levels - 1});
    for (int j = 2; j < levels; ++j) {
      const int lg = floor_log2(j);
      const std::size_t n = static_cast<std::size_t>(j - 2);
      CAPTURE(j);
      if (j <= j0 && j0 <= j + lg) {
        CHECK(w.K[n] == 1.0);
        CHECK(w.branch[n] == WindowBranch::Upper);
        CHECK(w.argmax_scale[n] == j0);
      } else if (j - lg <= j0 && j0 <= j) {
        CHECK(w.K[n] == doctest::Approx(std::pow(2.0, -M * (j - j0))));
        CHECK(w.branch[n] == WindowBranch::Lower);
      } else {
        CHECK(w.K[n] == 0.0);
        CHECK(w.argmax_scale[n] == -1);
      }
    }
  }
}

TEST_CASE("windowed statistic flags clipped windows") {
  std::vector<std::optional<double>> norms(12, 1.0);
  const auto w = windowed_statistic(norms, 1, {2, 11});
  // j = 11 has a window [11, 14] but only scale 11 exists.
  CHECK(w.clipped.back());
  CHECK_FALSE(w.clipped.front());
}

TEST_CASE("uniform exponent on deterministic fields") {
  const auto f = oracle::power_field(1, 13, 0.7);
  const auto est = uniform_irregularity_exponent(f, DyadicCube::torus(1), 1, ScaleRange{6, 12});
  CHECK(est.exponent_hat == doctest::Approx(0.7).epsilon(0.05 / 0.7));
  CHECK(est.r_squared > 0.99);

  CoefficientField zero(1, 12, WaveletFamily::haar());
  CHECK_THROWS_AS(uniform_irregularity_exponent(zero, DyadicCube::torus(1), 1), DegenerateEstimate);
  CHECK_THROWS_AS(uniform_irregularity_exponent(f, DyadicCube::torus(1), 1, ScaleRange{6, 7}), DegenerateEstimate);

  // Background 2^{-0.5 l} plus 2^{-0.3 l} spikes on positions whose odd binary digits vanish.
  auto g = oracle::power_field(1, 14, 0.5);
  for (int l = 0; l < 14; ++l) {
    const std::int64_t side = std::int64_t{1} << l;
    for (std::int64_t k = 0; k < side; ++k) {
      if ((k & 0x2AAA) == 0) g.set({1, l, {k, 0}}, std::pow(2.0, -0.3 * l));
    }
  }
  const auto spikes = uniform_irregularity_exponent(g, DyadicCube{1, {0}}, 1);
  CHECK(std::abs(spikes.exponent_hat - 0.3) <= 0.05);
}

TEST_CASE("default fit range is the upper half of the usable scales") {
  const auto f = oracle::power_field(1, 14, 0.5);
  const auto use = usable_scales(f, DyadicCube{2, {1}});
  CHECK(use.lo == 2);
  CHECK(use.hi == 13);
  const auto fit = default_fit_range(f, DyadicCube{2, {1}});
  CHECK(fit.hi == 13);
  CHECK(fit.lo == 7);
  CoefficientField db(1, 14, WaveletFamily::daubechies(3));
  CHECK(usable_scales(db, DyadicCube{2, {1}}).lo == 5);
}

TEST_CASE("local exponent examples") {
  const auto mono = oracle::power_field(1, 14, 0.6);
  for (double x : {0.1, 0.37, 0.9}) {
    const auto est = local_irregularity_exponent(mono, {x}, {0, 1, 2}, 1);
    CHECK(std::abs(est.exponent_hat - 0.6) <= 0.05);
    CHECK(est.per_generation.size() == 3);
  }
  const auto block = block_field(14, 0.3, 0.8);
  const auto at09 = local_irregularity_exponent(block, {0.9}, {0, 1, 2}, 1);
  CHECK(std::abs(at09.exponent_hat - 0.8) <= 0.05);
  const auto at01 = local_irregularity_exponent(block, {0.1}, {0, 1, 2}, 1);
  CHECK(std::abs(at01.exponent_hat - 0.3) <= 0.05);

  CoefficientField zero(1, 14, WaveletFamily::haar());
  CHECK_THROWS_AS(local_irregularity_exponent(zero, {0.5}, {0, 1}, 1), DegenerateEstimate);
}

TEST_CASE("sub-cube estimates dominate their parents on exact fields") {
  const auto block = block_field(14, 0.3, 0.8);
  for (int m = 0; m < 3; ++m) {
    for (const auto& child : dyadic_cubes(m + 1, 1)) {
      const DyadicCube parent{m, {child.r[0] / 2}};
      const double c = uniform_irregularity_exponent(block, child, 1).exponent_hat;
      const double p = uniform_irregularity_exponent(block, parent, 1).exponent_hat;
      CHECK(c >= p - 1e-9);
    }
  }
}

TEST_CASE("estimates respect a uniform upper bound on the coefficients") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double alpha = 0.2 + 0.03 * t;
    CoefficientField f(1, 14, WaveletFamily::haar());
    for (int l = 0; l < 14; ++l) {
      for (auto& c : f.scale(l)) c = u(rng) * std::pow(2.0, -alpha * l);
    }
    const auto est = uniform_irregularity_exponent(f, DyadicCube::torus(1), 1);
    CHECK(est.exponent_hat >= alpha - 0.05);
  }
}

TEST_CASE("uniform_holder_check") {
  const auto f = oracle::power_field(1, 12, 0.4);
  CHECK(uniform_holder_check(f, 0.4, DyadicCube::torus(1)) == doctest::Approx(1.0));
  CoefficientField zero(1, 12, WaveletFamily::haar());
  CHECK(uniform_holder_check(zero, 0.4, DyadicCube::torus(1)) == 0.0);
  CHECK_THROWS(uniform_holder_check(f, 1.0, DyadicCube::torus(1)));
  CHECK_THROWS(uniform_holder_check(f, 0.0, DyadicCube::torus(1)));

  const NuProfile nu(1, {{0.5, 0.0}, {0.8, 1.0}});
  const auto s10 = generate_series(nu, 10, WaveletFamily::haar(), 3);
  const auto s14 = generate_series(nu, 14, WaveletFamily::haar(), 3);
  CHECK(uniform_holder_check(s14.field, 0.3, DyadicCube::torus(1)) <= 1.0);
  const double c10 = uniform_holder_check(s10.field, 0.7, DyadicCube::torus(1));
  const double c14 = uniform_holder_check(s14.field, 0.7, DyadicCube::torus(1));
  CHECK(c14 > c10);
  CHECK(c14 >= std::pow(2.0, 0.2 * 13) * (1 - 1e-9));
}

TEST_CASE("difference_order") {
  CHECK(difference_order(0.5) == 1);
  CHECK(difference_order(1.0) == 1);
  CHECK(difference_order(1.5) == 2);
  CHECK(difference_order(2.0) == 2);
  CHECK(difference_order(2.01) == 3);
}
