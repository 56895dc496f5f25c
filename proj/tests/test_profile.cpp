#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "snu/nu_profile.hpp"
#include "snu/profile.hpp"
#include "snu/random_series.hpp"

using namespace snu;

namespace {

NuProfile step_half() { return NuProfile::step(1, 0.5, 1.0); }
NuProfile ramp() { return NuProfile(1, {{0.0, 0.0}, {0.5, 1.0}}); }

std::vector<double> grid(double a, double b, double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::lround((b - a) / step));
  for (int i = 0; i <= n; ++i) g.push_back(a + i * step);
  return g;
}

CoefficientField random_field(int d, int levels, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CoefficientField f(d, levels, WaveletFamily::haar());
  for (int j = 0; j < levels; ++j) {
    for (auto& c : f.scale(j)) c = std::polar(std::pow(2.0, -j * 1.5 * u(rng)), 6.0 * u(rng));
  }
  return f;
}

}  // namespace

TEST_CASE("NuProfile validation and evaluation") {
  CHECK_THROWS(NuProfile(1, {}));
  CHECK_THROWS(NuProfile(1, {{0.5, 1.5}}));
  CHECK_THROWS(NuProfile(1, {{0.5, 0.5}, {0.4, 0.6}}));
  CHECK_THROWS(NuProfile(1, {{0.5, 0.7}, {0.6, 0.6}}));
  CHECK_THROWS(NuProfile(3, {{0.5, 0.7}}));
  CHECK_THROWS(NuProfile(1, {{-0.1, 0.7}}));
  const NuProfile r = ramp();
  CHECK(r(-0.01) == kNegInf);
  CHECK(r(0.25) == doctest::Approx(0.5));
  CHECK(r(7.0) == 1.0);
  CHECK(step_half()(0.5) == 1.0);
  CHECK(step_half()(0.4999) == kNegInf);
}

TEST_CASE("alpha_min examples") {
  CHECK(alpha_min(step_half()) == 0.5);
  CHECK(alpha_min(ramp()) == 0.0);
  CHECK(alpha_min(NuProfile::step(1, 0.3, 1.0)) == 0.3);
}

TEST_CASE("alpha_max examples") {
  CHECK(std::abs(alpha_max(step_half()) - 0.5) <= 1e-12);
  CHECK(std::abs(alpha_max(ramp()) - 0.5) <= 1e-12);
  CHECK(std::abs(alpha_max(NuProfile::step(2, 1.0, 2.0)) - 0.5) <= 1e-12);
  CHECK(alpha_max(NuProfile::step(1, 0.4, 0.0)) == kPosInf);
}

TEST_CASE("spectrum_dnu examples") {
  CHECK(std::abs(spectrum_dnu(step_half(), 0.5) - 1.0) <= 1e-12);
  CHECK(spectrum_dnu(step_half(), 0.25) == kNegInf);
  CHECK(std::abs(spectrum_dnu(ramp(), 0.3) - 0.6) <= 1e-12);
  CHECK(spectrum_dnu(NuProfile::step(2, 1.0, 2.0), 3.0) == 2.0);
  CHECK_THROWS(spectrum_dnu(ramp(), 0.0));
}

TEST_CASE("spectrum and alpha_max properties on random admissible profiles") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(trial % 2);
    std::vector<Breakpoint> bp;
    double a = 0.05 + u(rng);
    double v = d * u(rng) * 0.5;
    const int n = 1 + static_cast<int>(u(rng) * 4);
    for (int i = 0; i < n; ++i) {
      bp.push_back({a, v});
      a += 0.05 + u(rng);
      v = std::min<double>(d, v + u(rng) * (d - v));
    }
    const NuProfile nu(d, bp);
    if (nu.sup_value() == 0.0) continue;
    const double amax = alpha_max(nu);
    // In d = 2 the ratio h / nu(h) can drop below h, e.g. nu = 2 from 1 on gives 1/2.
    if (d == 1) CHECK(amax >= alpha_min(nu));
    // Brute-force infimum of h / nu(h) over a fine grid never beats the closed form.
    for (double h = alpha_min(nu); h < a + 1.0; h += 0.001) {
      if (nu(h) > 0.0) REQUIRE(h / nu(h) >= amax - 1e-12);
    }
    double prev = kNegInf;
    for (double h = 0.01; h <= amax; h += 0.01) {
      const double s = spectrum_dnu(nu, h);
      REQUIRE(s <= d + 1e-12);
      REQUIRE(s >= prev - 1e-12);
      prev = s;
    }
    CHECK(spectrum_dnu(nu, amax + 1.0) == d);
  }
}

TEST_CASE("count_large examples and errors") {
  const auto f = oracle::power_field(1, 10, 1.0);
  for (int j = 0; j < 10; ++j) {
    CHECK(count_large(f, 1.0, 1.0, j) == (std::size_t{1} << j));
    if (j >= 1) CHECK(count_large(f, 1.0, 0.5, j) == 0);
  }
  CoefficientField zero(2, 5, WaveletFamily::haar());
  CHECK(count_large(zero, 0.1, 3.0, 4) == 0);
  CHECK_THROWS(count_large(f, 0.0, 1.0, 3));
  CHECK_THROWS(count_large(f, -1.0, 1.0, 3));
  CHECK_THROWS(count_large(f, 1.0, 1.0, 10));
}

TEST_CASE("count_large agrees with naive enumeration and is monotone") {
  std::mt19937_64 rng(9);
  for (int d = 1; d <= 2; ++d) {
    const auto f = random_field(d, d == 1 ? 10 : 5, rng);
    for (int j = 0; j < f.levels(); ++j) {
      std::size_t prev_alpha = 0;
      for (double alpha = -0.2; alpha <= 2.0; alpha += 0.1) {
        const std::size_t n = count_large(f, 1.0, alpha, j);
        REQUIRE(n == oracle::brute_count(f, 1.0, alpha, j));
        REQUIRE(n >= prev_alpha);
        prev_alpha = n;
      }
      std::size_t prev_c = f.scale_size(j);
      for (double C : {0.01, 0.1, 0.5, 1.0, 2.0, 8.0}) {
        const std::size_t n = count_large(f, C, 0.7, j);
        REQUIRE(n == oracle::brute_count(f, C, 0.7, j));
        REQUIRE(n <= prev_c);
        prev_c = n;
      }
    }
  }
}

TEST_CASE("isotonic regression") {
  const auto r = isotonic_nondecreasing({1.0, 3.0, 2.0, 4.0});
  CHECK(r == std::vector<double>{1.0, 2.5, 2.5, 4.0});
  const auto s = isotonic_nondecreasing({kNegInf, kNegInf, 0.5, 0.3, 0.1});
  CHECK(s[0] == kNegInf);
  CHECK(s[1] == kNegInf);
  CHECK(s[2] == doctest::Approx(0.3));
  CHECK(s[4] == doctest::Approx(0.3));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(20);
    double sum = 0.0;
    for (auto& x : v) sum += (x = g(rng));
    const auto w = isotonic_nondecreasing(v);
    double sw = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      sw += w[i];
      if (i > 0) REQUIRE(w[i] >= w[i - 1] - 1e-12);
    }
    CHECK(sw == doctest::Approx(sum));
  }
}

TEST_CASE("wavelet_profile on the deterministic 2^-j field") {
  const auto f = oracle::power_field(1, 13, 1.0);
  ProfileOptions opt;
  opt.j_max = 12;
  const auto g = grid(0.0, 2.0, 0.05);
  const auto est = wavelet_profile(f, g, opt);
  REQUIRE(est.nu_hat.size() == g.size());
  CHECK(est.nu_hat_by_epsilon.size() == 4);
  for (std::size_t a = 0; a < g.size(); ++a) {
    CAPTURE(g[a]);
    if (g[a] < 0.95 - 1e-9) CHECK(est.nu_hat[a] == kNegInf);
    if (g[a] >= 1.0 - 1e-9) CHECK(std::abs(est.nu_hat[a] - 1.0) <= 0.1);
  }
}

TEST_CASE("wavelet_profile on a zero field and option errors") {
  CoefficientField zero(1, 8, WaveletFamily::haar());
  const auto est = wavelet_profile(zero, grid(0.0, 1.0, 0.1));
  for (double v : est.nu_hat) CHECK(v == kNegInf);
  ProfileOptions bad;
  bad.j_min = 1;
  CHECK_THROWS(wavelet_profile(zero, {0.5}, bad));
  bad.j_min = 5;
  bad.j_max = 4;
  CHECK_THROWS(wavelet_profile(zero, {0.5}, bad));
  ProfileOptions eps;
  eps.epsilon_schedule = {0.1, 0.2};
  CHECK_THROWS(wavelet_profile(zero, {0.5}, eps));
  eps.epsilon_schedule = {0.1, -0.1};
  CHECK_THROWS(wavelet_profile(zero, {0.5}, eps));
}

TEST_CASE("wavelet_profile is monotone and bounded by d") {
  std::mt19937_64 rng(21);
  for (int d = 1; d <= 2; ++d) {
    const auto f = random_field(d, d == 1 ? 12 : 6, rng);
    const auto est = wavelet_profile(f, grid(0.0, 2.0, 0.05));
    for (std::size_t a = 0; a < est.nu_hat.size(); ++a) {
      if (std::isfinite(est.nu_hat[a])) CHECK(est.nu_hat[a] <= d + 1e-12);
      if (a > 0) CHECK(est.nu_hat[a] >= est.nu_hat[a - 1]);
    }
  }
}

TEST_CASE("wavelet_profile is stable under scaling within one grid cell") {
  std::mt19937_64 rng(33);
  const auto f = random_field(1, 13, rng);
  const auto g = grid(0.0, 2.0, 0.1);
  ProfileOptions opt;
  opt.j_min = 10;
  opt.j_max = 12;
  const auto base = wavelet_profile(f, g, opt);
  const auto scaled = wavelet_profile(f * Complex(2.0, 0.0), g, opt);
  for (std::size_t a = 0; a + 1 < g.size(); ++a) {
    CAPTURE(g[a]);
    CHECK(scaled.nu_hat[a] >= base.nu_hat[a]);
    CHECK(scaled.nu_hat[a] <= base.nu_hat[a + 1]);
  }
}

TEST_CASE("wavelet_profile recovers the profile of a random series") {
  const NuProfile nu(1, {{0.4, 0.7}, {1.0, 1.0}});
  const auto sample = generate_series(nu, 15, WaveletFamily::haar(), 2024);
  ProfileOptions opt;
  opt.j_min = 10;
  opt.j_max = 14;
  std::vector<double> g;
  for (double a = alpha_min(nu); a <= alpha_max(nu) + 1.0 + 1e-9; a += 0.05) g.push_back(a);
  const auto est = wavelet_profile(sample.field, g, opt);
  double dist = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) dist = std::max(dist, std::abs(est.nu_hat[a] - nu(g[a])));
  CHECK(dist < 0.15);
}

TEST_CASE("check_membership examples") {
  CoefficientField zero(1, 10, WaveletFamily::haar());
  CHECK(check_membership(zero, step_half(), 0.1, 1.0, 2).pass);

  const auto f = oracle::power_field(1, 10, 0.5);
  const auto rep = check_membership(f, NuProfile::step(1, 1.0, 1.0), 0.1, 1.0, 3, {0.55});
  CHECK_FALSE(rep.pass);
  CHECK(rep.violating_scales() == std::vector<int>{3, 4, 5, 6, 7, 8, 9});
  for (const auto& v : rep.violations) CHECK(v.count == (std::size_t{1} << v.j));
  CHECK_THROWS(check_membership(f, step_half(), 0.1, 1.0, 11));
}

TEST_CASE("samples of nu are members of S^nu") {
  const NuProfile nu(1, {{0.4, 0.7}, {1.0, 1.0}});
  int passed = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const auto s = generate_series(nu, 13, WaveletFamily::haar(), 100 + static_cast<std::uint64_t>(t));
    if (check_membership(s.field, nu, 0.3, 1.0, 8, grid(0.0, 2.0, 0.1)).pass) ++passed;
  }
  CHECK(passed >= 0.95 * trials);
}

TEST_CASE("ancillary_distance examples") {
  CoefficientField zero(1, 6, WaveletFamily::haar());
  CHECK(ancillary_distance(zero, step_half(), 0.7, 0.1) == 0.0);

  CoefficientField one(1, 6, WaveletFamily::haar());
  one.set({1, 0, {0, 0}}, Complex(0.0, 1.0));
  CHECK(ancillary_distance(one, step_half(), 0.7, 0.1) == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const auto f = random_field(1, 8, rng);
    const double a = ancillary_distance(f, ramp(), 0.3, 0.2);
    const double b = ancillary_distance(f * Complex(2.0, 0.0), ramp(), 0.3, 0.2);
    CHECK(b >= a);
  }
  CHECK_THROWS(ancillary_distance(one, ramp(), 0.3, 0.0));
}

TEST_CASE("ancillary_distance matches bisection on the feasibility predicate") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const int d = 1 + t % 2;
    const auto f = random_field(d, d == 1 ? 9 : 5, rng);
    const NuProfile nu(d, {{0.2, 0.3 * d}, {1.2, 1.0 * d}});
    for (double alpha : {0.1, 0.5, 0.9}) {
      for (double eps : {0.05, 0.3}) {
        const double exact = ancillary_distance(f, nu, alpha, eps);
        const double bisect = oracle::ancillary_bisect(f, nu(alpha), alpha, eps);
        CAPTURE(alpha);
        CHECK(exact == doctest::Approx(bisect).epsilon(1e-9));
      }
    }
  }
}
