#include "snu/wavelet.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace snu {

namespace {

// Daubechies scaling filters h_n (sum = sqrt(2)), N = 2 ... 10 vanishing moments.
const std::vector<std::vector<double>>& daubechies_table() {
  static const std::vector<std::vector<double>> table = {
      {0.48296291314453416, 0.83651630373780794, 0.22414386804201339, -0.12940952255126037},
      {0.33267055295008263, 0.80689150931109255, 0.45987750211849154, -0.13501102001025458,
       -0.085441273882026658, 0.035226291885709533},
      {0.23037781330889651, 0.71484657055291567, 0.63088076792985892, -0.027983769416859854,
       -0.18703481171909309, 0.030841381835560764, 0.032883011666885197, -0.010597401785069032},
      {0.16010239797419293, 0.60382926979718965, 0.72430852843777294, 0.13842814590132074,
       -0.24229488706638203, -0.032244869584638375, 0.077571493840045719, -0.0062414902127982744,
       -0.012580751999081999, 0.0033357252854737712},
      {0.11154074335010947, 0.49462389039845306, 0.75113390802109536, 0.31525035170919763,
       -0.22626469396543983, -0.12976686756726194, 0.097501605587323043, 0.027522865530305727,
       -0.03158203931748603, 0.00055384220116149613, 0.0047772575109455108, -0.0010773010853084796},
      {0.077852054085009184, 0.39653931948191729, 0.72913209084623509, 0.46978228740519312,
       -0.14390600392856498, -0.22403618499387498, 0.071309219266830259, 0.080612609151083078,
       -0.038029936935014413, -0.016574541630666881, 0.01255099855609984, 0.00042957797292136651,
       -0.0018016407040474908, 0.00035371379997452024},
      {0.054415842243104008, 0.31287159091429995, 0.67563073629728976, 0.58535468365420673,
       -0.015829105256349306, -0.28401554296154691, 0.00047248457391328279, 0.12874742662047847,
       -0.017369301001807547, -0.044088253930794755, 0.013981027917398282, 0.0087460940474057766,
       -0.0048703529934515741, -0.00039174037337694705, 0.00067544940645056933,
       -0.00011747678412476953},
      {0.038077947363878345, 0.24383467461259034, 0.60482312369011115, 0.65728807805130052,
       0.13319738582500756, -0.29327378327917492, -0.096840783222976456, 0.14854074933810638,
       0.03072568147933338, -0.067632829061329974, 0.00025094711483145197, 0.022361662123679096,
       -0.0047232047577513972, -0.0042815036824634303, 0.0018476468830562265,
       0.00023038576352319597, -0.00025196318894271012, 3.9347320316271603e-05},
      {0.026670057900555554, 0.1881768000776915, 0.52720118893172563, 0.68845903945360354,
       0.28117234366057747, -0.24984642432731538, -0.19594627437737705, 0.12736934033579325,
       0.093057364603572348, -0.071394147166397082, -0.029457536821875813, 0.033212674059341002,
       0.0036065535669561697, -0.010733175483330575, 0.0013953517470529011,
       0.0019924052951850561, -0.00068585669495971162, -0.00011646685512928545,
       9.3588670320069592e-05, -1.3264202894521244e-05},
  };
  return table;
}

std::size_t pow2(int e) { return std::size_t{1} << e; }

// One level of periodic analysis along a strided line of length n.
void analyze_line(const Complex* in, std::size_t stride, std::size_t n, std::span<const double> h,
                  std::span<const double> g, Complex* lo, Complex* hi, std::size_t out_stride) {
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < half; ++k) {
    Complex a{0.0, 0.0};
    Complex b{0.0, 0.0};
    for (std::size_t t = 0; t < h.size(); ++t) {
      const Complex x = in[((2 * k + t) % n) * stride];
      a += h[t] * x;
      b += g[t] * x;
    }
    lo[k * out_stride] = a;
    hi[k * out_stride] = b;
  }
}

void synthesize_line(const Complex* lo, const Complex* hi, std::size_t in_stride, std::size_t n,
                     std::span<const double> h, std::span<const double> g, Complex* out,
                     std::size_t stride) {
  for (std::size_t p = 0; p < n; ++p) out[p * stride] = Complex{0.0, 0.0};
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < half; ++k) {
    const Complex a = lo[k * in_stride];
    const Complex b = hi[k * in_stride];
    for (std::size_t t = 0; t < h.size(); ++t) {
      out[((2 * k + t) % n) * stride] += h[t] * a + g[t] * b;
    }
  }
}

}  // namespace

WaveletFamily::WaveletFamily(WaveletKind kind, int moments, std::vector<double> lowpass)
    : kind_(kind), moments_(moments), lowpass_(std::move(lowpass)) {
  const std::size_t len = lowpass_.size();
  highpass_.resize(len);
  for (std::size_t n = 0; n < len; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    highpass_[n] = sign * lowpass_[len - 1 - n];
  }
}

WaveletFamily WaveletFamily::haar() {
  const double s = 1.0 / std::sqrt(2.0);
  return WaveletFamily(WaveletKind::Haar, 1, {s, s});
}

WaveletFamily WaveletFamily::daubechies(int vanishing_moments) {
  if (vanishing_moments < 2 || vanishing_moments > 10) {
    throw std::invalid_argument("WaveletFamily: Daubechies order must be in [2, 10]");
  }
  return WaveletFamily(WaveletKind::Daubechies, vanishing_moments,
                       daubechies_table()[static_cast<std::size_t>(vanishing_moments - 2)]);
}

WaveletFamily WaveletFamily::from_name(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "haar" || s == "db1") return haar();
  if (s.size() > 2 && s.rfind("db", 0) == 0) {
    const std::string digits = s.substr(2);
    if (std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
      return daubechies(std::stoi(digits));
    }
  }
  throw std::invalid_argument("unknown wavelet family '" + name + "'");
}

std::string WaveletFamily::name() const {
  return kind_ == WaveletKind::Haar ? "haar" : "db" + std::to_string(moments_);
}

SampledSignal::SampledSignal(int dim, int grid_scale)
    : dim_(dim), grid_scale_(grid_scale) {
  if (dim < 1 || dim > 2) throw std::invalid_argument("SampledSignal: dimension must be 1 or 2");
  if (grid_scale < 1 || grid_scale * dim > 28) {
    throw std::invalid_argument("SampledSignal: grid scale out of range");
  }
  values_.assign(pow2(grid_scale * dim), Complex{0.0, 0.0});
}

SampledSignal::SampledSignal(int dim, int grid_scale, std::vector<Complex> values)
    : SampledSignal(dim, grid_scale) {
  if (values.size() != values_.size()) {
    throw std::invalid_argument("SampledSignal: expected " + std::to_string(values_.size()) +
                                " samples, got " + std::to_string(values.size()));
  }
  values_ = std::move(values);
}

Complex& SampledSignal::at(std::int64_t n1, std::int64_t n2) {
  const std::int64_t n = points_per_axis();
  const std::int64_t a = ((n1 % n) + n) % n;
  if (dim_ == 1) return values_[static_cast<std::size_t>(a)];
  const std::int64_t b = ((n2 % n) + n) % n;
  return values_[static_cast<std::size_t>(a * n + b)];
}

const Complex& SampledSignal::at(std::int64_t n1, std::int64_t n2) const {
  return const_cast<SampledSignal*>(this)->at(n1, n2);
}

double SampledSignal::sup_distance(const SampledSignal& other) const {
  if (other.dim_ != dim_ || other.grid_scale_ != grid_scale_) {
    throw std::invalid_argument("SampledSignal: grid mismatch");
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < values_.size(); ++n) {
    worst = std::max(worst, std::abs(values_[n] - other.values_[n]));
  }
  return worst;
}

double SampledSignal::l2_norm_squared() const {
  double acc = 0.0;
  for (const auto& v : values_) acc += std::norm(v);
  return std::ldexp(acc, -grid_scale_ * dim_);
}

CoefficientField::CoefficientField(int dim, int levels, WaveletFamily family)
    : dim_(dim), levels_(levels), family_(std::move(family)) {
  if (dim < 1 || dim > 2) throw std::invalid_argument("CoefficientField: dimension must be 1 or 2");
  if (levels < 0 || levels * dim > 28) {
    throw std::invalid_argument("CoefficientField: level count out of range");
  }
  detail_.resize(static_cast<std::size_t>(levels));
  for (int j = 0; j < levels; ++j) detail_[static_cast<std::size_t>(j)].assign(scale_size(j), Complex{});
}

std::size_t CoefficientField::positions(int j) const { return pow2(j * dim_); }

std::span<const Complex> CoefficientField::scale(int j) const {
  if (j < 0 || j >= levels_) throw std::out_of_range("CoefficientField: scale out of range");
  return detail_[static_cast<std::size_t>(j)];
}

std::span<Complex> CoefficientField::scale(int j) {
  if (j < 0 || j >= levels_) throw std::out_of_range("CoefficientField: scale out of range");
  return detail_[static_cast<std::size_t>(j)];
}

bool CoefficientField::contains(const DyadicIndex& idx) const {
  if (idx.j < 0 || idx.j >= levels_) return false;
  if (idx.i < 1 || idx.i > orientations()) return false;
  const std::int64_t n = positions_per_axis(idx.j);
  for (int a = 0; a < dim_; ++a) {
    if (idx.k[static_cast<std::size_t>(a)] < 0 || idx.k[static_cast<std::size_t>(a)] >= n) return false;
  }
  return true;
}

std::size_t CoefficientField::flat_index(const DyadicIndex& idx) const {
  if (!contains(idx)) throw std::out_of_range("CoefficientField: index outside Lambda");
  const auto n = static_cast<std::size_t>(positions_per_axis(idx.j));
  std::size_t flat = static_cast<std::size_t>(idx.k[0]);
  if (dim_ == 2) flat = flat * n + static_cast<std::size_t>(idx.k[1]);
  return static_cast<std::size_t>(idx.i - 1) * positions(idx.j) + flat;
}

DyadicIndex CoefficientField::index_of(int j, std::size_t flat) const {
  DyadicIndex idx;
  idx.j = j;
  const std::size_t per = positions(j);
  idx.i = static_cast<int>(flat / per) + 1;
  const std::size_t rest = flat % per;
  if (dim_ == 1) {
    idx.k = {static_cast<std::int64_t>(rest), 0};
  } else {
    const auto n = static_cast<std::size_t>(positions_per_axis(j));
    idx.k = {static_cast<std::int64_t>(rest / n), static_cast<std::int64_t>(rest % n)};
  }
  return idx;
}

Complex CoefficientField::get(const DyadicIndex& idx) const {
  if (!contains(idx)) return Complex{0.0, 0.0};
  return detail_[static_cast<std::size_t>(idx.j)][flat_index(idx)];
}

void CoefficientField::set(const DyadicIndex& idx, Complex value) {
  detail_[static_cast<std::size_t>(idx.j)][flat_index(idx)] = value;
}

double CoefficientField::max_modulus(int j) const {
  double m = 0.0;
  for (const auto& c : scale(j)) m = std::max(m, std::abs(c));
  return m;
}

bool CoefficientField::is_zero() const {
  if (scaling_ != Complex{}) return false;
  for (const auto& s : detail_)
    for (const auto& c : s)
      if (c != Complex{}) return false;
  return true;
}

CoefficientField& CoefficientField::operator+=(const CoefficientField& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("CoefficientField: dimension mismatch");
  if (other.levels_ > levels_) {
    for (int j = levels_; j < other.levels_; ++j) detail_.emplace_back(scale_size(j), Complex{});
    levels_ = other.levels_;
  }
  scaling_ += other.scaling_;
  for (int j = 0; j < other.levels_; ++j) {
    auto& dst = detail_[static_cast<std::size_t>(j)];
    const auto& src = other.detail_[static_cast<std::size_t>(j)];
    for (std::size_t n = 0; n < src.size(); ++n) dst[n] += src[n];
  }
  return *this;
}

CoefficientField& CoefficientField::operator*=(Complex factor) {
  scaling_ *= factor;
  for (auto& s : detail_)
    for (auto& c : s) c *= factor;
  return *this;
}

CoefficientField forward_transform(const SampledSignal& signal, const WaveletFamily& family) {
  return forward_transform(signal, family, signal.grid_scale());
}

CoefficientField forward_transform(const SampledSignal& signal, const WaveletFamily& family, int jmax) {
  const int d = signal.dim();
  const int big_j = signal.grid_scale();
  if (jmax < 0 || jmax > big_j) {
    throw std::invalid_argument("forward_transform: jmax " + std::to_string(jmax) +
                                " exceeds grid resolution " + std::to_string(big_j));
  }
  CoefficientField field(d, jmax, family);
  const auto h = family.lowpass();
  const auto g = family.highpass();

  // Finest-level L^2 scaling coefficients: <f, phi_{J,n}> ~ 2^{-Jd/2} f(n / 2^J).
  std::vector<Complex> a(signal.values().begin(), signal.values().end());
  const double to_l2 = std::pow(2.0, -0.5 * big_j * d);
  for (auto& v : a) v *= to_l2;

  for (int level = big_j; level >= 1; --level) {
    const std::size_t n = pow2(level);
    const std::size_t half = n / 2;
    const int j = level - 1;
    const double to_linf = std::pow(2.0, 0.5 * j * d);
    const bool keep = j < jmax;
    if (d == 1) {
      std::vector<Complex> lo(half), hi(half);
      analyze_line(a.data(), 1, n, h, g, lo.data(), hi.data(), 1);
      if (keep) {
        auto dst = field.scale(j);
        for (std::size_t k = 0; k < half; ++k) dst[k] = hi[k] * to_linf;
      }
      a = std::move(lo);
    } else {
      // Along axis 1 (contiguous), then along axis 0.
      std::vector<Complex> l1(n * half), h1(n * half);
      for (std::size_t r = 0; r < n; ++r) {
        analyze_line(a.data() + r * n, 1, n, h, g, l1.data() + r * half, h1.data() + r * half, 1);
      }
      std::vector<Complex> ll(half * half), hl(half * half), lh(half * half), hh(half * half);
      for (std::size_t c = 0; c < half; ++c) {
        analyze_line(l1.data() + c, half, n, h, g, ll.data() + c, hl.data() + c, half);
        analyze_line(h1.data() + c, half, n, h, g, lh.data() + c, hh.data() + c, half);
      }
      if (keep) {
        auto dst = field.scale(j);
        const std::size_t per = half * half;
        // i = 1: psi along axis 0; i = 2: psi along axis 1; i = 3: both.
        for (std::size_t p = 0; p < per; ++p) {
          dst[p] = hl[p] * to_linf;
          dst[per + p] = lh[p] * to_linf;
          dst[2 * per + p] = hh[p] * to_linf;
        }
      }
      a = std::move(ll);
    }
  }
  field.set_scaling(a[0]);
  return field;
}

SampledSignal inverse_transform(const CoefficientField& field, int grid_scale) {
  const int d = field.dim();
  if (grid_scale < field.levels()) {
    throw std::invalid_argument("inverse_transform: grid scale " + std::to_string(grid_scale) +
                                " below field resolution " + std::to_string(field.levels()));
  }
  const auto h = field.family().lowpass();
  const auto g = field.family().highpass();

  std::vector<Complex> a{field.scaling()};
  for (int level = 1; level <= grid_scale; ++level) {
    const std::size_t n = pow2(level);
    const std::size_t half = n / 2;
    const int j = level - 1;
    const double to_l2 = std::pow(2.0, -0.5 * j * d);
    const bool have = j < field.levels();
    if (d == 1) {
      std::vector<Complex> hi(half, Complex{});
      if (have) {
        const auto src = field.scale(j);
        for (std::size_t k = 0; k < half; ++k) hi[k] = src[k] * to_l2;
      }
      std::vector<Complex> out(n);
      synthesize_line(a.data(), hi.data(), 1, n, h, g, out.data(), 1);
      a = std::move(out);
    } else {
      const std::size_t per = half * half;
      std::vector<Complex> hl(per, Complex{}), lh(per, Complex{}), hh(per, Complex{});
      if (have) {
        const auto src = field.scale(j);
        for (std::size_t p = 0; p < per; ++p) {
          hl[p] = src[p] * to_l2;
          lh[p] = src[per + p] * to_l2;
          hh[p] = src[2 * per + p] * to_l2;
        }
      }
      std::vector<Complex> l1(n * half), h1(n * half);
      for (std::size_t c = 0; c < half; ++c) {
        synthesize_line(a.data() + c, hl.data() + c, half, n, h, g, l1.data() + c, half);
        synthesize_line(lh.data() + c, hh.data() + c, half, n, h, g, h1.data() + c, half);
      }
      std::vector<Complex> out(n * n);
      for (std::size_t r = 0; r < n; ++r) {
        synthesize_line(l1.data() + r * half, h1.data() + r * half, 1, n, h, g, out.data() + r * n, 1);
      }
      a = std::move(out);
    }
  }
  const double to_samples = std::pow(2.0, 0.5 * grid_scale * d);
  for (auto& v : a) v *= to_samples;
  return SampledSignal(d, grid_scale, std::move(a));
}

bool IndexBox::empty() const {
  for (int a = 0; a < dim; ++a) {
    if (hi[static_cast<std::size_t>(a)] < lo[static_cast<std::size_t>(a)]) return true;
  }
  return false;
}

std::size_t IndexBox::count() const {
  if (empty()) return 0;
  std::size_t c = 1;
  for (int a = 0; a < dim; ++a) {
    c *= static_cast<std::size_t>(hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)] + 1);
  }
  return c;
}

IndexBox support_box(const WaveletFamily& family, const DyadicCube& cube, int j) {
  IndexBox box;
  box.j = j;
  box.dim = cube.dim();
  if (box.dim < 1 || box.dim > 2) throw std::invalid_argument("support_box: dimension must be 1 or 2");
  if (j < cube.m) return box;  // support 2^{-j} M exceeds the cube side
  const std::int64_t cells = std::int64_t{1} << (j - cube.m);
  const std::int64_t width = family.support_width();
  for (int a = 0; a < box.dim; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    box.lo[ua] = cube.r[ua] * cells;
    box.hi[ua] = (cube.r[ua] + 1) * cells - width;
  }
  return box;
}

std::vector<DyadicIndex> restrict_indices(const CoefficientField& field, const DyadicCube& cube, int j) {
  if (cube.dim() != field.dim()) throw std::invalid_argument("restrict_indices: dimension mismatch");
  const IndexBox box = support_box(field.family(), cube, j);
  std::vector<DyadicIndex> out;
  if (box.empty()) return out;
  out.reserve(box.count() * static_cast<std::size_t>(field.orientations()));
  for (int i = 1; i <= field.orientations(); ++i) {
    if (field.dim() == 1) {
      for (std::int64_t k = box.lo[0]; k <= box.hi[0]; ++k) out.push_back({i, j, {k, 0}});
    } else {
      for (std::int64_t k1 = box.lo[0]; k1 <= box.hi[0]; ++k1)
        for (std::int64_t k2 = box.lo[1]; k2 <= box.hi[1]; ++k2) out.push_back({i, j, {k1, k2}});
    }
  }
  return out;
}

std::vector<std::optional<double>> sup_norm_per_scale(const CoefficientField& field, const DyadicCube& cube) {
  if (cube.dim() != field.dim()) throw std::invalid_argument("sup_norm_per_scale: dimension mismatch");
  std::vector<std::optional<double>> out(static_cast<std::size_t>(field.levels()));
  for (int j = 0; j < field.levels(); ++j) {
    const IndexBox box = support_box(field.family(), cube, j);
    if (box.empty()) continue;
    const auto s = field.scale(j);
    const std::size_t per = field.positions(j);
    const auto n = static_cast<std::size_t>(field.positions_per_axis(j));
    double best = 0.0;
    for (int i = 0; i < field.orientations(); ++i) {
      const std::size_t base = static_cast<std::size_t>(i) * per;
      if (field.dim() == 1) {
        for (auto k = box.lo[0]; k <= box.hi[0]; ++k) {
          best = std::max(best, std::abs(s[base + static_cast<std::size_t>(k)]));
        }
      } else {
        for (auto k1 = box.lo[0]; k1 <= box.hi[0]; ++k1)
          for (auto k2 = box.lo[1]; k2 <= box.hi[1]; ++k2) {
            best = std::max(best, std::abs(s[base + static_cast<std::size_t>(k1) * n +
                                             static_cast<std::size_t>(k2)]));
          }
      }
    }
    out[static_cast<std::size_t>(j)] = best;
  }
  return out;
}

}  // namespace snu
