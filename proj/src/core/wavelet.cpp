#include "erp/wavelet.hpp"

#include <cmath>
#include <complex>

#include "erp/errors.hpp"

namespace erp {

namespace {

constexpr std::size_t kTaps = 8;

// Roots of 20 y^3 + 10 y^2 + 4 y + 1, the Daubechies polynomial
// sum_{k=0..3} C(3+k,k) y^k. One real root plus a conjugate pair.
std::array<std::complex<double>, 3> daubechies_poly_roots() {
  using C = std::complex<double>;
  // Normalized: y^3 + b y^2 + c y + d, depressed with y = t - b/3.
  const double b = 0.5, c = 0.2, d = 0.05;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = q * q / 4.0 + p * p * p / 27.0;  // > 0 here
  const double s = std::sqrt(disc);
  const double u = std::cbrt(-q / 2.0 + s);
  const double v = std::cbrt(-q / 2.0 - s);
  const double t1 = u + v;
  const C t2(-t1 / 2.0, std::sqrt(3.0) / 2.0 * (u - v));
  return {C(t1 - b / 3.0, 0.0), t2 - b / 3.0, std::conj(t2) - b / 3.0};
}

std::array<double, kTaps> factor_db4_lowpass() {
  using C = std::complex<double>;
  // (1 + z)^4 times the minimum-phase factor of the half-band polynomial:
  // each root y maps to z^2 + (4y - 2) z + 1 = 0; keep |z| < 1.
  std::vector<C> poly{1.0};
  auto mul_linear = [&poly](C c0, C c1) {  // poly *= (c0 + c1 z)
    std::vector<C> out(poly.size() + 1, C(0.0, 0.0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out[i] += poly[i] * c0;
      out[i + 1] += poly[i] * c1;
    }
    poly = std::move(out);
  };
  for (int i = 0; i < 4; ++i) mul_linear(C(1.0, 0.0), C(1.0, 0.0));
  for (const auto& y : daubechies_poly_roots()) {
    const C bq = 4.0 * y - 2.0;
    const C root_sum = std::sqrt(bq * bq - 4.0);
    C z1 = (-bq + root_sum) / 2.0;
    C z2 = (-bq - root_sum) / 2.0;
    C z = std::abs(z1) < std::abs(z2) ? z1 : z2;
    mul_linear(-z, C(1.0, 0.0));
  }
  std::array<double, kTaps> h{};
  double sum = 0.0;
  for (std::size_t i = 0; i < kTaps; ++i) {
    h[i] = poly[i].real();  // imaginary parts cancel to rounding noise
    sum += h[i];
  }
  const double scale = std::sqrt(2.0) / sum;
  for (auto& v : h) v *= scale;
  return h;
}

std::size_t level_input_length(const WaveletDecomposition& dec, std::size_t level) {
  // Length of the signal that level `level` decomposed (1-based).
  return level == 1 ? dec.original_length : dec.approx[level - 2].size();
}

// --- periodic mode ------------------------------------------------------
//
// Analysis correlates against even shifts of the periodized filters:
//   cA[i] = sum_k h[k] x[(2i + k) mod n]
// which is an orthonormal transform for any even n (odd inputs are
// replicate-padded by one sample first).

void periodic_forward(const std::vector<double>& x,
                      const WaveletFilterPair& f,
                      std::vector<double>& ca, std::vector<double>& cd) {
  std::vector<double> padded;
  const std::vector<double>* in = &x;
  if (x.size() % 2 != 0) {
    padded = x;
    padded.push_back(x.back());
    in = &padded;
  }
  const std::size_t n = in->size();
  const std::size_t m = n / 2;
  ca.assign(m, 0.0);
  cd.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double a = 0.0, d = 0.0;
    for (std::size_t k = 0; k < kTaps; ++k) {
      const double v = (*in)[(2 * i + k) % n];
      a += f.lowpass[k] * v;
      d += f.highpass[k] * v;
    }
    ca[i] = a;
    cd[i] = d;
  }
}

std::vector<double> periodic_inverse(const std::vector<double>& ca,
                                     const std::vector<double>& cd,
                                     const WaveletFilterPair& f,
                                     std::size_t target_len) {
  const std::size_t m = ca.size();
  const std::size_t n = 2 * m;
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < kTaps; ++k) {
      y[(2 * i + k) % n] += ca[i] * f.lowpass[k] + cd[i] * f.highpass[k];
    }
  }
  y.resize(target_len);
  return y;
}

// --- symmetric mode -----------------------------------------------------
//
// Half-point symmetric extension by taps-1 samples each side; analysis
// correlation cA[i] = sum_k h[k] ext[2i + 1 + k] with
// m = floor((n + taps - 1) / 2). Synthesis places cA[i] h + cD[i] g at
// offset 2i and crops taps-2 leading samples. The coefficient set covers
// every basis shift whose support meets [0, n), so the crop reconstructs
// the input exactly.

double sym_at(const std::vector<double>& x, long long idx) {
  const long long n = static_cast<long long>(x.size());
  while (idx < 0 || idx >= n) {
    if (idx < 0) idx = -idx - 1;
    if (idx >= n) idx = 2 * n - idx - 1;
  }
  return x[static_cast<std::size_t>(idx)];
}

void symmetric_forward(const std::vector<double>& x,
                       const WaveletFilterPair& f,
                       std::vector<double>& ca, std::vector<double>& cd) {
  const long long ext_shift = static_cast<long long>(kTaps) - 1;
  const std::size_t m = (x.size() + kTaps - 1) / 2;
  ca.assign(m, 0.0);
  cd.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double a = 0.0, d = 0.0;
    for (std::size_t k = 0; k < kTaps; ++k) {
      const long long j = static_cast<long long>(2 * i + 1 + k) - ext_shift;
      const double v = sym_at(x, j);
      a += f.lowpass[k] * v;
      d += f.highpass[k] * v;
    }
    ca[i] = a;
    cd[i] = d;
  }
}

std::vector<double> symmetric_inverse(const std::vector<double>& ca,
                                      const std::vector<double>& cd,
                                      const WaveletFilterPair& f,
                                      std::size_t target_len) {
  const std::size_t m = ca.size();
  std::vector<double> full(2 * m + kTaps - 2, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < kTaps; ++k) {
      full[2 * i + k] += ca[i] * f.lowpass[k] + cd[i] * f.highpass[k];
    }
  }
  std::vector<double> out(target_len);
  for (std::size_t j = 0; j < target_len; ++j) out[j] = full[j + kTaps - 2];
  return out;
}

void forward_level(const std::vector<double>& x, const WaveletFilterPair& f,
                   BoundaryMode mode, std::vector<double>& ca,
                   std::vector<double>& cd) {
  if (mode == BoundaryMode::periodic)
    periodic_forward(x, f, ca, cd);
  else
    symmetric_forward(x, f, ca, cd);
}

std::vector<double> inverse_level(const std::vector<double>& ca,
                                  const std::vector<double>& cd,
                                  const WaveletFilterPair& f, BoundaryMode mode,
                                  std::size_t target_len) {
  if (ca.size() != cd.size())
    throw_error(ErrorKind::shape, "wavelet: approx/detail length mismatch");
  return mode == BoundaryMode::periodic
             ? periodic_inverse(ca, cd, f, target_len)
             : symmetric_inverse(ca, cd, f, target_len);
}

std::vector<double> invert_from(const WaveletDecomposition& dec,
                                std::size_t level, std::vector<double> current,
                                const WaveletFilterPair& f, bool keep_details) {
  for (std::size_t k = level; k >= 1; --k) {
    const std::size_t target = level_input_length(dec, k);
    if (keep_details) {
      current = inverse_level(current, dec.detail[k - 1], f, dec.boundary, target);
    } else {
      std::vector<double> zeros(dec.detail[k - 1].size(), 0.0);
      current = inverse_level(current, zeros, f, dec.boundary, target);
    }
  }
  return current;
}

}  // namespace

const char* to_string(BoundaryMode mode) {
  return mode == BoundaryMode::periodic ? "periodic" : "symmetric";
}

BoundaryMode boundary_mode_from_string(const std::string& s) {
  if (s == "periodic") return BoundaryMode::periodic;
  if (s == "symmetric") return BoundaryMode::symmetric;
  throw_error(ErrorKind::config, "unknown boundary mode '" + s + "'");
}

const WaveletFilterPair& WaveletFilterPair::daubechies4() {
  static const WaveletFilterPair pair = [] {
    WaveletFilterPair p;
    p.lowpass = factor_db4_lowpass();
    for (std::size_t k = 0; k < kTaps; ++k) {
      const double v = p.lowpass[kTaps - 1 - k];
      p.highpass[k] = (k % 2 == 0) ? v : -v;
    }
    return p;
  }();
  return pair;
}

WaveletDecomposition dwt_decompose(const std::vector<double>& signal,
                                   std::size_t levels,
                                   const WaveletFilterPair& filters,
                                   BoundaryMode boundary) {
  if (levels == 0)
    throw_error(ErrorKind::invalid_argument, "dwt_decompose: levels must be >= 1");
  if (signal.size() < (std::size_t{1} << levels))
    throw_error(ErrorKind::length,
                "dwt_decompose: signal length " + std::to_string(signal.size()) +
                    " < 2^levels = " + std::to_string(std::size_t{1} << levels));

  WaveletDecomposition dec;
  dec.levels = levels;
  dec.original_length = signal.size();
  dec.boundary = boundary;
  dec.approx.resize(levels);
  dec.detail.resize(levels);

  std::vector<double> current = signal;
  for (std::size_t k = 0; k < levels; ++k) {
    forward_level(current, filters, boundary, dec.approx[k], dec.detail[k]);
    current = dec.approx[k];
  }
  return dec;
}

std::vector<double> reconstruct(const WaveletDecomposition& dec,
                                const WaveletFilterPair& filters) {
  if (dec.levels == 0 || dec.approx.size() != dec.levels)
    throw_error(ErrorKind::invalid_argument, "reconstruct: invalid decomposition");
  return invert_from(dec, dec.levels, dec.approx[dec.levels - 1], filters, true);
}

std::vector<double> reconstruct_lp(const WaveletDecomposition& dec,
                                   std::size_t level,
                                   const WaveletFilterPair& filters) {
  if (level == 0 || level > dec.levels)
    throw_error(ErrorKind::invalid_argument,
                "reconstruct_lp: level out of range");
  return invert_from(dec, level, dec.approx[level - 1], filters, false);
}

std::vector<double> reconstruct_hp(const WaveletDecomposition& dec,
                                   const WaveletFilterPair& filters) {
  std::vector<double> full = reconstruct(dec, filters);
  std::vector<double> lp = reconstruct_lp(dec, dec.levels, filters);
  for (std::size_t i = 0; i < full.size(); ++i) full[i] -= lp[i];
  return full;
}

LpHp split_signal(const std::vector<double>& signal, std::size_t levels,
                  const WaveletFilterPair& filters, BoundaryMode boundary) {
  WaveletDecomposition dec = dwt_decompose(signal, levels, filters, boundary);
  LpHp out;
  out.lp = reconstruct_lp(dec, levels, filters);
  out.hp.resize(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i)
    out.hp[i] = signal[i] - out.lp[i];
  return out;
}

std::vector<LpHp> split_erp(const ErpAverage& erp, std::size_t levels,
                            const WaveletFilterPair& filters,
                            BoundaryMode boundary) {
  std::vector<LpHp> out;
  out.reserve(erp.channel_values.size());
  for (const auto& channel : erp.channel_values)
    out.push_back(split_signal(channel, levels, filters, boundary));
  return out;
}

}  // namespace erp
