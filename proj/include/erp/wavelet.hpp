#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "erp/types.hpp"

namespace erp {

enum class BoundaryMode { periodic, symmetric };

const char* to_string(BoundaryMode mode);
BoundaryMode boundary_mode_from_string(const std::string& s);

// Orthonormal 8-tap analysis pair. The lowpass filter is obtained by
// spectral factorization of the degree-3 Daubechies half-band polynomial
// (one real root by Cardano, one conjugate pair), keeping the roots inside
// the unit circle; the highpass is its quadrature mirror. Filters therefore
// satisfy sum(h) = sqrt(2), orthonormality under even shifts, and four
// vanishing moments to machine precision instead of typed-in truncation.
struct WaveletFilterPair {
  std::array<double, 8> lowpass{};
  std::array<double, 8> highpass{};

  static const WaveletFilterPair& daubechies4();
};

// Multilevel DWT coefficients. approx[k-1]/detail[k-1] hold level-k
// coefficients, k = 1..levels.
struct WaveletDecomposition {
  std::vector<std::vector<double>> approx;
  std::vector<std::vector<double>> detail;
  std::size_t levels = 0;
  std::size_t original_length = 0;
  BoundaryMode boundary = BoundaryMode::periodic;
};

WaveletDecomposition dwt_decompose(
    const std::vector<double>& signal, std::size_t levels,
    const WaveletFilterPair& filters = WaveletFilterPair::daubechies4(),
    BoundaryMode boundary = BoundaryMode::periodic);

// Full inverse transform; length == original_length.
std::vector<double> reconstruct(
    const WaveletDecomposition& dec,
    const WaveletFilterPair& filters = WaveletFilterPair::daubechies4());

// Inverse keeping only the approximation at `level` (details zeroed).
std::vector<double> reconstruct_lp(
    const WaveletDecomposition& dec, std::size_t level,
    const WaveletFilterPair& filters = WaveletFilterPair::daubechies4());

// High-pass complement, defined as reconstruct(dec) - reconstruct_lp(dec, levels).
std::vector<double> reconstruct_hp(
    const WaveletDecomposition& dec,
    const WaveletFilterPair& filters = WaveletFilterPair::daubechies4());

struct LpHp {
  std::vector<double> lp;
  std::vector<double> hp;
};

// Per-channel LP/HP split of an averaged ERP. hp is formed by subtracting
// lp from the original channel, so lp + hp reproduces the input exactly.
std::vector<LpHp> split_erp(
    const ErpAverage& erp, std::size_t levels,
    const WaveletFilterPair& filters = WaveletFilterPair::daubechies4(),
    BoundaryMode boundary = BoundaryMode::periodic);

LpHp split_signal(
    const std::vector<double>& signal, std::size_t levels,
    const WaveletFilterPair& filters = WaveletFilterPair::daubechies4(),
    BoundaryMode boundary = BoundaryMode::periodic);

}  // namespace erp
