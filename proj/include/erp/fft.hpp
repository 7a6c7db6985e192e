#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace erp {

using cplx = std::complex<double>;

// Forward/inverse DFT for arbitrary length. Powers of two run on an
// iterative radix-2 kernel; other lengths go through Bluestein's chirp-z
// reduction to a power-of-two convolution. ifft includes the 1/N scale.
std::vector<cplx> fft(std::vector<cplx> x);
std::vector<cplx> ifft(std::vector<cplx> x);

std::vector<cplx> fft(const std::vector<double>& x);

// Full linear convolution (length |x| + |h| - 1) via zero-padded FFT.
std::vector<double> fft_convolve(const std::vector<double>& x,
                                 const std::vector<double>& h);

std::size_t next_pow2(std::size_t n);

}  // namespace erp
