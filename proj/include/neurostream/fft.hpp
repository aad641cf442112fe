#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace neurostream {

// In-place iterative radix-2 FFT. Size must be a power of two (>= 1).
void fft(std::vector<std::complex<double>>& a);
// Inverse transform with the 1/N convention.
void ifft(std::vector<std::complex<double>>& a);

// Forward FFT of a real signal (zero imaginary parts). Size must be a power
// of two.
std::vector<std::complex<double>> fft_real(const std::vector<double>& x);

bool is_power_of_two(std::size_t n);

}  // namespace neurostream
