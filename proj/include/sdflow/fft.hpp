#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Small self-contained spectral toolbox for periodic real samples on a uniform
// grid. All grids are power-of-two sized so the radix-2 transform applies.

namespace sdflow::spectral {

using cplx = std::complex<double>;

bool is_pow2(std::size_t n);

// In-place iterative radix-2 transform; inverse=true applies the conjugate
// transform including the 1/n factor.
void fft(std::vector<cplx>& a, bool inverse);

// Fourier coefficients c_k (DFT order k = 0..n-1, modes above n/2 are the
// negative frequencies) with the 1/n normalization, so f_j = sum c_k e^{ikx_j}.
std::vector<cplx> coefficients(std::span<const double> f);

// Inverse of coefficients(); imaginary parts are discarded.
std::vector<double> from_coefficients(const std::vector<cplx>& c);

// Signed integer mode for DFT index j on an n-grid.
int mode_of_index(std::size_t j, std::size_t n);

// Spectral derivative of given order on a grid covering one period of length
// `period`. The Nyquist mode is zeroed for odd orders.
std::vector<double> derivative(std::span<const double> f, int order, double period);

// Zero every mode with |k| > kmax.
std::vector<double> lowpass(std::span<const double> f, int kmax);

// Trigonometric resampling from n input samples to m output samples covering
// the same period (both power-of-two).
std::vector<double> resample(std::span<const double> f, std::size_t m);

// Input samples live at cell midpoints x_j = (j + 1/2) * period / n; returns
// values at the n_out nodes x_i = i * period / n_out keeping modes |k| <= kmax.
std::vector<double> resample_from_midpoints(std::span<const double> f_mid,
                                            std::size_t n_out, int kmax);

// Spectral antiderivative with zero mean (mode 0 of the input must vanish for
// this to be the exact periodic primitive; it is zeroed regardless).
std::vector<double> antiderivative(std::span<const double> f, double period);

}  // namespace sdflow::spectral
