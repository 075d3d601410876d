#include "sdflow/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdflow::spectral {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
    if (n == 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv_n;
    }
}

std::vector<cplx> coefficients(std::span<const double> f) {
    std::vector<cplx> a(f.begin(), f.end());
    fft(a, false);
    const double inv_n = 1.0 / static_cast<double>(f.size());
    for (auto& c : a) c *= inv_n;
    return a;
}

std::vector<double> from_coefficients(const std::vector<cplx>& c) {
    std::vector<cplx> a = c;
    fft(a, true);
    // fft(inverse) divides by n; coefficients() already carried 1/n, undo it.
    std::vector<double> out(a.size());
    const double n = static_cast<double>(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j].real() * n;
    return out;
}

int mode_of_index(std::size_t j, std::size_t n) {
    return j <= n / 2 ? static_cast<int>(j) : static_cast<int>(j) - static_cast<int>(n);
}

std::vector<double> derivative(std::span<const double> f, int order, double period) {
    if (order < 0) throw std::invalid_argument("derivative: negative order");
    if (order == 0) return {f.begin(), f.end()};
    const std::size_t n = f.size();
    auto c = coefficients(f);
    const double base = two_pi / period;
    for (std::size_t j = 0; j < n; ++j) {
        const int k = mode_of_index(j, n);
        if (static_cast<std::size_t>(std::abs(k)) == n / 2 && (order % 2) == 1) {
            c[j] = 0.0;
            continue;
        }
        const cplx ik(0.0, base * static_cast<double>(k));
        cplx factor(1.0, 0.0);
        for (int m = 0; m < order; ++m) factor *= ik;
        c[j] *= factor;
    }
    return from_coefficients(c);
}

std::vector<double> lowpass(std::span<const double> f, int kmax) {
    const std::size_t n = f.size();
    auto c = coefficients(f);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(mode_of_index(j, n)) > kmax) c[j] = 0.0;
    }
    return from_coefficients(c);
}

std::vector<double> resample(std::span<const double> f, std::size_t m) {
    const std::size_t n = f.size();
    if (!is_pow2(m)) throw std::invalid_argument("resample: target size must be a power of two");
    if (m == n) return {f.begin(), f.end()};
    auto c = coefficients(f);
    std::vector<cplx> cm(m, cplx(0.0, 0.0));
    if (m > n) {
        for (std::size_t j = 0; j < n; ++j) {
            const int k = mode_of_index(j, n);
            if (static_cast<std::size_t>(std::abs(k)) == n / 2) {
                // split the Nyquist coefficient symmetrically
                cm[static_cast<std::size_t>(n / 2)] += 0.5 * c[j];
                cm[m - n / 2] += 0.5 * c[j];
            } else {
                const std::size_t idx = k >= 0 ? static_cast<std::size_t>(k)
                                               : m - static_cast<std::size_t>(-k);
                cm[idx] = c[j];
            }
        }
    } else {
        for (std::size_t j = 0; j < m; ++j) {
            const int k = mode_of_index(j, m);
            if (static_cast<std::size_t>(std::abs(k)) == m / 2) {
                const std::size_t jp = static_cast<std::size_t>(m / 2);
                const std::size_t jm = n - m / 2;
                cm[j] = c[jp] + c[jm];
            } else {
                const std::size_t idx = k >= 0 ? static_cast<std::size_t>(k)
                                               : n - static_cast<std::size_t>(-k);
                cm[j] = c[idx];
            }
        }
    }
    return from_coefficients(cm);
}

std::vector<double> resample_from_midpoints(std::span<const double> f_mid,
                                            std::size_t n_out, int kmax) {
    const std::size_t n = f_mid.size();
    if (!is_pow2(n_out)) throw std::invalid_argument("resample_from_midpoints: bad target size");
    auto c = coefficients(f_mid);
    // Midpoint samples see coefficients with an extra phase e^{i pi k / n}.
    std::vector<cplx> cn(n_out, cplx(0.0, 0.0));
    const int kcap = std::min<int>(kmax, static_cast<int>(std::min(n, n_out)) / 2 - 1);
    for (std::size_t j = 0; j < n; ++j) {
        const int k = mode_of_index(j, n);
        if (std::abs(k) > kcap) continue;
        const double phase = -std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        const cplx corrected = c[j] * cplx(std::cos(phase), std::sin(phase));
        const std::size_t idx = k >= 0 ? static_cast<std::size_t>(k)
                                       : n_out - static_cast<std::size_t>(-k);
        cn[idx] = corrected;
    }
    return from_coefficients(cn);
}

std::vector<double> antiderivative(std::span<const double> f, double period) {
    const std::size_t n = f.size();
    auto c = coefficients(f);
    const double base = two_pi / period;
    for (std::size_t j = 0; j < n; ++j) {
        const int k = mode_of_index(j, n);
        if (k == 0 || static_cast<std::size_t>(std::abs(k)) == n / 2) {
            c[j] = 0.0;
            continue;
        }
        c[j] /= cplx(0.0, base * static_cast<double>(k));
    }
    return from_coefficients(c);
}

}  // namespace sdflow::spectral
