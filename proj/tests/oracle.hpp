#pragma once
// Test-side closed forms for the bimodal Lorentzian, written from the residue of a single
// Lorentzian rather than shared with the library.
#include <cmath>
#include <complex>

namespace oracle {

using cplx = std::complex<double>;
inline const double pi = 3.14159265358979323846;

inline double g(double w, double a) {
    return 0.5 / pi * (1.0 / ((w - a) * (w - a) + 1.0) + 1.0 / ((w + a) * (w + a) + 1.0));
}

inline double cdf(double w, double a) { return 0.5 + (std::atan(w - a) + std::atan(w + a)) / (2.0 * pi); }

// Principal-value Hilbert transform (1/pi) PV int g(w) / (y - w) dw.
inline double hilbert(double y, double a) {
    return 0.5 / pi * ((y - a) / ((y - a) * (y - a) + 1.0) + (y + a) / ((y + a) * (y + a) + 1.0));
}

// int g(w) / (lambda - i w) dw for Re lambda > 0, continued analytically to the left.
// A single unit Lorentzian at a contributes 1 / (lambda + 1 - i a).
inline cplx D(cplx l, double a) {
    const cplx i(0.0, 1.0);
    return 0.5 * (1.0 / (l + 1.0 - i * a) + 1.0 / (l + 1.0 + i * a));
}

inline cplx Dn(cplx l, double a, int n) {
    const cplx i(0.0, 1.0);
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    const double s = (n % 2) ? -1.0 : 1.0;
    return 0.5 * s * f * (std::pow(l + 1.0 - i * a, -(n + 1)) + std::pow(l + 1.0 + i * a, -(n + 1)));
}

// Roots of 2 u^2 - K u + 2 a^2 = 0 shifted back by lambda = u - 1.
inline std::pair<cplx, cplx> eigen_pair(double K, double a) {
    const cplx disc = std::sqrt(cplx(K * K - 16.0 * a * a, 0.0));
    return {(K + disc) / 4.0 - 1.0, (K - disc) / 4.0 - 1.0};
}

}  // namespace oracle
