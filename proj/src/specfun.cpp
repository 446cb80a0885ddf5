#include "scatlab/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "scatlab/errors.hpp"

namespace scatlab::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesLimit = 2.0;
constexpr double kAsymptoticLimit = 20.0;
constexpr double kZeroWindow = 100.0;

void check_order(int n) {
    if (n < -kMaxOrder || n > kMaxOrder) {
        throw DomainError("Bessel order " + std::to_string(n) + " outside [-" +
                          std::to_string(kMaxOrder) + ", " + std::to_string(kMaxOrder) + "]");
    }
}

void check_argument(double x, bool strictly_positive) {
    if (!std::isfinite(x)) throw DomainError("Bessel argument is not finite");
    if (strictly_positive ? !(x > 0.0) : !(x >= 0.0)) {
        throw DomainError("Bessel argument " + std::to_string(x) + " outside the domain");
    }
    if (x > kMaxArgument) {
        throw DomainError("Bessel argument " + std::to_string(x) + " exceeds " +
                          std::to_string(kMaxArgument));
    }
}

double reflection_sign(int n) { return (n < 0 && (n % 2 != 0)) ? -1.0 : 1.0; }

double series_j(int n, double x) {
    const double half = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= half / i;
    if (term == 0.0) return 0.0;
    const double q = half * half;
    double sum = term;
    for (int k = 0; k < 200; ++k) {
        term *= -q / ((k + 1.0) * (n + k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

int miller_top(int nmax, double x) {
    const double reach = std::max(static_cast<double>(nmax), x + 12.0 * std::cbrt(x));
    const int top = static_cast<int>(reach) + 30;
    return top + top % 2;
}

// Fills seq[0..top+1] with the normalized Miller sequence J_0 .. J_top (seq[top+1] = 0).
void miller_fill(int top, double x, double* seq) {
    seq[top + 1] = 0.0;
    seq[top] = 1e-30;
    for (int k = top; k >= 1; --k) {
        seq[k - 1] = (2.0 * k / x) * seq[k] - seq[k + 1];
        if (std::abs(seq[k - 1]) > 1e250) {
            for (int i = k - 1; i <= top; ++i) seq[i] *= 1e-250;
        }
    }
    double norm = seq[0];
    for (int k = 2; k <= top; k += 2) norm += 2.0 * seq[k];
    for (int k = 0; k <= top; ++k) seq[k] /= norm;
}

// Normalized Miller sequence J_0 .. J_top for x > 0, with top chosen past the
// turning point so the truncation error is below double precision.
std::vector<double> miller_sequence(int nmax, double x) {
    const int top = miller_top(nmax, x);
    std::vector<double> seq(static_cast<std::size_t>(top) + 2, 0.0);
    miller_fill(top, x, seq.data());
    seq.resize(static_cast<std::size_t>(top) + 1);
    return seq;
}

// Hankel asymptotic expansion for orders 0 and 1; accurate to rounding for x > 20.
void asymptotic_01(int nu, double x, double& j, double& y) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 80; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        if (std::abs(term) > std::abs(prev)) break;
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            default: p += term; break;
        }
        if (std::abs(term) < 1e-18) break;
        prev = term;
    }
    const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    const double c = std::cos(chi);
    const double s = std::sin(chi);
    j = amp * (p * c - q * s);
    y = amp * (p * s + q * c);
}

// One backward sweep producing J_0, J_1 and the Neumann sums for Y_0, Y_1,
// without storing the sequence.  Same recurrence and start index as
// miller_sequence.
void miller_01(double x, double& j0, double& j1, double& y0, double& y1) {
    const int top = miller_top(1, x);
    const double two_over_x = 2.0 / x;
    double next = 0.0;    // J_{i+1}
    double cur = 1e-30;   // J_i, starting at i = top (even)
    double norm = 0.0;    // sum_{k>=1} 2 J_{2k}
    double s0 = 0.0;      // sum (-1)^{k+1} J_{2k} / k
    double s1 = 0.0;      // sum (-1)^{k+1} (J_{2k-1} - J_{2k+1}) / k
    auto absorb = [&](int i, double v) {
        if (i % 2 == 0) {
            const int k = i / 2;
            norm += 2.0 * v;
            s0 += ((k % 2 == 1) ? v : -v) / k;
        } else {
            const int up = (i + 1) / 2;  // J_i = J_{2 up - 1}
            s1 += ((up % 2 == 1) ? v : -v) / up;
            const int down = (i - 1) / 2;  // J_i = J_{2 down + 1}
            if (down >= 1) s1 -= ((down % 2 == 1) ? v : -v) / down;
        }
    };
    absorb(top, cur);
    for (int i = top; i >= 2; --i) {
        const double prev = (i * two_over_x) * cur - next;  // J_{i-1}
        next = cur;
        cur = prev;
        absorb(i - 1, cur);
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            s0 *= 1e-250;
            s1 *= 1e-250;
        }
    }
    // cur = J_1, next = J_2 (unnormalized).
    const double u1 = cur;
    const double u0 = two_over_x * cur - next;
    const double scale = 1.0 / (u0 + norm);
    j0 = u0 * scale;
    j1 = u1 * scale;
    s0 *= scale;
    s1 *= scale;
    const double lg = std::log(0.5 * x) + kEulerGamma;
    const double two_pi = 2.0 / std::numbers::pi;
    y0 = two_pi * (lg * j0 + 2.0 * s0);
    y1 = -two_pi * (j0 / x - lg * j1 + s1);
}

void y01(double x, double& y0, double& y1) {
    if (x > kAsymptoticLimit) {
        double j;
        asymptotic_01(0, x, j, y0);
        asymptotic_01(1, x, j, y1);
        return;
    }
    double j0;
    double j1;
    miller_01(x, j0, j1, y0, y1);
}

std::vector<double> j_sequence_unchecked(int nmax, double x) {
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x <= kSeriesLimit) {
        for (int n = 0; n <= nmax; ++n) out[n] = series_j(n, x);
        return out;
    }
    const auto seq = miller_sequence(nmax, x);
    for (int n = 0; n <= nmax; ++n) out[n] = seq[n];
    return out;
}

std::vector<double> y_sequence_unchecked(int nmax, double x) {
    std::vector<double> out(static_cast<std::size_t>(std::max(nmax, 1)) + 1, 0.0);
    y01(x, out[0], out[1]);
    for (int n = 1; n < nmax; ++n) {
        out[n + 1] = (2.0 * n / x) * out[n] - out[n - 1];
    }
    out.resize(static_cast<std::size_t>(nmax) + 1);
    return out;
}

// Signed value of J_n or J_n' used by the zero search.
double zero_target(int n, double x, bool derivative) {
    return derivative ? bessel_j_prime(n, x) : bessel_j(n, x);
}

double find_zero(int n, int m, bool derivative) {
    if (n < 0 || n > kMaxOrder) throw DomainError("zero search requires 0 <= n <= 120");
    if (m < 1) throw DomainError("zero index must be positive");
    // No zero of J_n or J_n' lies below n (except the origin), so scanning
    // starts just under n; the step stays well below the zero spacing (> 2.9).
    const double step = 0.25;
    double lo = std::max(0.1, 0.9 * n);
    double flo = zero_target(n, lo, derivative);
    int found = 0;
    while (lo < kZeroWindow) {
        const double hi = std::min(lo + step, kZeroWindow);
        const double fhi = zero_target(n, hi, derivative);
        if (fhi == 0.0 || (flo < 0.0) != (fhi < 0.0)) {
            if (++found == m) {
                if (fhi == 0.0) return hi;
                double a = lo;
                double b = hi;
                double fa = flo;
                // Bisect until the bracket cannot be split further.
                for (;;) {
                    const double mid = 0.5 * (a + b);
                    if (mid <= a || mid >= b) break;
                    const double fm = zero_target(n, mid, derivative);
                    if (fm == 0.0) return mid;
                    if ((fa < 0.0) == (fm < 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                return 0.5 * (a + b);
            }
        }
        lo = hi;
        flo = fhi;
    }
    throw DomainError("zero " + std::to_string(m) + " of order " + std::to_string(n) +
                      " lies beyond the search window x <= 100");
}

}  // namespace

double bessel_j(int n, double x) {
    check_order(n);
    check_argument(x, false);
    const int an = std::abs(n);
    const double sign = reflection_sign(n);
    if (x == 0.0) return an == 0 ? 1.0 : 0.0;
    if (x <= kSeriesLimit) return sign * series_j(an, x);
    return sign * miller_sequence(an, x)[an];
}

double bessel_y(int n, double x) {
    check_order(n);
    check_argument(x, true);
    const int an = std::abs(n);
    return reflection_sign(n) * y_sequence_unchecked(an, x)[an];
}

std::complex<double> hankel1(int n, double x) { return {bessel_j(n, x), bessel_y(n, x)}; }

double bessel_j_prime(int n, double x) {
    check_order(n);
    check_argument(x, false);
    const int an = std::abs(n);
    // J_n' = (J_{n-1} - J_{n+1}) / 2, with J_{-1} = -J_1.
    const auto seq = j_sequence_unchecked(an + 1, x);
    const double lower = an == 0 ? -seq[1] : seq[an - 1];
    return reflection_sign(n) * 0.5 * (lower - seq[an + 1]);
}

double bessel_y_prime(int n, double x) {
    check_order(n);
    check_argument(x, true);
    return cylinder(n, x).dy;
}

std::complex<double> hankel1_prime(int n, double x) { return cylinder(n, x).dh1; }

CylinderValue cylinder(int n, double x) {
    check_order(n);
    check_argument(x, true);
    const int an = std::abs(n);
    const auto js = j_sequence_unchecked(an + 1, x);
    const auto ys = y_sequence_unchecked(an + 1, x);
    const double jm = an == 0 ? -js[1] : js[an - 1];
    const double ym = an == 0 ? -ys[1] : ys[an - 1];
    const double sign = reflection_sign(n);
    CylinderValue v;
    v.j = sign * js[an];
    v.y = sign * ys[an];
    v.dj = sign * 0.5 * (jm - js[an + 1]);
    v.dy = sign * (ym - (an / x) * ys[an]);
    v.h1 = {v.j, v.y};
    v.dh1 = {v.dj, v.dy};
    return v;
}

std::vector<double> bessel_j_sequence(int nmax, double x) {
    check_order(nmax);
    if (nmax < 0) throw DomainError("sequence length must be non-negative");
    check_argument(x, false);
    return j_sequence_unchecked(nmax, x);
}

std::vector<double> bessel_y_sequence(int nmax, double x) {
    check_order(nmax);
    if (nmax < 0) throw DomainError("sequence length must be non-negative");
    check_argument(x, true);
    return y_sequence_unchecked(nmax, x);
}

Hankel01 hankel01(double x) {
    check_argument(x, true);
    double j0;
    double j1;
    double y0;
    double y1;
    if (x > kAsymptoticLimit) {
        asymptotic_01(0, x, j0, y0);
        asymptotic_01(1, x, j1, y1);
    } else {
        miller_01(x, j0, j1, y0, y1);
        if (x <= kSeriesLimit) {
            j0 = series_j(0, x);
            j1 = series_j(1, x);
        }
    }
    return {{j0, y0}, {j1, y1}};
}

double bessel_j_zero(int n, int m) { return find_zero(n, m, false); }

double bessel_dj_zero(int n, int m) { return find_zero(n, m, true); }

}  // namespace scatlab::specfun
