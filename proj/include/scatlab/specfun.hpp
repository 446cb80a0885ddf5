#pragma once

// Real-argument cylinder functions of integer order.
//
// J_n is evaluated by its ascending series for small arguments and by Miller's
// backward recurrence, normalized with J_0 + 2 sum J_2k = 1, elsewhere.  Y_0 and
// Y_1 come from the Neumann series over the same Miller sequence (x <= 20) or
// the Hankel asymptotic expansion (x > 20); higher Y_n by forward recurrence.
//
// Orders are limited to |n| <= kMaxOrder and arguments to x <= kMaxArgument.
// Negative orders use C_{-n} = (-1)^n C_n.

#include <complex>
#include <vector>

namespace scatlab::specfun {

inline constexpr int kMaxOrder = 120;
inline constexpr double kMaxArgument = 1000.0;

/// Values and first derivatives of J_n, Y_n and H_n^{(1)} at one argument.
struct CylinderValue {
    double j = 0.0;
    double y = 0.0;
    std::complex<double> h1;  // j + i y
    double dj = 0.0;
    double dy = 0.0;
    std::complex<double> dh1;  // dj + i dy
};

double bessel_j(int n, double x);
double bessel_y(int n, double x);
std::complex<double> hankel1(int n, double x);

double bessel_j_prime(int n, double x);
double bessel_y_prime(int n, double x);
std::complex<double> hankel1_prime(int n, double x);

/// All of the above for one (n, x); requires x > 0.
CylinderValue cylinder(int n, double x);

/// J_0(x) .. J_nmax(x) in one pass, x >= 0.
std::vector<double> bessel_j_sequence(int nmax, double x);

/// Y_0(x) .. Y_nmax(x) in one pass, x > 0.  Entries may overflow to -inf for
/// large orders at tiny arguments.
std::vector<double> bessel_y_sequence(int nmax, double x);

/// H_0^{(1)}(x) and H_1^{(1)}(x) together; the hot path of the point-source kernel.
struct Hankel01 {
    std::complex<double> h0;
    std::complex<double> h1;
};
Hankel01 hankel01(double x);

/// m-th positive zero of J_n (n >= 0, m >= 1), searched on (0, 100].
double bessel_j_zero(int n, int m);

/// m-th positive zero of J_n' (n >= 0, m >= 1), searched on (0, 100].
double bessel_dj_zero(int n, int m);

}  // namespace scatlab::specfun
