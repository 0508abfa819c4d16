#include "glvortex/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace glvortex::bessel {

namespace {

constexpr double kEps = 1e-17;
constexpr int kMaxTerms = 500;

// Series sum_{k>=0} (x^2/4)^k / (k! (k+n)!) * (x/2)^n
double i_series(int n, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= 0.5 * x / k;
  double sum = term;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (term < kEps * sum) break;
  }
  return sum;
}

// Steed's continued fraction for K0 and K1, x > 2.
void k_cf2(double x, double& k0, double& k1) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < kMaxTerms; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-16) break;
  }
  h *= a1;
  k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  k1 = k0 * (x + 0.5 - h) / x;
}

// sum_{k>=1} (x^2/4)^k / (k!)^2 * H_k
double k0_tail(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, harmonic = 0.0, sum = 0.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    const double t = term * harmonic;
    sum += t;
    if (t < kEps * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double I0(double x) { return i_series(0, std::abs(x)); }

double I1(double x) {
  const double v = i_series(1, std::abs(x));
  return x < 0 ? -v : v;
}

double In(int n, double x) {
  if (n < 0) n = -n;
  const double v = i_series(n, std::abs(x));
  return (x < 0 && (n % 2)) ? -v : v;
}

double K0(double x) {
  if (!(x > 0.0)) return x == 0.0 ? INFINITY : NAN;
  if (x <= 2.0) return -(std::log(0.5 * x) + kEulerGamma) * I0(x) + k0_tail(x);
  double k0, k1;
  k_cf2(x, k0, k1);
  return k0;
}

double K1(double x) {
  if (!(x > 0.0)) return x == 0.0 ? INFINITY : NAN;
  if (x <= 2.0) {
    // 1/x + I1 log(x/2) - (x/4) sum (psi(k+1)+psi(k+2)) (x^2/4)^k/(k!(k+1)!)
    const double q = 0.25 * x * x;
    double term = 1.0;
    double psi1 = -kEulerGamma, psi2 = 1.0 - kEulerGamma;
    double sum = term * (psi1 + psi2);
    for (int k = 1; k < kMaxTerms; ++k) {
      term *= q / (static_cast<double>(k) * (k + 1));
      psi1 += 1.0 / k;
      psi2 += 1.0 / (k + 1);
      const double t = term * (psi1 + psi2);
      sum += t;
      if (std::abs(t) < kEps * std::abs(sum)) break;
    }
    return 1.0 / x + I1(x) * std::log(0.5 * x) - 0.25 * x * sum;
  }
  double k0, k1;
  k_cf2(x, k0, k1);
  return k1;
}

double K0_plus_log(double r) {
  if (!(r > 0.0)) return r == 0.0 ? kL : NAN;
  if (r <= 2.0) {
    const double i0 = I0(r);
    return kL * i0 - std::log(r) * (i0 - 1.0) + k0_tail(r);
  }
  return K0(r) + std::log(r);
}

double Kn(int n, double x) {
  if (n < 0) n = -n;
  double km = K0(x);
  if (n == 0) return km;
  double k = K1(x);
  for (int j = 1; j < n; ++j) {
    const double kp = km + 2.0 * j / x * k;
    km = k;
    k = kp;
  }
  return k;
}

}  // namespace glvortex::bessel
