#pragma once

namespace glvortex::bessel {

// lim_{r->0} (K0(r) + log r) = log 2 - Euler gamma
inline constexpr double kL = 0.11593151565841244881;
inline constexpr double kEulerGamma = 0.57721566490153286061;

double I0(double x);
double I1(double x);
double K0(double x);
double K1(double x);
// K0(r) + log r, evaluated without cancellation near r = 0.
double K0_plus_log(double r);
// Modified Bessel functions of integer order (tests and series oracles).
double In(int n, double x);
double Kn(int n, double x);

}  // namespace glvortex::bessel
