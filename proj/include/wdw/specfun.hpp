#pragma once

#include "wdw/errors.hpp"
#include "wdw/model.hpp"

namespace wdw::specfun {

enum class BesselFamily { J, Y, I, K };

// One of the cylinder functions J, Y, I, K at a finite real order. Negative
// orders of Y and K are handled internally through the reflection rules.
struct BesselKind {
    BesselFamily family = BesselFamily::J;
    double order = 0.0;
};

// Function value at z > 0.
double bessel(BesselKind kind, double z);

// d/dz of the function at z > 0, from the standard recurrences.
double bessel_derivative(BesselKind kind, double z);

// Value and derivative in one evaluation.
ValueDeriv bessel_with_derivative(BesselKind kind, double z);

// J_nu, Y_nu and their derivatives at nu of either sign, x > 0.
struct BesselJY {
    double j, jp, y, yp;
};
BesselJY cyl_jy(double nu, double x);

// I_nu, K_nu and their derivatives at nu of either sign, x > 0.
struct BesselIK {
    double i, ip, k, kp;
};
BesselIK cyl_ik(double nu, double x);

// Confluent hypergeometric function 1F1(n, alpha; z). Throws PoleError when
// alpha is a non-positive integer.
double hyp1f1(double n, double alpha, double z);

// d/dz 1F1(n, alpha; z) = (n/alpha) 1F1(n+1, alpha+1; z).
double hyp1f1_derivative(double n, double alpha, double z);

// 1/Gamma(x), zero at the poles of Gamma.
double reciprocal_gamma(double x);

}  // namespace wdw::specfun
