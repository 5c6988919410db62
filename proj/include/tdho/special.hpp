#pragma once

#include <vector>

namespace tdho {

// Normalized Hermite function h_n(x) = (2^n n! sqrt(pi))^{-1/2} exp(-x^2/2) H_n(x).
double hermite_function(int n, double x);
// h_0(x), ..., h_nmax(x).
std::vector<double> hermite_functions(int nmax, double x);

struct BesselValues {
  double j0, y0, j1, y1;
};
BesselValues bessel01(double x);

// Ferrers (on-the-cut) Legendre functions of real degree nu >= 0 at x in (-1, 1),
// together with degree nu + 1 for the derivative recurrence.
struct FerrersValues {
  double p, q, p_next, q_next;
};
FerrersValues ferrers_pq(double nu, double x);

}  // namespace tdho
