#pragma once

#include "hetnet/quadrature.hpp"

// The Gauss hypergeometric family used by the interference Laplace
// transform: 2F1(1, 1-2/alpha; 2-2/alpha; z) for alpha > 2 and z <= 0.
//
// The defining power series diverges for z < -1, so the fast path applies
// linear transformations that keep the effective series argument in
// [0, 1/2]:
//   z in [-1, 0]  ->  Pfaff,  w = z/(z-1)
//   z < -1        ->  inversion in 1/z, whose two gamma prefactors collapse
//                     to -(alpha-2)/2 and (1-q)*Gamma(1-q)*Gamma(q), q = 2/alpha
// An independent route evaluates the Euler integral representation
//   2F1 = (1-2/alpha) * Int_0^1 u^(-2/alpha) / (1-z*u) du
// by adaptive quadrature (after substituting away the endpoint singularity);
// the two routes are required to agree and both are exposed.

namespace hetnet {

/// Gamma(x) for x > 0. Throws std::domain_error otherwise.
double gamma_fn(double x);

/// 2F1(1, 1-2/alpha; 2-2/alpha; z), alpha > 2, z <= 0. Series route.
double hyp2f1_interference(double alpha, double z);

/// Same function through the Euler integral representation; the slow,
/// independent cross-check of the series route.
double hyp2f1_interference_integral(double alpha, double z,
                                    const QuadratureSpec& spec = {1e-12, 1e-15, 4000});

}  // namespace hetnet
