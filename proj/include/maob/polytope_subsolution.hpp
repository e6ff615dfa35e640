#pragma once

#include "maob/analytic.hpp"

namespace maob {

/// k-dimensional faces of a polytope given by halfspaces: each face as the
/// list of its vertices.
std::vector<std::vector<Vec>> polytope_faces(const std::vector<Halfspace>& facets, int n, int k);

/// Max of shifted copies of the s = 1 family attached to the k-faces of P,
/// k = ceil((n+q)/2) - 1:  w = M2 max{Phi_i + M1 l_i, 0}.
/// `m2 <= 0` picks M2 so that det D^2 w >= w^q on a sample of Omega (c_sub = 1).
/// Throws AnalyticError("increase M1") when P is not contained in every
/// {Phi_i + M1 l_i <= 0} on the samples.
AnalyticExample polytope_subsolution(const ConvexDomain& P, const ConvexDomain& omega, double q, double m1,
                                     double m2, std::uint64_t seed = 0);

/// Doubles M1 from `m1_init` until the inclusion check passes (at most
/// `max_doublings` times); throws AnalyticError("M1 search exceeded cap").
AnalyticExample polytope_subsolution_auto(const ConvexDomain& P, const ConvexDomain& omega, double q,
                                          double m1_init, double m2, int max_doublings = 30,
                                          std::uint64_t seed = 0);

}  // namespace maob
