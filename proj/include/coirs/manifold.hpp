#pragma once

#include "coirs/types.hpp"

namespace coirs::manifold {

/// Tolerance for on-manifold and tangency checks.
inline constexpr double kInvariantTol = 1e-10;

/// Orthogonal projection of an ambient direction onto the tangent space at
/// `base`, taken componentwise over the sphere and the two circle factors.
TangentVector project_to_tangent(const IteratePoint &base,
                                 const TangentVector &ambient);

/// Normalizes the precoder stack to unit Frobenius norm and every phase
/// coefficient to unit modulus.
IteratePoint retract(const IteratePoint &raw);

/// Real trace inner product summed over the three components.
double inner(const TangentVector &u, const TangentVector &v);
double norm(const TangentVector &v);

/// Largest violation of |W|_F = 1 and |phi_n| = 1.
double constraint_residual(const IteratePoint &p);

/// Largest violation of the tangency conditions of `v` at `base`.
double tangency_residual(const IteratePoint &base, const TangentVector &v);

} // namespace coirs::manifold
