#pragma once

namespace qmplab {

// Tolerance hierarchy: one decade of slack per composition layer.
//   input gates   1e-12  (normalization, orthonormality of user-supplied data)
//   construction  1e-10  (validation of assembled operators: unitarity, PSD, trace)
//   derived       1e-9   (results propagated through several kernels)
inline constexpr double kInputTol = 1e-12;
inline constexpr double kConstructTol = 1e-10;
inline constexpr double kDerivedTol = 1e-9;

// Negative eigenvalues of this magnitude are round-off from products of
// unitaries; anything below -kClipTol is a genuine positivity violation.
inline constexpr double kClipTol = 1e-10;

// A state counts as pure when Tr(rho^2) >= 1 - kPurityGap.
inline constexpr double kPurityGap = 1e-9;

// Eigenvalues above this count toward the rank of a state. Two decades above
// kClipTol so clipped round-off never masquerades as support.
inline constexpr double kRankTol = 1e-8;

} // namespace qmplab
