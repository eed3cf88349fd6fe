#pragma once

namespace dsdetect {

/// Standard Gaussian tail P(Z >= x). Absolute error below 1e-10 on the
/// whole real line; returns 0 or 1 at the infinities.
double q_function(double x) noexcept;

/// Inverse of q_function on (0, 1). Throws DomainError outside the open
/// interval.
double inv_q(double p);

}  // namespace dsdetect
