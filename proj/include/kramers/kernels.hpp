#pragma once

// Kernels of the half-space slip problem with collision frequency
// proportional to molecular speed. All of them are moments of the weight
//   (3/2) t^n (1 - t^2) over t in [0, 1]
// against Lorentzian factors 1/(1 + k^2 t^2).

#include "kramers/quadrature.hpp"

namespace kramers::kernels {

inline constexpr int kMaxOrder = 8;

/// T_n(0) = 3 / ((n+1)(n+3)), exact.
double T_at_zero(int n);

/// T_n(k) = (3/2) ∫ t^n (1-t^2) / (1 + k^2 t^2) dt.
KernelValue eval_T(int n, double k, const QuadratureSpec& spec);

/// J_n(k, k1) = (3/2) ∫ t^n (1-t^2) / ((1 + k^2 t^2)(1 + k1^2 t^2)) dt.
KernelValue eval_J(int n, double k, double k1, const QuadratureSpec& spec);

/// L(k) = 1 - T_0(k), evaluated as k^2 T_2(k) so the double zero at k = 0
/// is exact.
KernelValue eval_L(double k, const QuadratureSpec& spec);

/// phi_0(k) = (8/15) T_3(k) - T_4(k); satisfies T_2 - (8/15) T_1 = k^2 phi_0.
KernelValue eval_phi0(double k, const QuadratureSpec& spec);

/// S(k, k1) = k1^2 [T_3(k) T_3(k1) / T_1(0) - J_5(k, k1)], the transfer
/// kernel of the regularized recurrence.
KernelValue eval_S(double k, double k1, const QuadratureSpec& spec);

}  // namespace kramers::kernels
