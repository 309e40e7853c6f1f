#pragma once

#include "kramers/quadrature.hpp"

namespace kramers::fermi {

/// Reduced chemical potential alpha = mu_chem / kT.
struct ReducedChemicalPotential {
  double alpha = -5.0;
};

/// l_n(alpha) = ∫_0^inf t^n ln(1 + exp(alpha - t^2)) dt for n in {0, 1}.
double fermi_log_moment(int n, ReducedChemicalPotential alpha, const QuadratureSpec& spec);

/// 15 l_0(alpha) / (8 sqrt(pi) l_1(alpha)); tends to 15/8 in the
/// Boltzmann limit alpha -> -inf.
double kv_prefactor(ReducedChemicalPotential alpha, const QuadratureSpec& spec);

}  // namespace kramers::fermi
