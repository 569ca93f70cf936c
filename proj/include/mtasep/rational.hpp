#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mtasep/lattice.hpp"

namespace mtasep {

// Which descent the exchange recursion removes first. Both orders give the
// same function; the choice exists to test that.
enum class Reduction { Leftmost, Rightmost };

// phi_mu: base case prod (1+w_i)^{-delta_i} for increasing delta, extended by
//   phi_{s_i mu}(w) = w_{i+1}(1+w_i)/(w_i - w_{i+1}) (1 - s_i) phi_mu(w),  mu_i < mu_{i+1}.
template <class T>
std::complex<T> eval_phi(std::span<const Int> mu, std::span<const std::complex<T>> w,
                         Reduction order = Reduction::Leftmost);

// psi_nu: base case prod (1+w_i)^{eps_i} for decreasing eps, extended by
//   psi_{s_i nu}(w) = [w_i(1+w_{i+1}) - w_{i+1}(1+w_i) s_i]/(w_i - w_{i+1}) psi_nu(w),  nu_i > nu_{i+1}.
template <class T>
std::complex<T> eval_psi(std::span<const Int> nu, std::span<const std::complex<T>> w,
                         Reduction order = Reduction::Leftmost);

// Minimum separation |w_i - w_j| required by an exchange step.
template <class T>
T separation_floor(std::span<const std::complex<T>> w);

}  // namespace mtasep
