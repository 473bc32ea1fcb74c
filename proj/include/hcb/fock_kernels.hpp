#pragma once

#include "hcb/fock_basis.hpp"
#include "hcb/model.hpp"

#include <span>
#include <vector>

namespace hcb {

// Hot inner loops of the Fock-space engine. Each kernel comes in two forms:
// a plain serial reference (the textbook scatter/accumulate loop, kept for
// testing) and an OpenMP gather-form kernel parallel over basis chunks.
// The parallel kernels are deterministic for a fixed thread count: partial
// sums are combined in thread order.

namespace serial {

// out = H * in, scatter form: walk each configuration's moves and add.
void apply_hamiltonian(const FockBasis& basis, const ModelParams& params,
                       std::span<const Complex> in, std::span<Complex> out);

std::vector<double> density(const FockBasis& basis, std::span<const Complex> amps);

// Expectation of sum_{i=L/2+1}^{L-1} -iJ (b^dag_i b_{i+1} - h.c.)  (Hermitian, real).
double half_current(const FockBasis& basis, double J, std::span<const Complex> amps);

double energy_expectation(const FockBasis& basis, const ModelParams& params,
                          std::span<const Complex> amps);

} // namespace serial

namespace par {

// out(row) = sum_col H(row,col) in(col), gather form: race-free per row.
void apply_hamiltonian(const FockBasis& basis, const ModelParams& params,
                       std::span<const Complex> in, std::span<Complex> out, int threads);

std::vector<double> density(const FockBasis& basis, std::span<const Complex> amps, int threads);

double half_current(const FockBasis& basis, double J, std::span<const Complex> amps, int threads);

double energy_expectation(const FockBasis& basis, const ModelParams& params,
                          std::span<const Complex> amps, int threads);

} // namespace par

} // namespace hcb
