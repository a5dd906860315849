#pragma once

#include <span>
#include <vector>

#include "iho/common.hpp"
#include "iho/grid.hpp"

namespace iho::fourier {

// In-place unnormalized DFT, data_k <- sum_j data_j exp(sign 2 pi i j k / n).
void dft(std::span<cplx> data, int sign);

// howmany contiguous transforms of length data.size() / howmany, one plan.
void dft_batch(std::span<cplx> data, std::size_t howmany, int sign);

enum class Path
{
    Auto,    // fast when the grids are compatible, direct otherwise
    Fast,    // throws GridMismatchError if the grids are not compatible
    Direct,  // O(n m) trapezoid sum
};

// out_k = sum_j w_j in_j exp(sign i alpha x_j y_k) with trapezoid weights w_j
// on the source grid and y_k on the target grid.
//
// The sum is a plain DFT with twiddles when both grids have n points and
// alpha dx dy = 2 pi / n.
bool compatible(Grid1D const& src, Grid1D const& dst, double alpha) noexcept;

std::vector<cplx> fourier_sum(std::span<cplx const> in, Grid1D const& src, Grid1D const& dst,
                              double alpha, int sign, Path path = Path::Auto);

// Fraction of the spectral power of the samples that sits in the top eighth
// of the frequency band below Nyquist.
double spectral_tail_fraction(std::span<cplx const> f);

// Periodic spectral derivative d/dx. The samples must decay to the grid
// edges (DomainError) and their spectrum must vanish towards Nyquist
// (AliasError).
std::vector<cplx> spectral_derivative(std::span<cplx const> f, double dx);

}  // namespace iho::fourier
