#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "singreg/grid_field.hpp"

namespace singreg::fft {

using cvec = std::vector<std::complex<double>>;

/// In-place unnormalized forward DFT over the grid's axes.
void forward(cvec& data, const GridSpec& grid);
/// In-place inverse DFT including the 1/N normalization.
void inverse(cvec& data, const GridSpec& grid);

/// 1-D transforms of arbitrary length.
void forward(cvec& data);
void inverse(cvec& data);

/// Angular wavenumbers matching the DFT ordering along one axis.
std::vector<double> wavenumbers(std::size_t n, double length);

/// Full linear convolution (length a.size() + b.size() - 1), zero padded.
std::vector<double> linear_convolution(std::span<const double> a, std::span<const double> b);

}  // namespace singreg::fft
