#pragma once

#include <complex>
#include <span>

namespace dispersia::detail {

// out_k = sum_j in_j exp(-2 pi i j k / n). in and out may alias.
void dft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

// out_j = sum_k in_k exp(+2 pi i j k / n), unnormalised. in and out may alias.
void dft_backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

}  // namespace dispersia::detail
