#pragma once

#include <complex>
#include <vector>

namespace rml {

/// In-place complex DFT of a row-major array with the given shape.
/// Unnormalized FFTW conventions: forward applies e^{-2 pi i j k / N},
/// backward e^{+2 pi i j k / N}; callers carry the measure factors.
void fft(std::vector<std::complex<double>>& data, const std::vector<int>& shape,
         bool inverse = false);

/// Signed frequency index for bin k of an N-point DFT (k in [0,N)).
inline int fft_freq(int k, int n) { return k <= n / 2 ? k : k - n; }

} // namespace rml
