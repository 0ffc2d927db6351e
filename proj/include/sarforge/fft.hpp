#ifndef SARFORGE_FFT_HPP
#define SARFORGE_FFT_HPP

#include <complex>
#include <vector>

namespace sarforge {

/// In-place 2-D complex DFT on a row-major buffer of height x width values.
/// Forward uses the e^{-j} kernel, unnormalized; inverse applies the
/// 1/(width*height) factor so forward followed by inverse is the identity.
/// Thread-safe; plans are cached per shape behind a planner lock.
void fft2d(std::vector<std::complex<double>>& data, int width, int height, bool inverse);

}  // namespace sarforge

#endif  // SARFORGE_FFT_HPP
