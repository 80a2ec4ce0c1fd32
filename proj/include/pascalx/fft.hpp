#pragma once

// Thin real-FFT provider interface. The library only needs 1-D
// real-to-complex transforms with cached plans; the default provider is
// backed by FFTW3 (plans created under a lock, execution concurrent).

#include <complex>
#include <cstddef>

namespace pascalx {

class RealFft {
  public:
    virtual ~RealFft() = default;

    /// out[0 .. n/2] <- forward DFT of in[0 .. n). Unnormalized.
    virtual void forward(std::size_t n, const double* in, std::complex<double>* out) = 0;

    /// out[0 .. n) <- inverse DFT of the half spectrum in[0 .. n/2].
    /// Unnormalized (inverse(forward(x)) == n * x). May clobber `in`.
    virtual void inverse(std::size_t n, std::complex<double>* in, double* out) = 0;
};

/// Process-wide FFTW-backed provider. Plans use FFTW_ESTIMATE so results
/// are deterministic run to run.
RealFft& default_fft();

}  // namespace pascalx
