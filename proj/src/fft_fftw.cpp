#include "pascalx/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <unordered_map>
#include <vector>

namespace pascalx {
namespace {

class FftwProvider final : public RealFft {
  public:
    void forward(std::size_t n, const double* in, std::complex<double>* out) override {
        fftw_execute_dft_r2c(plans(n).r2c, const_cast<double*>(in),
                             reinterpret_cast<fftw_complex*>(out));
    }

    void inverse(std::size_t n, std::complex<double>* in, double* out) override {
        fftw_execute_dft_c2r(plans(n).c2r, reinterpret_cast<fftw_complex*>(in), out);
    }

  private:
    struct PlanPair {
        fftw_plan r2c = nullptr;
        fftw_plan c2r = nullptr;
    };

    PlanPair& plans(std::size_t n) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        // FFTW_UNALIGNED lets the cached plan execute on any caller buffer.
        std::vector<double> re(n);
        std::vector<std::complex<double>> cx(n / 2 + 1);
        PlanPair p;
        p.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), re.data(),
                                     reinterpret_cast<fftw_complex*>(cx.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                     reinterpret_cast<fftw_complex*>(cx.data()), re.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
        return cache_.emplace(n, p).first->second;
    }

    std::mutex mutex_;
    std::unordered_map<std::size_t, PlanPair> cache_;
};

}  // namespace

RealFft& default_fft() {
    static FftwProvider provider;
    return provider;
}

}  // namespace pascalx
