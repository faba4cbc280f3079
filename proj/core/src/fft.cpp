#include "rml/fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "rml/errors.hpp"

namespace rml {

void fft(std::vector<std::complex<double>>& data, const std::vector<int>& shape,
         bool inverse) {
    if (shape.empty()) throw usage_error("fft: empty shape");
    std::size_t total = 1;
    for (int n : shape) {
        if (n <= 0) throw usage_error("fft: nonpositive extent");
        total *= static_cast<std::size_t>(n);
    }
    if (total != data.size()) throw usage_error("fft: shape does not match data size");

    // Plan creation is not thread-safe in FFTW; execution of a ready plan is.
    static std::mutex plan_mutex;
    fftw_complex* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), ptr, ptr,
                             inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!plan) throw numeric_error("fft: fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(plan);
    }
}

} // namespace rml
