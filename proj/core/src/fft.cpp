#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace dispersia::detail {

namespace {

// Plans for one transform length. fftw_execute_dft is thread-safe on distinct
// arrays; only planning needs the lock.
struct PlanSet {
    fftw_plan forwardOut = nullptr;
    fftw_plan backwardOut = nullptr;
    fftw_plan forwardIn = nullptr;
    fftw_plan backwardIn = nullptr;

    explicit PlanSet(std::size_t n) {
        const int len = static_cast<int>(n);
        std::vector<std::complex<double>> a(n), b(n);
        auto* pa = reinterpret_cast<fftw_complex*>(a.data());
        auto* pb = reinterpret_cast<fftw_complex*>(b.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forwardOut = fftw_plan_dft_1d(len, pa, pb, FFTW_FORWARD, flags);
        backwardOut = fftw_plan_dft_1d(len, pa, pb, FFTW_BACKWARD, flags);
        forwardIn = fftw_plan_dft_1d(len, pa, pa, FFTW_FORWARD, flags);
        backwardIn = fftw_plan_dft_1d(len, pa, pa, FFTW_BACKWARD, flags);
        if (!forwardOut || !backwardOut || !forwardIn || !backwardIn) {
            throw std::runtime_error("FFTW planning failed");
        }
    }
    PlanSet(const PlanSet&) = delete;
    PlanSet& operator=(const PlanSet&) = delete;
    ~PlanSet() {
        for (auto p : {forwardOut, backwardOut, forwardIn, backwardIn}) {
            if (p) fftw_destroy_plan(p);
        }
    }
};

const PlanSet& plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<PlanSet>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<PlanSet>(n);
    return *slot;
}

void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
             bool forward) {
    if (in.size() != out.size()) throw std::invalid_argument("DFT length mismatch");
    if (in.empty()) return;
    const auto& p = plans_for(in.size());
    const bool inPlace = in.data() == out.data();
    fftw_plan plan = forward ? (inPlace ? p.forwardIn : p.forwardOut)
                             : (inPlace ? p.backwardIn : p.backwardOut);
    // Complex out-of-place transforms leave the input untouched.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
    fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void dft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    execute(in, out, true);
}

void dft_backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    execute(in, out, false);
}

}  // namespace dispersia::detail
