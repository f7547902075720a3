// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rirforge/convolve.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <complex>
#include <memory>
#include <mutex>
#include <new>
#include <stdexcept>

namespace rirforge {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
    void* p = fftw_malloc(sizeof(T) * n);
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(static_cast<T*>(p));
}

class Plan {
public:
    explicit Plan(fftw_plan plan) : plan_(plan) {
        if (plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

}  // namespace

std::vector<double> fft_convolve(std::span<const double> signal, std::span<const double> kernel,
                                 std::size_t out_len) {
    std::vector<double> out(out_len, 0.0);
    if (signal.empty() || kernel.empty() || out_len == 0) return out;

    const std::size_t full = signal.size() + kernel.size() - 1;
    const std::size_t needed = std::min(full, out_len);
    // Circular wrap only touches indices >= n - kernel.size() + 1, so n need
    // only cover the samples we keep plus the kernel.
    const std::size_t n = std::bit_ceil(std::max<std::size_t>(2, std::min(full, needed + kernel.size())));
    const std::size_t bins = n / 2 + 1;

    auto a = fftw_buffer<double>(n);
    auto b = fftw_buffer<double>(n);
    auto fa = fftw_buffer<fftw_complex>(bins);
    auto fb = fftw_buffer<fftw_complex>(bins);

    std::unique_ptr<Plan> fwd_a;
    std::unique_ptr<Plan> fwd_b;
    std::unique_ptr<Plan> inv;
    {
        std::lock_guard lock(planner_mutex());
        const int ni = static_cast<int>(n);
        fwd_a = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(ni, a.get(), fa.get(), FFTW_ESTIMATE));
        fwd_b = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(ni, b.get(), fb.get(), FFTW_ESTIMATE));
        inv = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(ni, fa.get(), a.get(), FFTW_ESTIMATE));
    }

    const std::size_t sig_used = std::min(signal.size(), needed);
    std::fill_n(a.get(), n, 0.0);
    std::copy_n(signal.begin(), sig_used, a.get());
    std::fill_n(b.get(), n, 0.0);
    std::copy_n(kernel.begin(), std::min(kernel.size(), n), b.get());

    fwd_a->execute();
    fwd_b->execute();
    for (std::size_t k = 0; k < bins; ++k) {
        const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
        const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
        fa[k][0] = re;
        fa[k][1] = im;
    }
    inv->execute();

    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < needed; ++i) {
        out[i] = a[i] * scale;
    }
    return out;
}

std::vector<double> fft_convolve(std::span<const double> signal, std::span<const double> kernel) {
    if (signal.empty() || kernel.empty()) return {};
    return fft_convolve(signal, kernel, signal.size() + kernel.size() - 1);
}

}  // namespace rirforge
