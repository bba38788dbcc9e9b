// fft.hpp
// Thin RAII layer over FFTW3 complex transforms with a synchronized plan
// cache keyed by (shape, sign, buffer alignment).  Plan creation is guarded
// by a mutex (FFTW planning is not thread safe); execution via
// fftw_execute_dft is reentrant and may run concurrently.

#ifndef TORUS_FFT_HPP
#define TORUS_FFT_HPP

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "torus/common.hpp"

namespace torus {

// Buffer allocated with fftw_malloc so that plans may assume SIMD alignment.
class FftBuffer {
  public:
    explicit FftBuffer(std::size_t n)
        : size_(n),
          data_(static_cast<cplx*>(fftw_malloc(sizeof(cplx) * (n == 0 ? 1 : n)))) {
        if (data_ == nullptr) throw std::bad_alloc();
    }
    ~FftBuffer() { fftw_free(data_); }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;
    FftBuffer(FftBuffer&& o) noexcept : size_(o.size_), data_(o.data_) {
        o.data_ = nullptr;
        o.size_ = 0;
    }

    cplx* data() { return data_; }
    const cplx* data() const { return data_; }
    std::size_t size() const { return size_; }
    cplx& operator[](std::size_t i) { return data_[i]; }
    const cplx& operator[](std::size_t i) const { return data_[i]; }
    std::span<cplx> span() { return {data_, size_}; }

  private:
    std::size_t size_;
    cplx* data_;
};

namespace detail {

struct PlanKey {
    std::vector<int> shape;
    int sign;
    int align_in;
    int align_out;
    bool operator<(const PlanKey& o) const {
        if (shape != o.shape) return shape < o.shape;
        if (sign != o.sign) return sign < o.sign;
        if (align_in != o.align_in) return align_in < o.align_in;
        return align_out < o.align_out;
    }
};

class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(const std::vector<int>& shape, int sign, cplx* in, cplx* out) {
        PlanKey key{shape, sign, fftw_alignment_of(reinterpret_cast<double*>(in)),
                    fftw_alignment_of(reinterpret_cast<double*>(out))};
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        fftw_plan p = fftw_plan_dft(static_cast<int>(shape.size()),
                                    shape.data(),
                                    reinterpret_cast<fftw_complex*>(in),
                                    reinterpret_cast<fftw_complex*>(out),
                                    sign, FFTW_ESTIMATE);
        if (p == nullptr) throw std::runtime_error("fftw_plan_dft failed");
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }

  private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
};

}  // namespace detail

// Unnormalized c2c DFT: out[j] = sum_k in[k] exp(sign * 2*pi*i * <j,k/shape>).
// sign = FFTW_FORWARD (-1) or FFTW_BACKWARD (+1).  in and out must be
// distinct FftBuffer storage of matching total size.
inline void dft(const std::vector<int>& shape, FftBuffer& in, FftBuffer& out, int sign) {
    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    if (in.size() < total || out.size() < total || in.data() == out.data())
        throw std::invalid_argument("dft: bad buffers");
    fftw_plan p = detail::PlanCache::instance().get(shape, sign, in.data(), out.data());
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace torus

#endif  // TORUS_FFT_HPP
