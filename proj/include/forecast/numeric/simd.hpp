#pragma once

// Data-parallel inner loops behind every layer. Each kernel has a scalar
// reference implementation and, where the CPU supports it, an AVX2+FMA
// variant. The variant is picked once at startup; FORECAST_SIMD=scalar|avx2
// overrides detection.

#include <cstddef>
#include <span>
#include <string_view>

namespace forecast::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y += W x, W is rows x cols row-major
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols,
               const double* x, double* y);
  // x += W^T g
  void (*gemv_t)(const double* w, std::size_t rows, std::size_t cols,
                 const double* g, double* x);
  // W += g x^T
  void (*ger)(double* w, std::size_t rows, std::size_t cols, const double* g,
              const double* x);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_kernels();

const KernelTable& active();
// Forces a variant; returns false (and changes nothing) if unavailable.
bool set_active(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);
void gemv_t(std::span<const double> w, std::size_t rows, std::size_t cols,
            std::span<const double> g, std::span<double> x);
void ger(std::span<double> w, std::size_t rows, std::size_t cols,
         std::span<const double> g, std::span<const double> x);

namespace detail {
const KernelTable* avx2_table_if_compiled();
}

}  // namespace forecast::simd
