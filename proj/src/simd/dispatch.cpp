#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string_view>

#include "forecast/numeric/simd.hpp"

namespace forecast::simd {

#ifndef FORECAST_HAVE_AVX2
namespace detail {
const KernelTable* avx2_table_if_compiled() { return nullptr; }
}  // namespace detail
#endif

const KernelTable* avx2_kernels() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? detail::avx2_table_if_compiled() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* initial_table() {
  const char* env = std::getenv("FORECAST_SIMD");
  const std::string_view want = env ? env : "auto";
  if (want == "scalar") return &scalar_kernels();
  if (const auto* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool set_active(Isa isa) {
  const KernelTable* t =
      isa == Isa::Scalar ? &scalar_kernels() : avx2_kernels();
  if (!t) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  assert(w.size() == rows * cols && x.size() == cols && y.size() == rows);
  active().gemv(w.data(), rows, cols, x.data(), y.data());
}

void gemv_t(std::span<const double> w, std::size_t rows, std::size_t cols,
            std::span<const double> g, std::span<double> x) {
  assert(w.size() == rows * cols && g.size() == rows && x.size() == cols);
  active().gemv_t(w.data(), rows, cols, g.data(), x.data());
}

void ger(std::span<double> w, std::size_t rows, std::size_t cols,
         std::span<const double> g, std::span<const double> x) {
  assert(w.size() == rows * cols && g.size() == rows && x.size() == cols);
  active().ger(w.data(), rows, cols, g.data(), x.data());
}

}  // namespace forecast::simd
