#include "kgprox/kernels.hpp"

#include <cassert>

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace kgprox::kernels {

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v;
  return acc;
}

double sumsq_scalar(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

#if defined(__aarch64__)

static double dot_neon(std::span<const double> a, std::span<const double> b) {
  size_t n = a.size();
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

static double sum_neon(std::span<const double> a) {
  size_t n = a.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) acc0 = vaddq_f64(acc0, vld1q_f64(a.data() + i));
  double acc = vaddvq_f64(acc0);
  for (; i < n; ++i) acc += a[i];
  return acc;
}

static double sumsq_neon(std::span<const double> a) {
  size_t n = a.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(a.data() + i);
    acc0 = vfmaq_f64(acc0, v, v);
  }
  double acc = vaddvq_f64(acc0);
  for (; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

#endif // __aarch64__

#if defined(KGPROX_HAVE_AVX2)
// Compiled in kernels_avx2.cpp with -mavx2.
double dot_avx2(std::span<const double> a, std::span<const double> b);
double sum_avx2(std::span<const double> a);
double sumsq_avx2(std::span<const double> a);
#endif

namespace {

struct Dispatch {
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*sum)(std::span<const double>);
  double (*sumsq)(std::span<const double>);
  const char* name;
};

Dispatch pick() {
#if defined(KGPROX_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) {
    return {dot_avx2, sum_avx2, sumsq_avx2, "avx2"};
  }
#endif
#if defined(__aarch64__)
  return {dot_neon, sum_neon, sumsq_neon, "neon"};
#else
  return {dot_scalar, sum_scalar, sumsq_scalar, "scalar"};
#endif
}

const Dispatch& table() {
  static const Dispatch d = pick();
  return d;
}

} // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  return table().dot(a, b);
}

double sum(std::span<const double> a) { return table().sum(a); }

double sumsq(std::span<const double> a) { return table().sumsq(a); }

const char* active_impl() { return table().name; }

} // namespace kgprox::kernels
