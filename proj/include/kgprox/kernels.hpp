#pragma once

#include <cstddef>
#include <span>

// Dense reduction kernels behind the similarity and correlation code.
// A scalar reference implementation always exists; on x86-64 an AVX2
// variant is selected at runtime when the CPU supports it. The two are
// equivalence-tested against each other.
namespace kgprox::kernels {

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double sumsq(std::span<const double> a);

// Reference implementations, kept reachable for equivalence tests.
double dot_scalar(std::span<const double> a, std::span<const double> b);
double sum_scalar(std::span<const double> a);
double sumsq_scalar(std::span<const double> a);

// "scalar", "avx2" or "neon".
const char* active_impl();

} // namespace kgprox::kernels
