#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "kgprox/kernels.hpp"

using namespace kgprox;

TEST_CASE("runtime kernels agree with the scalar reference") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 64ul, 1001ul}) {
    std::vector<double> a(n), b(n);
    for (size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
    }
    CHECK(kernels::dot(a, b) ==
          doctest::Approx(kernels::dot_scalar(a, b)).epsilon(1e-12));
    CHECK(kernels::sum(a) ==
          doctest::Approx(kernels::sum_scalar(a)).epsilon(1e-12));
    CHECK(kernels::sumsq(a) ==
          doctest::Approx(kernels::sumsq_scalar(a)).epsilon(1e-12));
  }
}

TEST_CASE("kernel identities") {
  std::vector<double> ones(17, 1.0);
  CHECK(kernels::dot(ones, ones) == 17.0);
  CHECK(kernels::sum(ones) == 17.0);
  CHECK(kernels::sumsq(ones) == 17.0);
  CHECK(!std::string(kernels::active_impl()).empty());
}
