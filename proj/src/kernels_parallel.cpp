#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "mixdisc/kernels.hpp"

namespace mixdisc::kernels::parallel {

namespace {

// Gray-code walks restart from a freshly built state at every block start,
// which bounds round-off drift from the incremental updates.
constexpr int kBlockBits = 6;

Complex reduce_in_order(const std::vector<Complex>& partials) {
  NeumaierSum<Complex> total;
  for (const Complex& p : partials) total.add(p);
  return total.value();
}

}  // namespace

Complex mixed_discriminant_centered(std::span<const CMatrix> mats) {
  const int n = static_cast<int>(mats.size());
  if (n == 0) return 1.0;
  const Eigen::Index dim = mats[0].rows();

  // bit j of the Gray word set <=> sign of slot j+1 is -1; slot 0 fixed at +1
  const int free_bits = n - 1;
  const int block_bits = std::min(free_bits, kBlockBits);
  const std::int64_t block_len = std::int64_t{1} << block_bits;
  const std::int64_t blocks = std::int64_t{1} << (free_bits - block_bits);
  std::vector<Complex> partials(static_cast<std::size_t>(blocks));

#pragma omp parallel
  {
    CMatrix sum(dim, dim), work(dim, dim);
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
      const std::uint64_t k0 = static_cast<std::uint64_t>(b * block_len);
      std::uint64_t gray = k0 ^ (k0 >> 1);
      sum = mats[0];
      for (int j = 0; j < free_bits; ++j) {
        if (gray & (std::uint64_t{1} << j)) {
          sum -= mats[j + 1];
        } else {
          sum += mats[j + 1];
        }
      }
      NeumaierSum<Complex> acc;
      for (std::int64_t step = 0; step < block_len; ++step) {
        work = sum;
        const Complex d = det_in_place(work);
        acc.add(std::popcount(gray) % 2 == 0 ? d : -d);
        if (step + 1 == block_len) break;
        const std::uint64_t k = k0 + static_cast<std::uint64_t>(step) + 1;
        const int flip = std::countr_zero(k);
        gray ^= std::uint64_t{1} << flip;
        if (gray & (std::uint64_t{1} << flip)) {
          sum -= 2.0 * mats[flip + 1];
        } else {
          sum += 2.0 * mats[flip + 1];
        }
      }
      partials[static_cast<std::size_t>(b)] = acc.value();
    }
  }
  return std::ldexp(1.0, 1 - n) * reduce_in_order(partials);
}

Complex permanent_ryser(const CMatrix& c) {
  const int n = static_cast<int>(c.rows());
  if (n == 0) return 1.0;

  // enumerate all 2^n column subsets, Gray-coded; the empty subset adds 0
  const int block_bits = std::min(n, kBlockBits);
  const std::int64_t block_len = std::int64_t{1} << block_bits;
  const std::int64_t blocks = std::int64_t{1} << (n - block_bits);
  std::vector<Complex> partials(static_cast<std::size_t>(blocks));

#pragma omp parallel
  {
    CVector rows(n);
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
      const std::uint64_t k0 = static_cast<std::uint64_t>(b * block_len);
      std::uint64_t gray = k0 ^ (k0 >> 1);
      rows.setZero();
      for (int j = 0; j < n; ++j)
        if (gray & (std::uint64_t{1} << j)) rows += c.col(j);
      NeumaierSum<Complex> acc;
      for (std::int64_t step = 0; step < block_len; ++step) {
        if (gray != 0) {
          Complex prod = 1.0;
          for (int i = 0; i < n; ++i) prod *= rows(i);
          const bool negative = (n - std::popcount(gray)) % 2 != 0;
          acc.add(negative ? -prod : prod);
        }
        if (step + 1 == block_len) break;
        const std::uint64_t k = k0 + static_cast<std::uint64_t>(step) + 1;
        const int flip = std::countr_zero(k);
        gray ^= std::uint64_t{1} << flip;
        if (gray & (std::uint64_t{1} << flip)) {
          rows += c.col(flip);
        } else {
          rows -= c.col(flip);
        }
      }
      partials[static_cast<std::size_t>(b)] = acc.value();
    }
  }
  return reduce_in_order(partials);
}

}  // namespace mixdisc::kernels::parallel
