#include <bit>
#include <cstdint>

#include "mixdisc/kernels.hpp"

namespace mixdisc::kernels::serial {

Complex mixed_discriminant_subsets(std::span<const CMatrix> mats) {
  const int n = static_cast<int>(mats.size());
  if (n == 0) return 1.0;
  const Eigen::Index dim = mats[0].rows();
  NeumaierSum<Complex> total;
  CMatrix sum(dim, dim);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    sum.setZero();
    for (int i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) sum += mats[i];
    const int missing = n - std::popcount(mask);
    const Complex d = det_in_place(sum);
    total.add((missing % 2 == 0) ? d : -d);
  }
  return total.value();
}

Complex permanent_ryser(const CMatrix& c) {
  const int n = static_cast<int>(c.rows());
  if (n == 0) return 1.0;
  NeumaierSum<Complex> total;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    Complex prod = 1.0;
    for (int i = 0; i < n; ++i) {
      Complex row = 0.0;
      for (int j = 0; j < n; ++j)
        if (mask & (std::uint64_t{1} << j)) row += c(i, j);
      prod *= row;
    }
    const bool negative = (n - std::popcount(mask)) % 2 != 0;
    total.add(negative ? -prod : prod);
  }
  return total.value();
}

}  // namespace mixdisc::kernels::serial
