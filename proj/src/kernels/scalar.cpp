#include "kernels_internal.hpp"

namespace mlspec::kernels::detail {

void mask_eq_i32_scalar(std::span<const std::int32_t> column, std::int32_t value,
                        std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < column.size(); ++i) out[i] = column[i] == value ? 1 : 0;
}

void mask_and_scalar(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                     std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] & b[i];
}

void mask_not_scalar(std::span<const std::uint8_t> a, std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ 1;
}

std::uint64_t masked_sum_scalar(std::span<const std::uint64_t> weights,
                                std::span<const std::uint8_t> mask) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (mask[i]) sum += weights[i];
  }
  return sum;
}

std::uint64_t scaled_abs_diff_sum_scalar(std::span<const std::uint64_t> a, std::uint64_t scale_a,
                                         std::span<const std::uint64_t> b,
                                         std::uint64_t scale_b) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t x = a[i] * scale_a;
    std::uint64_t y = b[i] * scale_b;
    sum += x > y ? x - y : y - x;
  }
  return sum;
}

}  // namespace mlspec::kernels::detail
