#pragma once

#include "mlspec/kernels.hpp"

namespace mlspec::kernels::detail {

void mask_eq_i32_scalar(std::span<const std::int32_t> column, std::int32_t value,
                        std::span<std::uint8_t> out);
void mask_and_scalar(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                     std::span<std::uint8_t> out);
void mask_not_scalar(std::span<const std::uint8_t> a, std::span<std::uint8_t> out);
std::uint64_t masked_sum_scalar(std::span<const std::uint64_t> weights,
                                std::span<const std::uint8_t> mask);
std::uint64_t scaled_abs_diff_sum_scalar(std::span<const std::uint64_t> a, std::uint64_t scale_a,
                                         std::span<const std::uint64_t> b,
                                         std::uint64_t scale_b);

#if defined(MLSPEC_WITH_AVX2)
void mask_eq_i32_avx2(std::span<const std::int32_t> column, std::int32_t value,
                      std::span<std::uint8_t> out);
void mask_and_avx2(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                   std::span<std::uint8_t> out);
void mask_not_avx2(std::span<const std::uint8_t> a, std::span<std::uint8_t> out);
std::uint64_t masked_sum_avx2(std::span<const std::uint64_t> weights,
                              std::span<const std::uint8_t> mask);
std::uint64_t scaled_abs_diff_sum_avx2(std::span<const std::uint64_t> a, std::uint64_t scale_a,
                                       std::span<const std::uint64_t> b, std::uint64_t scale_b);
#endif

}  // namespace mlspec::kernels::detail
