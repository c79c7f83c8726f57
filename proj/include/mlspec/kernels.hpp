#pragma once

// Data-parallel counting kernels used by the evaluator's columnar path.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2 variant. The active table is chosen once at startup from CPUID; the
// MLSPEC_KERNELS environment variable ("scalar" or "avx2") can pin it.
// Masks are byte arrays holding exactly 0 or 1.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mlspec::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct Table {
  Isa isa;
  // out[i] = (column[i] == value)
  void (*mask_eq_i32)(std::span<const std::int32_t> column, std::int32_t value,
                      std::span<std::uint8_t> out);
  // out[i] = a[i] & b[i]
  void (*mask_and)(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                   std::span<std::uint8_t> out);
  // out[i] = 1 - a[i]
  void (*mask_not)(std::span<const std::uint8_t> a, std::span<std::uint8_t> out);
  // sum of weights[i] where mask[i] == 1
  std::uint64_t (*masked_sum)(std::span<const std::uint64_t> weights,
                              std::span<const std::uint8_t> mask);
  // sum_i |a[i]*scale_a - b[i]*scale_b|. Requires every a[i], b[i],
  // scale_a, scale_b < 2^32 and both weighted sums < 2^62.
  std::uint64_t (*scaled_abs_diff_sum)(std::span<const std::uint64_t> a, std::uint64_t scale_a,
                                       std::span<const std::uint64_t> b, std::uint64_t scale_b);
};

const Table& scalar_table();

bool isa_available(Isa isa);

/// Table for `isa`; falls back to scalar when the ISA is not available.
const Table& table_for(Isa isa);

/// Table selected at startup.
const Table& active();

using Mask = std::vector<std::uint8_t>;

// Convenience wrappers over the active table.
Mask mask_eq(std::span<const std::int32_t> column, std::int32_t value);
Mask mask_and(const Mask& a, const Mask& b);
Mask mask_not(const Mask& a);
std::uint64_t masked_sum(std::span<const std::uint64_t> weights, const Mask& mask);

}  // namespace mlspec::kernels
