#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace mlspec::kernels {

namespace {

constexpr Table kScalar{
    Isa::scalar,
    detail::mask_eq_i32_scalar,
    detail::mask_and_scalar,
    detail::mask_not_scalar,
    detail::masked_sum_scalar,
    detail::scaled_abs_diff_sum_scalar,
};

#if defined(MLSPEC_WITH_AVX2)
constexpr Table kAvx2{
    Isa::avx2,
    detail::mask_eq_i32_avx2,
    detail::mask_and_avx2,
    detail::mask_not_avx2,
    detail::masked_sum_avx2,
    detail::scaled_abs_diff_sum_avx2,
};
#endif

const Table& select() {
  const char* pinned = std::getenv("MLSPEC_KERNELS");
  if (pinned != nullptr && std::string(pinned) == "scalar") return kScalar;
  return table_for(Isa::avx2);
}

void check_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const Table& scalar_table() { return kScalar; }

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(MLSPEC_WITH_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const Table& table_for(Isa isa) {
#if defined(MLSPEC_WITH_AVX2)
  if (isa == Isa::avx2 && isa_available(Isa::avx2)) return kAvx2;
#else
  (void)isa;
#endif
  return kScalar;
}

const Table& active() {
  static const Table& table = select();
  return table;
}

Mask mask_eq(std::span<const std::int32_t> column, std::int32_t value) {
  Mask out(column.size());
  active().mask_eq_i32(column, value, out);
  return out;
}

Mask mask_and(const Mask& a, const Mask& b) {
  check_size(a.size(), b.size());
  Mask out(a.size());
  active().mask_and(a, b, out);
  return out;
}

Mask mask_not(const Mask& a) {
  Mask out(a.size());
  active().mask_not(a, out);
  return out;
}

std::uint64_t masked_sum(std::span<const std::uint64_t> weights, const Mask& mask) {
  check_size(weights.size(), mask.size());
  return active().masked_sum(weights, mask);
}

}  // namespace mlspec::kernels
