// Compiled with -mavx2; only called after a CPUID check.
#include <immintrin.h>

#include <array>
#include <cstring>

#include "kernels_internal.hpp"

namespace mlspec::kernels::detail {

namespace {

// Byte expansion of an 8-bit movemask: bit k -> byte k holding 0 or 1.
constexpr std::array<std::uint64_t, 256> make_bit_to_byte_lut() {
  std::array<std::uint64_t, 256> lut{};
  for (unsigned m = 0; m < 256; ++m) {
    std::uint64_t v = 0;
    for (unsigned k = 0; k < 8; ++k) {
      if (m & (1u << k)) v |= std::uint64_t{1} << (8 * k);
    }
    lut[m] = v;
  }
  return lut;
}

constexpr auto kBitToByte = make_bit_to_byte_lut();

}  // namespace

void mask_eq_i32_avx2(std::span<const std::int32_t> column, std::int32_t value,
                      std::span<std::uint8_t> out) {
  const std::size_t n = column.size();
  const __m256i needle = _mm256_set1_epi32(value);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(column.data() + i));
    __m256i eq = _mm256_cmpeq_epi32(v, needle);
    unsigned bits = static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(eq)));
    std::memcpy(out.data() + i, &kBitToByte[bits], 8);
  }
  for (; i < n; ++i) out[i] = column[i] == value ? 1 : 0;
}

void mask_and_avx2(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                   std::span<std::uint8_t> out) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), _mm256_and_si256(x, y));
  }
  for (; i < n; ++i) out[i] = a[i] & b[i];
}

void mask_not_avx2(std::span<const std::uint8_t> a, std::span<std::uint8_t> out) {
  const std::size_t n = a.size();
  const __m256i ones = _mm256_set1_epi8(1);
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), _mm256_xor_si256(x, ones));
  }
  for (; i < n; ++i) out[i] = a[i] ^ 1;
}

std::uint64_t masked_sum_avx2(std::span<const std::uint64_t> weights,
                              std::span<const std::uint8_t> mask) {
  const std::size_t n = weights.size();
  const __m256i zero = _mm256_setzero_si256();
  __m256i acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    std::int32_t packed;
    std::memcpy(&packed, mask.data() + i, 4);
    // 0/1 bytes widened to 64-bit lanes, then negated into all-zero/all-one.
    __m256i m = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
    m = _mm256_sub_epi64(zero, m);
    __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(weights.data() + i));
    acc = _mm256_add_epi64(acc, _mm256_and_si256(w, m));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    if (mask[i]) sum += weights[i];
  }
  return sum;
}

std::uint64_t scaled_abs_diff_sum_avx2(std::span<const std::uint64_t> a, std::uint64_t scale_a,
                                       std::span<const std::uint64_t> b, std::uint64_t scale_b) {
  const std::size_t n = a.size();
  const __m256i sa = _mm256_set1_epi64x(static_cast<long long>(scale_a));
  const __m256i sb = _mm256_set1_epi64x(static_cast<long long>(scale_b));
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    // 32x32 -> 64 products; inputs are < 2^32 and products < 2^63, so the
    // signed 64-bit compare orders them correctly.
    __m256i x = _mm256_mul_epu32(va, sa);
    __m256i y = _mm256_mul_epu32(vb, sb);
    __m256i diff = _mm256_sub_epi64(x, y);
    __m256i neg = _mm256_cmpgt_epi64(y, x);
    __m256i absdiff = _mm256_sub_epi64(_mm256_xor_si256(diff, neg), neg);
    acc = _mm256_add_epi64(acc, absdiff);
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    std::uint64_t x = a[i] * scale_a;
    std::uint64_t y = b[i] * scale_b;
    sum += x > y ? x - y : y - x;
  }
  return sum;
}

}  // namespace mlspec::kernels::detail
