#include <atomic>
#include <cstdlib>
#include <string_view>

#include "botrf/kernels.hpp"

namespace botrf::kernels {
namespace {

Isa detect() noexcept {
  if (const char* env = std::getenv("BOTRF_SIMD"); env != nullptr && std::string_view(env) == "scalar") {
    return Isa::Scalar;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& selected() noexcept {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

const detail::KernelTable& table() noexcept { return detail::table_for(selected().load(std::memory_order_relaxed)); }

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(BOTRF_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept { return selected().load(std::memory_order_relaxed); }

Isa force_isa(Isa isa) noexcept {
  const Isa chosen = isa_available(isa) ? isa : Isa::Scalar;
  selected().store(chosen, std::memory_order_relaxed);
  return chosen;
}

namespace detail {
const KernelTable& table_for(Isa isa) noexcept {
#if defined(BOTRF_HAVE_AVX2_TU)
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return kAvx2Table;
#endif
  (void)isa;
  return kScalarTable;
}
}  // namespace detail

void profile_geometry(const ProfileGeometryInput& in, const ProfileGeometryOutput& out) {
  table().profile_geometry(in, out);
}

void knife_edge_scan(const EdgeScanInput& in, std::span<double> nu_out) { table().knife_edge_scan(in, nu_out); }

ArgExtreme arg_min(std::span<const double> values, std::size_t first, std::size_t last) {
  return table().arg_min(values, first, last);
}

ArgExtreme arg_max(std::span<const double> values, std::size_t first, std::size_t last) {
  return table().arg_max(values, first, last);
}

void decode_be16(std::span<const std::uint8_t> bytes, std::span<std::int16_t> out) {
  table().decode_be16(bytes, out);
}

}  // namespace botrf::kernels
