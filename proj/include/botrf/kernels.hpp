#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference and, on
// x86-64, an AVX2 variant picked at runtime. The variants are compiled
// without FP contraction and evaluate the same operations in the same order.
namespace botrf::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

// True when the CPU and the build both support the variant.
bool isa_available(Isa isa) noexcept;

// Best available ISA, unless BOTRF_SIMD=scalar is set in the environment.
Isa active_isa() noexcept;

// Overrides the runtime choice (tests, benchmarks). Falls back to Scalar
// when the requested ISA is unavailable. Returns the ISA actually selected.
Isa force_isa(Isa isa) noexcept;

struct ProfileGeometryInput {
  std::span<const double> distance_km;
  std::span<const double> terrain_m;
  double total_km = 0.0;
  double k_factor = 4.0 / 3.0;
  double wavelength_m = 0.0;
  double los_start_m = 0.0;  // tx ground + tx antenna
  double los_end_m = 0.0;    // rx ground + rx antenna
};

struct ProfileGeometryOutput {
  std::span<double> bulge_m;
  std::span<double> los_m;
  std::span<double> fresnel1_m;
  std::span<double> clearance_fraction;
};

// Per sample at distance d (km) from tx, with D1 = 1000 d, D2 = 1000 (total - d):
//   bulge     = d * (total - d) * 1000 / (2 k R)
//   los       = los_start + (los_end - los_start) * (d / total)
//   fresnel1  = sqrt((D1 * D2) * (lambda / (D1 + D2)))
//   clearance = (los - terrain - bulge) / fresnel1
// Endpoint clearance comes out non-finite; callers replace it.
void profile_geometry(const ProfileGeometryInput& in, const ProfileGeometryOutput& out);

struct EdgeScanInput {
  std::span<const double> distance_km;  // sub-path samples, ends included
  std::span<const double> height_m;     // terrain + full-path bulge
  double start_height_m = 0.0;          // ray height at the first sample
  double end_height_m = 0.0;            // ray height at the last sample
  double wavelength_m = 0.0;
};

// Knife-edge parameter of every sample against the straight ray between the
// sub-path ends: nu = h * sqrt(2 (D1 + D2) / (lambda D1 D2)), h = height - ray.
// nu_out[0] and nu_out[n-1] are set to -infinity.
void knife_edge_scan(const EdgeScanInput& in, std::span<double> nu_out);

struct ArgExtreme {
  double value = 0.0;
  std::size_t index = 0;
};

// Minimum / maximum over values[first, last), first occurrence wins ties.
// Requires first < last <= values.size().
ArgExtreme arg_min(std::span<const double> values, std::size_t first, std::size_t last);
ArgExtreme arg_max(std::span<const double> values, std::size_t first, std::size_t last);

// Big-endian signed 16-bit samples to host order. bytes.size() == 2 * out.size().
void decode_be16(std::span<const std::uint8_t> bytes, std::span<std::int16_t> out);

namespace detail {

struct KernelTable {
  void (*profile_geometry)(const ProfileGeometryInput&, const ProfileGeometryOutput&);
  void (*knife_edge_scan)(const EdgeScanInput&, std::span<double>);
  ArgExtreme (*arg_min)(std::span<const double>, std::size_t, std::size_t);
  ArgExtreme (*arg_max)(std::span<const double>, std::size_t, std::size_t);
  void (*decode_be16)(std::span<const std::uint8_t>, std::span<std::int16_t>);
};

extern const KernelTable kScalarTable;
#if defined(BOTRF_HAVE_AVX2_TU)
extern const KernelTable kAvx2Table;
#endif

// Table for a given ISA, for equivalence tests that compare variants directly.
const KernelTable& table_for(Isa isa) noexcept;

}  // namespace detail
}  // namespace botrf::kernels
