#include <immintrin.h>

#include <cmath>
#include <limits>

#include "botrf/geodesy.hpp"
#include "botrf/kernels.hpp"

namespace botrf::kernels {
namespace {

constexpr std::size_t kLanes = 4;

void profile_geometry_avx2(const ProfileGeometryInput& in, const ProfileGeometryOutput& out) {
  const std::size_t n = in.distance_km.size();
  const double bulge_scale = 1000.0 / (2.0 * in.k_factor * geodesy::kEarthRadiusKm);
  const double inv_total = 1.0 / in.total_km;
  const double los_rise = in.los_end_m - in.los_start_m;
  const double total_m = in.total_km * 1000.0;
  const double lambda_over_total = in.wavelength_m / total_m;

  const __m256d v_total = _mm256_set1_pd(in.total_km);
  const __m256d v_bulge_scale = _mm256_set1_pd(bulge_scale);
  const __m256d v_inv_total = _mm256_set1_pd(inv_total);
  const __m256d v_los_start = _mm256_set1_pd(in.los_start_m);
  const __m256d v_los_rise = _mm256_set1_pd(los_rise);
  const __m256d v_thousand = _mm256_set1_pd(1000.0);
  const __m256d v_lambda_over_total = _mm256_set1_pd(lambda_over_total);

  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_loadu_pd(in.distance_km.data() + i);
    const __m256d terrain = _mm256_loadu_pd(in.terrain_m.data() + i);
    const __m256d rest = _mm256_sub_pd(v_total, d);
    const __m256d bulge = _mm256_mul_pd(_mm256_mul_pd(d, rest), v_bulge_scale);
    const __m256d los = _mm256_add_pd(v_los_start, _mm256_mul_pd(v_los_rise, _mm256_mul_pd(d, v_inv_total)));
    const __m256d d1 = _mm256_mul_pd(d, v_thousand);
    const __m256d d2 = _mm256_mul_pd(rest, v_thousand);
    const __m256d fresnel = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_mul_pd(d1, d2), v_lambda_over_total));
    const __m256d clearance = _mm256_div_pd(_mm256_sub_pd(_mm256_sub_pd(los, terrain), bulge), fresnel);
    _mm256_storeu_pd(out.bulge_m.data() + i, bulge);
    _mm256_storeu_pd(out.los_m.data() + i, los);
    _mm256_storeu_pd(out.fresnel1_m.data() + i, fresnel);
    _mm256_storeu_pd(out.clearance_fraction.data() + i, clearance);
  }
  for (; i < n; ++i) {
    const double d = in.distance_km[i];
    const double rest = in.total_km - d;
    const double bulge = (d * rest) * bulge_scale;
    const double los = in.los_start_m + los_rise * (d * inv_total);
    const double d1 = d * 1000.0;
    const double d2 = rest * 1000.0;
    const double fresnel = std::sqrt((d1 * d2) * lambda_over_total);
    out.bulge_m[i] = bulge;
    out.los_m[i] = los;
    out.fresnel1_m[i] = fresnel;
    out.clearance_fraction[i] = ((los - in.terrain_m[i]) - bulge) / fresnel;
  }
}

void knife_edge_scan_avx2(const EdgeScanInput& in, std::span<double> nu_out) {
  const std::size_t n = in.distance_km.size();
  const double x0 = in.distance_km.front();
  const double span_km = in.distance_km.back() - x0;
  const double rise = in.end_height_m - in.start_height_m;
  const double two_over_lambda = 2.0 / in.wavelength_m;
  const double span_m = span_km * 1000.0;

  const __m256d v_x0 = _mm256_set1_pd(x0);
  const __m256d v_span_km = _mm256_set1_pd(span_km);
  const __m256d v_start = _mm256_set1_pd(in.start_height_m);
  const __m256d v_rise = _mm256_set1_pd(rise);
  const __m256d v_two_over_lambda = _mm256_set1_pd(two_over_lambda);
  const __m256d v_span_m = _mm256_set1_pd(span_m);
  const __m256d v_thousand = _mm256_set1_pd(1000.0);

  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d along = _mm256_sub_pd(_mm256_loadu_pd(in.distance_km.data() + i), v_x0);
    const __m256d ray = _mm256_add_pd(v_start, _mm256_mul_pd(v_rise, _mm256_div_pd(along, v_span_km)));
    const __m256d h = _mm256_sub_pd(_mm256_loadu_pd(in.height_m.data() + i), ray);
    const __m256d d1 = _mm256_mul_pd(along, v_thousand);
    const __m256d d2 = _mm256_sub_pd(v_span_m, d1);
    const __m256d root =
        _mm256_sqrt_pd(_mm256_mul_pd(v_two_over_lambda, _mm256_div_pd(v_span_m, _mm256_mul_pd(d1, d2))));
    _mm256_storeu_pd(nu_out.data() + i, _mm256_mul_pd(h, root));
  }
  for (; i < n; ++i) {
    const double along = in.distance_km[i] - x0;
    const double ray = in.start_height_m + rise * (along / span_km);
    const double h = in.height_m[i] - ray;
    const double d1 = along * 1000.0;
    const double d2 = span_m - d1;
    nu_out[i] = h * std::sqrt(two_over_lambda * (span_m / (d1 * d2)));
  }
  nu_out[0] = -std::numeric_limits<double>::infinity();
  nu_out[n - 1] = -std::numeric_limits<double>::infinity();
}

// Each lane keeps its own first-occurrence extreme; the horizontal reduction
// then prefers the smaller index on equal values, matching the scalar scan.
template <bool kMin>
ArgExtreme arg_extreme_avx2(std::span<const double> v, std::size_t first, std::size_t last) {
  const std::size_t count = last - first;
  if (count < 2 * kLanes) {
    ArgExtreme best{v[first], first};
    for (std::size_t i = first + 1; i < last; ++i) {
      if (kMin ? v[i] < best.value : v[i] > best.value) best = {v[i], i};
    }
    return best;
  }

  __m256d best = _mm256_loadu_pd(v.data() + first);
  __m256d best_idx = _mm256_setr_pd(static_cast<double>(first), static_cast<double>(first + 1),
                                    static_cast<double>(first + 2), static_cast<double>(first + 3));
  __m256d idx = best_idx;
  const __m256d step = _mm256_set1_pd(static_cast<double>(kLanes));

  std::size_t i = first + kLanes;
  for (; i + kLanes <= last; i += kLanes) {
    idx = _mm256_add_pd(idx, step);
    const __m256d x = _mm256_loadu_pd(v.data() + i);
    const __m256d better = kMin ? _mm256_cmp_pd(x, best, _CMP_LT_OQ) : _mm256_cmp_pd(x, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, x, better);
    best_idx = _mm256_blendv_pd(best_idx, idx, better);
  }

  alignas(32) double vals[kLanes];
  alignas(32) double idxs[kLanes];
  _mm256_store_pd(vals, best);
  _mm256_store_pd(idxs, best_idx);
  ArgExtreme result{vals[0], static_cast<std::size_t>(idxs[0])};
  for (std::size_t lane = 1; lane < kLanes; ++lane) {
    const auto lane_idx = static_cast<std::size_t>(idxs[lane]);
    const bool better = kMin ? vals[lane] < result.value : vals[lane] > result.value;
    if (better || (vals[lane] == result.value && lane_idx < result.index)) result = {vals[lane], lane_idx};
  }
  for (; i < last; ++i) {
    if (kMin ? v[i] < result.value : v[i] > result.value) result = {v[i], i};
  }
  return result;
}

ArgExtreme arg_min_avx2(std::span<const double> v, std::size_t first, std::size_t last) {
  return arg_extreme_avx2<true>(v, first, last);
}

ArgExtreme arg_max_avx2(std::span<const double> v, std::size_t first, std::size_t last) {
  return arg_extreme_avx2<false>(v, first, last);
}

void decode_be16_avx2(std::span<const std::uint8_t> bytes, std::span<std::int16_t> out) {
  const std::size_t n = out.size();
  const __m256i swap = _mm256_setr_epi8(1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 13, 12, 15, 14,  //
                                        1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 13, 12, 15, 14);
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m256i raw = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bytes.data() + 2 * i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), _mm256_shuffle_epi8(raw, swap));
  }
  for (; i < n; ++i) {
    const auto hi = static_cast<std::uint16_t>(bytes[2 * i]);
    const auto lo = static_cast<std::uint16_t>(bytes[2 * i + 1]);
    out[i] = static_cast<std::int16_t>(static_cast<std::uint16_t>((hi << 8) | lo));
  }
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{
    profile_geometry_avx2, knife_edge_scan_avx2, arg_min_avx2, arg_max_avx2, decode_be16_avx2,
};
}  // namespace detail

}  // namespace botrf::kernels
