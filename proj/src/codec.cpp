/* Copyright 2026 RNNAccel SDK Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "rnnaccel/codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rnnaccel/errors.hpp"
#include "rnnaccel/fxp.hpp"

namespace rnnaccel::codec {
namespace {

void check_b(int b) {
  if (b != 2 && b != 4 && b != 6)
    raise(Errc::bad_argument, "bits_per_index must be 2, 4 or 6");
}

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

}  // namespace

std::vector<std::uint8_t> pack_indices(std::span<const std::uint32_t> indices, int b) {
  check_b(b);
  std::vector<std::uint8_t> out((indices.size() * b + 7) / 8, 0);
  std::size_t bit = 0;
  for (std::uint32_t idx : indices) {
    for (int k = 0; k < b; ++k, ++bit) {
      if ((idx >> k) & 1u) out[bit >> 3] |= static_cast<std::uint8_t>(1u << (bit & 7));
    }
  }
  return out;
}

std::vector<std::uint32_t> unpack_indices(std::span<const std::uint8_t> payload, int b,
                                          std::size_t n) {
  check_b(b);
  if (payload.size() < (n * b + 7) / 8)
    raise(Errc::truncated, "index payload shorter than count requires");
  std::vector<std::uint32_t> out(n, 0);
  std::size_t bit = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t v = 0;
    for (int k = 0; k < b; ++k, ++bit) {
      v |= static_cast<std::uint32_t>((payload[bit >> 3] >> (bit & 7)) & 1u) << k;
    }
    out[i] = v;
  }
  return out;
}

KmeansResult kmeans_1d(std::span<const double> values, int k) {
  if (values.empty()) raise(Errc::bad_argument, "kmeans_1d: empty input");
  for (double v : values)
    if (!std::isfinite(v)) raise(Errc::non_finite, "kmeans_1d: non-finite value");

  KmeansResult r;
  r.centroids.resize(k);
  r.assignment.assign(values.size(), 0);

  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn_it, hi = *mx_it;
  for (int j = 0; j < k; ++j)
    r.centroids[j] = (k == 1) ? lo : lo + (hi - lo) * j / (k - 1);

  auto assign_pass = [&](bool* changed) {
    double sse = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      int best = 0;
      double best_d = std::fabs(values[i] - r.centroids[0]);
      for (int j = 1; j < k; ++j) {
        const double d = std::fabs(values[i] - r.centroids[j]);
        if (d < best_d) {  // ties keep the lower index
          best_d = d;
          best = j;
        }
      }
      if (r.assignment[i] != static_cast<std::uint32_t>(best)) {
        r.assignment[i] = static_cast<std::uint32_t>(best);
        *changed = true;
      }
      sse += best_d * best_d;
    }
    return sse / static_cast<double>(values.size());
  };

  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    const double mse_after_assign = assign_pass(&changed);
    r.mse_trace.push_back(mse_after_assign);
    if (!changed && iter > 0) break;
    // Centroid update: mean of each cluster. Empty clusters are reseeded to
    // the currently worst-represented value (farthest from its centroid,
    // ties to the lowest index); a stalled empty centroid would otherwise
    // leave inputs with <= 2^b distinct values imperfectly recovered.
    std::vector<double> sum(k, 0.0);
    std::vector<std::uint64_t> cnt(k, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      sum[r.assignment[i]] += values[i];
      ++cnt[r.assignment[i]];
    }
    for (int j = 0; j < k; ++j)
      if (cnt[j] > 0) r.centroids[j] = sum[j] / static_cast<double>(cnt[j]);
    std::vector<double> dist(values.size());
    bool dist_ready = false;
    for (int j = 0; j < k; ++j) {
      if (cnt[j] > 0) continue;
      if (!dist_ready) {
        for (std::size_t i = 0; i < values.size(); ++i)
          dist[i] = std::fabs(values[i] - r.centroids[r.assignment[i]]);
        dist_ready = true;
      }
      std::size_t far = 0;
      for (std::size_t i = 1; i < values.size(); ++i)
        if (dist[i] > dist[far]) far = i;
      if (dist[far] <= 0.0) break;  // nothing left to improve
      r.centroids[j] = values[far];
      dist[far] = 0.0;
    }
  }
  return r;
}

Blob compress(std::span<const double> weights, int bits_per_index, int entry_width) {
  check_b(bits_per_index);
  if (entry_width != 8 && entry_width != 16)
    raise(Errc::bad_argument, "entry_width must be 8 or 16");
  if (weights.empty()) raise(Errc::bad_argument, "compress: empty input");

  const int k = 1 << bits_per_index;
  KmeansResult km = kmeans_1d(weights, k);

  const int e_w = fxp::choose_exponent(km.centroids, entry_width);
  if (e_w < -128 || e_w > 127)
    raise(Errc::exponent_range, "codebook exponent outside int8");

  Blob blob;
  blob.bits_per_index = static_cast<std::uint8_t>(bits_per_index);
  blob.entry_width = static_cast<std::uint8_t>(entry_width);
  blob.e_w = static_cast<std::int8_t>(e_w);
  blob.n = static_cast<std::uint32_t>(weights.size());
  blob.codebook.resize(k);
  std::vector<double> levels(k);
  for (int j = 0; j < k; ++j) {
    blob.codebook[j] = static_cast<std::int32_t>(
        fxp::round_half_even(std::ldexp(km.centroids[j], -e_w)));
    levels[j] = std::ldexp(static_cast<double>(blob.codebook[j]), e_w);
  }

  // Re-map against the quantized levels so the stream addresses what the
  // decoder will actually produce; ties go to the lower index.
  std::vector<std::uint32_t> indices(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    int best = 0;
    double best_d = std::fabs(weights[i] - levels[0]);
    for (int j = 1; j < k; ++j) {
      const double d = std::fabs(weights[i] - levels[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    indices[i] = static_cast<std::uint32_t>(best);
  }
  blob.payload = pack_indices(indices, bits_per_index);
  return blob;
}

std::vector<std::uint8_t> Blob::to_bytes() const {
  std::vector<std::uint8_t> out;
  out.reserve(byte_size());
  push_u32(out, kBlobMagic);
  out.push_back(bits_per_index);
  out.push_back(entry_width);
  out.push_back(static_cast<std::uint8_t>(e_w));
  push_u32(out, n);
  for (std::int32_t c : codebook) {
    out.push_back(static_cast<std::uint8_t>(c & 0xFF));
    if (entry_width == 16) out.push_back(static_cast<std::uint8_t>((c >> 8) & 0xFF));
  }
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Blob Blob::from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 11) raise(Errc::truncated, "blob shorter than header");
  if (read_u32(bytes, 0) != kBlobMagic) raise(Errc::bad_magic, "blob magic mismatch");
  Blob blob;
  blob.bits_per_index = bytes[4];
  blob.entry_width = bytes[5];
  blob.e_w = static_cast<std::int8_t>(bytes[6]);
  blob.n = read_u32(bytes, 7);
  if (blob.bits_per_index != 2 && blob.bits_per_index != 4 && blob.bits_per_index != 6)
    raise(Errc::corrupt_blob, "bits_per_index not in {2,4,6}");
  if (blob.entry_width != 8 && blob.entry_width != 16)
    raise(Errc::corrupt_blob, "entry_width not in {8,16}");
  if (blob.n == 0) raise(Errc::corrupt_blob, "empty weight count");

  const std::size_t k = std::size_t{1} << blob.bits_per_index;
  const std::size_t cb_bytes = k * (blob.entry_width / 8);
  const std::size_t pl_bytes =
      (static_cast<std::size_t>(blob.n) * blob.bits_per_index + 7) / 8;
  if (bytes.size() != 11 + cb_bytes + pl_bytes)
    raise(Errc::truncated, "blob size != header + codebook + payload (" +
                               std::to_string(bytes.size()) + " vs " +
                               std::to_string(11 + cb_bytes + pl_bytes) + ")");

  blob.codebook.resize(k);
  std::size_t at = 11;
  for (std::size_t j = 0; j < k; ++j) {
    if (blob.entry_width == 8) {
      blob.codebook[j] = static_cast<std::int8_t>(bytes[at]);
      at += 1;
    } else {
      blob.codebook[j] = static_cast<std::int16_t>(
          static_cast<std::uint16_t>(bytes[at]) |
          (static_cast<std::uint16_t>(bytes[at + 1]) << 8));
      at += 2;
    }
  }
  blob.payload.assign(bytes.begin() + at, bytes.end());
  return blob;
}

std::int32_t StreamDecoder::next() {
  if (done()) raise(Errc::out_of_bounds, "stream decoder exhausted");
  const int b = blob_.bits_per_index;
  std::uint64_t bit = pos_ * b;
  std::uint32_t idx = 0;
  for (int k = 0; k < b; ++k, ++bit)
    idx |= static_cast<std::uint32_t>((blob_.payload[bit >> 3] >> (bit & 7)) & 1u) << k;
  ++pos_;
  return blob_.codebook[idx];
}

std::vector<std::int32_t> decompress(const Blob& blob) {
  const std::size_t need = (static_cast<std::size_t>(blob.n) * blob.bits_per_index + 7) / 8;
  if (blob.payload.size() < need) raise(Errc::truncated, "blob payload truncated");
  if (blob.codebook.size() != (std::size_t{1} << blob.bits_per_index))
    raise(Errc::corrupt_blob, "codebook size != 2^b");
  std::vector<std::int32_t> out;
  out.reserve(blob.n);
  StreamDecoder dec(blob);
  while (!dec.done()) out.push_back(dec.next());
  return out;
}

std::vector<double> quantize_uniform(std::span<const double> weights, int bits) {
  if (bits != 2 && bits != 4 && bits != 6 && bits != 8)
    raise(Errc::bad_argument, "quantize_uniform bits must be in {2,4,6,8}");
  double m = 0.0;
  for (double v : weights) {
    if (!std::isfinite(v)) raise(Errc::non_finite, "quantize_uniform: non-finite value");
    m = std::max(m, std::fabs(v));
  }
  std::vector<double> out(weights.size(), 0.0);
  if (m == 0.0) return out;
  const int levels = 1 << bits;
  const double step = 2.0 * m / (levels - 1);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double j = fxp::round_half_even((weights[i] + m) / step);
    j = std::clamp(j, 0.0, static_cast<double>(levels - 1));
    out[i] = -m + j * step;
  }
  return out;
}

std::vector<double> prune_magnitude(std::span<const double> weights, double sparsity) {
  if (!(sparsity >= 0.0 && sparsity < 1.0))
    raise(Errc::bad_argument, "sparsity must be in [0, 1)");
  const std::size_t n_zero =
      static_cast<std::size_t>(sparsity * static_cast<double>(weights.size()));
  std::vector<std::size_t> order(weights.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(weights[a]) < std::fabs(weights[b]);
  });
  std::vector<double> out(weights.begin(), weights.end());
  for (std::size_t i = 0; i < n_zero; ++i) out[order[i]] = 0.0;
  return out;
}

double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) raise(Errc::bad_argument, "mse: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

RatioReport ratio_report(const Blob& blob) {
  RatioReport r;
  r.nominal_ratio = 32.0 / blob.bits_per_index;
  r.original_bytes = 4ull * blob.n;
  r.compressed_bytes = blob.byte_size();
  r.actual_ratio =
      static_cast<double>(r.original_bytes) / static_cast<double>(r.compressed_bytes);
  return r;
}

}  // namespace rnnaccel::codec
