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
#ifndef RNNACCEL_CODEC_HPP_
#define RNNACCEL_CODEC_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace rnnaccel::codec {

// Fixed-ratio weight compression: a per-tensor codebook of 2^b entries and a
// bit-packed index stream, b in {2, 4, 6} (nominal 16x / 8x / 5.33x against
// float32 storage). The decoder is a table lookup, so decompression streams
// at MAC-array rate with constant memory.

inline constexpr std::uint32_t kBlobMagic = 0x504D434Eu;  // "NCMP" little-endian

// Wire format (all little-endian):
//   magic u32, b u8, entry_width u8, e_w i8, n u32          -- 11-byte header
//   codebook: 2^b entries, int8 (entry_width 8) or int16 LE (entry_width 16)
//   payload:  ceil(n*b/8) bytes, LSB-first packed indices in row-major
//             weight order (bit k*b of the stream = LSB of index k)
struct Blob {
  std::uint8_t bits_per_index = 4;  // 2, 4 or 6
  std::uint8_t entry_width = 8;     // codebook lane: 8 or 16
  std::int8_t e_w = 0;              // real weight = entry * 2^e_w
  std::uint32_t n = 0;              // weight count
  std::vector<std::int32_t> codebook;
  std::vector<std::uint8_t> payload;

  std::size_t header_bytes() const { return 11; }
  std::size_t codebook_bytes() const { return codebook.size() * (entry_width / 8); }
  std::size_t byte_size() const { return header_bytes() + codebook_bytes() + payload.size(); }

  std::vector<std::uint8_t> to_bytes() const;
  // Full validation; throws Errc::{bad_magic,corrupt_blob,truncated}.
  static Blob from_bytes(std::span<const std::uint8_t> bytes);
};

// LSB-first bit packing of b-bit indices.
std::vector<std::uint8_t> pack_indices(std::span<const std::uint32_t> indices, int b);
std::vector<std::uint32_t> unpack_indices(std::span<const std::uint8_t> payload, int b,
                                          std::size_t n);

// Deterministic 1-D k-means: centroids initialized at the uniform levels
// spanning [min, max], Lloyd iterations to assignment fixpoint (cap 100),
// ties assign to the lower index. Empty clusters are reseeded to the
// worst-represented value, so inputs with <= 2^b distinct values are always
// recovered exactly.
struct KmeansResult {
  std::vector<double> centroids;
  std::vector<std::uint32_t> assignment;
  std::vector<double> mse_trace;  // after each iteration; non-increasing
};
KmeansResult kmeans_1d(std::span<const double> values, int k);

// Offline encoder. entry_width must match the MAC weight lane (8 or 16) so
// decompressed entries feed the array with no further rounding.
Blob compress(std::span<const double> weights, int bits_per_index, int entry_width);

// Full decode (integer entries at scale 2^e_w).
std::vector<std::int32_t> decompress(const Blob& blob);

// Constant-memory streaming decode, one weight per call.
class StreamDecoder {
 public:
  explicit StreamDecoder(const Blob& blob) : blob_(blob) {}
  bool done() const { return pos_ >= blob_.n; }
  std::int32_t next();

 private:
  const Blob& blob_;
  std::uint64_t pos_ = 0;
};

// Baselines for comparison reports.
std::vector<double> quantize_uniform(std::span<const double> weights, int bits);
std::vector<double> prune_magnitude(std::span<const double> weights, double sparsity);

double mse(std::span<const double> a, std::span<const double> b);

struct RatioReport {
  double nominal_ratio = 1.0;  // 32 / b
  double actual_ratio = 1.0;   // 4n / blob bytes
  std::uint64_t original_bytes = 0;
  std::uint64_t compressed_bytes = 0;
};
RatioReport ratio_report(const Blob& blob);

}  // namespace rnnaccel::codec

#endif  // RNNACCEL_CODEC_HPP_
