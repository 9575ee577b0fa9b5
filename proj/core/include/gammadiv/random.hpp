// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Counter-based Philox4x32-10 generator. A stream is fixed by a 64-bit key;
// block k of the stream depends only on (key, k), so any sample can be
// regenerated without replaying the stream.

#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace gammadiv {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Ten rounds of Philox4x32 on `counter` under `key`.
PhiloxBlock philox4x32(PhiloxBlock counter, PhiloxKey key);

// Two standard normals for (seed, stream, index): one Philox block gives two
// 53-bit uniforms, turned into normals by Box-Muller.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream);
  std::pair<double, double> pair(std::uint64_t index) const;

 private:
  PhiloxKey key_{};
  std::uint32_t stream_lo_ = 0;
  std::uint32_t stream_hi_ = 0;
};

}  // namespace gammadiv
