/**
 * Copyright 2026 The padfair Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padfair/data_model.hpp"
#include "padfair/random.hpp"

namespace padfair {

/// 8-bit interleaved RGB image, row-major.
class RasterImage {
 public:
  static constexpr int kChannels = 3;

  RasterImage() = default;
  RasterImage(int width, int height);
  RasterImage(int width, int height, std::vector<std::uint8_t> pixels);
  static RasterImage filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  std::span<const std::uint8_t> pixel(int row, int col) const {
    return std::span(pixels_).subspan(offset(row, col), kChannels);
  }

  bool operator==(const RasterImage&) const = default;

 private:
  std::size_t offset(int row, int col) const {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col)) *
           kChannels;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// M x M pixel-wise supervision map. 1 = bona fide, 0 = attack.
class PixelMap {
 public:
  static constexpr double kBonaFideValue = 1.0;
  static constexpr double kAttackValue = 0.0;

  PixelMap() = default;
  PixelMap(int resolution, double fill);
  PixelMap(int resolution, std::vector<double> values);
  static PixelMap constant_for(PadLabel label, int resolution);

  int resolution() const { return resolution_; }
  double at(int row, int col) const { return values_[index(row, col)]; }
  void set(int row, int col, double v) { values_[index(row, col)] = v; }
  std::span<const double> values() const { return values_; }

  bool operator==(const PixelMap&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(col);
  }

  int resolution_ = 0;
  std::vector<double> values_;
};

/// Square region shared by both images of a swap.
struct SwapRegion {
  int top = 0;
  int left = 0;
  int size = 0;

  bool operator==(const SwapRegion&) const = default;
};

struct FairSwapParams {
  double p1 = 0.3;  // apply to a bona fide input
  double p2 = 0.3;  // apply to an attack input
  double p3 = 0.5;  // attack input: donor is an attack image
  double p4 = 0.5;  // attack input, bona fide donor: use patch_size (else alt_patch_size)
  int patch_size = 64;
  int alt_patch_size = 112;
  int map_resolution = 14;
  bool cross_group = true;
  std::uint64_t seed = 0;

  void validate(int image_width, int image_height) const;
};

struct SwapSample {
  std::string sample_id;
  RasterImage image;
  PadLabel label = PadLabel::kBonaFide;
  std::optional<PixelMap> pixel_map;
  std::string group;
};

/// Donor candidates. Metadata is held in memory; images are fetched through
/// the loader only for the donor actually drawn.
class CandidatePool {
 public:
  struct Entry {
    std::string sample_id;
    PadLabel label = PadLabel::kBonaFide;
    std::string group;
  };
  using Loader = std::function<SwapSample(std::size_t)>;

  CandidatePool(std::vector<Entry> entries, Loader loader);
  /// Pool over samples held in memory. `samples` must outlive the pool.
  static CandidatePool from_samples(std::span<const SwapSample> samples);

  const std::vector<Entry>& entries() const { return entries_; }
  SwapSample load(std::size_t index) const { return loader_(index); }

 private:
  std::vector<Entry> entries_;
  Loader loader_;
};

struct AugmentedSample {
  RasterImage image;
  PadLabel binary_label = PadLabel::kBonaFide;
  std::optional<PixelMap> pixel_map;
  bool applied = false;
  std::optional<SwapRegion> region;
  std::optional<std::string> donor_id;
  std::optional<PadLabel> donor_label;
};

/// Returns `dst` with the region copied from `src`.
RasterImage swap_patch(const RasterImage& dst, const RasterImage& src, const SwapRegion& region);

/// Cells whose area is covered at least half by `region` take the donor's
/// value for that cell. Image size must be a multiple of the map resolution.
PixelMap update_pixel_map(const PixelMap& map, const SwapRegion& region, const PixelMap& donor, int image_width,
                          int image_height);

PadLabel update_binary_label(PadLabel original, PadLabel donor, bool applied);

/// One FairSWAP draw for `sample`. Draw order from `rng`: apply decision,
/// donor class (attack inputs), donor index, patch size (attack input with
/// bona fide donor), then region top and left.
AugmentedSample fairswap_augment(const SwapSample& sample, const CandidatePool& pool, const FairSwapParams& params,
                                 Rng& rng);

}  // namespace padfair
