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

#include "padfair/fairswap.hpp"

#include <algorithm>
#include <cstring>

#include "padfair/error.hpp"

namespace padfair {

namespace {

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must lie in [0, 1]");
  }
}

/// Donor indices of the requested class, preferring other groups.
std::vector<std::size_t> eligible_donors(const SwapSample& sample, const CandidatePool& pool, PadLabel wanted,
                                         bool cross_group) {
  std::vector<std::size_t> same_class, other_group;
  const auto& entries = pool.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.sample_id == sample.sample_id || e.label != wanted) continue;
    same_class.push_back(i);
    if (e.group != sample.group) other_group.push_back(i);
  }
  if (cross_group && !other_group.empty()) return other_group;
  return same_class;
}

}  // namespace

RasterImage::RasterImage(int width, int height)
    : RasterImage(width, height,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                            static_cast<std::size_t>(std::max(height, 0)) * kChannels)) {}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::kDimensionMismatch, "image dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * kChannels) {
    throw Error(ErrorCode::kDimensionMismatch, "pixel buffer length does not match " + dims(width, height) + "x3");
  }
}

RasterImage RasterImage::filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RasterImage img(width, height);
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); i += kChannels) {
    px[i] = r;
    px[i + 1] = g;
    px[i + 2] = b;
  }
  return img;
}

PixelMap::PixelMap(int resolution, double fill)
    : PixelMap(resolution, std::vector<double>(static_cast<std::size_t>(std::max(resolution, 0)) *
                                                   static_cast<std::size_t>(std::max(resolution, 0)),
                                               fill)) {}

PixelMap::PixelMap(int resolution, std::vector<double> values) : resolution_(resolution), values_(std::move(values)) {
  if (resolution <= 0) throw Error(ErrorCode::kGeometry, "pixel map resolution must be positive");
  if (values_.size() != static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution)) {
    throw Error(ErrorCode::kGeometry, "pixel map needs resolution^2 values");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "pixel map values must lie in [0, 1]");
  }
}

PixelMap PixelMap::constant_for(PadLabel label, int resolution) {
  return PixelMap(resolution, label == PadLabel::kBonaFide ? kBonaFideValue : kAttackValue);
}

void FairSwapParams::validate(int image_width, int image_height) const {
  check_probability(p1, "p1");
  check_probability(p2, "p2");
  check_probability(p3, "p3");
  check_probability(p4, "p4");
  if (patch_size <= 0 || alt_patch_size <= 0) throw Error(ErrorCode::kInvalidArgument, "patch sizes must be positive");
  if (map_resolution <= 0) throw Error(ErrorCode::kInvalidArgument, "map resolution must be positive");
  const int side = std::min(image_width, image_height);
  if (patch_size > side || alt_patch_size > side) {
    throw Error(ErrorCode::kOutOfBounds, "patch size " + std::to_string(std::max(patch_size, alt_patch_size)) +
                                             " exceeds image " + dims(image_width, image_height));
  }
}

CandidatePool::CandidatePool(std::vector<Entry> entries, Loader loader)
    : entries_(std::move(entries)), loader_(std::move(loader)) {}

CandidatePool CandidatePool::from_samples(std::span<const SwapSample> samples) {
  std::vector<Entry> entries;
  entries.reserve(samples.size());
  for (const auto& s : samples) entries.push_back({s.sample_id, s.label, s.group});
  return CandidatePool(std::move(entries), [samples](std::size_t i) { return samples[i]; });
}

RasterImage swap_patch(const RasterImage& dst, const RasterImage& src, const SwapRegion& region) {
  if (dst.width() != src.width() || dst.height() != src.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot swap between " + dims(dst.width(), dst.height()) + " and " + dims(src.width(), src.height()));
  }
  if (region.size <= 0 || region.top < 0 || region.left < 0 || region.top + region.size > dst.height() ||
      region.left + region.size > dst.width()) {
    throw Error(ErrorCode::kOutOfBounds, "region (" + std::to_string(region.top) + ", " + std::to_string(region.left) +
                                             ", " + std::to_string(region.size) + ") outside " +
                                             dims(dst.width(), dst.height()) + " image");
  }
  RasterImage out = dst;
  const auto row_bytes = static_cast<std::size_t>(region.size) * RasterImage::kChannels;
  const auto stride = static_cast<std::size_t>(dst.width()) * RasterImage::kChannels;
  for (int r = region.top; r < region.top + region.size; ++r) {
    const auto off = static_cast<std::size_t>(r) * stride + static_cast<std::size_t>(region.left) * RasterImage::kChannels;
    std::memcpy(out.pixels().data() + off, src.pixels().data() + off, row_bytes);
  }
  return out;
}

PixelMap update_pixel_map(const PixelMap& map, const SwapRegion& region, const PixelMap& donor, int image_width,
                          int image_height) {
  const int m = map.resolution();
  if (donor.resolution() != m) {
    throw Error(ErrorCode::kGeometry, "donor map resolution " + std::to_string(donor.resolution()) +
                                          " differs from " + std::to_string(m));
  }
  if (image_width <= 0 || image_height <= 0 || image_width % m != 0 || image_height % m != 0) {
    throw Error(ErrorCode::kGeometry,
                "image " + dims(image_width, image_height) + " does not tile into " + std::to_string(m) + "x" +
                    std::to_string(m) + " cells");
  }
  const long cell_w = image_width / m;
  const long cell_h = image_height / m;
  const long cell_area = cell_w * cell_h;
  const long r0 = region.top, r1 = region.top + region.size;
  const long c0 = region.left, c1 = region.left + region.size;

  PixelMap out = map;
  for (int row = 0; row < m; ++row) {
    const long oy = std::max(0L, std::min(r1, (row + 1) * cell_h) - std::max(r0, row * cell_h));
    if (oy == 0) continue;
    for (int col = 0; col < m; ++col) {
      const long ox = std::max(0L, std::min(c1, (col + 1) * cell_w) - std::max(c0, col * cell_w));
      if (2 * ox * oy >= cell_area) out.set(row, col, donor.at(row, col));
    }
  }
  return out;
}

PadLabel update_binary_label(PadLabel original, PadLabel /*donor*/, bool /*applied*/) {
  // Attack inputs stay attack. Bona fide inputs only ever receive bona fide
  // donors, so they never gain an attack region.
  return original;
}

AugmentedSample fairswap_augment(const SwapSample& sample, const CandidatePool& pool, const FairSwapParams& params,
                                 Rng& rng) {
  const int w = sample.image.width();
  const int h = sample.image.height();
  params.validate(w, h);

  AugmentedSample out;
  out.image = sample.image;
  out.binary_label = sample.label;
  out.pixel_map = sample.pixel_map;

  const bool is_attack = sample.label == PadLabel::kAttack;
  if (!rng.bernoulli(is_attack ? params.p2 : params.p1)) return out;

  PadLabel donor_class = PadLabel::kBonaFide;
  if (is_attack && rng.bernoulli(params.p3)) donor_class = PadLabel::kAttack;

  const auto eligible = eligible_donors(sample, pool, donor_class, params.cross_group);
  if (eligible.empty()) {
    throw Error(ErrorCode::kEmptyPool, "no " + std::string(to_string(donor_class)) + " donor available for '" +
                                           sample.sample_id + "'");
  }
  const std::size_t donor_index = eligible[rng.index(eligible.size())];
  const SwapSample donor = pool.load(donor_index);
  if (donor.image.width() != w || donor.image.height() != h) {
    throw Error(ErrorCode::kDimensionMismatch, "donor '" + donor.sample_id + "' is " +
                                                   dims(donor.image.width(), donor.image.height()) + ", expected " +
                                                   dims(w, h));
  }

  int size = params.patch_size;
  if (is_attack && donor_class == PadLabel::kBonaFide && !rng.bernoulli(params.p4)) size = params.alt_patch_size;

  SwapRegion region;
  region.size = size;
  region.top = static_cast<int>(rng.index(static_cast<std::size_t>(h - size + 1)));
  region.left = static_cast<int>(rng.index(static_cast<std::size_t>(w - size + 1)));

  out.image = swap_patch(sample.image, donor.image, region);
  out.binary_label = update_binary_label(sample.label, donor.label, true);
  if (sample.pixel_map) {
    const int m = sample.pixel_map->resolution();
    const PixelMap donor_map = donor.pixel_map ? *donor.pixel_map : PixelMap::constant_for(donor.label, m);
    out.pixel_map = update_pixel_map(*sample.pixel_map, region, donor_map, w, h);
  }
  out.applied = true;
  out.region = region;
  out.donor_id = donor.sample_id;
  out.donor_label = donor.label;
  return out;
}

}  // namespace padfair
