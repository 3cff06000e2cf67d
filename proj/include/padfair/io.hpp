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

#include <filesystem>
#include <string>
#include <string_view>

#include "padfair/fairswap.hpp"

namespace padfair {

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place, so readers
/// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Decodes any 8/16-bit PNG to RGB8 (alpha dropped, gray expanded).
RasterImage load_png(const std::filesystem::path& path);

/// Encodes RGB8 PNG. Output bytes depend only on the pixels.
std::string encode_png(const RasterImage& image);
void save_png(const std::filesystem::path& path, const RasterImage& image);

/// Pixel map as M lines of M comma-separated values.
std::string serialize_pixel_map_csv(const PixelMap& map);
PixelMap parse_pixel_map_csv(std::string_view text);

/// Pixel map as an M x M 8-bit grayscale PNG (value * 255, rounded).
std::string encode_pixel_map_png(const PixelMap& map);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace padfair
