#pragma once

#include "adjtrace/image.h"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace adjtrace {

using Bytes = std::vector<std::uint8_t>;

/// Grayscale PFM: "Pf\n<w> <h>\n-1.0\n", little-endian float32, bottom row first.
Bytes write_pfm(const ScalarImage &image);
ScalarImage read_pfm(const Bytes &bytes);

/// Binary P6 preview; each value maps to round(255 * clamp(v, 0, 1)^(1/gamma)) on R=G=B.
Bytes write_ppm_preview(const ScalarImage &image, double gamma = 2.2);

/// Signed preview: 0 is mid-gray, +max|v| is white, -max|v| is black.
Bytes gradient_preview(const ScalarImage &grad_image);

void write_file(const std::filesystem::path &path, const Bytes &bytes);
Bytes read_file(const std::filesystem::path &path);

}  // namespace adjtrace
