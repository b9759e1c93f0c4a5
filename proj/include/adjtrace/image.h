#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace adjtrace {

/// Single-channel float raster, row-major with the top row first.
struct ScalarImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ScalarImage() = default;
    ScalarImage(int w, int h, double fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w < 1 || h < 1)
            throw std::invalid_argument("image resolution must be at least 1x1");
    }

    double &at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return data.size(); }

    bool operator==(const ScalarImage &) const = default;
};

}  // namespace adjtrace
