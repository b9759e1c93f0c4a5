#include "adjtrace/image_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace adjtrace {

static_assert(std::endian::native == std::endian::little,
              "PFM output assumes a little-endian host");

namespace {

Bytes header(const std::string &text) { return Bytes(text.begin(), text.end()); }

Bytes ppm_from_levels(int w, int h, const std::vector<std::uint8_t> &levels) {
    Bytes out = header("P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n");
    out.reserve(out.size() + levels.size() * 3);
    for (std::uint8_t v : levels)
        out.insert(out.end(), {v, v, v});
    return out;
}

}  // namespace

Bytes write_pfm(const ScalarImage &image) {
    Bytes out = header("Pf\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                       "\n-1.0\n");
    out.reserve(out.size() + 4 * image.size());
    for (int y = image.height - 1; y >= 0; --y) {
        for (int x = 0; x < image.width; ++x) {
            const auto f = static_cast<float>(image.at(x, y));
            std::uint8_t b[4];
            std::memcpy(b, &f, 4);
            out.insert(out.end(), b, b + 4);
        }
    }
    return out;
}

ScalarImage read_pfm(const Bytes &bytes) {
    // Header is three whitespace-terminated lines.
    std::size_t pos = 0;
    auto next_line = [&]() {
        const auto start = pos;
        while (pos < bytes.size() && bytes[pos] != '\n')
            ++pos;
        if (pos >= bytes.size())
            throw std::runtime_error("read_pfm: truncated header");
        std::string line(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                         bytes.begin() + static_cast<std::ptrdiff_t>(pos));
        ++pos;
        return line;
    };
    if (next_line() != "Pf")
        throw std::runtime_error("read_pfm: not a grayscale PFM (expected 'Pf')");
    std::istringstream dims(next_line());
    int w = 0, h = 0;
    if (!(dims >> w >> h) || w < 1 || h < 1)
        throw std::runtime_error("read_pfm: bad dimensions");
    const double scale = std::stod(next_line());
    if (scale >= 0)
        throw std::runtime_error("read_pfm: big-endian PFM is not supported");
    const std::size_t need = static_cast<std::size_t>(w) * h * 4;
    if (bytes.size() - pos != need)
        throw std::runtime_error("read_pfm: expected " + std::to_string(need) + " data bytes, got " +
                                 std::to_string(bytes.size() - pos));
    ScalarImage img(w, h);
    for (int y = h - 1; y >= 0; --y) {
        for (int x = 0; x < w; ++x) {
            float f;
            std::memcpy(&f, bytes.data() + pos, 4);
            pos += 4;
            img.at(x, y) = f;
        }
    }
    return img;
}

Bytes write_ppm_preview(const ScalarImage &image, double gamma) {
    if (!(gamma > 0))
        throw std::invalid_argument("write_ppm_preview: gamma must be positive");
    std::vector<std::uint8_t> levels(image.size());
    std::transform(image.data.begin(), image.data.end(), levels.begin(), [gamma](double v) {
        const double c = std::clamp(v, 0.0, 1.0);
        return static_cast<std::uint8_t>(std::lround(255 * std::pow(c, 1 / gamma)));
    });
    return ppm_from_levels(image.width, image.height, levels);
}

Bytes gradient_preview(const ScalarImage &grad_image) {
    double m = 1e-30;
    for (double v : grad_image.data)
        m = std::max(m, std::abs(v));
    std::vector<std::uint8_t> levels(grad_image.size());
    std::transform(grad_image.data.begin(), grad_image.data.end(), levels.begin(), [m](double v) {
        const double level = std::clamp(255 * (0.5 + 0.5 * v / m), 0.0, 255.0);
        return static_cast<std::uint8_t>(std::lround(level));
    });
    return ppm_from_levels(grad_image.width, grad_image.height, levels);
}

void write_file(const std::filesystem::path &path, const Bytes &bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

Bytes read_file(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    return Bytes(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace adjtrace
