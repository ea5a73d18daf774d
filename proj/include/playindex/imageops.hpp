#pragma once

// Pixel operations for OCR preprocessing and training-image augmentation,
// plus binary PPM/PGM I/O.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "playindex/core_model.hpp"

namespace playindex {

/// BT.601 luma, rounded half up in integer arithmetic. 1-channel input passes through.
inline PixelImage to_grayscale(const PixelImage& img) {
  if (img.channels() == 1) return img;
  PixelImage out(img.width(), img.height(), 1);
  const auto& s = img.samples();
  auto& o = out.samples();
  for (std::size_t i = 0, j = 0; j < o.size(); i += 3, ++j) {
    const std::uint32_t weighted = 299u * s[i] + 587u * s[i + 1] + 114u * s[i + 2];
    o[j] = static_cast<std::uint8_t>((weighted + 500u) / 1000u);
  }
  return out;
}

/// sample >= t -> 255, else 0.
inline PixelImage binary_threshold(const PixelImage& img, int t) {
  if (img.channels() != 1) throw InputError("binary_threshold: image must have 1 channel");
  if (t < 0 || t > 255) throw InputError("binary_threshold: t must lie in [0, 255]");
  PixelImage out = img;
  for (auto& v : out.samples()) v = v >= t ? 255 : 0;
  return out;
}

inline PixelImage invert(const PixelImage& img) {
  PixelImage out = img;
  for (auto& v : out.samples()) v = static_cast<std::uint8_t>(255 - v);
  return out;
}

/// Grayscale, threshold, invert: dark text on a light background.
inline PixelImage prepare_for_ocr(const PixelImage& img, int threshold = 128) {
  return invert(binary_threshold(to_grayscale(img), threshold));
}

/// Normalized 1-D Gaussian of radius ceil(3 sigma); element `radius` is the center.
inline std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("gaussian: sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    const double w = std::exp(-(d * d) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(d + radius)] = w;
    sum += w;
  }
  for (auto& w : k) w /= sum;
  return k;
}

namespace detail {

inline std::uint8_t to_sample(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace detail

/// Separable blur with clamp-to-edge borders. Values stay in floating point
/// between passes and are rounded once.
inline PixelImage gaussian_blur(const PixelImage& img, double sigma) {
  const auto kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  std::vector<double> horizontal(img.samples().size());
  auto idx = [&](int x, int y, int c) {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(ch) +
           static_cast<std::size_t>(c);
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int d = -radius; d <= radius; ++d) {
          const int sx = std::clamp(x + d, 0, w - 1);
          acc += kernel[static_cast<std::size_t>(d + radius)] * img.at(sx, y, c);
        }
        horizontal[idx(x, y, c)] = acc;
      }
  PixelImage out(w, h, ch);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int d = -radius; d <= radius; ++d) {
          const int sy = std::clamp(y + d, 0, h - 1);
          acc += kernel[static_cast<std::size_t>(d + radius)] * horizontal[idx(x, sy, c)];
        }
        out.at(x, y, c) = detail::to_sample(acc);
      }
  return out;
}

/// Bilinear resize to round(dimension * factor). Sample positions are
/// aligned on the corners, so corner pixels keep their source values.
inline PixelImage scale(const PixelImage& img, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InputError("scale: factor must be > 0");
  const long ow = std::lround(img.width() * factor);
  const long oh = std::lround(img.height() * factor);
  if (ow < 1 || oh < 1) throw InputError("scale: output dimension would be 0");
  PixelImage out(static_cast<int>(ow), static_cast<int>(oh), img.channels());
  auto source_coord = [](long dst, long dst_size, int src_size) {
    if (dst_size == 1) return (src_size - 1) / 2.0;
    return static_cast<double>(dst) * (src_size - 1) / static_cast<double>(dst_size - 1);
  };
  for (long y = 0; y < oh; ++y) {
    const double sy = source_coord(y, oh, img.height());
    const int y0 = static_cast<int>(std::floor(sy));
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = sy - y0;
    for (long x = 0; x < ow; ++x) {
      const double sx = source_coord(x, ow, img.width());
      const int x0 = static_cast<int>(std::floor(sx));
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double fx = sx - x0;
      for (int c = 0; c < img.channels(); ++c) {
        const double top = img.at(x0, y0, c) * (1.0 - fx) + img.at(x1, y0, c) * fx;
        const double bottom = img.at(x0, y1, c) * (1.0 - fx) + img.at(x1, y1, c) * fx;
        out.at(static_cast<int>(x), static_cast<int>(y), c) =
            detail::to_sample(top * (1.0 - fy) + bottom * fy);
      }
    }
  }
  return out;
}

/// Zero border on the shorter side; an odd remainder goes to the bottom/right.
inline PixelImage pad_to_square(const PixelImage& img) {
  const int side = std::max(img.width(), img.height());
  if (img.width() == side && img.height() == side) return img;
  const int left = (side - img.width()) / 2;
  const int top = (side - img.height()) / 2;
  PixelImage out(side, side, img.channels());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < img.channels(); ++c) out.at(left + x, top + y, c) = img.at(x, y, c);
  return out;
}

// ---------------------------------------------------------------------------
// Binary PNM: P6 for RGB, P5 for grayscale, maxval 255.

inline PixelImage decode_pnm(std::string_view bytes) {
  std::size_t pos = 0;
  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (detail::is_space(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto next_token = [&]() -> std::string_view {
    skip_space_and_comments();
    const std::size_t start = pos;
    while (pos < bytes.size() && !detail::is_space(bytes[pos]) && bytes[pos] != '#') ++pos;
    return bytes.substr(start, pos - start);
  };
  const auto magic = next_token();
  int channels = 0;
  if (magic == "P6")
    channels = 3;
  else if (magic == "P5")
    channels = 1;
  else
    throw InputError("pnm: expected P5 or P6 header");
  const auto width = detail::parse_int(next_token());
  const auto height = detail::parse_int(next_token());
  const auto maxval = detail::parse_int(next_token());
  if (!width || !height || *width <= 0 || *height <= 0 || *width > 1 << 16 || *height > 1 << 16)
    throw InputError("pnm: bad dimensions");
  if (!maxval || *maxval != 255) throw InputError("pnm: only maxval 255 is supported");
  if (pos >= bytes.size() || !detail::is_space(bytes[pos]))
    throw InputError("pnm: missing separator before raster");
  ++pos;
  const std::size_t n =
      static_cast<std::size_t>(*width) * static_cast<std::size_t>(*height) * static_cast<std::size_t>(channels);
  if (bytes.size() - pos < n) throw InputError("pnm: truncated raster");
  std::vector<std::uint8_t> samples(n);
  std::copy_n(bytes.data() + pos, n, reinterpret_cast<char*>(samples.data()));
  return PixelImage(static_cast<int>(*width), static_cast<int>(*height), channels,
                    std::move(samples));
}

inline std::string encode_pnm(const PixelImage& img) {
  std::string out = fmt::format("{}\n{} {}\n255\n", img.channels() == 3 ? "P6" : "P5",
                                img.width(), img.height());
  out.append(reinterpret_cast<const char*>(img.samples().data()), img.samples().size());
  return out;
}

inline PixelImage read_pnm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open image '{}'", path));
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pnm(bytes);
}

inline void write_pnm_file(const std::string& path, const PixelImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write image '{}'", path));
  const auto bytes = encode_pnm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace playindex
