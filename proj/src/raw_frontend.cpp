#include "phvi/raw_frontend.hpp"

#include <algorithm>
#include <cmath>

#include "phvi/errors.hpp"
#include "phvi/parallel.hpp"

namespace phvi::raw {

BayerPattern parse_pattern(std::string_view name) {
  if (name == "RGGB") return BayerPattern::kRGGB;
  if (name == "BGGR") return BayerPattern::kBGGR;
  if (name == "GRBG") return BayerPattern::kGRBG;
  if (name == "GBRG") return BayerPattern::kGBRG;
  throw ParseError("pattern", "unknown Bayer pattern '" + std::string(name) +
                                  "' (expected RGGB, BGGR, GRBG or GBRG)");
}

std::string_view to_string(BayerPattern pattern) {
  switch (pattern) {
    case BayerPattern::kRGGB: return "RGGB";
    case BayerPattern::kBGGR: return "BGGR";
    case BayerPattern::kGRBG: return "GRBG";
    case BayerPattern::kGBRG: return "GBRG";
  }
  return "?";
}

double Homography::determinant() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::inverse() const {
  const double det = determinant();
  if (!(std::abs(det) > 1e-12)) {
    throw ParameterError("homography is not invertible (|det| <= 1e-12)");
  }
  const double inv = 1.0 / det;
  Homography r;
  r.m = {(m[4] * m[8] - m[5] * m[7]) * inv, (m[2] * m[7] - m[1] * m[8]) * inv,
         (m[1] * m[5] - m[2] * m[4]) * inv, (m[5] * m[6] - m[3] * m[8]) * inv,
         (m[0] * m[8] - m[2] * m[6]) * inv, (m[2] * m[3] - m[0] * m[5]) * inv,
         (m[3] * m[7] - m[4] * m[6]) * inv, (m[1] * m[6] - m[0] * m[7]) * inv,
         (m[0] * m[4] - m[1] * m[3]) * inv};
  return r;
}

Homography Homography::operator*(const Homography& rhs) const {
  Homography r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r.m[i * 3 + j] = m[i * 3] * rhs.m[j] + m[i * 3 + 1] * rhs.m[3 + j] +
                       m[i * 3 + 2] * rhs.m[6 + j];
    }
  }
  return r;
}

void BayerFrame::validate() const {
  if (width == 0 || height == 0 || width % 2 != 0 || height % 2 != 0) {
    throw DimensionError("Bayer frame dimensions must be even and non-zero, got " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  if (data.size() != width * height) {
    throw DimensionError("Bayer frame has " + std::to_string(data.size()) +
                         " samples, expected " + std::to_string(width * height));
  }
  for (double b : black_levels) {
    if (!std::isfinite(b) || b < 0.0) {
      throw InvalidMetadataError("black_levels must be finite and >= 0");
    }
  }
  const double max_black = *std::ranges::max_element(black_levels);
  if (!std::isfinite(white_level) || white_level <= max_black) {
    throw InvalidMetadataError("white_level must exceed every black level");
  }
  if (!(std::abs(homography.determinant()) > 1e-12)) {
    throw ParameterError("homography is not invertible (|det| <= 1e-12)");
  }
  const std::size_t pw = width / 2;
  const std::size_t ph = height / 2;
  const bool full = crop.width == 0 && crop.height == 0;
  if (!full && (crop.width == 0 || crop.height == 0 ||
                crop.x0 + crop.width > pw || crop.y0 + crop.height > ph)) {
    throw InvalidMetadataError("crop rectangle lies outside the packed frame");
  }
}

RealMosaic black_white_correct(const BayerFrame& frame) {
  frame.validate();
  RealMosaic out{frame.width, frame.height,
                 std::vector<double>(frame.data.size())};
  parallel_for(0, frame.height, [&](std::size_t y) {
    for (std::size_t x = 0; x < frame.width; ++x) {
      const double black = frame.black_levels[(y % 2) * 2 + (x % 2)];
      const double s = frame.data[y * frame.width + x];
      out.data[y * frame.width + x] =
          std::clamp((s - black) / (frame.white_level - black), 0.0, 1.0);
    }
  });
  return out;
}

std::array<std::array<std::size_t, 2>, 4> site_offsets(BayerPattern pattern) {
  switch (pattern) {
    case BayerPattern::kRGGB: return {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    case BayerPattern::kBGGR: return {{{1, 1}, {1, 0}, {0, 1}, {0, 0}}};
    case BayerPattern::kGRBG: return {{{0, 1}, {0, 0}, {1, 1}, {1, 0}}};
    case BayerPattern::kGBRG: return {{{1, 0}, {1, 1}, {0, 0}, {0, 1}}};
  }
  return {};
}

PackedRaw pack_rggb(const RealMosaic& mosaic, BayerPattern pattern,
                    std::string source_id) {
  if (mosaic.width % 2 != 0 || mosaic.height % 2 != 0) {
    throw DimensionError("pack_rggb requires even mosaic dimensions");
  }
  const auto sites = site_offsets(pattern);
  PackedRaw out{PlanarImage(4, mosaic.height / 2, mosaic.width / 2),
                std::move(source_id)};
  for (std::size_t c = 0; c < 4; ++c) {
    const auto [dy, dx] = sites[c];
    for (std::size_t y = 0; y < mosaic.height / 2; ++y) {
      for (std::size_t x = 0; x < mosaic.width / 2; ++x) {
        out.planes.at(c, y, x) = mosaic.at(2 * y + dy, 2 * x + dx);
      }
    }
  }
  return out;
}

RealMosaic unpack_rggb(const PackedRaw& packed, BayerPattern pattern) {
  const PlanarImage& p = packed.planes;
  if (p.channels() != 4) {
    throw DimensionError("unpack_rggb expects 4 planes");
  }
  const auto sites = site_offsets(pattern);
  RealMosaic out{p.width() * 2, p.height() * 2,
                 std::vector<double>(p.size())};
  for (std::size_t c = 0; c < 4; ++c) {
    const auto [dy, dx] = sites[c];
    for (std::size_t y = 0; y < p.height(); ++y) {
      for (std::size_t x = 0; x < p.width(); ++x) {
        out.data[(2 * y + dy) * out.width + 2 * x + dx] = p.at(c, y, x);
      }
    }
  }
  return out;
}

PackedRaw warp_and_crop(const PackedRaw& packed, const Homography& homography,
                        const CropRect& crop) {
  const PlanarImage& src = packed.planes;
  const std::size_t w = src.width();
  const std::size_t h = src.height();
  const CropRect rect = (crop.width == 0 && crop.height == 0)
                            ? CropRect{0, 0, w, h}
                            : crop;
  if (rect.width == 0 || rect.height == 0 || rect.x0 + rect.width > w ||
      rect.y0 + rect.height > h) {
    throw InvalidMetadataError("crop rectangle lies outside the packed frame");
  }
  const Homography inv = homography.inverse();

  // Tolerates round-off on points that land exactly on the border.
  constexpr double kEdge = 1e-9;
  const double max_x = static_cast<double>(w - 1);
  const double max_y = static_cast<double>(h - 1);

  PackedRaw out{PlanarImage(src.channels(), rect.height, rect.width),
                packed.source_id};
  parallel_for(0, rect.height, [&](std::size_t oy) {
    const double ty = static_cast<double>(rect.y0 + oy);
    for (std::size_t ox = 0; ox < rect.width; ++ox) {
      const double tx = static_cast<double>(rect.x0 + ox);
      const double sw = inv(2, 0) * tx + inv(2, 1) * ty + inv(2, 2);
      if (std::abs(sw) < 1e-15) continue;
      double sx = (inv(0, 0) * tx + inv(0, 1) * ty + inv(0, 2)) / sw;
      double sy = (inv(1, 0) * tx + inv(1, 1) * ty + inv(1, 2)) / sw;
      if (!(sx >= -kEdge && sx <= max_x + kEdge && sy >= -kEdge &&
            sy <= max_y + kEdge)) {
        continue;
      }
      sx = std::clamp(sx, 0.0, max_x);
      sy = std::clamp(sy, 0.0, max_y);
      const auto x0 = static_cast<std::size_t>(std::floor(sx));
      const auto y0 = static_cast<std::size_t>(std::floor(sy));
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const std::size_t y1 = std::min(y0 + 1, h - 1);
      const double fx = sx - static_cast<double>(x0);
      const double fy = sy - static_cast<double>(y0);
      for (std::size_t c = 0; c < src.channels(); ++c) {
        const double top =
            (1.0 - fx) * src.at(c, y0, x0) + fx * src.at(c, y0, x1);
        const double bottom =
            (1.0 - fx) * src.at(c, y1, x0) + fx * src.at(c, y1, x1);
        out.planes.at(c, oy, ox) = (1.0 - fy) * top + fy * bottom;
      }
    }
  });
  return out;
}

PackedRaw preprocess(const BayerFrame& frame, std::string source_id) {
  const RealMosaic mosaic = black_white_correct(frame);
  const PackedRaw packed = pack_rggb(mosaic, frame.pattern, std::move(source_id));
  return warp_and_crop(packed, frame.homography, frame.crop);
}

}  // namespace phvi::raw
