#include "maskpipe/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace maskpipe {

GrayImage::GrayImage(int w, int h, double fill)
    : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {}

BinaryMask::BinaryMask(int w, int h, uint8_t fill)
    : width(w), height(h), bits(static_cast<size_t>(w) * h, fill) {}

GrayImage BinaryMask::to_gray() const {
    GrayImage out(width, height);
    for (size_t i = 0; i < bits.size(); ++i) out.pixels[i] = bits[i] ? 1.0 : 0.0;
    return out;
}

uint64_t BinaryMask::foreground_count() const {
    uint64_t n = 0;
    for (uint8_t b : bits) n += b;
    return n;
}

ValidityMask::ValidityMask(int w, int h, uint8_t fill)
    : width(w), height(h), bits(static_cast<size_t>(w) * h, fill) {}

bool ValidityMask::all_valid() const {
    return std::all_of(bits.begin(), bits.end(), [](uint8_t b) { return b == 1; });
}

RgbImage::RgbImage(int w, int h, Rgb fill)
    : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {}

GeomTransform GeomTransform::identity() { return {}; }

GeomTransform GeomTransform::flip_h() {
    GeomTransform t;
    t.kind = TransformKind::FlipH;
    return t;
}

GeomTransform GeomTransform::shift(int dx, int dy) {
    GeomTransform t;
    t.kind = TransformKind::Shift;
    t.dx = dx;
    t.dy = dy;
    return t;
}

GeomTransform GeomTransform::rotate(double degrees) {
    GeomTransform t;
    t.kind = TransformKind::Rotate;
    t.theta_deg = degrees;
    return t;
}

GeomTransform GeomTransform::inverse() const {
    GeomTransform inv = *this;
    switch (kind) {
        case TransformKind::Identity:
        case TransformKind::FlipH:
            break;
        case TransformKind::Shift:
            inv.dx = -dx;
            inv.dy = -dy;
            break;
        case TransformKind::Rotate:
            inv.theta_deg = -theta_deg;
            break;
    }
    return inv;
}

std::string GeomTransform::describe() const {
    switch (kind) {
        case TransformKind::Identity: return "identity";
        case TransformKind::FlipH: return "flip_h";
        case TransformKind::Shift:
            return "shift(" + std::to_string(dx) + "," + std::to_string(dy) + ")";
        case TransformKind::Rotate: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "rotate(%g)", theta_deg);
            return buf;
        }
    }
    return "?";
}

namespace {

// Keys two-parameter cubic with a = -0.5 (Catmull-Rom). Weights of the four
// taps sum to 1 for every phase, so constants are preserved exactly.
double keys_cubic(double x) {
    constexpr double a = -0.5;
    x = std::abs(x);
    if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return (((x - 5.0) * x + 8.0) * x - 4.0) * a;
    return 0.0;
}

struct CubicTaps {
    int base;        // index of the t=0 tap; taps are base-1 .. base+2
    double w[4];
};

// Pixel-center mapping: out pixel x samples source coordinate
// (x + 0.5) * src/dst - 0.5.
std::vector<CubicTaps> cubic_taps(int dst, int src) {
    std::vector<CubicTaps> taps(static_cast<size_t>(dst));
    const double scale = static_cast<double>(src) / dst;
    for (int x = 0; x < dst; ++x) {
        const double sx = (x + 0.5) * scale - 0.5;
        const double base = std::floor(sx);
        const double t = sx - base;
        CubicTaps& ct = taps[static_cast<size_t>(x)];
        ct.base = static_cast<int>(base);
        ct.w[0] = keys_cubic(t + 1.0);
        ct.w[1] = keys_cubic(t);
        ct.w[2] = keys_cubic(1.0 - t);
        ct.w[3] = keys_cubic(2.0 - t);
    }
    return taps;
}

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

GrayImage resample_bicubic(const GrayImage& src, int target_w, int target_h) {
    if (target_w < 1 || target_h < 1)
        throw std::invalid_argument("resample_bicubic: target dims must be >= 1");
    if (src.width < 1 || src.height < 1)
        throw std::invalid_argument("resample_bicubic: empty source");

    const auto tx = cubic_taps(target_w, src.width);
    const auto ty = cubic_taps(target_h, src.height);

    // Separable: horizontal pass into a src.height x target_w buffer, then
    // vertical. Intermediate values are left unclamped; only the final
    // output is clamped to [0,1].
    std::vector<double> mid(static_cast<size_t>(src.height) * target_w);
    for (int y = 0; y < src.height; ++y) {
        const double* row = &src.pixels[static_cast<size_t>(y) * src.width];
        double* out = &mid[static_cast<size_t>(y) * target_w];
        for (int x = 0; x < target_w; ++x) {
            const CubicTaps& ct = tx[static_cast<size_t>(x)];
            double acc = 0.0;
            for (int k = 0; k < 4; ++k)
                acc += ct.w[k] * row[clamp_index(ct.base - 1 + k, src.width)];
            out[x] = acc;
        }
    }

    GrayImage dst(target_w, target_h);
    for (int y = 0; y < target_h; ++y) {
        const CubicTaps& ct = ty[static_cast<size_t>(y)];
        int rows[4];
        for (int k = 0; k < 4; ++k) rows[k] = clamp_index(ct.base - 1 + k, src.height);
        for (int x = 0; x < target_w; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k)
                acc += ct.w[k] * mid[static_cast<size_t>(rows[k]) * target_w + x];
            dst.at(x, y) = std::clamp(acc, 0.0, 1.0);
        }
    }
    return dst;
}

namespace {

// Shared by apply_transform and invert_transform: resamples an image (and an
// optional validity plane) under t. A pixel of the output is valid only when
// its source sample lies inside the raster and, when a validity plane is
// given, the plane interpolates to 1 there.
TransformedImage transform_with_validity(const GrayImage& src, const ValidityMask* src_valid,
                                         const GeomTransform& t) {
    const int w = src.width;
    const int h = src.height;
    TransformedImage out;
    out.image = GrayImage(w, h, t.fill);
    out.validity = ValidityMask(w, h, 0);

    auto copy_mapped = [&](auto&& src_xy) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const auto [sx, sy] = src_xy(x, y);
                if (sx < 0 || sx >= w || sy < 0 || sy >= h) continue;
                out.image.at(x, y) = src.at(sx, sy);
                out.validity.at(x, y) = src_valid ? src_valid->at(sx, sy) : uint8_t{1};
            }
        }
    };

    switch (t.kind) {
        case TransformKind::Identity:
            copy_mapped([](int x, int y) { return std::pair{x, y}; });
            break;
        case TransformKind::FlipH:
            copy_mapped([w](int x, int y) { return std::pair{w - 1 - x, y}; });
            break;
        case TransformKind::Shift:
            copy_mapped([&t](int x, int y) { return std::pair{x - t.dx, y - t.dy}; });
            break;
        case TransformKind::Rotate: {
            const double rad = t.theta_deg * std::numbers::pi / 180.0;
            const double c = std::cos(rad), s = std::sin(rad);
            const double cx = (w - 1) * 0.5, cy = (h - 1) * 0.5;
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    // Back-rotate the output pixel center by -theta.
                    const double rx = x - cx, ry = y - cy;
                    const double sx = c * rx + s * ry + cx;
                    const double sy = -s * rx + c * ry + cy;
                    if (sx < 0.0 || sx > w - 1 || sy < 0.0 || sy > h - 1) continue;
                    const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, w - 1);
                    const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, h - 1);
                    const int x1 = std::min(x0 + 1, w - 1);
                    const int y1 = std::min(y0 + 1, h - 1);
                    const double fx = sx - x0, fy = sy - y0;
                    const double v00 = src.at(x0, y0), v10 = src.at(x1, y0);
                    const double v01 = src.at(x0, y1), v11 = src.at(x1, y1);
                    out.image.at(x, y) = (v00 * (1.0 - fx) + v10 * fx) * (1.0 - fy) +
                                         (v01 * (1.0 - fx) + v11 * fx) * fy;
                    bool valid = true;
                    if (src_valid) {
                        const double g =
                            (src_valid->at(x0, y0) * (1.0 - fx) + src_valid->at(x1, y0) * fx) *
                                (1.0 - fy) +
                            (src_valid->at(x0, y1) * (1.0 - fx) + src_valid->at(x1, y1) * fx) * fy;
                        valid = g >= 1.0 - 1e-9;
                    }
                    out.validity.at(x, y) = valid ? 1 : 0;
                }
            }
            break;
        }
    }
    return out;
}

}  // namespace

TransformedImage apply_transform(const GrayImage& src, const GeomTransform& t) {
    if (t.kind == TransformKind::Shift &&
        (std::abs(t.dx) >= std::min(src.width, src.height) ||
         std::abs(t.dy) >= std::min(src.width, src.height)))
        throw std::invalid_argument("apply_transform: shift magnitude exceeds image size");
    if (t.kind == TransformKind::Rotate && std::abs(t.theta_deg) >= 90.0)
        throw std::invalid_argument("apply_transform: |theta| must be < 90 degrees");
    return transform_with_validity(src, nullptr, t);
}

TransformedImage invert_transform(const GrayImage& pred, const ValidityMask& validity,
                                  const GeomTransform& t) {
    if (pred.width != validity.width || pred.height != validity.height)
        throw std::invalid_argument("invert_transform: validity dims mismatch");
    return transform_with_validity(pred, &validity, t.inverse());
}

GrayImage pad_to(const GrayImage& src, int target_w, int target_h, double fill) {
    if (target_w < src.width || target_h < src.height)
        throw std::invalid_argument("pad_to: target smaller than source");
    GrayImage out(target_w, target_h, fill);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) out.at(x, y) = src.at(x, y);
    return out;
}

GrayImage crop(const GrayImage& src, int x0, int y0, int w, int h) {
    if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > src.width || y0 + h > src.height)
        throw std::invalid_argument("crop: box outside source bounds");
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(x, y) = src.at(x0 + x, y0 + y);
    return out;
}

namespace {

constexpr double kJetStops[6] = {0.0, 0.125, 0.375, 0.625, 0.875, 1.0};
constexpr Rgb kJetColors[6] = {
    {0.0, 0.0, 0.5}, {0.0, 0.0, 1.0}, {0.0, 1.0, 1.0},
    {1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.5, 0.0, 0.0},
};

}  // namespace

Rgb jet_color(double v) {
    v = std::clamp(v, 0.0, 1.0);
    int seg = 0;
    while (seg < 4 && v > kJetStops[seg + 1]) ++seg;
    const double t = (v - kJetStops[seg]) / (kJetStops[seg + 1] - kJetStops[seg]);
    const Rgb& lo = kJetColors[seg];
    const Rgb& hi = kJetColors[seg + 1];
    return {lo.r + (hi.r - lo.r) * t, lo.g + (hi.g - lo.g) * t, lo.b + (hi.b - lo.b) * t};
}

RgbImage jet_colormap(const GrayImage& values) {
    RgbImage out(values.width, values.height);
    for (size_t i = 0; i < values.pixels.size(); ++i) out.pixels[i] = jet_color(values.pixels[i]);
    return out;
}

}  // namespace maskpipe
