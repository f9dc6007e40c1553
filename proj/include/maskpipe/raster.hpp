#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace maskpipe {

// Row-major grayscale raster. Intensities are unitless reals in [0,1];
// 8-bit sources are divided by 255 at load, 16-bit by 65535.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0);

    double at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    double& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return pixels.size(); }
    bool same_dims(const GrayImage& o) const { return width == o.width && height == o.height; }
};

// Row-major {0,1} raster.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h, uint8_t fill = 0);

    uint8_t at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x]; }
    uint8_t& at(int x, int y) { return bits[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return bits.size(); }
    bool same_dims(const BinaryMask& o) const { return width == o.width && height == o.height; }

    // {0,1} bits as 0.0/1.0 intensities.
    GrayImage to_gray() const;
    uint64_t foreground_count() const;
};

// 1 where a transformed pixel originated inside the source raster, 0 where
// it was filled. Same dimensions as the image it annotates.
struct ValidityMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    ValidityMask() = default;
    ValidityMask(int w, int h, uint8_t fill = 1);

    uint8_t at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x]; }
    uint8_t& at(int x, int y) { return bits[static_cast<size_t>(y) * width + x]; }
    bool all_valid() const;
};

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;

    RgbImage() = default;
    RgbImage(int w, int h, Rgb fill = {});

    const Rgb& at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    Rgb& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
};

enum class TransformKind { Identity, FlipH, Shift, Rotate };

// Invertible flip/shift/rotate description shared by augmentation and its
// inverse. Shifts are integer-pixel; rotation is in degrees about the image
// center. `fill` is the intensity for pixels mapped from outside the source.
struct GeomTransform {
    TransformKind kind = TransformKind::Identity;
    int dx = 0;
    int dy = 0;
    double theta_deg = 0.0;
    double fill = 0.0;

    static GeomTransform identity();
    static GeomTransform flip_h();
    static GeomTransform shift(int dx, int dy);
    static GeomTransform rotate(double degrees);

    // FlipH^-1 = FlipH, Shift(dx,dy)^-1 = Shift(-dx,-dy), Rotate(t)^-1 = Rotate(-t).
    GeomTransform inverse() const;
    std::string describe() const;
};

struct TransformedImage {
    GrayImage image;
    ValidityMask validity;
};

// Bicubic resampling with the Keys kernel (a = -0.5, Catmull-Rom),
// pixel-center coordinate mapping and clamp-to-edge sampling. Output is
// clamped to [0,1]. Throws std::invalid_argument on zero target dims.
GrayImage resample_bicubic(const GrayImage& src, int target_w, int target_h);

// Output dims equal input dims. FlipH mirrors columns; Shift translates by
// integer pixels with fill; Rotate uses bilinear sampling with fill. The
// validity mask marks pixels whose value originated inside the source.
TransformedImage apply_transform(const GrayImage& src, const GeomTransform& t);

// Applies t^-1 to both the prediction and its validity mask, landing back in
// the original frame. For FlipH and integer Shift, invert(apply(x)) restores
// x exactly on the jointly valid region.
TransformedImage invert_transform(const GrayImage& pred, const ValidityMask& validity,
                                  const GeomTransform& t);

// Source content anchored at the top-left, remainder = fill. Throws
// std::invalid_argument when the target is smaller than the source.
GrayImage pad_to(const GrayImage& src, int target_w, int target_h, double fill);

// Axis-aligned crop; the box must lie within the source bounds.
GrayImage crop(const GrayImage& src, int x0, int y0, int w, int h);

// Piecewise-linear jet: v in {0, .125, .375, .625, .875, 1} anchors
// {(0,0,.5),(0,0,1),(0,1,1),(1,1,0),(1,0,0),(.5,0,0)}. Inputs must already
// be in [0,1].
RgbImage jet_colormap(const GrayImage& values);
Rgb jet_color(double v);

}  // namespace maskpipe
