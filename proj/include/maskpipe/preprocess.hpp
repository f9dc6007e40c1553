#pragma once

#include <string>
#include <utility>
#include <vector>

#include "maskpipe/raster.hpp"

namespace maskpipe {

// Axis-aligned box, top-left inclusive.
struct BBox {
    int x0 = 0;
    int y0 = 0;
    int w = 0;
    int h = 0;
};

// A CXR and its TB mask moving through the pipeline in lockstep. The mask is
// kept as intensities until binarization happens downstream.
struct SamplePair {
    GrayImage image;
    GrayImage tb_mask;
    std::string id;
    std::string variant = "O";  // processing tag: O, CR, AR-CR

    bool dims_locked() const { return image.same_dims(tb_mask); }
};

enum class LadderMode { Original, Cropped, ArCorrected };

std::string to_string(LadderMode m);

struct LadderSpec {
    std::vector<std::pair<int, int>> resolutions;  // (width, height)
    LadderMode mode = LadderMode::Original;
};

// The seven square rungs 32..1024 for Original/Cropped; the six
// height-constant rungs for ArCorrected at the given aspect ratio.
LadderSpec default_ladder(LadderMode mode, double ar = 1.0);

// Tightest box containing all foreground pixels; throws on an empty mask.
BBox lung_bbox(const BinaryMask& lung_mask);

// Crops image and tb_mask to lung_bbox(lung_mask); tags the pair "CR".
SamplePair crop_to_lungs(const SamplePair& pair, const BinaryMask& lung_mask);

// One bicubic-resampled pair per resolution, image and mask resampled
// identically.
std::vector<SamplePair> build_ladder(const SamplePair& pair, const LadderSpec& spec);

// max(32, 32*floor(height*ar/32)): the nearest lower multiple of 32 of the
// AR-implied width. height must itself be divisible by 32 and ar in (0,1].
int ar_target_width(int height, double ar);

// Anisotropic resample to height x ar_target_width(height, ar); tags "AR-CR".
SamplePair ar_correct(const SamplePair& pair, int height, double ar);

}  // namespace maskpipe
