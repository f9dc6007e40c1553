#include "maskpipe/preprocess.hpp"

#include <cmath>
#include <stdexcept>

namespace maskpipe {

std::string to_string(LadderMode m) {
    switch (m) {
        case LadderMode::Original: return "original";
        case LadderMode::Cropped: return "cropped";
        case LadderMode::ArCorrected: return "ar_corrected";
    }
    return "?";
}

LadderSpec default_ladder(LadderMode mode, double ar) {
    LadderSpec spec;
    spec.mode = mode;
    if (mode == LadderMode::ArCorrected) {
        for (int h : {64, 128, 256, 512, 768, 1024})
            spec.resolutions.emplace_back(ar_target_width(h, ar), h);
    } else {
        for (int s : {32, 64, 128, 256, 512, 768, 1024}) spec.resolutions.emplace_back(s, s);
    }
    return spec;
}

BBox lung_bbox(const BinaryMask& lung_mask) {
    int min_x = lung_mask.width, min_y = lung_mask.height;
    int max_x = -1, max_y = -1;
    for (int y = 0; y < lung_mask.height; ++y) {
        for (int x = 0; x < lung_mask.width; ++x) {
            if (!lung_mask.at(x, y)) continue;
            min_x = std::min(min_x, x);
            min_y = std::min(min_y, y);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
        }
    }
    if (max_x < 0) throw std::runtime_error("lung_bbox: mask has no foreground");
    return {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

SamplePair crop_to_lungs(const SamplePair& pair, const BinaryMask& lung_mask) {
    if (!pair.dims_locked()) throw std::invalid_argument("crop_to_lungs: pair dims diverged");
    if (lung_mask.width != pair.image.width || lung_mask.height != pair.image.height)
        throw std::invalid_argument("crop_to_lungs: lung mask dims mismatch");
    const BBox box = lung_bbox(lung_mask);
    SamplePair out;
    out.image = crop(pair.image, box.x0, box.y0, box.w, box.h);
    out.tb_mask = crop(pair.tb_mask, box.x0, box.y0, box.w, box.h);
    out.id = pair.id;
    out.variant = "CR";
    return out;
}

std::vector<SamplePair> build_ladder(const SamplePair& pair, const LadderSpec& spec) {
    if (spec.resolutions.empty()) throw std::invalid_argument("build_ladder: empty spec");
    if (!pair.dims_locked()) throw std::invalid_argument("build_ladder: pair dims diverged");
    if (spec.mode == LadderMode::ArCorrected) {
        for (const auto& [w, h] : spec.resolutions)
            if (w < 32 || h < 32 || w % 32 != 0 || h % 32 != 0)
                throw std::invalid_argument("build_ladder: AR rung dims must be multiples of 32");
    }

    std::vector<SamplePair> out;
    out.reserve(spec.resolutions.size());
    for (const auto& [w, h] : spec.resolutions) {
        SamplePair rung;
        rung.image = resample_bicubic(pair.image, w, h);
        rung.tb_mask = resample_bicubic(pair.tb_mask, w, h);
        rung.id = pair.id;
        rung.variant = pair.variant;
        out.push_back(std::move(rung));
    }
    return out;
}

int ar_target_width(int height, double ar) {
    if (height < 32 || height % 32 != 0)
        throw std::invalid_argument("ar_target_width: height must be a positive multiple of 32");
    if (!(ar > 0.0 && ar <= 1.0)) throw std::invalid_argument("ar_target_width: ar must be in (0,1]");
    const int floored = 32 * static_cast<int>(std::floor(height * ar / 32.0));
    return std::max(32, floored);
}

SamplePair ar_correct(const SamplePair& pair, int height, double ar) {
    if (!pair.dims_locked()) throw std::invalid_argument("ar_correct: pair dims diverged");
    const int w = ar_target_width(height, ar);
    SamplePair out;
    out.image = resample_bicubic(pair.image, w, height);
    out.tb_mask = resample_bicubic(pair.tb_mask, w, height);
    out.id = pair.id;
    out.variant = "AR-CR";
    return out;
}

}  // namespace maskpipe
