#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "maskpipe/raster.hpp"

namespace maskpipe {

struct ConfusionCounts {
    uint64_t tp = 0;
    uint64_t fp = 0;
    uint64_t fn = 0;
    uint64_t tn = 0;

    uint64_t total() const { return tp + fp + fn + tn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
};

// Per-pixel 2x2 tally; dims must match.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

// tp/(tp+fp+fn) and 2tp/(2tp+fp+fn). The empty/empty case (tp+fp+fn == 0)
// returns 1 by convention so that extreme thresholds count blank-on-blank
// agreement as perfect.
double iou(const ConfusionCounts& c);
double dice(const ConfusionCounts& c);

struct SsimParams {
    int window_side = 11;         // odd, >= 3
    double gaussian_sigma = 1.5;  // pixels
    double k1 = 0.01;
    double k2 = 0.03;
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double dynamic_range = 1.0;   // L; images here are unit-interval
};

struct SsimResult {
    double score = 0.0;
    // Full-size map, edge-replicated outside the windowed interior.
    // quality_map is clamped to [0,1] for rendering; raw_map keeps the
    // unclamped values (the structure term can go negative).
    GrayImage quality_map;
    std::vector<double> raw_map;
};

// Local luminance/contrast/structure comparison under a sliding Gaussian
// window with C1=(k1 L)^2, C2=(k2 L)^2, C3=C2/2. The score is the unweighted
// mean of the map over the windowed interior. Both images must be at least
// window_side on each side.
SsimResult ssim(const GrayImage& a, const GrayImage& b, const SsimParams& p = {});

// Signal-to-reconstruction-error ratio, 10 log10(mu_gt^2 / MSE), in dB.
// Zero MSE returns +infinity; zero mean with nonzero MSE returns -infinity.
double sre(const GrayImage& gt, const GrayImage& pred);

struct CpInterval {
    double lower = 0.0;
    double upper = 1.0;
    double level = 0.95;
    double n = 0.0;  // trials
    double x = 0.0;  // effective successes, real-valued (p_hat * n, not rounded)
};

// Exact binomial interval via beta quantiles, generalized to non-integer
// successes: lower = BetaInv(alpha/2; x, n-x+1), upper =
// BetaInv(1-alpha/2; x+1, n-x), with lower=0 at x=0 and upper=1 at x=n.
CpInterval clopper_pearson(double p_hat, double n, double level = 0.95);

struct SetEvaluation {
    size_t n_images = 0;
    ConfusionCounts pooled;
    double micro_iou = 0.0;   // pooled confusion; the headline number
    double micro_dice = 0.0;
    double macro_iou = 0.0;   // per-image mean
    double macro_dice = 0.0;
    CpInterval iou_ci;        // on micro IoU, n = image count
    double mean_ssim = 0.0;
    double mean_sre = 0.0;    // over finite values only
    size_t inf_sre_count = 0;
    size_t empty_agreements = 0;  // images scored by the empty/empty convention
    std::vector<double> per_image_iou;
    std::vector<double> per_image_dice;
    std::vector<double> per_image_ssim;
    std::vector<double> per_image_sre;
};

// image_pairs feed SSIM/SRE as (reference, prediction); pass an empty list to
// skip the image-wise metrics. All non-empty lists must be aligned.
SetEvaluation evaluate_set(const std::vector<BinaryMask>& preds,
                           const std::vector<BinaryMask>& gts,
                           const std::vector<std::pair<GrayImage, GrayImage>>& image_pairs,
                           const SsimParams& params = {}, double ci_level = 0.95);

}  // namespace maskpipe
