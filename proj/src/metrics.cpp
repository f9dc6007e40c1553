#include "maskpipe/metrics.hpp"

#include <boost/math/distributions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "maskpipe/parallel.hpp"

namespace maskpipe {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
    if (!pred.same_dims(gt)) throw std::invalid_argument("confusion: dimension mismatch");
    ConfusionCounts c;
    for (size_t i = 0; i < pred.bits.size(); ++i) {
        const bool p = pred.bits[i] != 0;
        const bool g = gt.bits[i] != 0;
        if (p && g)
            ++c.tp;
        else if (p && !g)
            ++c.fp;
        else if (!p && g)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

double iou(const ConfusionCounts& c) {
    const uint64_t denom = c.tp + c.fp + c.fn;
    if (denom == 0) return 1.0;
    return static_cast<double>(c.tp) / static_cast<double>(denom);
}

double dice(const ConfusionCounts& c) {
    const uint64_t denom = 2 * c.tp + c.fp + c.fn;
    if (denom == 0) return 1.0;
    return static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

namespace {

std::vector<double> gaussian_kernel(int side, double sigma) {
    std::vector<double> k(static_cast<size_t>(side));
    const int half = side / 2;
    double sum = 0.0;
    for (int i = 0; i < side; ++i) {
        const double d = i - half;
        k[static_cast<size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        sum += k[static_cast<size_t>(i)];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable "valid" convolution: output is (w-side+1) x (h-side+1).
std::vector<double> valid_convolve(const std::vector<double>& plane, int w, int h,
                                   const std::vector<double>& kern) {
    const int side = static_cast<int>(kern.size());
    const int vw = w - side + 1;
    const int vh = h - side + 1;
    std::vector<double> mid(static_cast<size_t>(vw) * h);
    for (int y = 0; y < h; ++y) {
        const double* row = &plane[static_cast<size_t>(y) * w];
        double* out = &mid[static_cast<size_t>(y) * vw];
        for (int x = 0; x < vw; ++x) {
            double acc = 0.0;
            for (int k = 0; k < side; ++k) acc += kern[static_cast<size_t>(k)] * row[x + k];
            out[x] = acc;
        }
    }
    std::vector<double> out(static_cast<size_t>(vw) * vh);
    for (int y = 0; y < vh; ++y) {
        for (int x = 0; x < vw; ++x) {
            double acc = 0.0;
            for (int k = 0; k < side; ++k)
                acc += kern[static_cast<size_t>(k)] * mid[static_cast<size_t>(y + k) * vw + x];
            out[static_cast<size_t>(y) * vw + x] = acc;
        }
    }
    return out;
}

}  // namespace

SsimResult ssim(const GrayImage& a, const GrayImage& b, const SsimParams& p) {
    if (!a.same_dims(b)) throw std::invalid_argument("ssim: dimension mismatch");
    if (p.window_side < 3 || p.window_side % 2 == 0)
        throw std::invalid_argument("ssim: window_side must be odd and >= 3");
    if (a.width < p.window_side || a.height < p.window_side)
        throw std::invalid_argument("ssim: image smaller than window");
    if (p.k1 <= 0.0 || p.k2 <= 0.0 || p.dynamic_range <= 0.0)
        throw std::invalid_argument("ssim: k1, k2, L must be positive");

    const double C1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
    const double C2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
    const double C3 = C2 / 2.0;

    const int w = a.width, h = a.height;
    const size_t n = a.pixels.size();
    std::vector<double> aa(n), bb(n), ab(n);
    for (size_t i = 0; i < n; ++i) {
        aa[i] = a.pixels[i] * a.pixels[i];
        bb[i] = b.pixels[i] * b.pixels[i];
        ab[i] = a.pixels[i] * b.pixels[i];
    }

    const auto kern = gaussian_kernel(p.window_side, p.gaussian_sigma);
    const auto mu_a = valid_convolve(a.pixels, w, h, kern);
    const auto mu_b = valid_convolve(b.pixels, w, h, kern);
    const auto e_aa = valid_convolve(aa, w, h, kern);
    const auto e_bb = valid_convolve(bb, w, h, kern);
    const auto e_ab = valid_convolve(ab, w, h, kern);

    const bool canonical = p.alpha == 1.0 && p.beta == 1.0 && p.gamma == 1.0;

    std::vector<double> valid_map(mu_a.size());
    for (size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a[i], mb = mu_b[i];
        const double var_a = e_aa[i] - ma * ma;
        const double var_b = e_bb[i] - mb * mb;
        const double cov = e_ab[i] - ma * mb;
        const double lum = (2.0 * ma * mb + C1) / (ma * ma + mb * mb + C1);
        if (canonical) {
            // With unit exponents and C3 = C2/2 the contrast and structure
            // factors collapse: c*s = (2 cov + C2)/(var_a + var_b + C2).
            valid_map[i] = lum * (2.0 * cov + C2) / (var_a + var_b + C2);
        } else {
            const double sa = std::sqrt(std::max(var_a, 0.0));
            const double sb = std::sqrt(std::max(var_b, 0.0));
            const double con = (2.0 * sa * sb + C2) / (sa * sa + sb * sb + C2);
            const double str = (cov + C3) / (sa * sb + C3);
            valid_map[i] = std::pow(lum, p.alpha) * std::pow(con, p.beta) *
                           (p.gamma == 1.0 ? str : std::pow(str, p.gamma));
        }
    }

    double sum = 0.0;
    for (double v : valid_map) sum += v;

    SsimResult res;
    res.score = sum / static_cast<double>(valid_map.size());

    // Extend to full size by replicating the windowed interior outward.
    const int half = p.window_side / 2;
    const int vw = w - p.window_side + 1;
    const int vh = h - p.window_side + 1;
    res.raw_map.resize(n);
    res.quality_map = GrayImage(w, h);
    for (int y = 0; y < h; ++y) {
        const int sy = std::clamp(y - half, 0, vh - 1);
        for (int x = 0; x < w; ++x) {
            const int sx = std::clamp(x - half, 0, vw - 1);
            const double v = valid_map[static_cast<size_t>(sy) * vw + sx];
            res.raw_map[static_cast<size_t>(y) * w + x] = v;
            res.quality_map.at(x, y) = std::clamp(v, 0.0, 1.0);
        }
    }
    return res;
}

double sre(const GrayImage& gt, const GrayImage& pred) {
    if (!gt.same_dims(pred)) throw std::invalid_argument("sre: dimension mismatch");
    if (gt.pixels.empty()) throw std::invalid_argument("sre: empty image");
    const double n = static_cast<double>(gt.pixels.size());
    double mean = 0.0;
    double sq_err = 0.0;
    for (size_t i = 0; i < gt.pixels.size(); ++i) {
        mean += gt.pixels[i];
        const double d = pred.pixels[i] - gt.pixels[i];
        sq_err += d * d;
    }
    mean /= n;
    const double mse = sq_err / n;
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    if (mean == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(mean * mean / mse);
}

CpInterval clopper_pearson(double p_hat, double n, double level) {
    if (!(n >= 1.0)) throw std::invalid_argument("clopper_pearson: n must be >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("clopper_pearson: level must be in (0,1)");
    if (!(p_hat >= 0.0 && p_hat <= 1.0))
        throw std::invalid_argument("clopper_pearson: p_hat must be in [0,1]");

    const double alpha = 1.0 - level;
    const double x = p_hat * n;
    CpInterval ci;
    ci.level = level;
    ci.n = n;
    ci.x = x;
    if (x <= 0.0) {
        ci.lower = 0.0;
    } else {
        boost::math::beta_distribution<double> lo(x, n - x + 1.0);
        ci.lower = boost::math::quantile(lo, alpha / 2.0);
    }
    if (x >= n) {
        ci.upper = 1.0;
    } else {
        boost::math::beta_distribution<double> hi(x + 1.0, n - x);
        ci.upper = boost::math::quantile(hi, 1.0 - alpha / 2.0);
    }
    return ci;
}

SetEvaluation evaluate_set(const std::vector<BinaryMask>& preds, const std::vector<BinaryMask>& gts,
                           const std::vector<std::pair<GrayImage, GrayImage>>& image_pairs,
                           const SsimParams& params, double ci_level) {
    if (preds.size() != gts.size())
        throw std::invalid_argument("evaluate_set: pred/gt length mismatch");
    if (!image_pairs.empty() && image_pairs.size() != preds.size())
        throw std::invalid_argument("evaluate_set: image pair length mismatch");
    if (preds.empty()) throw std::invalid_argument("evaluate_set: empty input");

    SetEvaluation ev;
    ev.n_images = preds.size();
    ev.per_image_iou.resize(preds.size());
    ev.per_image_dice.resize(preds.size());
    if (!image_pairs.empty()) {
        ev.per_image_ssim.resize(preds.size());
        ev.per_image_sre.resize(preds.size());
    }

    std::vector<ConfusionCounts> per_image(preds.size());
    parallel_for(preds.size(), [&](size_t i) {
        per_image[i] = confusion(preds[i], gts[i]);
        ev.per_image_iou[i] = iou(per_image[i]);
        ev.per_image_dice[i] = dice(per_image[i]);
        if (!image_pairs.empty()) {
            ev.per_image_ssim[i] = ssim(image_pairs[i].first, image_pairs[i].second, params).score;
            ev.per_image_sre[i] = sre(image_pairs[i].first, image_pairs[i].second);
        }
    });

    // Reductions run serially in image order so results are bit-stable.
    double iou_sum = 0.0, dice_sum = 0.0;
    for (size_t i = 0; i < preds.size(); ++i) {
        ev.pooled += per_image[i];
        iou_sum += ev.per_image_iou[i];
        dice_sum += ev.per_image_dice[i];
        if (per_image[i].tp + per_image[i].fp + per_image[i].fn == 0) ++ev.empty_agreements;
    }
    ev.micro_iou = iou(ev.pooled);
    ev.micro_dice = dice(ev.pooled);
    ev.macro_iou = iou_sum / static_cast<double>(preds.size());
    ev.macro_dice = dice_sum / static_cast<double>(preds.size());
    ev.iou_ci = clopper_pearson(ev.micro_iou, static_cast<double>(preds.size()), ci_level);

    if (!image_pairs.empty()) {
        double ssim_sum = 0.0, sre_sum = 0.0;
        size_t finite = 0;
        for (size_t i = 0; i < preds.size(); ++i) {
            ssim_sum += ev.per_image_ssim[i];
            if (std::isinf(ev.per_image_sre[i])) {
                ++ev.inf_sre_count;
            } else {
                sre_sum += ev.per_image_sre[i];
                ++finite;
            }
        }
        ev.mean_ssim = ssim_sum / static_cast<double>(preds.size());
        ev.mean_sre = finite ? sre_sum / static_cast<double>(finite)
                             : std::numeric_limits<double>::infinity();
    } else {
        ev.mean_ssim = std::numeric_limits<double>::quiet_NaN();
        ev.mean_sre = std::numeric_limits<double>::quiet_NaN();
    }
    return ev;
}

}  // namespace maskpipe
