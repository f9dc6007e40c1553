#include "maskpipe/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <stdexcept>

#include "maskpipe/csv.hpp"
#include "maskpipe/png_io.hpp"
#include "maskpipe/preprocess.hpp"
#include "maskpipe/rng.hpp"

namespace fs = std::filesystem;

namespace maskpipe {

std::string to_string(Sex s) {
    switch (s) {
        case Sex::Male: return "M";
        case Sex::Female: return "F";
        case Sex::Unknown: return "unknown";
    }
    return "?";
}

std::string to_string(SplitClass s) {
    switch (s) {
        case SplitClass::None: return "";
        case SplitClass::Train: return "train";
        case SplitClass::Val: return "val";
        case SplitClass::Test: return "test";
    }
    return "?";
}

bool Manifest::has_split() const {
    return !records.empty() && std::all_of(records.begin(), records.end(), [](const Record& r) {
        return r.split != SplitClass::None;
    });
}

std::string Manifest::resolve(const std::string& path) const {
    if (path.empty() || base_dir.empty()) return path;
    const fs::path p(path);
    if (p.is_absolute()) return path;
    return (fs::path(base_dir) / p).string();
}

std::vector<const Record*> Manifest::subset(SplitClass s) const {
    std::vector<const Record*> out;
    for (const Record& r : records)
        if (r.split == s) out.push_back(&r);
    return out;
}

namespace {

[[noreturn]] void row_error(const std::string& path, size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

Sex parse_sex(const std::string& s) {
    if (s == "M" || s == "m") return Sex::Male;
    if (s == "F" || s == "f") return Sex::Female;
    if (s.empty() || s == "unknown") return Sex::Unknown;
    throw std::runtime_error("bad sex value '" + s + "'");
}

SplitClass parse_split(const std::string& s) {
    if (s.empty()) return SplitClass::None;
    if (s == "train") return SplitClass::Train;
    if (s == "val") return SplitClass::Val;
    if (s == "test") return SplitClass::Test;
    throw std::runtime_error("bad split value '" + s + "'");
}

int parse_nonneg_int(const std::string& s, const char* what) {
    size_t pos = 0;
    int v = -1;
    try {
        v = std::stoi(s, &pos);
    } catch (...) {
        pos = 0;
    }
    if (pos != s.size() || v < 0)
        throw std::runtime_error(std::string("bad ") + what + " value '" + s + "'");
    return v;
}

const std::vector<std::string> kHeader = {"patient_id", "sex",          "age",
                                          "cxr_path",   "lung_mask_path", "tb_mask_path",
                                          "width",      "height",       "split"};

}  // namespace

Manifest load_manifest(const std::string& path, bool check_files) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw std::runtime_error(path + ": empty manifest");

    const auto& header = rows[0];
    const bool has_split_col = header.size() == kHeader.size();
    if (header.size() != kHeader.size() && header.size() != kHeader.size() - 1)
        row_error(path, 1, "expected 8 or 9 columns in header");
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] != kHeader[i]) row_error(path, 1, "unexpected header column '" + header[i] + "'");

    Manifest m;
    m.base_dir = fs::path(path).parent_path().string();

    std::set<std::string> seen;
    for (size_t i = 1; i < rows.size(); ++i) {
        const size_t line = i + 1;
        const auto& row = rows[i];
        if (row.size() != header.size())
            row_error(path, line, "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(row.size()));
        Record r;
        try {
            r.patient_id = row[0];
            r.sex = parse_sex(row[1]);
            r.age = row[2].empty() ? -1 : parse_nonneg_int(row[2], "age");
            r.cxr_path = row[3];
            r.lung_mask_path = row[4];
            r.tb_mask_path = row[5];
            if (!row[6].empty()) r.native_width = parse_nonneg_int(row[6], "width");
            if (!row[7].empty()) r.native_height = parse_nonneg_int(row[7], "height");
            if (has_split_col) r.split = parse_split(row[8]);
        } catch (const std::exception& e) {
            row_error(path, line, e.what());
        }
        if (r.patient_id.empty()) row_error(path, line, "empty patient_id");
        if (!seen.insert(r.patient_id).second)
            row_error(path, line, "duplicate patient_id '" + r.patient_id + "'");
        if (r.cxr_path.empty() || r.tb_mask_path.empty())
            row_error(path, line, "cxr_path and tb_mask_path are required");

        if (check_files) {
            for (const std::string* p : {&r.cxr_path, &r.lung_mask_path, &r.tb_mask_path}) {
                if (p->empty()) continue;
                if (!fs::exists(m.resolve(*p)))
                    row_error(path, line, "referenced file does not exist: " + *p);
            }
            if (r.native_width == 0 || r.native_height == 0) {
                const auto [w, h] = png_dimensions(m.resolve(r.cxr_path));
                r.native_width = w;
                r.native_height = h;
            }
        } else if (r.native_width == 0 || r.native_height == 0) {
            row_error(path, line, "width/height required when file checking is off");
        }
        m.records.push_back(std::move(r));
    }
    if (m.records.empty()) throw std::runtime_error(path + ": manifest has no records");
    return m;
}

void save_manifest(const Manifest& m, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back(kHeader);
    for (const Record& r : m.records) {
        rows.push_back({r.patient_id, r.sex == Sex::Unknown ? "" : to_string(r.sex),
                        r.age < 0 ? "" : std::to_string(r.age), r.cxr_path, r.lung_mask_path,
                        r.tb_mask_path, std::to_string(r.native_width),
                        std::to_string(r.native_height), to_string(r.split)});
    }
    write_csv(path, rows);
}

BinaryMask binarize(const GrayImage& img, double cut) {
    if (cut < 0.0 || cut > 1.0) throw std::invalid_argument("binarize: cut must be in [0,1]");
    BinaryMask out(img.width, img.height);
    for (size_t i = 0; i < img.pixels.size(); ++i) out.bits[i] = img.pixels[i] >= cut ? 1 : 0;
    return out;
}

SplitSizes split_sizes(size_t n, const SplitRatios& ratios) {
    if (ratios.train <= 0.0 || ratios.val <= 0.0 || ratios.test <= 0.0)
        throw std::invalid_argument("split ratios must be positive");
    if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
        throw std::invalid_argument("split ratios must sum to 1");
    if (n < 3) throw std::invalid_argument("need at least 3 records to split");
    SplitSizes s;
    s.train = static_cast<size_t>(std::llround(ratios.train * static_cast<double>(n)));
    s.val = static_cast<size_t>(std::llround(ratios.val * static_cast<double>(n)));
    if (s.train + s.val > n)
        throw std::invalid_argument("split ratios round past the cohort size");
    s.test = n - s.train - s.val;
    return s;
}

Manifest patient_split(const Manifest& m, const SplitRatios& ratios, uint64_t seed) {
    const SplitSizes sizes = split_sizes(m.records.size(), ratios);

    std::vector<size_t> order(m.records.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    SplitMix64 rng(seed);
    fisher_yates(order, rng);

    Manifest out = m;
    out.seed = seed;
    for (size_t pos = 0; pos < order.size(); ++pos) {
        SplitClass s = SplitClass::Test;
        if (pos < sizes.train)
            s = SplitClass::Train;
        else if (pos < sizes.train + sizes.val)
            s = SplitClass::Val;
        out.records[order[pos]].split = s;
    }
    return out;
}

namespace {

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

// Sample standard deviation (divisor n-1); sd = 0 when fewer than 2 values.
MeanSd mean_sd(const std::vector<double>& v) {
    MeanSd r;
    if (v.empty()) return r;
    double sum = 0.0;
    for (double x : v) sum += x;
    r.mean = sum / static_cast<double>(v.size());
    if (v.size() < 2) return r;
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return r;
}

}  // namespace

CohortStats cohort_stats_from_dims(const std::vector<const Record*>& records,
                                   const std::vector<std::pair<int, int>>& dims) {
    if (records.empty()) throw std::invalid_argument("cohort_stats: empty selection");
    if (records.size() != dims.size())
        throw std::invalid_argument("cohort_stats: dims not aligned with records");

    std::vector<double> widths, heights, ages_m, ages_f;
    for (size_t i = 0; i < records.size(); ++i) {
        widths.push_back(static_cast<double>(dims[i].first));
        heights.push_back(static_cast<double>(dims[i].second));
        if (records[i]->age >= 0) {
            if (records[i]->sex == Sex::Male) ages_m.push_back(records[i]->age);
            if (records[i]->sex == Sex::Female) ages_f.push_back(records[i]->age);
        }
    }

    CohortStats st;
    st.n = records.size();
    const MeanSd w = mean_sd(widths), h = mean_sd(heights);
    const MeanSd am = mean_sd(ages_m), af = mean_sd(ages_f);
    st.mean_width = w.mean;
    st.sd_width = w.sd;
    st.mean_height = h.mean;
    st.sd_height = h.sd;
    st.n_age_m = ages_m.size();
    st.n_age_f = ages_f.size();
    st.mean_age_m = am.mean;
    st.sd_age_m = am.sd;
    st.mean_age_f = af.mean;
    st.sd_age_f = af.sd;
    st.aspect_ratio = st.mean_height > 0.0 ? st.mean_width / st.mean_height : 0.0;
    return st;
}

CohortStats cohort_stats(const Manifest& m, StatsSelection which) {
    std::vector<const Record*> recs;
    for (const Record& r : m.records) recs.push_back(&r);
    if (recs.empty()) throw std::invalid_argument("cohort_stats: empty selection");

    std::vector<std::pair<int, int>> dims;
    dims.reserve(recs.size());
    for (const Record* r : recs) {
        if (which == StatsSelection::Original) {
            dims.emplace_back(r->native_width, r->native_height);
        } else {
            if (!r->has_lung_mask())
                throw std::runtime_error("cohort_stats: record '" + r->patient_id +
                                         "' has no lung mask");
            const GrayImage lung = read_gray_png(m.resolve(r->lung_mask_path));
            const BBox box = lung_bbox(binarize(lung, 0.5));
            dims.emplace_back(box.w, box.h);
        }
    }
    return cohort_stats_from_dims(recs, dims);
}

GrayImage cohort_heatmap(const std::vector<BinaryMask>& masks, int side) {
    if (masks.empty()) throw std::invalid_argument("cohort_heatmap: empty mask list");
    if (side < 1) throw std::invalid_argument("cohort_heatmap: side must be >= 1");

    GrayImage acc(side, side, 0.0);
    for (const BinaryMask& m : masks) {
        const GrayImage scaled = resample_bicubic(m.to_gray(), side, side);
        for (size_t i = 0; i < acc.pixels.size(); ++i) acc.pixels[i] += scaled.pixels[i];
    }
    const double k = static_cast<double>(masks.size());
    for (double& v : acc.pixels) v /= k;

    const auto [mn_it, mx_it] = std::minmax_element(acc.pixels.begin(), acc.pixels.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mx == mn) {
        std::fill(acc.pixels.begin(), acc.pixels.end(), 0.0);
        return acc;
    }
    for (double& v : acc.pixels) v = (v - mn) / (mx - mn);
    return acc;
}

}  // namespace maskpipe
