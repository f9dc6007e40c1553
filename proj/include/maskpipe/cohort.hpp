#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maskpipe/raster.hpp"

namespace maskpipe {

enum class Sex { Male, Female, Unknown };
enum class SplitClass { None, Train, Val, Test };

std::string to_string(Sex s);
std::string to_string(SplitClass s);

struct Record {
    std::string patient_id;
    Sex sex = Sex::Unknown;
    int age = -1;  // years; -1 = unknown
    std::string cxr_path;
    std::string lung_mask_path;  // optional (empty = none)
    std::string tb_mask_path;
    int native_width = 0;
    int native_height = 0;
    SplitClass split = SplitClass::None;

    bool has_lung_mask() const { return !lung_mask_path.empty(); }
};

// Dataset catalog. Paths in the CSV are taken relative to the manifest's
// directory unless absolute.
struct Manifest {
    std::vector<Record> records;
    uint64_t seed = 0;
    std::string base_dir;

    bool has_split() const;
    std::string resolve(const std::string& path) const;
    std::vector<const Record*> subset(SplitClass s) const;
};

// CSV schema (header row, in order):
//   patient_id,sex,age,cxr_path,lung_mask_path,tb_mask_path,width,height,split
// The split column is optional; lung_mask_path and age may be empty. Empty
// width/height are read from the image header. check_files=false skips
// file-existence validation (and then requires explicit dims).
Manifest load_manifest(const std::string& path, bool check_files = true);
void save_manifest(const Manifest& m, const std::string& path);

// bit = 1 iff pixel >= cut (inclusive).
BinaryMask binarize(const GrayImage& img, double cut);

struct SplitRatios {
    double train = 0.7;
    double val = 0.1;
    double test = 0.2;
};

struct SplitSizes {
    size_t train = 0;
    size_t val = 0;
    size_t test = 0;
};

// round(r_train*n), round(r_val*n), remainder.
SplitSizes split_sizes(size_t n, const SplitRatios& ratios);

// Patient ids shuffled by Fisher-Yates over SplitMix64(seed), then cut at the
// split_sizes boundaries. Requires n >= 3.
Manifest patient_split(const Manifest& m, const SplitRatios& ratios, uint64_t seed);

enum class StatsSelection { Original, LungCropped };

struct CohortStats {
    size_t n = 0;
    double mean_width = 0.0, sd_width = 0.0;
    double mean_height = 0.0, sd_height = 0.0;
    size_t n_age_m = 0, n_age_f = 0;
    double mean_age_m = 0.0, sd_age_m = 0.0;
    double mean_age_f = 0.0, sd_age_f = 0.0;
    double aspect_ratio = 0.0;  // mean_width / mean_height
};

// Sample (n-1) standard deviations. LungCropped measures the tight bounding
// box of each record's lung mask and requires one for every record.
CohortStats cohort_stats(const Manifest& m, StatsSelection which);

// As cohort_stats, but over caller-supplied dimensions (no file access).
CohortStats cohort_stats_from_dims(const std::vector<const Record*>& records,
                                   const std::vector<std::pair<int, int>>& dims);

// Masks bicubic-resampled to side x side as intensities, averaged pixelwise,
// then min-max normalized to [0,1]; a constant field maps to all-zeros.
GrayImage cohort_heatmap(const std::vector<BinaryMask>& masks, int side);

}  // namespace maskpipe
