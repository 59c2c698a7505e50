#ifndef TRIFUSE_METRICS_HPP
#define TRIFUSE_METRICS_HPP

#include "trifuse/image.hpp"

#include <string>
#include <utility>
#include <vector>

namespace trifuse {

struct MetricOptions {
    /// Quantize inputs to integer 8-bit levels before scoring (matches the
    /// behaviour of common published evaluation kits).
    bool quantize = true;
};

/// Shannon entropy in bits over a 256-bin level histogram.
double entropy(const Image& img);

/// Mutual information in bits over a 256x256 joint level histogram.
double mutual_information(const Image& a, const Image& b);

/// Fusion MI decomposition: MI(a, fused) + MI(b, fused).
double fusion_mutual_information(const Image& a, const Image& b, const Image& fused);

/// Population standard deviation.
double std_dev(const Image& img);

/// sqrt(SF_row^2 + SF_col^2) from first differences along rows and columns,
/// normalized by M(N-1) and (M-1)N respectively.
double spatial_frequency(const Image& img);

/// Mean structural similarity over sliding 11x11 Gaussian windows (sigma 1.5),
/// C1 = (0.01 L)^2, C2 = (0.03 L)^2 with L the value-range span.
double ssim(const Image& a, const Image& b);

struct QabfResult {
    double score = 0.0;
    bool defined = true;  // false when total edge weight is zero
};

/// Gradient-based edge preservation score in [0,1]. One source gives the
/// weighted edge-preservation mean for that source; two sources the classic
/// two-input score; three sources the mean of the three pairwise two-input
/// scores. Sigmoid factors are scaled so exact preservation scores
/// gamma_g * gamma_a (~0.9873).
QabfResult qabf(const std::vector<Image>& sources, const Image& fused);

/// Pixel-domain visual information fidelity over 4 dyadic scales,
/// sigma_n^2 = 2. Can exceed 1 under contrast amplification.
double vif(const Image& ref, const Image& dist);

struct SourceScores {
    double mi = 0.0, ssim = 0.0, qabf = 0.0, vif = 0.0;
};

/// Per-image fusion quality record. Full-reference fields are the arithmetic
/// mean of their per_source entries.
struct MetricReport {
    std::string image_id;
    std::string method;
    double en = 0.0, sd = 0.0, sf = 0.0;
    double mi = 0.0, vif = 0.0, qabf = 0.0, ssim = 0.0;
    std::vector<std::pair<std::string, SourceScores>> per_source;
    double wall_time_ms = 0.0;
    std::vector<std::string> warnings;
};

/// Score a fused image against an explicit (name, image) source list.
MetricReport score_sources(const std::vector<std::pair<std::string, Image>>& sources,
                           const Image& fused, const MetricOptions& opt = {});

/// Score against every modality the sample provides: RGB luminance, thermal,
/// and SynSWIR / real SWIR when present.
MetricReport score_fused(const Sample& sample, const Image& fused,
                         const MetricOptions& opt = {});

/// Pinned CSV schema. One row per (image_id, method).
std::string metric_csv_header();
std::string metric_csv_row(const MetricReport& r);
std::string per_source_csv_header();
std::vector<std::string> per_source_csv_rows(const MetricReport& r);

}  // namespace trifuse

#endif
