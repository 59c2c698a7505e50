#ifndef TRIFUSE_CLAHE_HPP
#define TRIFUSE_CLAHE_HPP

#include "trifuse/image.hpp"

#include <cstdint>
#include <vector>

namespace trifuse {

struct ClaheConfig {
    int tile_rows = 8;
    int tile_cols = 8;
    double clip_limit = 2.0;  // multiple of the uniform bin height
    int bins = 256;
};

/// Per-tile lookup: bin index of an input level -> output level. Monotone
/// non-decreasing by construction.
struct TileMapping {
    std::vector<double> lut;

    bool monotone() const {
        for (std::size_t k = 1; k < lut.size(); ++k)
            if (lut[k] < lut[k - 1]) return false;
        return true;
    }
};

/// Clip histogram bins at ceil(clip_limit * total / bins) and push the excess
/// back uniformly; bulk passes first, then one count at a time from bin 0,
/// skipping bins already at the ceiling. Total mass is preserved exactly.
std::vector<std::uint64_t> clip_histogram(std::vector<std::uint64_t> hist, double clip_limit);

/// Equalization lookup from a (clipped) histogram:
///   lut[k] = round((cdf[k] - cdf_min) / (total - cdf_min) * (hi - lo)) + lo.
/// A single-level histogram degenerates to the identity mapping.
TileMapping build_tile_mapping(const std::vector<std::uint64_t>& hist, ValueRange range);

/// Bin index of a sample under linear level bucketing.
int level_bin(double v, ValueRange range, int bins);

/// The per-tile lookups clahe() blends, row-major over the tile grid.
std::vector<TileMapping> clahe_tile_mappings(const Image& img, const ClaheConfig& cfg);

/// Contrast-limited adaptive histogram equalization: per-tile clipped
/// equalization lookups blended bilinearly between the four nearest tile
/// centers. Output value range equals the input range.
Image clahe(const Image& img, const ClaheConfig& cfg);

/// Contrast-expanded proxy band derived from a thermal image: structural,
/// not spectral. Currently clahe() with the given configuration.
Image synthesize_swir(const Image& thermal, const ClaheConfig& cfg = {});

/// Convenience: fill sample.syn_swir from sample.thermal.
void attach_syn_swir(Sample& sample, const ClaheConfig& cfg = {});

}  // namespace trifuse

#endif
