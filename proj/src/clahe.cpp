#include "trifuse/clahe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace trifuse {

std::vector<std::uint64_t> clip_histogram(std::vector<std::uint64_t> hist, double clip_limit) {
    require(!hist.empty(), "clip_histogram: empty histogram");
    const std::size_t bins = hist.size();
    const std::uint64_t total = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
    if (total == 0) return hist;
    const std::uint64_t ceiling =
        std::uint64_t(std::ceil(clip_limit * double(total) / double(bins)));

    std::uint64_t excess = 0;
    for (auto& h : hist) {
        if (h > ceiling) {
            excess += h - ceiling;
            h = ceiling;
        }
    }
    // Bulk passes: spread floor(excess/bins) onto every bin, re-clip, repeat.
    while (excess >= bins) {
        const std::uint64_t per = excess / bins;
        excess -= per * bins;
        for (auto& h : hist) {
            h += per;
            if (h > ceiling) {
                excess += h - ceiling;
                h = ceiling;
            }
        }
    }
    // Residual: one count per bin from bin 0, skipping bins at the ceiling.
    std::size_t i = 0;
    while (excess > 0) {
        if (hist[i] < ceiling) {
            ++hist[i];
            --excess;
        }
        i = (i + 1) % bins;
    }
    return hist;
}

TileMapping build_tile_mapping(const std::vector<std::uint64_t>& hist, ValueRange range) {
    const std::size_t bins = hist.size();
    const std::uint64_t total = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
    require(total > 0, "build_tile_mapping: all-zero histogram");

    std::uint64_t cdf = 0, cdf_min = 0;
    for (auto h : hist)
        if (h > 0) {
            cdf_min = h;
            break;
        }
    // Walk to the first nonzero cdf value.
    TileMapping m;
    m.lut.resize(bins);
    if (total == cdf_min) {
        // Single occupied bin: the equalization denominator vanishes. Use the
        // identity mapping so constant tiles stay constant.
        for (std::size_t k = 0; k < bins; ++k)
            m.lut[k] = range.lo + double(k) * range.span() / double(bins - 1);
        return m;
    }
    const double denom = double(total - cdf_min);
    for (std::size_t k = 0; k < bins; ++k) {
        cdf += hist[k];
        const double v = cdf < cdf_min ? 0.0 : double(cdf - cdf_min) / denom * range.span();
        m.lut[k] = std::floor(v + 0.5) + range.lo;
    }
    return m;
}

int level_bin(double v, ValueRange range, int bins) {
    const double levels = range.span() + 1.0;  // integer levels in range
    int b = int(std::floor((v - range.lo) * double(bins) / levels));
    return std::clamp(b, 0, bins - 1);
}

namespace {

struct TileGrid {
    std::vector<int> row_start, row_end;  // [start, end) per tile row
    std::vector<int> col_start, col_end;
    std::vector<double> row_center, col_center;
};

TileGrid make_grid(int h, int w, int rows, int cols) {
    TileGrid g;
    for (int r = 0; r < rows; ++r) {
        g.row_start.push_back(int(std::int64_t(r) * h / rows));
        g.row_end.push_back(int(std::int64_t(r + 1) * h / rows));
        g.row_center.push_back(0.5 * (g.row_start[r] + g.row_end[r] - 1));
    }
    for (int c = 0; c < cols; ++c) {
        g.col_start.push_back(int(std::int64_t(c) * w / cols));
        g.col_end.push_back(int(std::int64_t(c + 1) * w / cols));
        g.col_center.push_back(0.5 * (g.col_start[c] + g.col_end[c] - 1));
    }
    return g;
}

// Index of the tile whose center is at or below `pos`, and the blend weight
// toward the next tile. Outside the first/last center the nearer mapping is
// used alone (weight clamps to 0 or 1).
void locate(const std::vector<double>& centers, double pos, int* i0, double* t) {
    const int n = int(centers.size());
    if (n == 1 || pos <= centers.front()) {
        *i0 = 0;
        *t = 0.0;
        return;
    }
    if (pos >= centers.back()) {
        *i0 = n - 2 >= 0 ? n - 2 : 0;
        *t = 1.0;
        return;
    }
    int i = 0;
    while (i + 1 < n && centers[i + 1] <= pos) ++i;
    *i0 = i;
    *t = (pos - centers[i]) / (centers[i + 1] - centers[i]);
}

}  // namespace

std::vector<TileMapping> clahe_tile_mappings(const Image& img, const ClaheConfig& cfg) {
    require(cfg.tile_rows >= 1 && cfg.tile_cols >= 1, "clahe: tile grid must be >= 1x1");
    require(cfg.clip_limit >= 1.0, "clahe: clip limit must be >= 1");
    require(cfg.bins >= 2, "clahe: need at least 2 bins");
    require(img.height() >= cfg.tile_rows && img.width() >= cfg.tile_cols,
            "clahe: image smaller than tile grid");
    const TileGrid grid = make_grid(img.height(), img.width(), cfg.tile_rows, cfg.tile_cols);
    std::vector<TileMapping> maps(std::size_t(cfg.tile_rows) * cfg.tile_cols);
    for (int tr = 0; tr < cfg.tile_rows; ++tr)
        for (int tc = 0; tc < cfg.tile_cols; ++tc) {
            std::vector<std::uint64_t> hist(std::size_t(cfg.bins), 0);
            for (int i = grid.row_start[std::size_t(tr)]; i < grid.row_end[std::size_t(tr)]; ++i)
                for (int j = grid.col_start[std::size_t(tc)]; j < grid.col_end[std::size_t(tc)];
                     ++j)
                    ++hist[std::size_t(level_bin(img.px(i, j), img.range, cfg.bins))];
            hist = clip_histogram(std::move(hist), cfg.clip_limit);
            maps[std::size_t(tr) * cfg.tile_cols + tc] = build_tile_mapping(hist, img.range);
        }
    return maps;
}

Image clahe(const Image& img, const ClaheConfig& cfg) {
    const std::vector<TileMapping> maps = clahe_tile_mappings(img, cfg);
    const int h = img.height(), w = img.width();
    const TileGrid grid = make_grid(h, w, cfg.tile_rows, cfg.tile_cols);

    Image out(Plane(h, w), img.range);
    for (int i = 0; i < h; ++i) {
        int r0;
        double ty;
        locate(grid.row_center, double(i), &r0, &ty);
        const int r1 = std::min(r0 + 1, cfg.tile_rows - 1);
        for (int j = 0; j < w; ++j) {
            int c0;
            double tx;
            locate(grid.col_center, double(j), &c0, &tx);
            const int c1 = std::min(c0 + 1, cfg.tile_cols - 1);
            const int bin = level_bin(img.px(i, j), img.range, cfg.bins);
            const double v00 = maps[std::size_t(r0) * cfg.tile_cols + c0].lut[std::size_t(bin)];
            const double v01 = maps[std::size_t(r0) * cfg.tile_cols + c1].lut[std::size_t(bin)];
            const double v10 = maps[std::size_t(r1) * cfg.tile_cols + c0].lut[std::size_t(bin)];
            const double v11 = maps[std::size_t(r1) * cfg.tile_cols + c1].lut[std::size_t(bin)];
            out.px(i, j) = (1.0 - ty) * ((1.0 - tx) * v00 + tx * v01) +
                           ty * ((1.0 - tx) * v10 + tx * v11);
        }
    }
    return out;
}

Image synthesize_swir(const Image& thermal, const ClaheConfig& cfg) {
    return clahe(thermal, cfg);
}

void attach_syn_swir(Sample& sample, const ClaheConfig& cfg) {
    sample.syn_swir = synthesize_swir(sample.thermal, cfg);
}

}  // namespace trifuse
