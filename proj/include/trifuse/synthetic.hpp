#ifndef TRIFUSE_SYNTHETIC_HPP
#define TRIFUSE_SYNTHETIC_HPP

#include "trifuse/image.hpp"

#include <cstdint>
#include <vector>

namespace trifuse {

/// Smooth pseudo-random raster in (0,255): a sum of seeded cosine gratings
/// over gentle blobs. `detail` scales the high-frequency content, `noise`
/// adds per-pixel jitter.
Image synthetic_gray(int width, int height, std::uint64_t seed, double detail = 1.0,
                     double noise = 0.0);

/// Registered multiband scene for desk-scale experiments. The thermal plane
/// carries the scene's fine texture at strongly crushed contrast, so a
/// contrast-expanded derived band recovers detail the raw thermal hides.
Sample synthetic_scene(int width, int height, std::uint64_t seed);

/// A deterministic list of scenes with ids scene000, scene001, ...
std::vector<Sample> synthetic_dataset(int count, int width, int height, std::uint64_t seed);

}  // namespace trifuse

#endif
