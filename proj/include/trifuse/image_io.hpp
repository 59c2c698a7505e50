#ifndef TRIFUSE_IMAGE_IO_HPP
#define TRIFUSE_IMAGE_IO_HPP

#include "trifuse/image.hpp"

#include <filesystem>
#include <variant>

namespace trifuse {

using LoadedImage = std::variant<Image, ColorImage>;

/// Decode a PNG (8/16-bit grayscale, 8-bit RGB) or binary PNM (P5/P6) file.
/// The value range is set from the stored bit depth: (0,255) or (0,65535).
/// Throws std::runtime_error on unsupported or truncated input.
LoadedImage load_image(const std::filesystem::path& path);

/// Grayscale view of a decoded file; color inputs collapse to luminance.
Image as_gray(const LoadedImage& img);

/// Encode a single plane. Format follows the extension (.png/.pgm); samples
/// are clamped to the value range and rounded half away from zero. Ranges
/// wider than 255 are written as 16-bit.
void save_image(const Image& img, const std::filesystem::path& path);

/// Encode a three-plane image (.png/.ppm), 8-bit.
void save_image(const ColorImage& img, const std::filesystem::path& path);

}  // namespace trifuse

#endif
