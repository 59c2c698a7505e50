#ifndef TRIFUSE_IMAGE_OPS_HPP
#define TRIFUSE_IMAGE_OPS_HPP

#include "trifuse/image.hpp"

namespace trifuse {

/// BT.601 luminance: Y = 0.299 R + 0.587 G + 0.114 B.
Image to_luminance(const ColorImage& rgb);

/// Bilinear resampling with corner-aligned sampling: source position of
/// output pixel i is i * (src-1) / (dst-1). Value range is preserved.
Image resize_bilinear(const Image& img, int width, int height);
ColorImage resize_bilinear(const ColorImage& img, int width, int height);

struct SobelResult {
    Plane gx, gy, magnitude;
};

/// Unnormalized 3x3 Sobel responses with replicate border handling.
SobelResult sobel_gradient(const Plane& img);
inline SobelResult sobel_gradient(const Image& img) { return sobel_gradient(img.px); }

/// Replicate-pad `p` by `r` pixels on every side.
Plane replicate_pad(const Plane& p, int r);

/// Separable Gaussian filter, replicate borders. `radius` taps each side.
Plane gaussian_filter(const Plane& p, double sigma, int radius);

/// Normalized Gaussian taps for one axis.
Eigen::VectorXd gaussian_kernel(double sigma, int radius);

/// Box mean over (2r+1)^2 windows clipped to the image, via integral image.
/// Border windows are normalized by their actual pixel count.
Plane box_mean(const Plane& p, int radius);

/// 3x3 Laplacian [0 1 0; 1 -4 1; 0 1 0], replicate borders.
Plane laplacian3(const Plane& p);

/// Round half away from zero, elementwise.
Plane round_half_away(const Plane& p);

/// Clamp samples to the image's declared range; returns the largest absolute
/// excursion outside the range seen before clamping.
double clamp_to_range(Image& img);

/// Linearly map samples onto (0, 255) and optionally quantize to integer
/// levels. Identity for images already in 8-bit range (modulo quantization).
Image to_common8(const Image& img, bool quantize);

/// Replace the luminance of `rgb` with `y` through BT.601 YCbCr, keeping the
/// source chroma. `y` and `rgb` must be registered and share a range.
ColorImage reattach_chroma(const ColorImage& rgb, const Image& y);

}  // namespace trifuse

#endif
