#ifndef TRIFUSE_IMAGE_HPP
#define TRIFUSE_IMAGE_HPP

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace trifuse {

/// Dense row-major raster of scalar samples. Row i, column j addresses the
/// pixel at (x=j, y=i); memory order matches the on-disk scanline order.
template <typename Scalar>
using PlaneT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Plane = PlaneT<double>;

/// Nominal display range of the samples, e.g. (0, 255) for 8-bit sources.
struct ValueRange {
    double lo = 0.0;
    double hi = 255.0;

    double span() const { return hi - lo; }
    bool operator==(const ValueRange&) const = default;
};

/// Single-channel image. Samples are real-valued; quantization to integer
/// levels happens only at encode time.
struct Image {
    Plane px;
    ValueRange range;

    Image() = default;
    Image(Plane p, ValueRange r = {}) : px(std::move(p)), range(r) {}

    static Image constant(int width, int height, double value, ValueRange r = {}) {
        return Image(Plane::Constant(height, width, value), r);
    }

    int width() const { return static_cast<int>(px.cols()); }
    int height() const { return static_cast<int>(px.rows()); }
    long pixels() const { return px.size(); }

    double operator()(int row, int col) const { return px(row, col); }
    double& operator()(int row, int col) { return px(row, col); }

    bool finite() const { return px.isFinite().all(); }
    bool same_size(const Image& o) const {
        return width() == o.width() && height() == o.height();
    }
};

/// Registered three-plane color image (R, G, B share dimensions and range).
struct ColorImage {
    Plane r, g, b;
    ValueRange range;

    int width() const { return static_cast<int>(r.cols()); }
    int height() const { return static_cast<int>(r.rows()); }

    const Plane& plane(int i) const { return i == 0 ? r : (i == 1 ? g : b); }
    Plane& plane(int i) { return i == 0 ? r : (i == 1 ? g : b); }
};

enum class ThermalBand { LWIR, MWIR };

/// One registered multiband record: the unit of work for fusion and scoring.
struct Sample {
    std::string id;
    ColorImage rgb;
    Image thermal;
    ThermalBand band = ThermalBand::LWIR;
    std::optional<Image> syn_swir;
    std::optional<Image> real_swir;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace trifuse

#endif
