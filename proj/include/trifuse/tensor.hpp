#ifndef TRIFUSE_TENSOR_HPP
#define TRIFUSE_TENSOR_HPP

#include "trifuse/image.hpp"

#include <numeric>
#include <vector>

namespace trifuse {

/// Dense N-dimensional real array, row-major. Rank-3 tensors are (channels,
/// height, width); rank-4 convolution kernels are (out, in, kh, kw).
struct Tensor {
    std::vector<int> shape;
    Eigen::VectorXd data;

    Tensor() = default;

    static Tensor zeros(std::vector<int> s) {
        Tensor t;
        t.shape = std::move(s);
        t.data = Eigen::VectorXd::Zero(t.count(t.shape));
        return t;
    }

    static long count(const std::vector<int>& s) {
        return std::accumulate(s.begin(), s.end(), 1L, std::multiplies<long>());
    }

    long size() const { return data.size(); }
    int dim(int i) const { return shape[std::size_t(i)]; }

    // Rank-3 accessors.
    int channels() const { return dim(0); }
    int height() const { return dim(1); }
    int width() const { return dim(2); }

    Eigen::Map<Plane> chan(int c) {
        return Eigen::Map<Plane>(data.data() + long(c) * height() * width(), height(), width());
    }
    Eigen::Map<const Plane> chan(int c) const {
        return Eigen::Map<const Plane>(data.data() + long(c) * height() * width(), height(),
                                       width());
    }

    // Rank-4 kernel accessor.
    double& at4(int o, int c, int i, int j) {
        return data[((long(o) * dim(1) + c) * dim(2) + i) * dim(3) + j];
    }
    double at4(int o, int c, int i, int j) const {
        return data[((long(o) * dim(1) + c) * dim(2) + i) * dim(3) + j];
    }

    bool finite() const { return data.array().isFinite().all(); }
    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

/// Pack a single plane (or planes) into rank-3 tensors.
Tensor tensor_from_plane(const Plane& p);
Tensor tensor_from_planes(const std::vector<const Plane*>& planes);
Plane plane_from_tensor(const Tensor& t, int c = 0);

/// Concatenate rank-3 tensors along the channel axis.
Tensor concat_channels(const std::vector<const Tensor*>& parts);

void check_finite(const Tensor& t, const char* what);

}  // namespace trifuse

#endif
