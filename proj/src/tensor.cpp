#include "trifuse/tensor.hpp"

#include <stdexcept>

namespace trifuse {

Tensor tensor_from_plane(const Plane& p) {
    Tensor t = Tensor::zeros({1, int(p.rows()), int(p.cols())});
    t.chan(0) = p;
    return t;
}

Tensor tensor_from_planes(const std::vector<const Plane*>& planes) {
    require(!planes.empty(), "tensor_from_planes: empty");
    Tensor t = Tensor::zeros(
        {int(planes.size()), int(planes[0]->rows()), int(planes[0]->cols())});
    for (std::size_t c = 0; c < planes.size(); ++c) t.chan(int(c)) = *planes[c];
    return t;
}

Plane plane_from_tensor(const Tensor& t, int c) { return t.chan(c); }

Tensor concat_channels(const std::vector<const Tensor*>& parts) {
    int total = 0;
    for (const Tensor* p : parts) total += p->channels();
    Tensor out = Tensor::zeros({total, parts[0]->height(), parts[0]->width()});
    int at = 0;
    for (const Tensor* p : parts)
        for (int c = 0; c < p->channels(); ++c) out.chan(at++) = p->chan(c);
    return out;
}

void check_finite(const Tensor& t, const char* what) {
    if (!t.finite()) throw std::runtime_error(std::string(what) + ": non-finite values");
}

}  // namespace trifuse
