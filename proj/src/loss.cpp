#include "trifuse/loss.hpp"

#include "trifuse/image_ops.hpp"

#include <cmath>

namespace trifuse {

namespace {

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Adjoint of the replicate-padded 3x3 Sobel responses.
Plane sobel_x_adjoint(const Plane& dy) {
    const int h = int(dy.rows()), w = int(dy.cols());
    Plane dpad = Plane::Zero(h + 2, w + 2);
    dpad.block(0, 2, h, w) += dy;
    dpad.block(1, 2, h, w) += 2.0 * dy;
    dpad.block(2, 2, h, w) += dy;
    dpad.block(0, 0, h, w) -= dy;
    dpad.block(1, 0, h, w) -= 2.0 * dy;
    dpad.block(2, 0, h, w) -= dy;
    Plane out = Plane::Zero(h, w);
    for (int i = 0; i < h + 2; ++i) {
        const int si = std::clamp(i - 1, 0, h - 1);
        for (int j = 0; j < w + 2; ++j) out(si, std::clamp(j - 1, 0, w - 1)) += dpad(i, j);
    }
    return out;
}

Plane sobel_y_adjoint(const Plane& dy) {
    const int h = int(dy.rows()), w = int(dy.cols());
    Plane dpad = Plane::Zero(h + 2, w + 2);
    dpad.block(2, 0, h, w) += dy;
    dpad.block(2, 1, h, w) += 2.0 * dy;
    dpad.block(2, 2, h, w) += dy;
    dpad.block(0, 0, h, w) -= dy;
    dpad.block(0, 1, h, w) -= 2.0 * dy;
    dpad.block(0, 2, h, w) -= dy;
    Plane out = Plane::Zero(h, w);
    for (int i = 0; i < h + 2; ++i) {
        const int si = std::clamp(i - 1, 0, h - 1);
        for (int j = 0; j < w + 2; ++j) out(si, std::clamp(j - 1, 0, w - 1)) += dpad(i, j);
    }
    return out;
}

}  // namespace

double semantic_loss(const std::vector<Tensor>& logits, const LabelMap& labels,
                     const LossWeights& w, std::vector<Tensor>* d_logits) {
    require(logits.size() >= 2, "semantic_loss: need at least two branches");
    require(w.alpha >= 0 && w.beta >= 0 && w.gamma >= 0 &&
                (w.alpha > 0 || w.beta > 0 || w.gamma > 0),
            "semantic_loss: weights must be nonnegative with at least one positive");
    const int k = logits[0].channels();
    const int h = logits[0].height(), ww = logits[0].width();
    for (const auto& l : logits)
        require(l.same_shape(logits[0]), "semantic_loss: logit shapes differ");
    require(int(labels.rows()) == h && int(labels.cols()) == ww,
            "semantic_loss: label map size mismatch");

    if (d_logits) {
        d_logits->clear();
        for (const auto& l : logits) d_logits->push_back(Tensor::zeros(l.shape));
    }
    const double n = double(h) * ww;
    double loss = 0.0;

    // Cross-entropy on the first two branches (weights alpha, beta).
    const double ce_w[2] = {w.alpha, w.beta};
    for (int m = 0; m < 2; ++m) {
        if (ce_w[m] == 0.0) continue;
        double ce = 0.0;
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < ww; ++j) {
                const int y = labels(i, j);
                require(y >= 0 && y < k, "semantic_loss: label out of range");
                double maxv = logits[std::size_t(m)].chan(0)(i, j);
                for (int c = 1; c < k; ++c)
                    maxv = std::max(maxv, logits[std::size_t(m)].chan(c)(i, j));
                double denom = 0.0;
                for (int c = 0; c < k; ++c)
                    denom += std::exp(logits[std::size_t(m)].chan(c)(i, j) - maxv);
                const double logden = std::log(denom) + maxv;
                ce += logden - logits[std::size_t(m)].chan(y)(i, j);
                if (d_logits) {
                    for (int c = 0; c < k; ++c) {
                        const double p =
                            std::exp(logits[std::size_t(m)].chan(c)(i, j) - logden);
                        (*d_logits)[std::size_t(m)].chan(c)(i, j) +=
                            ce_w[m] * (p - (c == y ? 1.0 : 0.0)) / n;
                    }
                }
            }
        loss += ce_w[m] * ce / n;
    }

    // Pairwise consistency: mean squared logit discrepancy over branch pairs.
    if (w.gamma > 0.0) {
        const int branches = int(logits.size());
        int pairs = 0;
        for (int a = 0; a < branches; ++a)
            for (int b = a + 1; b < branches; ++b) ++pairs;
        const double numel = double(logits[0].size());
        for (int a = 0; a < branches; ++a)
            for (int b = a + 1; b < branches; ++b) {
                const Eigen::VectorXd diff =
                    logits[std::size_t(a)].data - logits[std::size_t(b)].data;
                loss += w.gamma * diff.squaredNorm() / (numel * pairs);
                if (d_logits) {
                    const Eigen::VectorXd g = 2.0 * w.gamma / (numel * pairs) * diff;
                    (*d_logits)[std::size_t(a)].data += g;
                    (*d_logits)[std::size_t(b)].data -= g;
                }
            }
    }
    return loss;
}

double fusion_recon_loss(const Image& fused, const Sample& sample, Plane* d_fused) {
    std::vector<Plane> sources;
    sources.push_back(to_luminance(sample.rgb).px);
    sources.push_back(sample.thermal.px);
    if (sample.syn_swir) sources.push_back(sample.syn_swir->px);
    if (sample.real_swir) sources.push_back(sample.real_swir->px);
    for (const auto& s : sources)
        require(s.rows() == fused.px.rows() && s.cols() == fused.px.cols(),
                "fusion_recon_loss: source not registered with fused");

    const int h = fused.height(), w = fused.width();
    const double n = double(h) * w;

    // Intensity target: pixelwise max across sources.
    Plane tmax = sources[0];
    for (std::size_t s = 1; s < sources.size(); ++s) tmax = tmax.max(sources[s]);

    // Gradient target: Sobel responses of the locally strongest source.
    std::vector<SobelResult> grads;
    grads.reserve(sources.size());
    for (const auto& s : sources) grads.push_back(sobel_gradient(s));
    Plane tgx(h, w), tgy(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            std::size_t best = 0;
            for (std::size_t s = 1; s < grads.size(); ++s)
                if (grads[s].magnitude(i, j) > grads[best].magnitude(i, j)) best = s;
            tgx(i, j) = grads[best].gx(i, j);
            tgy(i, j) = grads[best].gy(i, j);
        }

    const SobelResult gf = sobel_gradient(fused.px);
    const Plane diff = fused.px - tmax;
    const Plane dgx = gf.gx - tgx;
    const Plane dgy = gf.gy - tgy;
    const double intensity = diff.abs().sum() / n;
    const double gradient = (dgx.abs().sum() + dgy.abs().sum()) / (2.0 * n);

    if (d_fused) {
        Plane d = diff.unaryExpr([](double v) { return sgn(v); }) / n;
        d += sobel_x_adjoint(dgx.unaryExpr([](double v) { return sgn(v); }) / (2.0 * n));
        d += sobel_y_adjoint(dgy.unaryExpr([](double v) { return sgn(v); }) / (2.0 * n));
        *d_fused = std::move(d);
    }
    return intensity + gradient;
}

double recon_loss_with_grad(const Sample& sample, const ModelParams& p, ModelParams* grads) {
    ForwardCache cache;
    const ForwardResult r = forward(sample, p, &cache);
    Plane d_fused;
    const double loss = fusion_recon_loss(r.fused, sample, grads ? &d_fused : nullptr);
    if (grads) backward(cache, p, Plane(d_fused * cache.out_span), grads);
    return loss;
}

double semantic_loss_with_grad(const Sample& sample, const ModelParams& p, int classes,
                               const LabelMap& labels, const LossWeights& w,
                               ModelParams* grads) {
    const std::vector<Tensor> inputs = model_inputs(sample, p.config);
    SemanticProbeCache cache;
    const std::vector<Tensor> logits = semantic_probe(inputs, p, classes, &cache);
    std::vector<Tensor> d_logits;
    const double loss = semantic_loss(logits, labels, w, grads ? &d_logits : nullptr);
    if (grads) semantic_probe_backward(cache, p, d_logits, grads);
    return loss;
}

}  // namespace trifuse
