#include "trifuse/net.hpp"

#include "trifuse/clahe.hpp"
#include "trifuse/image_ops.hpp"
#include "trifuse/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace trifuse {

namespace {

// Accumulate every padded cell back onto its clamped source pixel; adjoint of
// replicate_pad.
Plane fold_padded(const Plane& dp, int r, int h, int w) {
    Plane out = Plane::Zero(h, w);
    for (int i = 0; i < dp.rows(); ++i) {
        const int si = std::clamp(i - r, 0, h - 1);
        for (int j = 0; j < dp.cols(); ++j)
            out(si, std::clamp(j - r, 0, w - 1)) += dp(i, j);
    }
    return out;
}

}  // namespace

namespace {

using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Kernel tensor (O,C,k,k) viewed as an O x (C*k*k) matrix; row-major layout
// makes this a plain reinterpretation.
Eigen::Map<const RowMajorMat> kernel_matrix(const Tensor& w) {
    return Eigen::Map<const RowMajorMat>(w.data.data(), w.dim(0),
                                         long(w.dim(1)) * w.dim(2) * w.dim(3));
}
Eigen::Map<RowMajorMat> kernel_matrix(Tensor& w) {
    return Eigen::Map<RowMajorMat>(w.data.data(), w.dim(0),
                                   long(w.dim(1)) * w.dim(2) * w.dim(3));
}

// Row band heights kept small enough that the patch matrix stays modest.
int conv_band_rows(int h, int w, long k_rows) {
    const long budget = 6L << 20;  // doubles
    const long rows = std::max(1L, budget / std::max(1L, k_rows * w));
    return int(std::min<long>(h, rows));
}

}  // namespace

Tensor conv2d(const Tensor& x, const ConvLayer& layer) {
    const int out_ch = layer.w.dim(0), in_ch = layer.w.dim(1), k = layer.w.dim(2);
    require(k == layer.w.dim(3) && k % 2 == 1, "conv2d: kernel must be square and odd");
    require(in_ch == x.channels(), "conv2d: channel mismatch");
    const int h = x.height(), w = x.width(), r = k / 2;
    const long kk = long(in_ch) * k * k;

    std::vector<Plane> padded;
    padded.reserve(std::size_t(in_ch));
    for (int c = 0; c < in_ch; ++c) padded.push_back(replicate_pad(x.chan(c), r));

    Tensor y = Tensor::zeros({out_ch, h, w});
    const auto wmat = kernel_matrix(layer.w);
    const int band = conv_band_rows(h, w, kk);
    RowMajorMat patches(kk, long(band) * w);
    for (int i0 = 0; i0 < h; i0 += band) {
        const int bh = std::min(band, h - i0);
        const long n = long(bh) * w;
        for (int c = 0; c < in_ch; ++c)
            for (int ki = 0; ki < k; ++ki)
                for (int kj = 0; kj < k; ++kj) {
                    const long row = (long(c) * k + ki) * k + kj;
                    for (int bi = 0; bi < bh; ++bi)
                        patches.block(row, long(bi) * w, 1, w) =
                            padded[std::size_t(c)].block(i0 + bi + ki, kj, 1, w).matrix();
                }
        // One GEMM per band: (O x K) * (K x N).
        RowMajorMat out(out_ch, n);
        out.noalias() = wmat * patches.topLeftCorner(kk, n);
        for (int o = 0; o < out_ch; ++o)
            Eigen::Map<Eigen::VectorXd>(y.data.data() + (long(o) * h + i0) * w, n) =
                out.row(o).transpose().array() + layer.b.data[o];
    }
    check_finite(y, "conv2d");
    return y;
}

void conv2d_backward(const Tensor& x, const ConvLayer& layer, const Tensor& dy, Tensor* dx,
                     ConvLayer* dlayer) {
    const int out_ch = layer.w.dim(0), in_ch = layer.w.dim(1), k = layer.w.dim(2);
    const int h = x.height(), w = x.width(), r = k / 2;
    const long kk = long(in_ch) * k * k;

    std::vector<Plane> padded;
    padded.reserve(std::size_t(in_ch));
    for (int c = 0; c < in_ch; ++c) padded.push_back(replicate_pad(x.chan(c), r));

    std::vector<Plane> dpad;
    if (dx) {
        dpad.reserve(std::size_t(in_ch));
        for (int c = 0; c < in_ch; ++c) dpad.push_back(Plane::Zero(h + 2 * r, w + 2 * r));
    }

    if (dlayer)
        for (int o = 0; o < out_ch; ++o) dlayer->b.data[o] += dy.chan(o).sum();

    const int band = conv_band_rows(h, w, kk);
    RowMajorMat patches(kk, long(band) * w);
    for (int i0 = 0; i0 < h; i0 += band) {
        const int bh = std::min(band, h - i0);
        const long n = long(bh) * w;
        for (int c = 0; c < in_ch; ++c)
            for (int ki = 0; ki < k; ++ki)
                for (int kj = 0; kj < k; ++kj) {
                    const long row = (long(c) * k + ki) * k + kj;
                    for (int bi = 0; bi < bh; ++bi)
                        patches.block(row, long(bi) * w, 1, w) =
                            padded[std::size_t(c)].block(i0 + bi + ki, kj, 1, w).matrix();
                }
        RowMajorMat dyb(out_ch, n);
        for (int o = 0; o < out_ch; ++o)
            dyb.row(o) = Eigen::Map<const Eigen::VectorXd>(
                              dy.data.data() + (long(o) * h + i0) * w, n)
                             .transpose();

        if (dlayer) kernel_matrix(dlayer->w).noalias() += dyb * patches.topLeftCorner(kk, n).transpose();
        if (dx) {
            RowMajorMat dpatch(kk, n);
            dpatch.noalias() = kernel_matrix(layer.w).transpose() * dyb;
            for (int c = 0; c < in_ch; ++c)
                for (int ki = 0; ki < k; ++ki)
                    for (int kj = 0; kj < k; ++kj) {
                        const long row = (long(c) * k + ki) * k + kj;
                        for (int bi = 0; bi < bh; ++bi)
                            dpad[std::size_t(c)].block(i0 + bi + ki, kj, 1, w) +=
                                dpatch.block(row, long(bi) * w, 1, w).array();
                    }
        }
    }
    if (dx)
        for (int c = 0; c < in_ch; ++c) dx->chan(c) += fold_padded(dpad[std::size_t(c)], r, h, w);
}

Tensor lrelu(const Tensor& x) {
    Tensor y = x;
    y.data = x.data.array().max(0.0).matrix() + kLReluSlope * x.data.array().min(0.0).matrix();
    return y;
}

Tensor lrelu_backward(const Tensor& x, const Tensor& dy) {
    Tensor dx = dy;
    for (long i = 0; i < x.size(); ++i)
        if (x.data[i] <= 0.0) dx.data[i] *= kLReluSlope;
    return dx;
}

Tensor laplacian_depthwise(const Tensor& x) {
    Tensor y = Tensor::zeros(x.shape);
    for (int c = 0; c < x.channels(); ++c) y.chan(c) = laplacian3(x.chan(c));
    return y;
}

Tensor laplacian_depthwise_backward(const Tensor& dy) {
    const int h = dy.height(), w = dy.width();
    Tensor dx = Tensor::zeros(dy.shape);
    for (int c = 0; c < dy.channels(); ++c) {
        Plane dpad = Plane::Zero(h + 2, w + 2);
        dpad.block(0, 1, h, w) += dy.chan(c);
        dpad.block(2, 1, h, w) += dy.chan(c);
        dpad.block(1, 0, h, w) += dy.chan(c);
        dpad.block(1, 2, h, w) += dy.chan(c);
        dpad.block(1, 1, h, w) -= 4.0 * dy.chan(c);
        dx.chan(c) = fold_padded(dpad, 1, h, w);
    }
    return dx;
}

// --------------------------------------------------------------- block

Tensor light_grlb(const Tensor& x, const GrlbParams& p, GrlbCache* cache) {
    GrlbCache local;
    GrlbCache& c = cache ? *cache : local;
    c.x = x;
    c.s1_pre = conv2d(x, p.c1);
    c.s1 = lrelu(c.s1_pre);
    c.cat2 = concat_channels({&c.x, &c.s1});
    c.s2_pre = conv2d(c.cat2, p.c2);
    c.s2 = lrelu(c.s2_pre);
    c.cat3 = concat_channels({&c.x, &c.s1, &c.s2});
    Tensor y = conv2d(c.cat3, p.c3);
    require(y.channels() == x.channels(), "light_grlb: gradient branch needs in == out width");
    y.data += laplacian_depthwise(x).data;
    check_finite(y, "light_grlb");
    return y;
}

namespace {

// Split channel gradient of a concatenation back to its parts (accumulating).
void split_channels(const Tensor& dcat, std::vector<Tensor*> parts) {
    int at = 0;
    for (Tensor* p : parts)
        for (int c = 0; c < p->channels(); ++c) p->chan(c) += dcat.chan(at++);
}

}  // namespace

void light_grlb_backward(const GrlbCache& cache, const GrlbParams& p, const Tensor& dy,
                         Tensor* dx, GrlbParams* dp) {
    const int ch = cache.x.channels();
    Tensor d_x = Tensor::zeros(cache.x.shape);
    Tensor d_s1 = Tensor::zeros(cache.s1.shape);
    Tensor d_s2 = Tensor::zeros(cache.s2.shape);

    // Output = conv1x1(cat3) + depthwise laplacian(x).
    Tensor d_cat3 = Tensor::zeros(cache.cat3.shape);
    conv2d_backward(cache.cat3, p.c3, dy, &d_cat3, dp ? &dp->c3 : nullptr);
    d_x.data += laplacian_depthwise_backward(dy).data;
    split_channels(d_cat3, {&d_x, &d_s1, &d_s2});

    Tensor d_s2_pre = lrelu_backward(cache.s2_pre, d_s2);
    Tensor d_cat2 = Tensor::zeros(cache.cat2.shape);
    conv2d_backward(cache.cat2, p.c2, d_s2_pre, &d_cat2, dp ? &dp->c2 : nullptr);
    split_channels(d_cat2, {&d_x, &d_s1});

    Tensor d_s1_pre = lrelu_backward(cache.s1_pre, d_s1);
    conv2d_backward(cache.x, p.c1, d_s1_pre, &d_x, dp ? &dp->c1 : nullptr);

    (void)ch;
    if (dx) dx->data += d_x.data;
}

Tensor encode(const Tensor& x, const EncoderParams& p, EncoderCache* cache) {
    EncoderCache local;
    EncoderCache& c = cache ? *cache : local;
    c.x = x;
    c.lift_pre = conv2d(x, p.lift);
    c.lift_act = lrelu(c.lift_pre);
    c.out = light_grlb(c.lift_act, p.grlb, &c.grlb);
    return c.out;
}

void encode_backward(const EncoderCache& cache, const EncoderParams& p, const Tensor& dy,
                     EncoderParams* dp) {
    Tensor d_lift_act = Tensor::zeros(cache.lift_act.shape);
    light_grlb_backward(cache.grlb, p.grlb, dy, &d_lift_act, dp ? &dp->grlb : nullptr);
    Tensor d_lift_pre = lrelu_backward(cache.lift_pre, d_lift_act);
    conv2d_backward(cache.x, p.lift, d_lift_pre, nullptr, dp ? &dp->lift : nullptr);
}

// ---------------------------------------------------------------- gate

namespace {

Eigen::VectorXd softmax(const Eigen::VectorXd& v) {
    const double m = v.maxCoeff();
    Eigen::VectorXd e = (v.array() - m).exp();
    return e / e.sum();
}

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> as_matrix(const Tensor& t) {
    return Eigen::Map<const RowMat>(t.data.data(), t.dim(0), t.dim(1));
}
Eigen::Map<RowMat> as_matrix(Tensor& t) {
    return Eigen::Map<RowMat>(t.data.data(), t.dim(0), t.dim(1));
}

}  // namespace

Eigen::VectorXd gate(const std::vector<Tensor>& features, const ModelParams& p,
                     GateCache* cache) {
    const int m = int(features.size());
    const int ch = features[0].channels();
    require(m == p.config.branches(), "gate: feature count != branch count");

    GateCache local;
    GateCache& c = cache ? *cache : local;
    c.spatial = long(features[0].height()) * features[0].width();
    c.z.resize(long(m) * ch);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < ch; ++k)
            c.z[long(i) * ch + k] = features[std::size_t(i)].chan(k).mean();

    c.h_pre = as_matrix(p.gate_w1) * c.z;
    c.h = c.h_pre.array().max(0.0) + kLReluSlope * c.h_pre.array().min(0.0);
    c.logits = as_matrix(p.gate_w2) * c.h;
    c.alpha = softmax(c.logits);
    return c.alpha;
}

void gate_backward(const GateCache& cache, const ModelParams& p,
                   const Eigen::VectorXd& d_alpha, std::vector<Tensor>* d_features,
                   ModelParams* grads) {
    // Softmax Jacobian: dlogits = alpha .* (dalpha - <alpha, dalpha>).
    const double inner = cache.alpha.dot(d_alpha);
    const Eigen::VectorXd d_logits =
        (cache.alpha.array() * (d_alpha.array() - inner)).matrix();

    if (grads) as_matrix(grads->gate_w2) += d_logits * cache.h.transpose();
    Eigen::VectorXd d_h = as_matrix(p.gate_w2).transpose() * d_logits;
    Eigen::VectorXd d_h_pre = d_h;
    for (long i = 0; i < d_h_pre.size(); ++i)
        if (cache.h_pre[i] <= 0.0) d_h_pre[i] *= kLReluSlope;
    if (grads) as_matrix(grads->gate_w1) += d_h_pre * cache.z.transpose();

    if (d_features) {
        const Eigen::VectorXd d_z = as_matrix(p.gate_w1).transpose() * d_h_pre;
        const int ch = (*d_features)[0].channels();
        for (std::size_t i = 0; i < d_features->size(); ++i)
            for (int k = 0; k < ch; ++k)
                (*d_features)[i].chan(k) +=
                    Plane::Constant((*d_features)[i].height(), (*d_features)[i].width(),
                                    d_z[long(i) * ch + k] / double(cache.spatial));
    }
}

Tensor fuse_features(const std::vector<Tensor>& features, const Eigen::VectorXd& alpha) {
    require(!features.empty() && long(features.size()) == alpha.size(),
            "fuse_features: weight/feature count mismatch");
    Tensor f = Tensor::zeros(features[0].shape);
    for (std::size_t m = 0; m < features.size(); ++m) {
        require(features[m].same_shape(features[0]), "fuse_features: shape mismatch");
        f.data += alpha[long(m)] * features[m].data;
    }
    return f;
}

Image fuse_and_decode(const std::vector<Tensor>& features, const Eigen::VectorXd& alpha,
                      const ModelParams& p, ValueRange out_range, DecodeCache* cache) {
    DecodeCache local;
    DecodeCache& c = cache ? *cache : local;
    c.fused = fuse_features(features, alpha);
    c.mix_out = conv2d(c.fused, p.mix);
    c.d1_pre = conv2d(c.mix_out, p.dec1);
    c.d1 = lrelu(c.d1_pre);
    c.d2_pre = conv2d(c.d1, p.dec2);
    c.d2 = lrelu(c.d2_pre);
    c.d3_pre = conv2d(c.d2, p.dec3);
    c.tanh_out = c.d3_pre;
    c.tanh_out.data = c.d3_pre.data.array().tanh();
    c.out01 = c.tanh_out;
    c.out01.data = (c.tanh_out.data.array() + 1.0) * 0.5;
    return Image(out_range.lo + out_range.span() * Plane(c.out01.chan(0)), out_range);
}

// ------------------------------------------------------------- pipeline

std::vector<Tensor> model_inputs(const Sample& sample, const ModelConfig& cfg) {
    auto normalized = [](const Plane& p, ValueRange r) -> Plane {
        const double span = r.span() > 0 ? r.span() : 1.0;
        return (p - r.lo) / span;
    };
    std::vector<Tensor> inputs;
    for (int b = 0; b < cfg.branches(); ++b) {
        const int planes = cfg.arities[std::size_t(b)];
        if (b == 0) {
            require(planes == 3, "model_inputs: first branch expects 3 planes");
            const Plane r = normalized(sample.rgb.r, sample.rgb.range);
            const Plane g = normalized(sample.rgb.g, sample.rgb.range);
            const Plane bl = normalized(sample.rgb.b, sample.rgb.range);
            inputs.push_back(tensor_from_planes({&r, &g, &bl}));
        } else if (b == 1) {
            require(planes == 1, "model_inputs: thermal branch expects 1 plane");
            inputs.push_back(
                tensor_from_plane(normalized(sample.thermal.px, sample.thermal.range)));
        } else {
            require(planes == 1, "model_inputs: third branch expects 1 plane");
            Image swir = sample.syn_swir ? *sample.syn_swir : synthesize_swir(sample.thermal);
            inputs.push_back(tensor_from_plane(normalized(swir.px, swir.range)));
        }
    }
    return inputs;
}

ForwardResult forward(const Sample& sample, const ModelParams& p, ForwardCache* cache) {
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    const std::vector<Tensor> inputs = model_inputs(sample, p.config);

    c.enc.resize(inputs.size());
    std::vector<Tensor> features;
    features.reserve(inputs.size());
    for (std::size_t m = 0; m < inputs.size(); ++m)
        features.push_back(encode(inputs[m], p.enc[m], &c.enc[m]));

    const Eigen::VectorXd alpha = gate(features, p, &c.gate);
    const ValueRange out_range = sample.rgb.range;
    c.out_span = out_range.span();
    Image fused = fuse_and_decode(features, alpha, p, out_range, &c.decode);
    return {std::move(fused), alpha};
}

void backward(const ForwardCache& cache, const ModelParams& p, const Plane& d_out01,
              ModelParams* grads) {
    const DecodeCache& d = cache.decode;

    Tensor d_d3_pre = Tensor::zeros(d.d3_pre.shape);
    d_d3_pre.chan(0) = d_out01 * 0.5 *
                       (1.0 - Plane(d.tanh_out.chan(0)).square());

    Tensor d_d2 = Tensor::zeros(d.d2.shape);
    conv2d_backward(d.d2, p.dec3, d_d3_pre, &d_d2, grads ? &grads->dec3 : nullptr);
    Tensor d_d2_pre = lrelu_backward(d.d2_pre, d_d2);

    Tensor d_d1 = Tensor::zeros(d.d1.shape);
    conv2d_backward(d.d1, p.dec2, d_d2_pre, &d_d1, grads ? &grads->dec2 : nullptr);
    Tensor d_d1_pre = lrelu_backward(d.d1_pre, d_d1);

    Tensor d_mix_out = Tensor::zeros(d.mix_out.shape);
    conv2d_backward(d.mix_out, p.dec1, d_d1_pre, &d_mix_out, grads ? &grads->dec1 : nullptr);

    Tensor d_fused = Tensor::zeros(d.fused.shape);
    conv2d_backward(d.fused, p.mix, d_mix_out, &d_fused, grads ? &grads->mix : nullptr);

    // F = sum alpha_m H_m.
    const int m = int(cache.enc.size());
    std::vector<Tensor> d_features(static_cast<std::size_t>(m));
    Eigen::VectorXd d_alpha(m);
    for (int i = 0; i < m; ++i) {
        const Tensor& h = cache.enc[std::size_t(i)].out;
        d_features[std::size_t(i)] = Tensor::zeros(h.shape);
        d_features[std::size_t(i)].data += cache.gate.alpha[i] * d_fused.data;
        d_alpha[i] = d_fused.data.dot(h.data);
    }
    gate_backward(cache.gate, p, d_alpha, &d_features, grads);

    for (int i = 0; i < m; ++i)
        encode_backward(cache.enc[std::size_t(i)], p.enc[std::size_t(i)],
                        d_features[std::size_t(i)], grads ? &grads->enc[std::size_t(i)] : nullptr);
}

// ------------------------------------------------------- semantic probe

std::vector<Tensor> semantic_probe(const std::vector<Tensor>& inputs, const ModelParams& p,
                                   int classes, SemanticProbeCache* cache) {
    require(classes >= 2 && classes <= p.config.channels,
            "semantic_probe: classes must fit in the channel width");
    SemanticProbeCache local;
    SemanticProbeCache& c = cache ? *cache : local;
    c.classes = classes;
    c.enc.resize(inputs.size());
    std::vector<Tensor> logits;
    for (std::size_t m = 0; m < inputs.size(); ++m) {
        const Tensor h = encode(inputs[m], p.enc[m], &c.enc[m]);
        Tensor l = Tensor::zeros({classes, h.height(), h.width()});
        for (int k = 0; k < classes; ++k) l.chan(k) = h.chan(k);
        logits.push_back(std::move(l));
    }
    return logits;
}

void semantic_probe_backward(const SemanticProbeCache& cache, const ModelParams& p,
                             const std::vector<Tensor>& d_logits, ModelParams* grads) {
    for (std::size_t m = 0; m < cache.enc.size(); ++m) {
        const Tensor& h = cache.enc[m].out;
        Tensor dh = Tensor::zeros(h.shape);
        for (int k = 0; k < cache.classes; ++k) dh.chan(k) = d_logits[m].chan(k);
        encode_backward(cache.enc[m], p.enc[m], dh, grads ? &grads->enc[m] : nullptr);
    }
}

// ----------------------------------------------------------- parameters

namespace {

ConvLayer make_conv(int out, int in, int k) {
    return {Tensor::zeros({out, in, k, k}), Tensor::zeros({out})};
}

void kaiming_fill(Tensor& w, long fan_in, Rng& rng) {
    const double std = std::sqrt(2.0 / ((1.0 + kLReluSlope * kLReluSlope) * double(fan_in)));
    for (long i = 0; i < w.size(); ++i) w.data[i] = std * rng.normal();
}

}  // namespace

ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
    require(cfg.channels >= 1 && cfg.hidden >= 1 && cfg.branches() >= 2,
            "init_params: bad configuration");
    ModelParams p;
    p.config = cfg;
    p.seed = seed;
    const int c = cfg.channels;
    for (int b = 0; b < cfg.branches(); ++b) {
        EncoderParams e;
        e.lift = make_conv(c, cfg.arities[std::size_t(b)], 3);
        e.grlb.c1 = make_conv(c, c, 3);
        e.grlb.c2 = make_conv(c, 2 * c, 3);
        e.grlb.c3 = make_conv(c, 3 * c, 1);
        p.enc.push_back(std::move(e));
    }
    p.gate_w1 = Tensor::zeros({cfg.hidden, cfg.branches() * c});
    p.gate_w2 = Tensor::zeros({cfg.branches(), cfg.hidden});
    p.mix = make_conv(c, c, 1);
    p.dec1 = make_conv(c, c, 3);
    p.dec2 = make_conv(c, c, 3);
    p.dec3 = make_conv(1, c, 1);

    Rng rng(seed);
    visit_params(p, [&rng](const std::string& name, Tensor& t) {
        if (name.ends_with(".b")) return;  // biases start at zero
        long fan_in = 1;
        if (t.shape.size() == 4) fan_in = long(t.dim(1)) * t.dim(2) * t.dim(3);
        if (t.shape.size() == 2) fan_in = t.dim(1);
        kaiming_fill(t, fan_in, rng);
    });
    return p;
}

ModelParams zeros_like(const ModelParams& p) {
    ModelParams z = p;
    visit_params(z, [](const std::string&, Tensor& t) { t.data.setZero(); });
    return z;
}

namespace {

template <typename P, typename F>
void visit_impl(P& p, const F& fn) {
    for (std::size_t b = 0; b < p.enc.size(); ++b) {
        const std::string base = "enc" + std::to_string(b);
        fn(base + ".lift.w", p.enc[b].lift.w);
        fn(base + ".lift.b", p.enc[b].lift.b);
        fn(base + ".g1.w", p.enc[b].grlb.c1.w);
        fn(base + ".g1.b", p.enc[b].grlb.c1.b);
        fn(base + ".g2.w", p.enc[b].grlb.c2.w);
        fn(base + ".g2.b", p.enc[b].grlb.c2.b);
        fn(base + ".g3.w", p.enc[b].grlb.c3.w);
        fn(base + ".g3.b", p.enc[b].grlb.c3.b);
    }
    fn("gate.w1", p.gate_w1);
    fn("gate.w2", p.gate_w2);
    fn("mix.w", p.mix.w);
    fn("mix.b", p.mix.b);
    fn("dec1.w", p.dec1.w);
    fn("dec1.b", p.dec1.b);
    fn("dec2.w", p.dec2.w);
    fn("dec2.b", p.dec2.b);
    fn("dec3.w", p.dec3.w);
    fn("dec3.b", p.dec3.b);
}

}  // namespace

void visit_params(ModelParams& p,
                  const std::function<void(const std::string&, Tensor&)>& fn) {
    visit_impl(p, fn);
}

void visit_params(const ModelParams& p,
                  const std::function<void(const std::string&, const Tensor&)>& fn) {
    visit_impl(p, fn);
}

long param_count(const ModelParams& p) {
    long n = 0;
    visit_params(p, [&n](const std::string&, const Tensor& t) { n += t.size(); });
    return n;
}

NetBench count_params_and_bench(const ModelParams& p, int width, int height, int reps) {
    require(reps >= 1, "count_params_and_bench: reps must be >= 1");
    Sample s;
    s.id = "bench";
    s.rgb.range = {0.0, 255.0};
    // Deterministic ramp content; values only need to be finite.
    Plane ramp(height, width);
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) ramp(i, j) = double((i * 7 + j * 13) % 256);
    s.rgb.r = ramp;
    s.rgb.g = ramp;
    s.rgb.b = ramp;
    s.thermal = Image(ramp, {0.0, 255.0});
    if (p.config.branches() >= 3) s.syn_swir = Image(ramp, {0.0, 255.0});

    std::vector<double> ms(static_cast<std::size_t>(reps));
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        (void)forward(s, p);
        const auto t1 = std::chrono::steady_clock::now();
        ms[std::size_t(i)] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    std::sort(ms.begin(), ms.end());
    NetBench b;
    b.params = param_count(p);
    b.ms_median = ms[ms.size() / 2];
    b.fps = 1000.0 / b.ms_median;
    return b;
}

}  // namespace trifuse
