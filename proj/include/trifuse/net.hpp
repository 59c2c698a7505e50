#ifndef TRIFUSE_NET_HPP
#define TRIFUSE_NET_HPP

#include "trifuse/tensor.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace trifuse {

constexpr double kLReluSlope = 0.2;

struct ConvLayer {
    Tensor w;  // (out, in, k, k)
    Tensor b;  // (out)
};

/// Gradient-residual conv block: two 3x3 conv+LReLU stages with dense skips
/// (stage 2 sees [x, s1]; the 1x1 output conv sees [x, s1, s2]) plus a fixed
/// depthwise 3x3 Laplacian of the block input added to the output.
struct GrlbParams {
    ConvLayer c1;  // (C,  C, 3, 3)
    ConvLayer c2;  // (C, 2C, 3, 3)
    ConvLayer c3;  // (C, 3C, 1, 1)
};

struct EncoderParams {
    ConvLayer lift;  // (C, planes, 3, 3)
    GrlbParams grlb;
};

struct ModelConfig {
    int channels = 16;
    int hidden = 32;
    std::vector<int> arities = {3, 1, 1};  // input planes per branch

    int branches() const { return static_cast<int>(arities.size()); }
    bool operator==(const ModelConfig&) const = default;
};

/// All learnable weights plus the metadata needed to rebuild them.
struct ModelParams {
    ModelConfig config;
    std::uint64_t seed = 0;
    std::vector<EncoderParams> enc;
    Tensor gate_w1;  // (hidden, branches*C)
    Tensor gate_w2;  // (branches, hidden)
    ConvLayer mix;   // (C, C, 1, 1)
    ConvLayer dec1, dec2;  // (C, C, 3, 3)
    ConvLayer dec3;        // (1, C, 1, 1)
};

/// Kaiming-style fan-in initialization from the seeded generator; biases 0.
ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed);
ModelParams zeros_like(const ModelParams& p);

/// Enumerate every learnable tensor in a fixed order.
void visit_params(ModelParams& p,
                  const std::function<void(const std::string&, Tensor&)>& fn);
void visit_params(const ModelParams& p,
                  const std::function<void(const std::string&, const Tensor&)>& fn);
long param_count(const ModelParams& p);

// ---- primitive ops -------------------------------------------------------

/// Stride-1 cross-correlation with replicate padding; spatial size preserved.
Tensor conv2d(const Tensor& x, const ConvLayer& layer);
void conv2d_backward(const Tensor& x, const ConvLayer& layer, const Tensor& dy, Tensor* dx,
                     ConvLayer* dlayer);

Tensor lrelu(const Tensor& x);
Tensor lrelu_backward(const Tensor& x, const Tensor& dy);

/// Fixed 3x3 Laplacian [0 1 0; 1 -4 1; 0 1 0] applied per channel.
Tensor laplacian_depthwise(const Tensor& x);
Tensor laplacian_depthwise_backward(const Tensor& dy);

// ---- network stages ------------------------------------------------------

struct GrlbCache {
    Tensor x, s1_pre, s1, cat2, s2_pre, s2, cat3;
};

Tensor light_grlb(const Tensor& x, const GrlbParams& p, GrlbCache* cache = nullptr);
void light_grlb_backward(const GrlbCache& cache, const GrlbParams& p, const Tensor& dy,
                         Tensor* dx, GrlbParams* dp);

struct EncoderCache {
    Tensor x, lift_pre, lift_act;
    GrlbCache grlb;
    Tensor out;
};

/// Lift the raw planes to C channels (3x3 conv + LReLU) and run one block.
Tensor encode(const Tensor& x, const EncoderParams& p, EncoderCache* cache = nullptr);
void encode_backward(const EncoderCache& cache, const EncoderParams& p, const Tensor& dy,
                     EncoderParams* dp);

struct GateCache {
    Eigen::VectorXd z, h_pre, h, logits, alpha;
    long spatial = 0;
};

/// Convex modality weights: alpha = softmax(W2 lrelu(W1 [gap(H_1)||...])).
Eigen::VectorXd gate(const std::vector<Tensor>& features, const ModelParams& p,
                     GateCache* cache = nullptr);
/// Propagates d_alpha into the gate weights and the pooled features.
void gate_backward(const GateCache& cache, const ModelParams& p,
                   const Eigen::VectorXd& d_alpha, std::vector<Tensor>* d_features,
                   ModelParams* grads);

/// Weighted feature sum sum_m alpha_m H_m.
Tensor fuse_features(const std::vector<Tensor>& features, const Eigen::VectorXd& alpha);

struct DecodeCache {
    Tensor fused, mix_out, d1_pre, d1, d2_pre, d2, d3_pre, tanh_out, out01;
};

/// 1x1 mix, two conv+LReLU stages, 1x1 conv with tanh mapped onto the target
/// range. Output is the same spatial size as the features.
Image fuse_and_decode(const std::vector<Tensor>& features, const Eigen::VectorXd& alpha,
                      const ModelParams& p, ValueRange out_range, DecodeCache* cache = nullptr);

// ---- full pipeline -------------------------------------------------------

struct ForwardCache {
    std::vector<EncoderCache> enc;
    GateCache gate;
    DecodeCache decode;
    double out_span = 255.0;
};

struct ForwardResult {
    Image fused;
    Eigen::VectorXd alpha;
};

/// Sample planes normalized to [0,1], one tensor per branch. For a trimodal
/// model the third branch takes syn_swir (synthesized on the fly if absent).
std::vector<Tensor> model_inputs(const Sample& sample, const ModelConfig& cfg);

ForwardResult forward(const Sample& sample, const ModelParams& p,
                      ForwardCache* cache = nullptr);

/// Gradient of a loss on the [0,1] output plane, pushed through the whole
/// network into `grads` (accumulated).
void backward(const ForwardCache& cache, const ModelParams& p, const Plane& d_out01,
              ModelParams* grads);

// ---- semantic probe ------------------------------------------------------

/// Per-branch K-class logit maps read off the first K encoder channels; the
/// minimal head used to exercise the semantic loss and its gradients.
struct SemanticProbeCache {
    std::vector<EncoderCache> enc;
    int classes = 0;
};

std::vector<Tensor> semantic_probe(const std::vector<Tensor>& inputs, const ModelParams& p,
                                   int classes, SemanticProbeCache* cache = nullptr);
void semantic_probe_backward(const SemanticProbeCache& cache, const ModelParams& p,
                             const std::vector<Tensor>& d_logits, ModelParams* grads);

// ---- accounting ----------------------------------------------------------

struct NetBench {
    long params = 0;
    double ms_median = 0.0;
    double fps = 0.0;
};

/// Exact learnable-scalar count plus the median forward wall time at the
/// given frame size.
NetBench count_params_and_bench(const ModelParams& p, int width, int height, int reps);

}  // namespace trifuse

#endif
