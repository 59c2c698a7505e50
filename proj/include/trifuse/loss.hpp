#ifndef TRIFUSE_LOSS_HPP
#define TRIFUSE_LOSS_HPP

#include "trifuse/net.hpp"

namespace trifuse {

/// Balance weights of the semantic loss terms.
struct LossWeights {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
};

using LabelMap = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-branch pixelwise softmax cross-entropy (natural log) on the first two
/// branches plus a consistency penalty: the mean over branch pairs of the
/// mean squared logit discrepancy. Analytic gradients are accumulated into
/// d_logits when given.
double semantic_loss(const std::vector<Tensor>& logits, const LabelMap& labels,
                     const LossWeights& w, std::vector<Tensor>* d_logits = nullptr);

/// Unsupervised reconstruction surrogate: mean absolute distance of the fused
/// image to the pixelwise max of the sample's sources, plus the mean absolute
/// distance of its Sobel responses to those of the locally strongest source.
/// Zero iff fused matches both targets exactly. d_fused receives the gradient
/// with respect to the fused samples.
double fusion_recon_loss(const Image& fused, const Sample& sample, Plane* d_fused = nullptr);

/// Recon loss through the full network; gradients for every parameter.
double recon_loss_with_grad(const Sample& sample, const ModelParams& p, ModelParams* grads);

/// Semantic loss through the encoder probe head.
double semantic_loss_with_grad(const Sample& sample, const ModelParams& p, int classes,
                               const LabelMap& labels, const LossWeights& w,
                               ModelParams* grads);

}  // namespace trifuse

#endif
