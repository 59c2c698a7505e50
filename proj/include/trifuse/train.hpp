#ifndef TRIFUSE_TRAIN_HPP
#define TRIFUSE_TRAIN_HPP

#include "trifuse/loss.hpp"
#include "trifuse/net.hpp"

namespace trifuse {

struct TrainConfig {
    ModelConfig model;
    int steps = 200;
    int batch = 8;
    double lr_start = 1e-4;
    double lr_end = 1e-6;
    double weight_decay = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 1;
    /// Batch items may evaluate on this many threads; gradients are reduced
    /// in batch order, so results do not depend on the worker count.
    int workers = 2;
};

struct TrainResult {
    ModelParams params;
    std::vector<double> step_loss;   // batch-mean loss per step
    std::vector<double> epoch_loss;  // mean of step losses per epoch
};

/// Cosine-annealed learning rate: lr(0) = lr_start, lr(total-1) = lr_end.
double cosine_lr(int step, int total_steps, double lr_start, double lr_end);

/// Adam training of the fusion network against fusion_recon_loss. Fully
/// deterministic for a fixed (seed, config, data): batch order, summation
/// order and initialization are all seeded. Throws on non-finite loss.
TrainResult train(const std::vector<Sample>& data, const TrainConfig& cfg);

/// Mean recon loss over a dataset at fixed parameters.
double mean_recon_loss(const std::vector<Sample>& data, const ModelParams& p);

/// Central-difference gradient audit: compares analytic gradients against
/// finite differences (1e-4 step on a 1e-2-scaled parameterization) at
/// `probes` randomly chosen weights. Returns the max relative error with
/// denominator max(|analytic|, |numeric|, 1e-8).
double grad_check(const std::function<double(const ModelParams&, ModelParams*)>& loss,
                  const ModelParams& at, int probes, std::uint64_t seed);

}  // namespace trifuse

#endif
