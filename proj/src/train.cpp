#include "trifuse/train.hpp"

#include "trifuse/rng.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace trifuse {

double cosine_lr(int step, int total_steps, double lr_start, double lr_end) {
    if (total_steps <= 1) return lr_start;
    const double t = double(step) / double(total_steps - 1);
    return lr_end + 0.5 * (lr_start - lr_end) * (1.0 + std::cos(M_PI * t));
}

TrainResult train(const std::vector<Sample>& data, const TrainConfig& cfg) {
    require(!data.empty(), "train: empty dataset");
    require(cfg.steps >= 1 && cfg.batch >= 1, "train: steps and batch must be positive");

    TrainResult result;
    result.params = init_params(cfg.model, cfg.seed);
    ModelParams m_state = zeros_like(result.params);
    ModelParams v_state = zeros_like(result.params);

    Rng rng(cfg.seed ^ 0xa5a5a5a5a5a5a5a5ULL);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t cursor = order.size();  // forces an initial shuffle

    auto next_index = [&]() {
        if (cursor >= order.size()) {
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[std::size_t(rng.below(i))]);
            cursor = 0;
        }
        return order[cursor++];
    };

    const int steps_per_epoch = int((data.size() + std::size_t(cfg.batch) - 1) / cfg.batch);
    double epoch_acc = 0.0;
    int epoch_count = 0;

    auto collect = [](ModelParams& p) {
        std::vector<Tensor*> out;
        visit_params(p, [&out](const std::string&, Tensor& t) { out.push_back(&t); });
        return out;
    };
    const std::vector<Tensor*> wt = collect(result.params);
    const std::vector<Tensor*> mt = collect(m_state);
    const std::vector<Tensor*> vt = collect(v_state);

    const int workers = std::max(1, std::min(cfg.workers, cfg.batch));

    for (int step = 0; step < cfg.steps; ++step) {
        // Deterministic batch composition, then fan the items out.
        std::vector<std::size_t> batch_items(std::size_t(cfg.batch));
        for (int b = 0; b < cfg.batch; ++b) batch_items[std::size_t(b)] = next_index();

        std::vector<ModelParams> item_grads(std::size_t(cfg.batch));
        std::vector<double> item_loss(std::size_t(cfg.batch), 0.0);
        std::atomic<int> cursor_b{0};
        auto eval = [&]() {
            for (int b; (b = cursor_b.fetch_add(1)) < cfg.batch;) {
                item_grads[std::size_t(b)] = zeros_like(result.params);
                item_loss[std::size_t(b)] = recon_loss_with_grad(
                    data[batch_items[std::size_t(b)]], result.params,
                    &item_grads[std::size_t(b)]);
            }
        };
        if (workers == 1) {
            eval();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < workers; ++t) pool.emplace_back(eval);
            for (auto& t : pool) t.join();
        }

        // Reduce in batch order regardless of completion order.
        ModelParams grads = std::move(item_grads[0]);
        std::vector<Tensor*> acc = collect(grads);
        for (int b = 1; b < cfg.batch; ++b) {
            const std::vector<Tensor*> part = collect(item_grads[std::size_t(b)]);
            for (std::size_t k = 0; k < acc.size(); ++k) acc[k]->data += part[k]->data;
        }
        double batch_loss = 0.0;
        for (double l : item_loss) batch_loss += l;
        batch_loss /= cfg.batch;
        if (!std::isfinite(batch_loss))
            throw std::runtime_error("train: non-finite loss at step " + std::to_string(step));

        const double lr = cosine_lr(step, cfg.steps, cfg.lr_start, cfg.lr_end);
        const double bc1 = 1.0 - std::pow(cfg.beta1, step + 1);
        const double bc2 = 1.0 - std::pow(cfg.beta2, step + 1);
        const std::vector<Tensor*> gt = collect(grads);

        for (std::size_t k = 0; k < wt.size(); ++k) {
            Tensor& w = *wt[k];
            for (long i = 0; i < w.size(); ++i) {
                const double gi = gt[k]->data[i] / cfg.batch + cfg.weight_decay * w.data[i];
                mt[k]->data[i] = cfg.beta1 * mt[k]->data[i] + (1.0 - cfg.beta1) * gi;
                vt[k]->data[i] = cfg.beta2 * vt[k]->data[i] + (1.0 - cfg.beta2) * gi * gi;
                const double mhat = mt[k]->data[i] / bc1;
                const double vhat = vt[k]->data[i] / bc2;
                w.data[i] -= lr * mhat / (std::sqrt(vhat) + cfg.adam_eps);
            }
        }

        result.step_loss.push_back(batch_loss);
        epoch_acc += batch_loss;
        if (++epoch_count == steps_per_epoch) {
            result.epoch_loss.push_back(epoch_acc / epoch_count);
            epoch_acc = 0.0;
            epoch_count = 0;
        }
    }
    if (epoch_count > 0) result.epoch_loss.push_back(epoch_acc / epoch_count);
    return result;
}

double mean_recon_loss(const std::vector<Sample>& data, const ModelParams& p) {
    require(!data.empty(), "mean_recon_loss: empty dataset");
    double acc = 0.0;
    for (const auto& s : data) acc += recon_loss_with_grad(s, p, nullptr);
    return acc / double(data.size());
}

double grad_check(const std::function<double(const ModelParams&, ModelParams*)>& loss,
                  const ModelParams& at, int probes, std::uint64_t seed) {
    ModelParams analytic = zeros_like(at);
    loss(at, &analytic);

    // Flat views over every parameter tensor, in visitation order.
    std::vector<Tensor*> grad_tensors;
    visit_params(analytic, [&](const std::string&, Tensor& t) { grad_tensors.push_back(&t); });
    long total = 0;
    std::vector<long> offsets;
    visit_params(analytic, [&](const std::string&, Tensor& t) {
        offsets.push_back(total);
        total += t.size();
    });

    constexpr double kDelta = 1e-4 * 1e-2;  // step on the 1e-2-scaled parameterization
    Rng rng(seed);
    double max_rel = 0.0;
    ModelParams probe = at;
    std::vector<Tensor*> probe_tensors;
    visit_params(probe, [&](const std::string&, Tensor& t) { probe_tensors.push_back(&t); });

    for (int n = 0; n < probes; ++n) {
        const long flat = long(rng.below(std::uint64_t(total)));
        std::size_t which = 0;
        while (which + 1 < offsets.size() && offsets[which + 1] <= flat) ++which;
        const long idx = flat - offsets[which];

        double& w = probe_tensors[which]->data[idx];
        const double saved = w;
        w = saved + kDelta;
        const double lp = loss(probe, nullptr);
        w = saved - kDelta;
        const double lm = loss(probe, nullptr);
        w = saved;

        const double numeric = (lp - lm) / (2.0 * kDelta);
        const double analytic_v = grad_tensors[which]->data[idx];
        const double denom = std::max({std::abs(numeric), std::abs(analytic_v), 1e-8});
        max_rel = std::max(max_rel, std::abs(numeric - analytic_v) / denom);
    }
    return max_rel;
}

}  // namespace trifuse
