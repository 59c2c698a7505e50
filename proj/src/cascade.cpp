#include "trifuse/cascade.hpp"

#include "trifuse/image_io.hpp"

#include <atomic>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <vector>

namespace trifuse {

namespace {

constexpr int kOrders[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                               {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

}  // namespace

Image cascade_single_pass(const BimodalOp& op, const Image& a, const Image& b, const Image& c) {
    return op(op(a, b), c);
}

Image cascade_order_avg(const BimodalOp& op, const Image& a, const Image& b, const Image& c) {
    require(a.same_size(b) && b.same_size(c), "cascade_order_avg: dimensions differ");
    const Image* in[3] = {&a, &b, &c};

    std::vector<std::future<Image>> jobs;
    jobs.reserve(6);
    for (const auto& ord : kOrders)
        jobs.push_back(std::async(std::launch::async, [&, i = ord[0], j = ord[1], k = ord[2]] {
            return op(op(*in[i], *in[j]), *in[k]);
        }));

    Plane acc = Plane::Zero(a.height(), a.width());
    for (int n = 0; n < 6; ++n) {
        try {
            acc += jobs[std::size_t(n)].get().px;
        } catch (const std::exception& e) {
            throw std::runtime_error("cascade order (" + std::to_string(kOrders[n][0]) + "," +
                                     std::to_string(kOrders[n][1]) + "," +
                                     std::to_string(kOrders[n][2]) + ") failed: " + e.what());
        }
    }
    return Image(acc / 6.0, a.range);
}

Image mean_fuse(const Image& a, const Image& b) {
    require(a.same_size(b), "mean_fuse: dimensions differ");
    return Image((a.px + b.px) * 0.5, a.range);
}

BimodalOp external_command_op(const std::string& command_template,
                              const std::filesystem::path& workdir) {
    require(command_template.find("{a}") != std::string::npos &&
                command_template.find("{b}") != std::string::npos &&
                command_template.find("{out}") != std::string::npos,
            "external operator template needs {a}, {b} and {out} placeholders");
    auto counter = std::make_shared<std::atomic<int>>(0);
    return [command_template, workdir, counter](const Image& a, const Image& b) -> Image {
        std::filesystem::create_directories(workdir);
        const int n = counter->fetch_add(1);
        const auto pa = workdir / ("ext_a_" + std::to_string(n) + ".png");
        const auto pb = workdir / ("ext_b_" + std::to_string(n) + ".png");
        const auto po = workdir / ("ext_out_" + std::to_string(n) + ".png");
        save_image(a, pa);
        save_image(b, pb);

        std::string cmd = command_template;
        auto subst = [&cmd](const std::string& key, const std::string& value) {
            for (std::size_t pos; (pos = cmd.find(key)) != std::string::npos;)
                cmd.replace(pos, key.size(), value);
        };
        subst("{a}", pa.string());
        subst("{b}", pb.string());
        subst("{out}", po.string());

        const int status = std::system(cmd.c_str());
        if (status != 0)
            throw std::runtime_error("external operator exited with status " +
                                     std::to_string(status));
        Image out = as_gray(load_image(po));
        if (!out.same_size(a))
            throw std::runtime_error("external operator returned wrong dimensions");
        out.range = a.range;
        return out;
    };
}

}  // namespace trifuse
