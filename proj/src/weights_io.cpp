#include "trifuse/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

namespace trifuse {

namespace {

constexpr char kMagic[5] = {'T', 'F', 'U', 'S', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    put_u32(out, std::uint32_t(v));
    put_u32(out, std::uint32_t(v >> 32));
}

void put_f32(std::ostream& out, float f) {
    put_u32(out, std::bit_cast<std::uint32_t>(f));
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("weight file truncated");
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& in) {
    const std::uint64_t lo = get_u32(in);
    return lo | (std::uint64_t(get_u32(in)) << 32);
}

float get_f32(std::istream& in) { return std::bit_cast<float>(get_u32(in)); }

}  // namespace

void save_params(const ModelParams& params, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(kMagic, 5);
    put_u32(out, std::uint32_t(params.config.channels));
    put_u32(out, std::uint32_t(params.config.hidden));
    put_u32(out, std::uint32_t(params.config.branches()));
    for (int a : params.config.arities) put_u32(out, std::uint32_t(a));
    put_u64(out, params.seed);

    std::uint32_t count = 0;
    visit_params(params, [&count](const std::string&, const Tensor&) { ++count; });
    put_u32(out, count);

    visit_params(params, [&out](const std::string& name, const Tensor& t) {
        put_u32(out, std::uint32_t(name.size()));
        out.write(name.data(), std::streamsize(name.size()));
        put_u32(out, std::uint32_t(t.shape.size()));
        for (int d : t.shape) put_u32(out, std::uint32_t(d));
        for (long i = 0; i < t.size(); ++i) put_f32(out, float(t.data[i]));
    });
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

ModelParams load_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, kMagic, 5) != 0)
        throw std::runtime_error(path.string() + ": not a weight file");

    ModelConfig cfg;
    cfg.channels = int(get_u32(in));
    cfg.hidden = int(get_u32(in));
    const std::uint32_t branches = get_u32(in);
    if (branches < 2 || branches > 8)
        throw std::runtime_error(path.string() + ": implausible branch count");
    cfg.arities.clear();
    for (std::uint32_t b = 0; b < branches; ++b) cfg.arities.push_back(int(get_u32(in)));
    const std::uint64_t seed = get_u64(in);

    ModelParams params = init_params(cfg, seed);
    std::map<std::string, Tensor*> slots;
    visit_params(params, [&slots](const std::string& name, Tensor& t) { slots[name] = &t; });

    const std::uint32_t count = get_u32(in);
    if (count != slots.size())
        throw std::runtime_error(path.string() + ": tensor count does not match architecture");
    for (std::uint32_t n = 0; n < count; ++n) {
        const std::uint32_t name_len = get_u32(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        const auto it = slots.find(name);
        if (it == slots.end())
            throw std::runtime_error(path.string() + ": unknown tensor " + name);
        const std::uint32_t rank = get_u32(in);
        std::vector<int> dims;
        for (std::uint32_t r = 0; r < rank; ++r) dims.push_back(int(get_u32(in)));
        if (dims != it->second->shape)
            throw std::runtime_error(path.string() + ": shape mismatch for " + name);
        for (long i = 0; i < it->second->size(); ++i) it->second->data[i] = double(get_f32(in));
    }
    return params;
}

}  // namespace trifuse
