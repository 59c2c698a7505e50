#ifndef TRIFUSE_WEIGHTS_IO_HPP
#define TRIFUSE_WEIGHTS_IO_HPP

#include "trifuse/net.hpp"

#include <filesystem>

namespace trifuse {

/// Weight file layout: magic "TFUS1"; u32 channels, hidden, branch count and
/// per-branch plane arity; u64 seed; u32 tensor count; then each tensor as
/// (u32 name length, name bytes, u32 rank, u32 dims..., float32 LE payload).
void save_params(const ModelParams& params, const std::filesystem::path& path);

/// Rejects files whose architecture block or tensor shapes do not match.
ModelParams load_params(const std::filesystem::path& path);

}  // namespace trifuse

#endif
