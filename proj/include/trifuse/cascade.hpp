#ifndef TRIFUSE_CASCADE_HPP
#define TRIFUSE_CASCADE_HPP

#include "trifuse/image.hpp"

#include <filesystem>
#include <functional>
#include <string>

namespace trifuse {

using BimodalOp = std::function<Image(const Image&, const Image&)>;

/// Trimodal extension of a two-input operator: evaluate F(F(x,y),z) for all
/// six input orders and average pixelwise. Order-independent by construction.
/// Operator failures are rethrown with the failing order named.
Image cascade_order_avg(const BimodalOp& op, const Image& a, const Image& b, const Image& c);

/// Single fixed-order cascade F(F(a,b),c).
Image cascade_single_pass(const BimodalOp& op, const Image& a, const Image& b, const Image& c);

/// Built-in pixel-mean operator, mainly for tests and as a cheap baseline.
Image mean_fuse(const Image& a, const Image& b);

/// Wrap an external command as a bimodal operator. The template must contain
/// the placeholders {a}, {b} and {out}; inputs are written as PNG, the
/// command runs via the shell, and a non-zero exit status is a failure.
BimodalOp external_command_op(const std::string& command_template,
                              const std::filesystem::path& workdir);

}  // namespace trifuse

#endif
