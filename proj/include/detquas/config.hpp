#pragma once

#include <string>

#include <json.hpp>

#include "detquas/kernels.hpp"
#include "detquas/orthopoly.hpp"

namespace detquas::config {

using json = nlohmann::json;

/// Any schema violation; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// {"model": "half_line"|"full_line"|"finite", "lo": int, "hi": int}
WindowPtr parse_window(const json& j);

/// {"family": "charlier", "theta": ...} | {"family": "meixner", "beta": .., "c": ..}
/// | {"family": "krawtchouk", "M": .., "p": ..} | {"family": "uniform"}
/// | {"family": "table", "values": [..]}
WeightFunction parse_weight(const json& j, const WindowPtr& window);

/// {"family": "sine"|"discrete_hermite"|"discrete_laguerre"
///  |"discrete_jacobi_symmetric", "params": {...}}
KernelFunctionPtr parse_kernel_function(const json& j);

/// True for the families handled by parse_kernel_function.
bool is_closed_form_family(const json& j);

/// Finite kernels: the closed-form families materialized on `window`
/// (required), or {"family": "cd_finite", "params": {"window": .., "weight": ..,
/// "N": ..}}, or {"family": "custom", "params": {"window": .., "entries": [[..]]}}.
KernelMatrix parse_kernel_matrix(const json& j, const json* window = nullptr);

json load_json_file(const std::string& path);

/// FNV-1a over the canonical dump; stamped into every emitted table.
std::string config_hash_hex(const json& j);

/// Require exactly the given keys (order-free); unknown keys reject.
void require_keys(const json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {});

}  // namespace detquas::config
