#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gklo {

using VarIndex = std::uint8_t;

enum class VarKind { Node, Framing, Hbar, Spectral };

struct VarInfo {
    std::string name;
    VarKind kind;
};

/// Session-wide variable table. Indices are stable for the life of the
/// process; index order is the monomial order (index 0 most significant).
/// The kind is inferred from the name: `hbar`, `x_{i,r}`, `w_{j,k}`, anything
/// else is spectral.
VarIndex intern_var(std::string_view name);
std::optional<VarIndex> find_var(std::string_view name);
const VarInfo& var_info(VarIndex v);
std::size_t var_count();

/// Printing order, independent of interning order: hbar, spectral, node,
/// framing; names compared with digit runs read as numbers.
bool var_print_less(VarIndex a, VarIndex b);

VarIndex hbar_var();
std::string node_var_name(std::string_view node, int r);
std::string framing_var_name(std::string_view node, int k);

}  // namespace gklo
