#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gklo/error.hpp"
#include "gklo/poly.hpp"

namespace gklo {

struct RawArrow {
    std::string id, source, target;
};

/// Unvalidated quiver description as read from a document.
struct RawQuiver {
    std::vector<std::string> nodes;
    std::vector<RawArrow> arrows;
    std::vector<std::pair<std::string, std::string>> node_pairs;
    /// A pair (h, h) marks a tau-fixed arrow.
    std::vector<std::pair<std::string, std::string>> arrow_pairs;
    std::optional<std::vector<std::string>> positive_nodes;
};

struct Diagnostic {
    ErrorCode code;
    std::string message;
};

/// Numeric-aware order on node and arrow ids: "2" < "10" < "a".
bool id_less(const std::string& a, const std::string& b);

struct Arrow {
    std::string id;
    int source = 0, target = 0;
    int tau = 0;
    bool fixed = false;
    bool positive = false;
};

/// Validated quiver with involution. Nodes are indexed 0..n-1 in id order.
class InvolutiveQuiver {
public:
    int node_count() const { return static_cast<int>(nodes_.size()); }
    const std::string& node_id(int i) const { return nodes_.at(i); }
    const std::vector<std::string>& node_ids() const { return nodes_; }
    int index_of(const std::string& id) const;
    int tau(int i) const { return tau_.at(i); }
    bool is_positive(int i) const { return positive_.at(i); }
    /// Positive nodes in index order.
    std::vector<int> positive_nodes() const;

    const std::vector<Arrow>& arrows() const { return arrows_; }
    std::vector<int> arrows_from(int i) const;
    /// True when some arrow goes i -> tau(i).
    bool arrow_to_tau(int i) const;

    RawQuiver to_raw() const;

private:
    friend InvolutiveQuiver validate_quiver(const RawQuiver&);
    std::vector<std::string> nodes_;
    std::vector<int> tau_;
    std::vector<bool> positive_;
    std::vector<Arrow> arrows_;
};

/// Every violated axiom, empty when the description is valid.
std::vector<Diagnostic> diagnose_quiver(const RawQuiver& raw);
/// Throws the first diagnostic as an Error.
InvolutiveQuiver validate_quiver(const RawQuiver& raw);

struct DimensionData {
    std::vector<int> v, w;
};

/// Missing nodes default to 0. Throws UnknownNode or DimMismatch.
DimensionData make_dimensions(const InvolutiveQuiver& q, const std::map<std::string, int>& v,
                              const std::map<std::string, int>& w);
void check_dimensions(const InvolutiveQuiver& q, const DimensionData& d);

using CartanMatrix = std::vector<std::vector<int>>;
CartanMatrix cartan_matrix(const InvolutiveQuiver& q);

struct Coweight {
    std::vector<int> fundamental;  // coefficient of Lambda_i
    std::vector<int> coroot;       // coefficient of alpha_i^vee
    std::vector<int> pairings;     // <alpha_i, mu>
};

Coweight shift_coweight(const InvolutiveQuiver& q, const DimensionData& d);

/// hbar * zeta_i = sign * 2^power_of_two.
struct Zeta {
    int sign = 1;
    int power_of_two = 0;
    Rational value() const;
};

std::vector<Zeta> zeta_parameters(const InvolutiveQuiver& q, const DimensionData& d);

/// Named families used by tests and the acceptance matrix.
RawQuiver edgeless_pair();
/// Two copies of the A_n path with tau swapping them (second copy reversed).
RawQuiver diagonal_a(int n);
/// Path on 2n nodes with tau(i) = 2n+1-i.
RawQuiver aiii(int n);

}  // namespace gklo
