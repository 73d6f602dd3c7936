#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gklo/diffop.hpp"
#include "gklo/quiver.hpp"

namespace gklo {

/// Deliberate single-sign defects used as negative controls.
enum class Corruption {
    None,
    BizPole,            // pole -u - x + hbar/2 in B_i(u)
    BizFraming,         // W_{tau i}(-x + hbar/2) in y_{i,r}
    BizTauDenominator,  // (2x - hbar/2) for tau-fixed arrows in y_{i,r}
    HuSign,             // (-1)^{delta+1} in H_i(u)
    HuFraming,          // W_i(u) in place of W_i(-u) in H_i(u)
    YtauSign,           // (-1)^{v_i} in y_{tau i,r}
};

const char* to_string(Corruption c);
std::optional<Corruption> corruption_from_string(std::string_view s);

/// x_{i,r} for a negative node rewritten through its positive partner.
struct NegativeRewrite {
    int positive_node;
    int r;
    int x_sign;          // x_{i,r} = x_sign * x_{tau i,r}
    int shift_exponent;  // d_{i,r} = d_{tau i,r}^{shift_exponent}
};

class GkloContext {
public:
    GkloContext(InvolutiveQuiver q, DimensionData d, Corruption corruption = Corruption::None);
    GkloContext(const GkloContext&) = delete;
    GkloContext& operator=(const GkloContext&) = delete;

    const InvolutiveQuiver& quiver() const { return q_; }
    const DimensionData& dims() const { return d_; }
    const CartanMatrix& cartan() const { return c_; }
    const Coweight& mu() const { return mu_; }
    const std::vector<Zeta>& zeta() const { return zeta_; }
    Corruption corruption() const { return corruption_; }
    std::uint64_t id() const { return id_; }
    int v(int i) const { return d_.v.at(i); }
    int w(int i) const { return d_.w.at(i); }
    int node_count() const { return q_.node_count(); }
    int tau(int i) const { return q_.tau(i); }
    bool tau_adjacent(int i) const { return c_[i][q_.tau(i)] == -1; }

    /// Variable x_{i,r} of a positive node.
    VarIndex node_var(int i, int r) const;
    VarIndex framing_var(int j, int k) const;
    /// x_{i,r} for any node, negative nodes canonicalized.
    RatFunc x(int i, int r) const;
    /// d_{i,r} for any node, negative nodes canonicalized.
    ShiftMonomial d(int i, int r) const;
    NegativeRewrite canonicalize_negative(int i, int r) const;

    RatFunc V(int i, const RatFunc& z) const;
    RatFunc W(int i, const RatFunc& z) const;
    /// V_i(z) / (z - x_{i,r}).
    RatFunc V_r(int i, int r, const RatFunc& z) const;
    /// V_i(z) / ((z - x_{i,r})(z - x_{i,s})); not used by any operator.
    RatFunc V_rs(int i, int r, int s, const RatFunc& z) const;

    DiffOp y(int i, int r) const;
    /// B_i(z) = sum_r y_{i,r} / (-z - x_{i,r} - hbar/2).
    DiffOp B(int i, const RatFunc& z) const;
    RatFunc H(int i, const RatFunc& z) const;
    /// Coefficient of u^{-s-1} in B_i(u), closed form.
    DiffOp B_coeff(int i, int s) const;
    /// Coefficient of u^{-r-1} in H_i(u).
    RatFunc H_coeff(int i, int r) const;
    DiffOp H_tilde(int i, int n) const;

    /// Index of the first possibly nonzero H_{i,r}: -<alpha_i, mu> - 1.
    int H_threshold(int i) const { return -mu_.pairings[i] - 1; }

private:
    RatFunc pole_shift(int i, int r) const;  // a with pole at z = -a

    InvolutiveQuiver q_;
    DimensionData d_;
    CartanMatrix c_;
    Coweight mu_;
    std::vector<Zeta> zeta_;
    Corruption corruption_;
    std::uint64_t id_;
    std::vector<std::vector<VarIndex>> xvars_, wvars_;

    mutable std::mutex mu_cache_;
    mutable std::map<std::pair<int, int>, DiffOp> y_cache_;
    mutable std::map<int, RatFunc> hu_cache_;
    mutable std::map<std::pair<int, int>, RatFunc> hcoeff_cache_;
};

/// The spectral variable u used for coefficient extraction.
VarIndex spectral_u();

}  // namespace gklo
