#pragma once

#include <string>
#include <vector>

#include "gklo/gklo.hpp"

namespace gklo {

/// One-dimensional torus-invariant summand of the matter representation.
struct WeightSummand {
    enum class Kind { ArrowHom, AltWedge, FramingHom };
    Kind kind = Kind::ArrowHom;
    int arrow = -1;  // ArrowHom, AltWedge
    int node = -1;   // FramingHom: the framed node j
    int a = 0, b = 0;
    /// T-weight alpha (the hbar-weight hbar/2 is implicit).
    RatFunc alpha;
    /// alpha restricted to x-variables: (node, index, coefficient) with
    /// x_{node,index} before canonicalization.
    std::vector<std::tuple<int, int, int>> x_terms;

    std::string to_string(const GkloContext& ctx) const;
};

/// sign * eps_{node,index} with node in Q0+.
struct Cocharacter {
    int node = 0;
    int index = 1;
    int sign = 1;
};

const char* to_string(WeightSummand::Kind k);

/// Every summand: Hom(e_{s,a}, e_{t,b}) for h in Q1+, e_{t,a} ^ e_{t,b}
/// (a < b) for tau-fixed h, and Hom(f_{j,a}, e_{j,b}) for every node j.
std::vector<WeightSummand> weight_summands(const GkloContext& ctx);

/// <lambda, alpha>. Throws NotMinusculeContext unless lambda = +-eps_{i,r}
/// with i positive and 1 <= r <= v_i.
int pairing(const GkloContext& ctx, const Cocharacter& lambda, const WeightSummand& s);

/// 1 when m = <lambda, alpha> >= 0, else prod_{k=1}^{|m|} (alpha - (2k-1) hbar/2).
RatFunc euler_contribution(const GkloContext& ctx, const WeightSummand& s, const Cocharacter& lambda);

/// Eu(T_lambda Gr): product over roots with n = <lambda, alpha> >= 1 of
/// prod_{k<n} (alpha + k hbar).
RatFunc tangent_euler(const GkloContext& ctx, const Cocharacter& lambda);

enum class Direction { Plus, Minus };
const char* to_string(Direction d);

/// Variable in which monopole polynomials f are written.
VarIndex monopole_var();

/// f[R_lambda] for lambda = eps_{i,1} (Plus) or -eps_{i,v_i} (Minus), summed
/// over the orbit r = 1..v_i. f is a polynomial in monopole_var(); it is
/// evaluated at x_{i,r} (Plus) or x_{i,r} - hbar (Minus).
/// Throws NotMinusculeContext (i not positive), EmptyNode (v_i = 0) and
/// InvalidArgument (f not polynomial in monopole_var()).
DiffOp minuscule_monopole(const GkloContext& ctx, int i, const RatFunc& f, Direction d);

struct PsiTerm {
    int r = 0;
    bool pass = false;
    DiffOp psi;  // hbar * Psi(b_{i,r}) from the monopole side
    std::string witness;
};

struct PsiResult {
    int node = 0;
    bool pass = true;
    Direction direction = Direction::Plus;
    int sign = 1;
    /// Which polynomial is capped against which class, e.g.
    /// "(x+hbar/2)^r at x_{tau i,r}-hbar, direction minus".
    std::string convention;
    std::vector<PsiTerm> terms;
};

/// hbar Psi(b_{i,r}) from the monopole formulas against B_{i,r}, exactly,
/// for 0 <= r <= r_max.
PsiResult psi_crosscheck(const GkloContext& ctx, int i, int r_max);

}  // namespace gklo
