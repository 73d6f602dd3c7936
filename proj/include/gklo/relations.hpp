#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gklo/expr.hpp"
#include "gklo/gklo.hpp"

namespace gklo {

enum class RelationTag {
    HH,
    HTauParity,
    HB,
    BB,
    CommSerre,
    UsualSerre,
    ISerreFinite,
    ISerreGF,
    YCommSame,
    YCommTau,
    YCommAdj,
    YXComm,
    CorCEqual0H,
    CorUH,
    TrunDivByZ,
    TildeHBracket,
    HiZSymmetric,
    HiZVanishing,
    HiZLeading,
    HHCoeff,
    HBCoeff,
    BBCoeff,
    CommSerreCoeff,
    CoeffConsistency,
    NoTauDenominator,
    RescaleInvariance,
};

const char* to_string(RelationTag t);
std::optional<RelationTag> relation_tag_from_string(std::string_view s);
const std::vector<RelationTag>& all_relation_tags();

struct RelationId {
    RelationTag tag = RelationTag::HH;
    std::vector<int> nodes;  // node indices
    std::vector<int> aux;    // auxiliary indices, meaning depends on the tag
    friend auto operator<=>(const RelationId&, const RelationId&) = default;
};

enum class Mode { Exact, Randomized };
enum class Status { Pass, Fail, Inconclusive, Skipped };
const char* to_string(Mode m);
const char* to_string(Status s);

struct Witness {
    std::string label;     // sub-identity inside the relation
    std::string monomial;  // shift monomial of the nonzero term
    std::string term;      // exact mode: nonzero canonical coefficient
    std::vector<std::pair<std::string, std::uint64_t>> point;  // randomized mode
    std::uint64_t value = 0;
};

struct Entry {
    RelationId id;
    std::string name;  // e.g. "BB(1,2)" with node ids
    Mode mode = Mode::Exact;
    Status status = Status::Pass;
    std::optional<Witness> witness;
    std::string note;
    double elapsed_ms = 0;
};

/// The images of h and b used by the checks. The rescaled family multiplies
/// B_i and H_i, H_{tau i} by one scalar (all relations but the vanishing
/// conditions survive this).
class GeneratorFamily {
public:
    explicit GeneratorFamily(const GkloContext& ctx, int node = -1, Rational scale = Rational(1));

    const GkloContext& ctx() const { return ctx_; }
    DiffOp B(int i, const RatFunc& z) const;
    DiffOp B_coeff(int i, int s) const;
    RatFunc H(int i, const RatFunc& z) const;
    RatFunc H_coeff(int i, int r) const;
    /// (H_i(z))° in the spectral variable z.
    RatFunc H_circ(int i, VarIndex z) const;
    DiffOp y(int i, int r) const { return ctx_.y(i, r); }

    /// Shared expression nodes, so a bracket that several checks use is
    /// computed once per run.
    Expr Bc(int i, int s) const;
    Expr Hc(int i, int r) const;
    Expr Bcomm(int i, int a, int j, int b) const;
    Expr Banti(int i, int a, int j, int b) const;
    /// (H_i(z))° as a sum of principal parts; exact value computed once.
    Expr H_circ_expr(int i, VarIndex z) const;

private:
    Expr Bprod(int i, int a, int j, int b) const;
    Expr cached(std::array<int, 5> key, const std::function<Expr()>& make) const;

    Rational b_scale(int i) const;
    Rational h_scale(int i) const;

    const GkloContext& ctx_;
    int node_;
    Rational scale_;
    mutable std::mutex mu_;
    mutable std::map<std::array<int, 5>, Expr> cache_;
};

/// One identity of a relation: the expression must vanish.
struct Identity {
    std::string label;
    Expr expr;
};

/// A schedulable check. `build` returns the identities; an empty `skip`
/// means the branch applies. Exact-only checks are evaluated exactly in
/// randomized mode as well.
struct Check {
    RelationId id;
    std::string skip;
    bool exact_only = false;
    std::function<std::vector<Identity>()> build;
};

struct VerifyOptions {
    Mode mode = Mode::Exact;
    int series_order = 0;  // 0 selects the default
    int trials = 20;
    std::uint64_t seed = 1;
    std::set<RelationTag> only;  // empty runs every tag
    int threads = 1;
    std::uint64_t prime = 0;     // 0 selects default_prime()
    Rational rescale = Rational(3);
    bool timings = false;
};

struct VerificationReport {
    std::vector<Entry> entries;
    VerifyOptions options;
    int series_order = 0;
    std::string config;

    bool all_pass() const;
    int count(Status s) const;
};

int default_series_order(const GkloContext& ctx);
std::string relation_name(const GkloContext& ctx, const RelationId& id);

// Individual checks. Guards that do not apply produce a check with `skip`
// set; the caller decides whether that is an error.
Check check_HH(const GeneratorFamily& g, int i, int j);
Check check_H_parity(const GeneratorFamily& g, int i);
Check check_HB(const GeneratorFamily& g, int i, int j);
Check check_BB(const GeneratorFamily& g, int i, int j);
Check check_CommSerre(const GeneratorFamily& g, int i, int j);
Check check_UsualSerre(const GeneratorFamily& g, int i, int j);
Check check_ISerre_gf(const GeneratorFamily& g, int i);
/// `weight_base` is 3 for the true relation; other values are negative controls.
Check check_ISerre_finite(const GeneratorFamily& g, int i, int k1, int k2, int r, int weight_base = 3);
Check check_y_same(const GeneratorFamily& g, int i);
Check check_y_tau(const GeneratorFamily& g, int i);
Check check_y_adjacent(const GeneratorFamily& g, int i, int j);
Check check_y_x(const GeneratorFamily& g, int i, int j);
Check check_cor_cequal0(const GeneratorFamily& g, int i);
Check check_cor_uH(const GeneratorFamily& g, int i);
Check check_trun_div_by_z(const GeneratorFamily& g, int i);
Check check_tilde_H(const GeneratorFamily& g, int i, int n);
Check check_Hiz_symmetric(const GeneratorFamily& g, int i, int order);
Check check_Hiz_vanishing(const GeneratorFamily& g, int i);
Check check_Hiz_leading(const GeneratorFamily& g, int i);
Check check_HH_coeff(const GeneratorFamily& g, int i, int j, int order);
Check check_HB_coeff(const GeneratorFamily& g, int i, int j, int order);
Check check_BB_coeff(const GeneratorFamily& g, int i, int j, int order);
Check check_CommSerre_coeff(const GeneratorFamily& g, int i, int j, int order);
/// Laurent coefficients of the pieces of a generating-function relation
/// against the matching coefficient-form pieces; `which` is HH, HB, BB or
/// CommSerre.
Check check_coeff_consistency(const GeneratorFamily& g, RelationTag which, int i, int j, int order);
Check check_no_tau_denominator(const GeneratorFamily& g, int i);

/// Runs one check. Skipped checks yield a skipped entry.
Entry run_check(const GkloContext& ctx, const Check& c, const VerifyOptions& opt);

struct RescaleResult {
    bool relations_pass = false;
    bool leading_value_pass = false;
    std::vector<Entry> entries;
};
/// Rescales node i's generators and re-runs HH/HB/BB/CommSerre/ISerre.
/// Throws InvalidArgument for scale 0.
RescaleResult check_rescale_invariance(const GkloContext& ctx, int i, const Rational& scale, const VerifyOptions& opt);

/// Every applicable check for the context, in deterministic order.
std::vector<Check> relation_suite(const GeneratorFamily& g, const VerifyOptions& opt, int series_order);

VerificationReport verify_all(const GkloContext& ctx, const VerifyOptions& opt);

/// Machine-readable report (JSON text) and a short human summary.
std::string report_json(const GkloContext& ctx, const VerificationReport& r);
std::string report_summary(const VerificationReport& r);

}  // namespace gklo
