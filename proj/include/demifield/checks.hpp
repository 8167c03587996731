#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "demifield/fields.hpp"
#include "demifield/funcs.hpp"
#include "demifield/stats.hpp"

namespace demifield {

enum class Verdict { HOLD, VIOLATION, INCONCLUSIVE };

const char* verdict_name(Verdict v);

// One bag of knobs shared by every check; each check validates the subset it
// actually reads against its own hypotheses.
struct CheckConfig {
    GeneratorSpec generator;
    std::uint64_t replicates = 10000;
    double z = 3.0;
    std::uint64_t seed = 1;
    int workers = 0;  // 0: resolve from DEMIFIELD_WORKERS / hardware

    double p = 2.0;                      // moment exponent
    std::vector<double> eps_grid = {1.0};
    double lambda = 0.5;                 // Orlicz splitting parameter
    double x_thresh = 1.0;               // Orlicz tail level
    double a = 0.0;
    double b = 1.0;
    double gamma = 2.0;
    double r_rate = 1.0;                 // exponential rate
    int m_order = 1;                     // derivative order
    std::uint64_t j_rank = 1;            // rank order index
    int s_direction = 1;                 // 1-based lattice direction
    double delta = 0.5;                  // trend tail threshold
    std::string variant = "max";         // doob: max/min; whittle: monotone/general/sup_form
    std::string bound_id = "t52";        // orlicz_moment selector t51..t57, t56_exp

    ConvexFn g = ConvexFn::power(2.0);
    MonotoneFn g_mono = MonotoneFn::identity();
    OrliczFn phi = OrliczFn::power(2.0);
    PsiFn psi;
    WeightArray weights;        // empty: built from weight_kind on the box
    ThresholdSeq thresholds;    // empty: built from threshold_kind and psi
    std::vector<LatticeBox> box_sequence;  // trend checks
    // factory names; trend checks rebuild weights/thresholds per box from these
    std::string weight_kind = "ones";  // ones | inverse_product | inverse_sum
    std::string threshold_kind = "product_of_coords";  // product_of_coords | sum_of_coords

    void validate_common() const;  // replicates >= 2, z > 0, generator valid
};

// One estimated side of an inequality. A side whose integrand is an unbounded
// function of the field is flagged heavy and carries the effective-sample
// diagnostic (how many replicates hold 90% of the absolute mass).
struct SideStats {
    Estimate est;
    std::size_t effective = 0;
    bool heavy = false;

    bool reliable() const { return !heavy || effective >= kMinEffective; }
};

struct InequalityReport {
    std::string theorem;
    std::string direction = "le";  // "le": claim lhs <= rhs; "ge": lhs >= rhs
    SideStats lhs, rhs;
    double margin = 0.0;     // favorable slack: rhs-lhs under "le", lhs-rhs under "ge"
    double margin_se = 0.0;  // SE of the margin (paired where possible)
    double z_threshold = 3.0;
    Verdict verdict = Verdict::HOLD;
    std::uint64_t replicates = 0;
    std::uint64_t seed = 0;
    std::string rng = kRngId;
    std::map<std::string, double> constants;  // resolved multipliers, levels
    std::string notes;
    CheckConfig config;  // verbatim parameter echo
};

struct TrendPoint {
    LatticeBox box;
    double value = 0.0;
    double se = 0.0;
    double secondary = 0.0;  // companion series (check-specific)
};

// Finite-n trend diagnostic; never a statement about the limit itself.
struct TrendReport {
    std::string check;
    std::string quantity;
    std::string secondary_quantity;
    std::vector<TrendPoint> points;
    bool decreasing = false;         // each step down within 3 combined SE
    bool final_within_bound = false; // final value <= bound + 3 SE
    double bound = 0.0;
    std::string note = "finite-n diagnostic, not a limit proof";
    std::uint64_t replicates = 0;
    std::uint64_t seed = 0;
    CheckConfig config;
};

// --------------------------------------------------------------------------
// Maximal inequalities. Each returns one report per parameter-grid entry
// (size one when there is no grid) with paired lhs/rhs estimation.

// E(max S)^p <= (p/(p-1))^(kp) E(S_n)^p on positive fields, p > 1.
std::vector<InequalityReport> check_cairoli_moment(const CheckConfig& cfg);

// eps P(max S >= eps) <= sum_{i=1}^k (i-1)! A^i + k! A^k E(S_n (log+ S_n)^k).
std::vector<InequalityReport> check_cairoli_prob(const CheckConfig& cfg);

// eps P(ext S >= eps) <= E(S_n I(ext S >= eps)), ext = max or min (variant).
std::vector<InequalityReport> check_doob_indicator(const CheckConfig& cfg);

// E[int_0^(R^(j)) u dg(u)] <= E(S_n g(R^(j))) plus the tail form per eps.
std::vector<InequalityReport> check_rank_order(const CheckConfig& cfg);

// E(max)^p <= (p/(p-1))^p E(S_n)^p (p > 1) or the log+ bound at p = 1, on
// nonnegative fields; the coarser dimension-dependent bound rides along.
std::vector<InequalityReport> check_moment_corollary(const CheckConfig& cfg);

// gamma(E max) <= 1 - c^2 - ln c + E(S_n ln S_n) on positive fields with
// origin value c in (0,1].
std::vector<InequalityReport> check_harremoes(const CheckConfig& cfg);

// Ratio E(max)/E(S_n ln S_n) across a growing box sequence.
TrendReport check_limsup_trend(const CheckConfig& cfg);

// eps P(max c g(S) >= eps) <= min_s sum_i c_(n;s;i) E[(g(S_(n;s;i)) -
// g(S_(n;s;i-1))) I(max c g(S) >= eps)].
std::vector<InequalityReport> check_chow(const CheckConfig& cfg);

// Tail probabilities of c g(S) over the far quadrant across growing boxes,
// gated on numeric summability of the single-direction series.
TrendReport check_chow_convergence_trend(const CheckConfig& cfg);

// P(max c|S| >= eps) <= min_s eps^-2 sum_j c_(n;s;j)[2Cov(X_j, S_(j-1)) +
// E(X_j^2)]; reported with both the stated weights and their squares.
std::vector<InequalityReport> check_hajek_renyi(const CheckConfig& cfg);

// P(max >= x) <= lambda/((1-lambda)x) E(S_n/lambda - x)^+.
std::vector<InequalityReport> check_orlicz_prob(const CheckConfig& cfg);

// One of the phi-moment bounds, selected by cfg.bound_id:
//   t51: E phi(max) <= phi(b) + l/(1-l) E[(Phi_a(S/l) - Phi_a(b)
//        - Phi_a'(b)(S/l - b)) I(S > l b)]
//   t52: E phi(max) <= phi(a) + l/(1-l) E[Phi_a(S/l)]
//   t53: E(max) <= b + b/(b-1) (E(S log+ S) - E(S-1)^+), b > 1
//   t54: E phi(max) <= E phi(q_phi S)
//   t55: E phi(max) <= q_phi^(p*_phi) E phi(S)   (moderate phi)
//   t56: E phi(max) <= (g/(g-1))^g E phi(S)      (phi^(1/g) convex)
//   t56_exp: E e^(r max) <= e E e^(r S)
//   t57: E phi(max) <= ((m+1)/m)^(m+1) E phi(S)  (phi^(m) an Orlicz function)
std::vector<InequalityReport> check_orlicz_moment(const CheckConfig& cfg);

// E(U_(n_s)(a,b)) <= [E(S_n - a)^+ - E(S_(n;s;1) - a)^+] / (b - a).
std::vector<InequalityReport> check_upcross_bound(const CheckConfig& cfg);

// P(phi(S_j) <= psi(u_j) for all j <= n) >= 1 - min_s sum_i
// E(phi(S_(n;s;i)) - phi(S_(n;s;i-1)))/psi(u_(n;s;i)); variant sup_form
// checks eps P(sup phi(S)/psi(u) >= eps) <= min_s sum_i (...).
std::vector<InequalityReport> check_whittle(const CheckConfig& cfg);

// Tail probabilities of phi(S)/psi(u) over the far quadrant across growing
// boxes, gated on psi unboundedness and numeric summability.
TrendReport check_whittle_trend(const CheckConfig& cfg);

// Deliberately false bound (E|S_n| <= 0 on a nondegenerate field); must come
// back VIOLATION. Exercises the failure path end to end.
std::vector<InequalityReport> check_negative_control(const CheckConfig& cfg);

}  // namespace demifield
