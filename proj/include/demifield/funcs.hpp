#pragma once

#include <numbers>
#include <vector>

#include "demifield/lattice.hpp"

namespace demifield {

// e/(e-1), the factor in front of the log+ probability and moment bounds.
inline constexpr double kLogPlusFactor = std::numbers::e / (std::numbers::e - 1.0);

// max(ln x, 0) for x >= 0, with log_plus(0) = 0. Throws on negative input.
double log_plus(double x);

// gamma(x) = x - ln x - c for x > 0 (the Harremoes comparison function).
double gamma_fn(double x, double c);

// ---------------------------------------------------------------------------
// Nonnegative convex g with g(0) = 0, on the whole real line (Chow / Whittle
// test functions). ramp_sum is sum_j w_j * max(x - t_j, 0) with t_j, w_j >= 0.
struct ConvexFn {
    enum class Kind { power, pos_part_power, identity_nonneg, ramp_sum };

    Kind kind = Kind::power;
    double p = 2.0;
    std::vector<double> thresholds;
    std::vector<double> weights;

    double operator()(double x) const;
    // true for the kinds that are nondecreasing over all of R (|x|^p is not)
    bool nondecreasing_on_reals() const;
    void validate() const;

    static ConvexFn power(double p);
    static ConvexFn pos_part_power(double p);
    static ConvexFn identity_nonneg();
    static ConvexFn ramp_sum(std::vector<double> thresholds, std::vector<double> weights);
};

// ---------------------------------------------------------------------------
// Orlicz function: unbounded nondecreasing convex phi : [0,inf) -> [0,inf)
// with phi(0) = 0. Closed symbolic families only; derivatives are analytic
// (right derivative at kinks).
struct OrliczFn {
    enum class Kind {
        power,          // x^p, p >= 1 (p > 1 wherever a theorem needs p_phi > 1)
        xlogplus,       // x * log+ x
        exp_minus_one,  // e^(r x) - 1, r > 0
    };

    Kind kind = Kind::power;
    double p = 2.0;
    double r = 1.0;

    double operator()(double x) const;  // domain x >= 0
    double deriv(double x) const;       // right derivative
    // is phi'(r)/r integrable at 0 (gates a = 0 in big_phi_a)
    bool deriv_over_r_integrable_at_zero() const;
    void validate() const;

    static OrliczFn power(double p);
    static OrliczFn xlogplus();
    static OrliczFn exp_minus_one(double r);
};

// sup / inf over x > 0 of x phi'(x)/phi(x). Every built-in kind has an
// analytic answer; grid_estimated marks values that would come from a probe
// grid instead, and is_infinite marks a divergent sup (the function is not
// moderate).
struct PhiExponent {
    double value = 0.0;
    bool grid_estimated = false;
    bool is_infinite = false;
};

PhiExponent p_phi_star(const OrliczFn& phi);  // sup
PhiExponent p_phi_inf(const OrliczFn& phi);   // inf
// q_phi = p_phi / (p_phi - 1); requires an analytic p_phi > 1.
double q_phi(const OrliczFn& phi);

// Phi_a(x) = int_a^x int_a^s phi'(r)/r dr ds, with Phi_a(x) = 0 for x <= a.
// By Fubini this is the single integral int_a^x phi'(r)/r * (x - r) dr, which
// is what the quadrature path evaluates (adaptive Simpson, abs tol 1e-9).
enum class PhiAMethod { automatic, closed_form, quadrature };
double big_phi_a(const OrliczFn& phi, double a, double x,
                 PhiAMethod method = PhiAMethod::automatic);

// Right derivative of Phi_a at b: the inner integral int_a^b phi'(r)/r dr.
double big_phi_a_deriv(const OrliczFn& phi, double a, double b);

// ---------------------------------------------------------------------------
// Nondecreasing g on R with g(0) = 0, dg available in closed form (the rank
// order integrals).
struct MonotoneFn {
    enum class Kind {
        identity,        // g(u) = u
        pos_part_power,  // g(u) = (max(u,0))^p, p >= 1
        step,            // g(u) = 1(u >= t), t > 0
    };

    Kind kind = Kind::identity;
    double p = 1.0;
    double threshold = 1.0;

    double operator()(double u) const;
    void validate() const;

    static MonotoneFn identity();
    static MonotoneFn pos_part_power(double p);
    static MonotoneFn step(double threshold);
};

// int_0^x u dg(u) in closed form (signed orientation, so the identity kind
// gives x^2/2 for negative x as well).
double integral_u_dg(const MonotoneFn& g, double x);

// ---------------------------------------------------------------------------
// psi(u) = u^alpha, alpha >= 0: positive nondecreasing on u > 0; unbounded
// exactly when alpha > 0 (the Whittle convergence hypothesis).
struct PsiFn {
    double alpha = 1.0;

    double operator()(double u) const;
    bool unbounded() const { return alpha > 0.0; }
    void validate() const;
};

// ---------------------------------------------------------------------------
// Positive weights over a box, nonincreasing along every coordinate
// direction (c_i >= c_j whenever i <= j). Values in box_iter order.
struct WeightArray {
    LatticeBox box;
    std::vector<double> c;

    void validate() const;
    double at_linear(std::uint64_t off) const { return c[off]; }

    static WeightArray ones(const LatticeBox& box);
    static WeightArray inverse_product(const LatticeBox& box);  // 1 / prod(coords)
    static WeightArray inverse_sum(const LatticeBox& box);      // 1 / sum(coords)
    static WeightArray from_values(const LatticeBox& box, std::vector<double> values);
};

// Positive thresholds over a box, nondecreasing along every direction,
// paired with the psi they are fed through.
struct ThresholdSeq {
    LatticeBox box;
    std::vector<double> u;
    PsiFn psi;

    void validate() const;
    double at_linear(std::uint64_t off) const { return u[off]; }

    static ThresholdSeq product_of_coords(const LatticeBox& box, PsiFn psi);
    static ThresholdSeq sum_of_coords(const LatticeBox& box, PsiFn psi);
};

}  // namespace demifield
