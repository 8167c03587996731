#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "demifield/funcs.hpp"

using namespace demifield;
using doctest::Approx;

TEST_CASE("log_plus clips below one") {
    CHECK(log_plus(0.5) == 0.0);
    CHECK(log_plus(1.0) == 0.0);
    CHECK(log_plus(std::numbers::e) == Approx(1.0));
    CHECK(log_plus(0.0) == 0.0);
}

TEST_CASE("log-plus factor is e/(e-1)") {
    CHECK(kLogPlusFactor == Approx(1.5819767068693265).epsilon(1e-15));
}

TEST_CASE("gamma_fn at its minimum and away from it") {
    // x - ln x - c has its minimum value 1 - c at x = 1
    CHECK(gamma_fn(1.0, 0.5) == Approx(0.5));
    CHECK(gamma_fn(2.0, 1.0) == Approx(2.0 - std::log(2.0) - 1.0));
    CHECK_THROWS_AS(gamma_fn(0.0, 0.5), std::domain_error);
}

TEST_CASE("convex function kinds") {
    ConvexFn sq = ConvexFn::power(2.0);
    CHECK(sq(-3.0) == Approx(9.0));
    CHECK_FALSE(sq.nondecreasing_on_reals());

    ConvexFn ramp = ConvexFn::pos_part_power(2.0);
    CHECK(ramp(-3.0) == 0.0);
    CHECK(ramp(2.0) == Approx(4.0));
    CHECK(ramp.nondecreasing_on_reals());

    ConvexFn idn = ConvexFn::identity_nonneg();
    CHECK(idn(-1.0) == 0.0);
    CHECK(idn(2.5) == Approx(2.5));

    ConvexFn rs = ConvexFn::ramp_sum({0.0, 1.0}, {1.0, 2.0});
    CHECK(rs(0.5) == Approx(0.5));
    CHECK(rs(2.0) == Approx(2.0 + 2.0 * 1.0));
    CHECK(rs.nondecreasing_on_reals());
    CHECK_THROWS_AS(ConvexFn::ramp_sum({0.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(ConvexFn::ramp_sum({0.0}, {-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ConvexFn::power(0.5), std::invalid_argument);
}

TEST_CASE("orlicz function values and derivatives") {
    OrliczFn p2 = OrliczFn::power(2.0);
    CHECK(p2(3.0) == Approx(9.0));
    CHECK(p2.deriv(3.0) == Approx(6.0));
    CHECK(p2.deriv_over_r_integrable_at_zero());

    OrliczFn xl = OrliczFn::xlogplus();
    CHECK(xl(0.5) == 0.0);
    CHECK(xl(std::numbers::e) == Approx(std::numbers::e));

    OrliczFn ex = OrliczFn::exp_minus_one(2.0);
    CHECK(ex(1.0) == Approx(std::exp(2.0) - 1.0));
    CHECK(ex.deriv(0.0) == Approx(2.0));
    CHECK_FALSE(ex.deriv_over_r_integrable_at_zero());

    CHECK_THROWS_AS(OrliczFn::power(0.9), std::invalid_argument);
    CHECK_THROWS_AS(OrliczFn::exp_minus_one(0.0), std::invalid_argument);
}

TEST_CASE("phi exponent p* for the standard families") {
    // power p: x phi'/phi = p exactly
    PhiExponent e2 = p_phi_star(OrliczFn::power(2.0));
    CHECK(e2.value == Approx(2.0));
    CHECK_FALSE(e2.is_infinite);

    // x log+ x: x phi'/phi = 1 + 1/log x -> unbounded near x = 1+
    PhiExponent exl = p_phi_star(OrliczFn::xlogplus());
    CHECK(exl.is_infinite);

    // exponential: x phi'/phi unbounded as x -> infinity
    PhiExponent eex = p_phi_star(OrliczFn::exp_minus_one(1.0));
    CHECK(eex.is_infinite);

    CHECK(q_phi(OrliczFn::power(2.0)) == Approx(2.0));
    CHECK(q_phi(OrliczFn::power(3.0)) == Approx(1.5));
    CHECK_THROWS_AS(q_phi(OrliczFn::power(1.0)), std::domain_error);
    CHECK_THROWS_AS(q_phi(OrliczFn::xlogplus()), std::domain_error);
}

TEST_CASE("double integral transform: closed form for powers") {
    // for phi = x^p with a = 0 the transform collapses back to phi / (p-1)... no:
    // integrating phi'(r)/r = p r^{p-2} twice from 0 gives x^p / (p-1).
    OrliczFn p3 = OrliczFn::power(3.0);
    CHECK(big_phi_a(p3, 0.0, 2.0) == Approx(8.0 / 2.0).epsilon(1e-10));
    // p = 1 with a > 0: phi'/r integrates to log, giving x log(x/a) - (x - a)
    OrliczFn p1 = OrliczFn::power(1.0);
    double x = std::numbers::e;
    CHECK(big_phi_a(p1, 1.0, x) == Approx(x * 1.0 - (x - 1.0)).epsilon(1e-10));
}

TEST_CASE("double integral transform: frozen quadrature values") {
    // values frozen from an independent adaptive-Simpson evaluation
    OrliczFn xl = OrliczFn::xlogplus();
    CHECK(big_phi_a(xl, 0.5, 3.0, PhiAMethod::quadrature) ==
          Approx(1.81042344122774).epsilon(1e-9));
    CHECK(big_phi_a(xl, 0.0, 2.0, PhiAMethod::quadrature) ==
          Approx(0.480453013927251).epsilon(1e-9));
    CHECK(big_phi_a(xl, 1.0, 4.0, PhiAMethod::quadrature) ==
          Approx(3.8436241113456).epsilon(1e-9));
    CHECK(big_phi_a(xl, 2.0, 5.0, PhiAMethod::quadrature) ==
          Approx(3.19515190847518).epsilon(1e-9));

    OrliczFn ex = OrliczFn::exp_minus_one(1.0);
    CHECK(big_phi_a(ex, 0.5, 2.0, PhiAMethod::quadrature) ==
          Approx(3.25969407404692).epsilon(1e-9));
    CHECK(big_phi_a(ex, 1.0, 3.0, PhiAMethod::quadrature) ==
          Approx(6.74888916807982).epsilon(1e-9));

    CHECK(big_phi_a(OrliczFn::power(3.0), 0.5, 2.0, PhiAMethod::quadrature) ==
          Approx(3.375).epsilon(1e-9));
}

TEST_CASE("quadrature agrees with the closed forms") {
    for (double p : {1.5, 2.0, 2.5, 3.0}) {
        OrliczFn phi = OrliczFn::power(p);
        for (double a : {0.0, 0.5, 1.0})
            for (double x = a + 0.5; x < 5.0; x += 0.7)
                CHECK(big_phi_a(phi, a, x, PhiAMethod::quadrature) ==
                      Approx(big_phi_a(phi, a, x, PhiAMethod::closed_form))
                          .epsilon(1e-8));
    }
}

TEST_CASE("transform derivative and domain errors") {
    // d/dx Phi_a(x) = integral_a^x phi'(r)/r dr; for x^2 that is 2(b - a)
    CHECK(big_phi_a_deriv(OrliczFn::power(2.0), 0.5, 2.0) == Approx(3.0));
    CHECK(big_phi_a(OrliczFn::power(2.0), 1.0, 1.0) == 0.0);
    // below the anchor the transform is zero by convention
    CHECK(big_phi_a(OrliczFn::power(2.0), 2.0, 1.0) == 0.0);
    // the exponential family diverges at a = 0
    CHECK_THROWS_AS(big_phi_a(OrliczFn::exp_minus_one(1.0), 0.0, 1.0),
                    std::domain_error);
}

TEST_CASE("monotone test functions") {
    MonotoneFn idn = MonotoneFn::identity();
    CHECK(idn(-2.0) == -2.0);
    MonotoneFn ppw = MonotoneFn::pos_part_power(2.0);
    CHECK(ppw(-2.0) == 0.0);
    CHECK(ppw(3.0) == Approx(9.0));
    MonotoneFn st = MonotoneFn::step(1.5);
    CHECK(st(1.0) == 0.0);
    CHECK(st(2.0) == 1.0);
}

TEST_CASE("integral of u dg(u)") {
    // identity g: integral_0^x u du = x^2 / 2, the signed value either side of 0
    CHECK(integral_u_dg(MonotoneFn::identity(), 3.0) == Approx(4.5));
    CHECK(integral_u_dg(MonotoneFn::identity(), -1.0) == Approx(0.5));
    // step g at t: the integrand dumps mass t at the jump when x >= t
    CHECK(integral_u_dg(MonotoneFn::step(1.5), 2.0) == Approx(1.5));
    CHECK(integral_u_dg(MonotoneFn::step(1.5), 1.0) == 0.0);
    // (u^+)^2: integral_0^x u d(u^2) = 2x^3/3
    CHECK(integral_u_dg(MonotoneFn::pos_part_power(2.0), 2.0) ==
          Approx(16.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("psi threshold scale") {
    PsiFn psi;
    psi.alpha = 2.0;
    CHECK(psi(3.0) == Approx(9.0));
    CHECK(psi.unbounded());
    PsiFn flat;
    flat.alpha = 0.0;
    CHECK(flat(100.0) == Approx(1.0));
    CHECK_FALSE(flat.unbounded());
    PsiFn bad;
    bad.alpha = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("weight factories") {
    LatticeBox box({2, 3});
    WeightArray ones = WeightArray::ones(box);
    CHECK(ones.at_linear(0) == 1.0);
    CHECK(ones.at_linear(5) == 1.0);

    WeightArray ip = WeightArray::inverse_product(box);
    CHECK(ip.at_linear(box.linear({1, 1})) == Approx(1.0));
    CHECK(ip.at_linear(box.linear({2, 3})) == Approx(1.0 / 6.0));

    WeightArray is = WeightArray::inverse_sum(box);
    CHECK(is.at_linear(box.linear({2, 3})) == Approx(1.0 / 5.0));

    CHECK_THROWS_AS(WeightArray::from_values(box, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightArray::from_values(box, {1, 1, 1, 1, 1, -1}),
                    std::invalid_argument);
}

TEST_CASE("threshold factories are positive and match psi") {
    LatticeBox box({2, 2});
    PsiFn psi;
    psi.alpha = 1.0;
    ThresholdSeq prod = ThresholdSeq::product_of_coords(box, psi);
    CHECK(prod.at_linear(box.linear({2, 2})) == Approx(4.0));
    ThresholdSeq sum = ThresholdSeq::sum_of_coords(box, psi);
    CHECK(sum.at_linear(box.linear({2, 2})) == Approx(4.0));
    CHECK(sum.at_linear(box.linear({1, 2})) == Approx(3.0));
}
