#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "demifield/checks.hpp"

using namespace demifield;
using doctest::Approx;

namespace {

constexpr double kA = 1.5819767068693265;  // e/(e-1)

CheckConfig constant_cfg(double value, MultiIndex box, std::uint64_t replicates = 64) {
    CheckConfig cfg;
    cfg.generator.model = Model::product_martingale;
    cfg.generator.dist.kind = DistKind::degenerate;
    cfg.generator.dist.value = 1.0;
    cfg.generator.c = value;
    cfg.generator.box = LatticeBox(std::move(box));
    cfg.replicates = replicates;
    return cfg;
}

CheckConfig normal_cfg(MultiIndex box, std::uint64_t replicates = 4000) {
    CheckConfig cfg;
    cfg.generator.model = Model::iid_partial_sum;
    cfg.generator.dist.kind = DistKind::standard_normal;
    cfg.generator.box = LatticeBox(std::move(box));
    cfg.replicates = replicates;
    return cfg;
}

}  // namespace

TEST_CASE("positive-field moment bound: exact values on a constant field") {
    CheckConfig cfg = constant_cfg(1.0, {2, 2});
    cfg.p = 2.0;
    auto reports = check_cairoli_moment(cfg);
    REQUIRE(reports.size() == 1);
    const InequalityReport& r = reports[0];
    // max = S_n = 1, so lhs = 1 and rhs = (p/(p-1))^(kp) = 2^4 = 16
    CHECK(r.lhs.est.mean == Approx(1.0));
    CHECK(r.rhs.est.mean == Approx(16.0));
    CHECK(r.margin == Approx(15.0));
    CHECK(r.margin_se == 0.0);
    CHECK(r.verdict == Verdict::HOLD);
    CHECK(r.constants.at("multiplier") == Approx(16.0));
    CHECK(r.constants.at("p") == Approx(2.0));
    CHECK(r.constants.at("k") == Approx(2.0));
}

TEST_CASE("positive-field moment bound rejects p <= 1 and signed fields") {
    CheckConfig cfg = constant_cfg(1.0, {2, 2});
    cfg.p = 1.0;
    CHECK_THROWS_AS(check_cairoli_moment(cfg), std::invalid_argument);
    CheckConfig sgn = normal_cfg({2, 2}, 64);
    sgn.p = 2.0;
    CHECK_THROWS_AS(check_cairoli_moment(sgn), std::invalid_argument);
}

TEST_CASE("positive-field tail bound: exact values on a constant field") {
    CheckConfig cfg = constant_cfg(1.0, {3, 3});
    cfg.eps_grid = {0.5, 2.0};
    auto reports = check_cairoli_prob(cfg);
    REQUIRE(reports.size() == 2);
    // k = 2: constant term A + A^2, log factor 2 A^2; S log+ S = 0 on S = 1
    double rhs = kA + kA * kA;
    CHECK(reports[0].lhs.est.mean == Approx(0.5));  // eps * P(max >= 0.5) = 0.5
    CHECK(reports[0].rhs.est.mean == Approx(rhs).epsilon(1e-12));
    CHECK(reports[0].verdict == Verdict::HOLD);
    CHECK(reports[1].lhs.est.mean == Approx(0.0));  // max = 1 < 2
    CHECK(reports[1].verdict == Verdict::HOLD);
}

TEST_CASE("indicator bound holds on gaussian fields, both extremes") {
    for (const char* variant : {"max", "min"}) {
        CheckConfig cfg = normal_cfg({3, 3});
        cfg.variant = variant;
        cfg.eps_grid = {1.0};
        auto reports = check_doob_indicator(cfg);
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].theorem == std::string("doob_") + variant);
        CHECK(reports[0].verdict == Verdict::HOLD);
    }
    CheckConfig bad = normal_cfg({2, 2}, 64);
    bad.variant = "median";
    CHECK_THROWS_AS(check_doob_indicator(bad), std::invalid_argument);
}

TEST_CASE("rank order with a step transform reproduces the indicator bound") {
    CheckConfig cfg = normal_cfg({3, 3});
    cfg.seed = 21;
    cfg.variant = "max";
    cfg.eps_grid = {1.0};
    auto doob = check_doob_indicator(cfg);

    CheckConfig rank_cfg = cfg;
    rank_cfg.j_rank = 1;  // the first rank order is the box maximum
    rank_cfg.g_mono = MonotoneFn::step(1.0);
    auto rank = check_rank_order(rank_cfg);
    REQUIRE(rank.size() == 2);  // integral form, then the tail form

    // identical fields, identical functionals: the estimates agree exactly
    CHECK(rank[1].lhs.est.mean == doob[0].lhs.est.mean);
    CHECK(rank[1].rhs.est.mean == doob[0].rhs.est.mean);
    CHECK(rank[0].lhs.est.mean == doob[0].lhs.est.mean);
}

TEST_CASE("rank order notes the fallback when j exceeds the box volume") {
    CheckConfig cfg = normal_cfg({2, 2}, 2000);
    cfg.j_rank = 9;
    cfg.eps_grid = {0.5};
    auto reports = check_rank_order(cfg);
    CHECK(reports[0].notes.find("minimum") != std::string::npos);
    for (const auto& r : reports) CHECK(r.verdict == Verdict::HOLD);
}

TEST_CASE("dimension-free moment bound: exact constants") {
    CheckConfig cfg = constant_cfg(1.0, {3, 3});
    cfg.p = 2.0;
    auto reports = check_moment_corollary(cfg);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].rhs.est.mean == Approx(4.0));  // (2/1)^2 * 1
    CHECK(reports[0].constants.at("multiplier") == Approx(4.0));
    // the dimension-free factor is never larger than the k-fold one
    CHECK(reports[0].constants.at("multiplier") <=
          reports[0].constants.at("multiplier_coarse"));
    CHECK(reports[0].verdict == Verdict::HOLD);

    CheckConfig one = constant_cfg(1.0, {3, 3});
    one.p = 1.0;
    auto first = check_moment_corollary(one);
    CHECK(first[0].rhs.est.mean == Approx(kA).epsilon(1e-12));  // A + A*0
    CHECK(first[0].constants.at("A") == Approx(kA).epsilon(1e-12));
    CHECK(first[0].verdict == Verdict::HOLD);
}

TEST_CASE("entropy-style bound: frozen values on a constant half field") {
    CheckConfig cfg = constant_cfg(0.5, {2, 2});
    auto reports = check_harremoes(cfg);
    REQUIRE(reports.size() == 1);
    // gamma(1/2) with origin c = 1/2: 1/2 - ln(1/2) - 1/2 = ln 2
    CHECK(reports[0].lhs.est.mean == Approx(0.6931471805599454).epsilon(1e-12));
    CHECK(reports[0].rhs.est.mean == Approx(1.0965735902799727).epsilon(1e-12));
    CHECK(reports[0].verdict == Verdict::HOLD);

    CheckConfig bad = constant_cfg(1.5, {2, 2});
    CHECK_THROWS_AS(check_harremoes(bad), std::invalid_argument);
    CheckConfig sgn = normal_cfg({2, 2}, 64);
    CHECK_THROWS_AS(check_harremoes(sgn), std::invalid_argument);
}

TEST_CASE("weighted maximal bound holds with factory and explicit weights") {
    CheckConfig cfg = normal_cfg({2, 3});
    cfg.weight_kind = "inverse_product";
    cfg.g = ConvexFn::power(2.0);
    cfg.eps_grid = {0.5};
    auto reports = check_chow(cfg);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == Verdict::HOLD);
    CHECK(reports[0].constants.count("min_direction") == 1);

    // explicit nonincreasing weights must also be accepted
    cfg.weights = WeightArray::from_values(cfg.generator.box,
                                           {1.0, 0.5, 0.25, 0.5, 0.25, 0.125});
    auto explicit_reports = check_chow(cfg);
    CHECK(explicit_reports[0].verdict == Verdict::HOLD);

    // weights increasing along a direction violate the hypothesis
    CheckConfig bad = normal_cfg({2}, 64);
    CHECK_THROWS_AS(
        bad.weights = WeightArray::from_values(bad.generator.box, {0.5, 1.0}),
        std::invalid_argument);
}

TEST_CASE("weighted tail bound: both stated and proof-strength variants hold") {
    CheckConfig cfg = normal_cfg({3, 3});
    cfg.eps_grid = {1.0};
    auto reports = check_hajek_renyi(cfg);
    REQUIRE(reports.size() == 2);
    bool saw_first = false, saw_second = false;
    for (const auto& r : reports) {
        CHECK(r.verdict == Verdict::HOLD);
        if (r.constants.at("weight_power") == 1.0) saw_first = true;
        if (r.constants.at("weight_power") == 2.0) saw_second = true;
    }
    CHECK(saw_first);
    CHECK(saw_second);

    CheckConfig prod = constant_cfg(1.0, {2, 2});
    prod.eps_grid = {1.0};
    CHECK_THROWS_AS(check_hajek_renyi(prod), std::invalid_argument);
}

TEST_CASE("splitting tail bound: degenerate field gives an exact tie") {
    CheckConfig cfg = constant_cfg(1.0, {2, 2});
    cfg.lambda = 0.5;
    cfg.x_thresh = 2.0;
    auto reports = check_orlicz_prob(cfg);
    REQUIRE(reports.size() == 1);
    // max = 1 < 2 so the lhs is 0; (S/lambda - x)+ = (2 - 2)+ = 0
    CHECK(reports[0].lhs.est.mean == 0.0);
    CHECK(reports[0].rhs.est.mean == 0.0);
    CHECK(reports[0].verdict == Verdict::HOLD);

    CheckConfig bad = constant_cfg(1.0, {2, 2});
    bad.lambda = 1.0;
    CHECK_THROWS_AS(check_orlicz_prob(bad), std::invalid_argument);
    bad.lambda = 0.5;
    bad.x_thresh = 0.0;
    CHECK_THROWS_AS(check_orlicz_prob(bad), std::invalid_argument);
}

TEST_CASE("phi-moment bound t53: constant field pins both sides") {
    CheckConfig cfg = constant_cfg(1.0, {2, 2});
    cfg.bound_id = "t53";
    cfg.b = std::numbers::e;
    auto reports = check_orlicz_moment(cfg);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].lhs.est.mean == Approx(1.0));
    CHECK(reports[0].rhs.est.mean == Approx(std::numbers::e).epsilon(1e-12));
    CHECK(reports[0].verdict == Verdict::HOLD);
    // at b = e the report also carries the log-plus comparison bound
    CHECK(reports[0].constants.at("rhs_log_plus_bound") == Approx(kA).epsilon(1e-9));
    CHECK(reports[0].constants.at("mean_pos_part") == Approx(0.0));

    CheckConfig bad = constant_cfg(1.0, {2, 2});
    bad.bound_id = "t53";
    bad.b = 1.0;  // needs b > 1
    CHECK_THROWS_AS(check_orlicz_moment(bad), std::invalid_argument);
}

TEST_CASE("phi-moment bound t54/t55: power transforms carry q_phi") {
    CheckConfig cfg = constant_cfg(1.0, {2, 2});
    cfg.bound_id = "t54";
    cfg.phi = OrliczFn::power(2.0);
    auto t54 = check_orlicz_moment(cfg);
    CHECK(t54[0].constants.at("q_phi") == Approx(2.0));
    CHECK(t54[0].rhs.est.mean == Approx(4.0));  // phi(q * 1) = 4
    CHECK(t54[0].verdict == Verdict::HOLD);

    cfg.bound_id = "t55";
    auto t55 = check_orlicz_moment(cfg);
    CHECK(t55[0].constants.at("multiplier") == Approx(4.0));  // q^p* = 2^2
    CHECK(t55[0].verdict == Verdict::HOLD);

    // x log+ x has an infinite sup exponent: not moderate
    cfg.phi = OrliczFn::xlogplus();
    CHECK_THROWS_AS(check_orlicz_moment(cfg), std::invalid_argument);
}

TEST_CASE("phi-moment bound t56/t56_exp/t57 on degenerate fields") {
    CheckConfig cfg = constant_cfg(1.0, {2, 2});
    cfg.bound_id = "t56";
    cfg.phi = OrliczFn::power(2.0);
    cfg.gamma = 2.0;
    auto t56 = check_orlicz_moment(cfg);
    CHECK(t56[0].rhs.est.mean == Approx(4.0));  // (gamma/(gamma-1))^gamma = 4
    CHECK(t56[0].verdict == Verdict::HOLD);
    cfg.gamma = 3.0;  // phi^(1/3) would be concave for phi = x^2
    CHECK_THROWS_AS(check_orlicz_moment(cfg), std::invalid_argument);

    CheckConfig ex = constant_cfg(0.75, {2, 2});
    ex.bound_id = "t56_exp";
    ex.r_rate = 0.5;
    auto t56e = check_orlicz_moment(ex);
    CHECK(t56e[0].lhs.est.mean == Approx(std::exp(0.375)).epsilon(1e-12));
    CHECK(t56e[0].rhs.est.mean ==
          Approx(std::numbers::e * std::exp(0.375)).epsilon(1e-12));
    CHECK(t56e[0].verdict == Verdict::HOLD);

    CheckConfig t57 = constant_cfg(1.0, {2, 2});
    t57.bound_id = "t57";
    t57.phi = OrliczFn::power(2.0);
    t57.m_order = 1;
    auto r57 = check_orlicz_moment(t57);
    CHECK(r57[0].rhs.est.mean == Approx(4.0));  // ((m+1)/m)^(m+1) = 4
    CHECK(r57[0].verdict == Verdict::HOLD);
    t57.phi = OrliczFn::power(1.5);  // needs p >= m + 1
    CHECK_THROWS_AS(check_orlicz_moment(t57), std::invalid_argument);
}

TEST_CASE("upcrossing bound: deterministic staircase") {
    CheckConfig cfg;
    cfg.generator.model = Model::fixed_increments;
    cfg.generator.dist.kind = DistKind::degenerate;
    cfg.generator.box = LatticeBox({4});
    cfg.generator.increments = {1.0, 1.0, 1.0, 1.0};  // S = 1, 2, 3, 4
    cfg.replicates = 64;
    cfg.a = 1.0;
    cfg.b = 3.0;
    cfg.s_direction = 1;
    auto reports = check_upcross_bound(cfg);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].lhs.est.mean == Approx(1.0));  // one complete crossing
    CHECK(reports[0].rhs.est.mean == Approx(1.5));  // ((4-1)+ - (1-1)+) / 2
    CHECK(reports[0].verdict == Verdict::HOLD);

    cfg.a = 3.0;
    cfg.b = 1.0;
    CHECK_THROWS_AS(check_upcross_bound(cfg), std::invalid_argument);
}

TEST_CASE("simultaneous containment: all variants hold on gaussian fields") {
    CheckConfig cfg = normal_cfg({3, 3});
    cfg.psi.alpha = 1.0;

    cfg.variant = "monotone";
    cfg.g = ConvexFn::pos_part_power(2.0);
    CHECK(check_whittle(cfg)[0].verdict == Verdict::HOLD);

    cfg.variant = "general";
    cfg.g = ConvexFn::power(2.0);
    CHECK(check_whittle(cfg)[0].verdict == Verdict::HOLD);

    cfg.variant = "sup_form";
    cfg.eps_grid = {0.5};
    CHECK(check_whittle(cfg)[0].verdict == Verdict::HOLD);

    // the monotone variant requires a transform nondecreasing on all reals
    cfg.variant = "monotone";
    cfg.g = ConvexFn::power(2.0);
    CHECK_THROWS_AS(check_whittle(cfg), std::invalid_argument);
}

TEST_CASE("negative control reports a violation on any nondegenerate field") {
    CheckConfig cfg = normal_cfg({2, 2}, 2000);
    auto reports = check_negative_control(cfg);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == Verdict::VIOLATION);
    CHECK(reports[0].notes.find("deliberately false") != std::string::npos);
}

TEST_CASE("heavy tails degrade the verdict to INCONCLUSIVE, not HOLD") {
    CheckConfig cfg;
    cfg.generator.model = Model::product_martingale;
    cfg.generator.dist.kind = DistKind::lognormal_mean1;
    cfg.generator.dist.sigma = 1.5;
    cfg.generator.box = LatticeBox({4, 4});
    cfg.replicates = 500;
    cfg.p = 3.0;
    auto reports = check_cairoli_moment(cfg);
    CHECK(reports[0].verdict == Verdict::INCONCLUSIVE);
    CHECK(reports[0].rhs.effective < 30);
}

TEST_CASE("trend checks demand growing boxes and usable hypotheses") {
    // constant field: E S ln S = 0, the ratio is undefined
    CheckConfig flat = constant_cfg(1.0, {2, 2}, 200);
    flat.box_sequence = {LatticeBox({2, 2}), LatticeBox({4, 4})};
    CHECK_THROWS_AS(check_limsup_trend(flat), std::domain_error);

    CheckConfig one_box = constant_cfg(1.0, {2, 2}, 200);
    one_box.box_sequence = {LatticeBox({2, 2})};
    CHECK_THROWS_AS(check_limsup_trend(one_box), std::invalid_argument);

    // flat psi never diverges, so the convergence hypothesis fails
    CheckConfig bounded = normal_cfg({2, 2}, 200);
    bounded.box_sequence = {LatticeBox({2, 2}), LatticeBox({4, 4})};
    bounded.psi.alpha = 0.0;
    bounded.g = ConvexFn::power(2.0);
    CHECK_THROWS_AS(check_whittle_trend(bounded), std::domain_error);

    // constant weights make the summability series diverge
    CheckConfig heavy = normal_cfg({4, 4}, 400);
    heavy.box_sequence = {LatticeBox({4, 4}), LatticeBox({8, 8})};
    heavy.weight_kind = "ones";
    heavy.g = ConvexFn::power(1.0);
    heavy.p = 2.0;
    CHECK_THROWS_AS(check_chow_convergence_trend(heavy), std::domain_error);
}

TEST_CASE("trend diagnostics carry the finite-sample label") {
    CheckConfig cfg;
    cfg.generator.model = Model::product_martingale;
    cfg.generator.dist.kind = DistKind::lognormal_mean1;
    cfg.generator.dist.sigma = 0.1;
    cfg.generator.box = LatticeBox({4, 4});
    cfg.replicates = 2000;
    cfg.box_sequence = {LatticeBox({4, 4}), LatticeBox({8, 8})};
    TrendReport trend = check_limsup_trend(cfg);
    CHECK(trend.note.find("finite-n diagnostic") != std::string::npos);
    REQUIRE(trend.points.size() == 2);
    CHECK(trend.points[0].value > trend.points[1].value);
}
