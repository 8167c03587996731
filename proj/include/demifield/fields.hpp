#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "demifield/estimate.hpp"
#include "demifield/lattice.hpp"
#include "demifield/rng.hpp"

namespace demifield {

// ---------------------------------------------------------------------------
// Increment / multiplier distributions. Sum models draw the centered form
// (mean exactly 0 by construction, never by sample centering); the product
// model draws the positive mean-one form.
enum class DistKind {
    standard_normal,
    centered_exponential,  // Exp(1) - 1
    rademacher,            // +/-1 with equal probability
    lognormal_mean1,       // exp(sigma Z - sigma^2/2), mean exactly 1
    degenerate,            // the constant `value`
};

struct DistSpec {
    DistKind kind = DistKind::standard_normal;
    double sigma = 0.5;  // lognormal_mean1 log-sd
    double value = 0.0;  // degenerate constant

    double draw_centered(RandomStream& rng) const;    // mean-zero draw
    double draw_multiplier(RandomStream& rng) const;  // positive mean-one draw
    double centered_sd() const;  // population sd of draw_centered
    void validate() const;
};

enum class Model {
    iid_partial_sum,
    moving_average,      // nonnegative finite kernel over iid innovations
    product_martingale,  // running product of mean-one multipliers, origin = c
    fixed_increments,    // injected deterministic increments (controls)
};

// Finite nonnegative moving-average kernel; taps in box_iter order over the
// tap box.
struct KernelSpec {
    LatticeBox taps_box;
    std::vector<double> taps;

    double tap_sum() const;
    void validate(int field_dims) const;
};

struct GeneratorSpec {
    Model model = Model::iid_partial_sum;
    DistSpec dist;
    LatticeBox box;
    KernelSpec kernel;               // moving_average only
    double c = 1.0;                  // product_martingale origin value
    std::vector<double> increments;  // fixed_increments only, box_iter order

    void validate() const;
    // true when every field value is positive by construction (product model)
    bool positive_field() const { return model == Model::product_martingale; }
    std::string model_name() const;
    std::string dist_name() const;
};

// One realization of the field S over the box. Reading any index with a zero
// coordinate yields exactly 0 (the boundary convention for partial sums).
struct FieldSample {
    LatticeBox box;
    std::vector<double> values;  // box_iter order

    double at(const MultiIndex& i) const;
    double at_linear(std::uint64_t off) const { return values[off]; }
    double far_corner() const { return values.back(); }
};

// Partial sums S_n = sum over i <= n of the increments, computed by the
// k-dimensional running-sum sweep (one in-place pass per dimension).
FieldSample partial_sums(const LatticeBox& box, std::vector<double> increments);

// The increment array X (before summation) for the sum-type models; the
// product model has no additive increments and throws.
std::vector<double> sample_increments(const GeneratorSpec& spec, std::uint64_t seed);

// One field realization, deterministic given (spec, seed).
FieldSample sample_field(const GeneratorSpec& spec, std::uint64_t seed);

// Analytic scale of the far-corner value, used to calibrate test-function
// threshold grids. Falls back to 1 when the model's scale is 0 (degenerate).
double field_scale(const GeneratorSpec& spec);

// ---------------------------------------------------------------------------
// Componentwise nondecreasing test functions f : R^m -> R.
struct TestFn {
    enum class Kind {
        constant_one,  // f = 1
        coord_mean,    // mean of all arguments (strictly increasing)
        coordinate,    // projection onto argument `coord`
        ramp_sum,      // sum_j max(x_j - t, 0)
        step_sum,      // sum_j 1(x_j >= t)
        step_product,  // prod_j 1(x_j >= t)
    };

    Kind kind = Kind::constant_one;
    double threshold = 0.0;
    int coord = 0;  // 0-based, coordinate kind only
    std::string name;

    double operator()(const std::vector<double>& xs) const;
};

struct TestFunctionFamily {
    std::vector<TestFn> members;

    // The constant 1, the coordinate mean, and ramp/step-sum/step-product
    // members over a 7-point threshold grid spanning [-2*scale, +2*scale].
    static TestFunctionFamily standard(double scale);
    // Coordinate projections x -> x_j, j = 0..m-1.
    static TestFunctionFamily coordinates(int m);
};

// ---------------------------------------------------------------------------
// Empirical oracles for the defining properties.

struct OracleCell {
    std::string label;
    Estimate est;
    bool pass = false;
};

struct OracleReport {
    double z = 3.0;
    std::vector<OracleCell> cells;

    std::size_t fail_count() const;
    bool all_pass() const { return fail_count() == 0; }
};

using IndexPair = std::pair<MultiIndex, MultiIndex>;

// Monte-Carlo estimate of E[(S_j - S_i) f(S_k, k <= i)] for every (pair,
// member) cell; PASS when the estimate is >= -z * SE.
OracleReport demimartingale_oracle(const GeneratorSpec& spec,
                                   const TestFunctionFamily& family,
                                   const std::vector<IndexPair>& pairs,
                                   std::uint64_t replicates, std::uint64_t seed,
                                   double z = 3.0, int workers = 0);

// Vector sources for the association oracle.
struct VectorSampler {
    enum class Kind {
        iid_vector,        // m independent centered draws
        antithetic_pair,   // (Z, -Z): a deliberately non-associated pair
        field_increments,  // increments of a sum-model field
    };

    Kind kind = Kind::iid_vector;
    int m = 2;
    DistSpec dist;        // iid_vector
    GeneratorSpec field;  // field_increments

    std::size_t dim() const;
    std::vector<double> sample(std::uint64_t seed) const;
    void validate() const;
};

struct FnPair {
    TestFn f;
    TestFn g;
};

// Monte-Carlo estimate of Cov(f(X), g(X)) per pair; PASS when >= -z * SE.
OracleReport association_oracle(const VectorSampler& sampler,
                                const std::vector<FnPair>& pairs,
                                std::uint64_t replicates, std::uint64_t seed,
                                double z = 3.0, int workers = 0);

}  // namespace demifield
