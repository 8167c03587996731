#include "demifield/fields.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "demifield/parallel.hpp"

namespace demifield {

// --------------------------------------------------------------------------
// DistSpec

double DistSpec::draw_centered(RandomStream& rng) const {
    switch (kind) {
        case DistKind::standard_normal:
            return rng.normal();
        case DistKind::centered_exponential:
            // -ln(1 - U) is Exp(1); U in [0,1) keeps the argument positive
            return -std::log(1.0 - rng.uniform()) - 1.0;
        case DistKind::rademacher:
            return rng.uniform() < 0.5 ? -1.0 : 1.0;
        case DistKind::lognormal_mean1:
            return std::exp(sigma * rng.normal() - 0.5 * sigma * sigma) - 1.0;
        case DistKind::degenerate:
            return value;
    }
    return 0.0;
}

double DistSpec::draw_multiplier(RandomStream& rng) const {
    switch (kind) {
        case DistKind::lognormal_mean1:
            return std::exp(sigma * rng.normal() - 0.5 * sigma * sigma);
        case DistKind::degenerate:
            return value;
        default:
            throw std::invalid_argument(
                "multiplier draws need a positive mean-one distribution "
                "(lognormal_mean1 or degenerate at 1)");
    }
}

double DistSpec::centered_sd() const {
    switch (kind) {
        case DistKind::standard_normal:
        case DistKind::centered_exponential:
        case DistKind::rademacher:
            return 1.0;
        case DistKind::lognormal_mean1:
            return std::sqrt(std::expm1(sigma * sigma));
        case DistKind::degenerate:
            return 0.0;
    }
    return 0.0;
}

void DistSpec::validate() const {
    if (kind == DistKind::lognormal_mean1 && !(sigma > 0.0 && std::isfinite(sigma)))
        throw std::invalid_argument("lognormal_mean1 needs sigma > 0");
    if (kind == DistKind::degenerate && !std::isfinite(value))
        throw std::invalid_argument("degenerate value must be finite");
}

// --------------------------------------------------------------------------
// KernelSpec / GeneratorSpec

double KernelSpec::tap_sum() const {
    double s = 0.0;
    for (double t : taps) s += t;
    return s;
}

void KernelSpec::validate(int field_dims) const {
    if (taps_box.dims() != field_dims)
        throw std::invalid_argument("kernel dimensionality must match the box");
    if (taps.size() != taps_box.volume())
        throw std::invalid_argument("kernel tap count must equal its box volume");
    bool any = false;
    for (double t : taps) {
        if (!(t >= 0.0)) throw std::invalid_argument("kernel taps must be >= 0");
        if (t > 0.0) any = true;
    }
    if (!any) throw std::invalid_argument("kernel must have a positive tap");
}

void GeneratorSpec::validate() const {
    if (box.dims() < 1) throw std::invalid_argument("generator box must be non-empty");
    dist.validate();
    switch (model) {
        case Model::iid_partial_sum:
        case Model::moving_average:
            // innovations must have mean 0 exactly
            if (dist.kind == DistKind::degenerate && dist.value != 0.0)
                throw std::invalid_argument(
                    "sum-model innovations must be centered; degenerate value must be 0");
            if (model == Model::moving_average) kernel.validate(box.dims());
            break;
        case Model::product_martingale:
            if (!(c > 0.0) || !std::isfinite(c))
                throw std::invalid_argument("product origin value c must be positive");
            if (dist.kind == DistKind::degenerate) {
                if (dist.value != 1.0)
                    throw std::invalid_argument(
                        "degenerate product multipliers must equal 1 (mean one)");
            } else if (dist.kind != DistKind::lognormal_mean1) {
                throw std::invalid_argument(
                    "product multipliers must be positive with mean one "
                    "(lognormal_mean1 or degenerate at 1)");
            }
            break;
        case Model::fixed_increments:
            if (increments.size() != box.volume())
                throw std::invalid_argument("fixed increments must cover the box");
            for (double x : increments)
                if (!std::isfinite(x))
                    throw std::invalid_argument("increments must be finite");
            break;
    }
}

std::string GeneratorSpec::model_name() const {
    switch (model) {
        case Model::iid_partial_sum: return "iid_partial_sum";
        case Model::moving_average: return "moving_average";
        case Model::product_martingale: return "product_martingale";
        case Model::fixed_increments: return "fixed_increments";
    }
    return "?";
}

std::string GeneratorSpec::dist_name() const {
    switch (dist.kind) {
        case DistKind::standard_normal: return "standard_normal";
        case DistKind::centered_exponential: return "centered_exponential";
        case DistKind::rademacher: return "rademacher";
        case DistKind::lognormal_mean1: return "lognormal_mean1";
        case DistKind::degenerate: return "degenerate";
    }
    return "?";
}

// --------------------------------------------------------------------------
// Field construction

double FieldSample::at(const MultiIndex& i) const {
    if (static_cast<int>(i.size()) != box.dims())
        throw std::invalid_argument("index dimensionality mismatch");
    for (int c : i)
        if (c == 0) return 0.0;  // zero boundary
    return values[box.linear(i)];
}

namespace {

// one running-sum (or running-product) pass per dimension turns increments
// into S_n over all i <= n
template <typename Op>
void sweep(const LatticeBox& box, std::vector<double>& v, Op op) {
    auto strides = box.strides();
    std::uint64_t n = box.volume();
    for (int d = 0; d < box.dims(); ++d) {
        std::uint64_t stride = strides[static_cast<std::size_t>(d)];
        std::uint64_t extent = static_cast<std::uint64_t>(box.upper[static_cast<std::size_t>(d)]);
        for (std::uint64_t off = 0; off < n; ++off)
            if ((off / stride) % extent != 0)  // coordinate > 1 in dimension d
                v[off] = op(v[off], v[off - stride]);
    }
}

}  // namespace

FieldSample partial_sums(const LatticeBox& box, std::vector<double> increments) {
    if (increments.size() != box.volume())
        throw std::invalid_argument("increment array must cover the box");
    sweep(box, increments, [](double a, double b) { return a + b; });
    return FieldSample{box, std::move(increments)};
}

std::vector<double> sample_increments(const GeneratorSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::uint64_t n = spec.box.volume();
    switch (spec.model) {
        case Model::iid_partial_sum: {
            RandomStream rng(seed);
            std::vector<double> x(n);
            for (std::uint64_t off = 0; off < n; ++off)
                x[off] = spec.dist.draw_centered(rng);
            return x;
        }
        case Model::moving_average: {
            // innovations over the extended box (n_d + kd_d - 1 per side), so
            // every in-box increment sees a full kernel window
            RandomStream rng(seed);
            const LatticeBox& kbox = spec.kernel.taps_box;
            MultiIndex ext = spec.box.upper;
            for (int d = 0; d < spec.box.dims(); ++d)
                ext[static_cast<std::size_t>(d)] += kbox.upper[static_cast<std::size_t>(d)] - 1;
            LatticeBox ext_box(ext);
            std::vector<double> innov(ext_box.volume());
            for (auto& e : innov) e = spec.dist.draw_centered(rng);

            std::vector<double> x(n, 0.0);
            auto cells = box_iter(spec.box);
            auto taps_cells = box_iter(kbox);
            MultiIndex shifted(static_cast<std::size_t>(spec.box.dims()));
            for (std::uint64_t off = 0; off < n; ++off) {
                double acc = 0.0;
                for (std::uint64_t t = 0; t < taps_cells.size(); ++t) {
                    double w = spec.kernel.taps[t];
                    if (w == 0.0) continue;
                    for (std::size_t d = 0; d < shifted.size(); ++d)
                        shifted[d] = cells[off][d] + taps_cells[t][d] - 1;
                    acc += w * innov[ext_box.linear(shifted)];
                }
                x[off] = acc;
            }
            return x;
        }
        case Model::fixed_increments:
            return spec.increments;
        case Model::product_martingale:
            throw std::invalid_argument("the product model has no additive increments");
    }
    return {};
}

FieldSample sample_field(const GeneratorSpec& spec, std::uint64_t seed) {
    if (spec.model == Model::product_martingale) {
        spec.validate();
        std::uint64_t n = spec.box.volume();
        RandomStream rng(seed);
        std::vector<double> w(n);
        w[0] = spec.c;  // origin cell (1,...,1) is the constant c, no draw
        for (std::uint64_t off = 1; off < n; ++off)
            w[off] = spec.dist.draw_multiplier(rng);
        sweep(spec.box, w, [](double a, double b) { return a * b; });
        return FieldSample{spec.box, std::move(w)};
    }
    return partial_sums(spec.box, sample_increments(spec, seed));
}

double field_scale(const GeneratorSpec& spec) {
    spec.validate();
    double n = static_cast<double>(spec.box.volume());
    double s = 0.0;
    switch (spec.model) {
        case Model::iid_partial_sum:
            s = spec.dist.centered_sd() * std::sqrt(n);
            break;
        case Model::moving_average:
            // each interior innovation enters S_n with weight ~ tap_sum
            s = spec.dist.centered_sd() * spec.kernel.tap_sum() * std::sqrt(n);
            break;
        case Model::product_martingale:
            if (spec.dist.kind == DistKind::lognormal_mean1) {
                double v = (n - 1.0) * spec.dist.sigma * spec.dist.sigma;
                s = spec.c * std::sqrt(std::expm1(v));
            }
            break;
        case Model::fixed_increments: {
            FieldSample f = partial_sums(spec.box, spec.increments);
            RunningStats rs;
            for (double v : f.values) rs.add(v);
            s = std::sqrt(rs.variance());
            break;
        }
    }
    return (std::isfinite(s) && s > 0.0) ? s : 1.0;
}

// --------------------------------------------------------------------------
// Test functions

double TestFn::operator()(const std::vector<double>& xs) const {
    switch (kind) {
        case Kind::constant_one:
            return 1.0;
        case Kind::coord_mean: {
            double s = 0.0;
            for (double x : xs) s += x;
            return s / static_cast<double>(xs.size());
        }
        case Kind::coordinate:
            return xs.at(static_cast<std::size_t>(coord));
        case Kind::ramp_sum: {
            double s = 0.0;
            for (double x : xs) s += std::max(x - threshold, 0.0);
            return s;
        }
        case Kind::step_sum: {
            double s = 0.0;
            for (double x : xs) s += (x >= threshold) ? 1.0 : 0.0;
            return s;
        }
        case Kind::step_product:
            for (double x : xs)
                if (x < threshold) return 0.0;
            return 1.0;
    }
    return 0.0;
}

namespace {

TestFn named(TestFn::Kind kind, double threshold, const char* fmt) {
    TestFn f;
    f.kind = kind;
    f.threshold = threshold;
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, threshold);
    f.name = buf;
    return f;
}

}  // namespace

TestFunctionFamily TestFunctionFamily::standard(double scale) {
    TestFunctionFamily fam;
    TestFn one;
    one.kind = TestFn::Kind::constant_one;
    one.name = "constant_one";
    fam.members.push_back(one);
    TestFn mean;
    mean.kind = TestFn::Kind::coord_mean;
    mean.name = "coord_mean";
    fam.members.push_back(mean);
    for (int i = 0; i < 7; ++i) {
        double t = -2.0 * scale + 4.0 * scale * i / 6.0;
        fam.members.push_back(named(TestFn::Kind::ramp_sum, t, "ramp_sum(t=%g)"));
        fam.members.push_back(named(TestFn::Kind::step_sum, t, "step_sum(t=%g)"));
        fam.members.push_back(named(TestFn::Kind::step_product, t, "step_product(t=%g)"));
    }
    return fam;
}

TestFunctionFamily TestFunctionFamily::coordinates(int m) {
    if (m < 1) throw std::invalid_argument("need at least one coordinate");
    TestFunctionFamily fam;
    for (int j = 0; j < m; ++j) {
        TestFn f;
        f.kind = TestFn::Kind::coordinate;
        f.coord = j;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "coord[%d]", j);
        f.name = buf;
        fam.members.push_back(f);
    }
    return fam;
}

// --------------------------------------------------------------------------
// Oracles

std::size_t OracleReport::fail_count() const {
    std::size_t k = 0;
    for (const auto& c : cells)
        if (!c.pass) ++k;
    return k;
}

namespace {

std::string index_str(const MultiIndex& i) {
    std::string s = "(";
    for (std::size_t d = 0; d < i.size(); ++d) {
        if (d) s += ",";
        s += std::to_string(i[d]);
    }
    return s + ")";
}

}  // namespace

OracleReport demimartingale_oracle(const GeneratorSpec& spec,
                                   const TestFunctionFamily& family,
                                   const std::vector<IndexPair>& pairs,
                                   std::uint64_t replicates, std::uint64_t seed,
                                   double z, int workers) {
    spec.validate();
    if (replicates < 2) throw std::invalid_argument("need at least 2 replicates");
    for (const auto& [i, j] : pairs) {
        if (!spec.box.contains(i) || !spec.box.contains(j))
            throw std::invalid_argument("oracle pair outside the box");
        if (!leq(i, j))
            throw std::invalid_argument("oracle pair must satisfy i <= j componentwise");
    }

    // precompute, per pair: linear offsets of i, j and of every cell k <= i
    struct PairPlan {
        std::uint64_t i_off, j_off;
        std::vector<std::uint64_t> history;
    };
    std::vector<PairPlan> plans;
    plans.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
        PairPlan p;
        p.i_off = spec.box.linear(i);
        p.j_off = spec.box.linear(j);
        for (const auto& k : box_iter(LatticeBox(i)))
            p.history.push_back(spec.box.linear(k));
        plans.push_back(std::move(p));
    }

    std::size_t m = family.members.size();
    ChunkTable table(replicates, pairs.size() * m);
    for_each_replicate(replicates, workers, [&](std::uint64_t rep) {
        FieldSample f = sample_field(spec, derive_seed(seed, rep));
        std::vector<double> xs;
        for (std::size_t p = 0; p < plans.size(); ++p) {
            const PairPlan& plan = plans[p];
            double diff = f.values[plan.j_off] - f.values[plan.i_off];
            xs.clear();
            for (std::uint64_t off : plan.history) xs.push_back(f.values[off]);
            for (std::size_t fm = 0; fm < m; ++fm)
                table.add(rep, p * m + fm, diff * family.members[fm](xs));
        }
    });

    OracleReport report;
    report.z = z;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        std::string where =
            "i=" + index_str(pairs[p].first) + " j=" + index_str(pairs[p].second);
        for (std::size_t fm = 0; fm < m; ++fm) {
            OracleCell cell;
            cell.est = table.column_estimate(p * m + fm);
            cell.label = where + " f=" + family.members[fm].name;
            cell.pass = cell.est.mean >= -z * cell.est.se;
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

// --------------------------------------------------------------------------
// Association oracle

std::size_t VectorSampler::dim() const {
    switch (kind) {
        case Kind::iid_vector: return static_cast<std::size_t>(m);
        case Kind::antithetic_pair: return 2;
        case Kind::field_increments: return field.box.volume();
    }
    return 0;
}

void VectorSampler::validate() const {
    switch (kind) {
        case Kind::iid_vector:
            if (m < 1) throw std::invalid_argument("iid vector length must be >= 1");
            dist.validate();
            break;
        case Kind::antithetic_pair:
            break;
        case Kind::field_increments:
            field.validate();
            if (field.model == Model::product_martingale)
                throw std::invalid_argument(
                    "field_increments needs a sum-type model");
            break;
    }
}

std::vector<double> VectorSampler::sample(std::uint64_t seed) const {
    switch (kind) {
        case Kind::iid_vector: {
            RandomStream rng(seed);
            std::vector<double> x(static_cast<std::size_t>(m));
            for (auto& v : x) v = dist.draw_centered(rng);
            return x;
        }
        case Kind::antithetic_pair: {
            RandomStream rng(seed);
            double zv = rng.normal();
            return {zv, -zv};
        }
        case Kind::field_increments:
            return sample_increments(field, seed);
    }
    return {};
}

OracleReport association_oracle(const VectorSampler& sampler,
                                const std::vector<FnPair>& pairs,
                                std::uint64_t replicates, std::uint64_t seed,
                                double z, int workers) {
    sampler.validate();
    if (replicates < 2) throw std::invalid_argument("need at least 2 replicates");

    // raw per-replicate f and g columns; means must be known before the
    // covariance terms can be formed
    std::vector<std::vector<double>> fu(pairs.size()), gv(pairs.size());
    for (auto& col : fu) col.resize(replicates);
    for (auto& col : gv) col.resize(replicates);
    for_each_replicate(replicates, workers, [&](std::uint64_t rep) {
        std::vector<double> x = sampler.sample(derive_seed(seed, rep));
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            fu[p][rep] = pairs[p].f(x);
            gv[p][rep] = pairs[p].g(x);
        }
    });

    OracleReport report;
    report.z = z;
    double bias = static_cast<double>(replicates) / (static_cast<double>(replicates) - 1.0);
    std::vector<double> w(replicates);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        double fbar = estimate_series(fu[p]).mean;
        double gbar = estimate_series(gv[p]).mean;
        for (std::uint64_t r = 0; r < replicates; ++r)
            w[r] = (fu[p][r] - fbar) * (gv[p][r] - gbar);
        Estimate ew = estimate_series(w);
        OracleCell cell;
        cell.label = "f=" + pairs[p].f.name + " g=" + pairs[p].g.name;
        cell.est = Estimate{bias * ew.mean, bias * ew.se, ew.count};
        cell.pass = cell.est.mean >= -z * cell.est.se;
        report.cells.push_back(std::move(cell));
    }
    return report;
}

}  // namespace demifield
