#include "demifield/funcs.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace demifield {

double log_plus(double x) {
    if (x < 0.0) throw std::domain_error("log_plus requires x >= 0");
    return x > 1.0 ? std::log(x) : 0.0;
}

double gamma_fn(double x, double c) {
    if (x <= 0.0) throw std::domain_error("gamma_fn requires x > 0");
    return x - std::log(x) - c;
}

// --------------------------------------------------------------------------
// ConvexFn

double ConvexFn::operator()(double x) const {
    switch (kind) {
        case Kind::power:
            return std::pow(std::fabs(x), p);
        case Kind::pos_part_power:
            return x > 0.0 ? std::pow(x, p) : 0.0;
        case Kind::identity_nonneg:
            return x > 0.0 ? x : 0.0;
        case Kind::ramp_sum: {
            double s = 0.0;
            for (std::size_t j = 0; j < thresholds.size(); ++j)
                s += weights[j] * std::max(x - thresholds[j], 0.0);
            return s;
        }
    }
    return 0.0;
}

bool ConvexFn::nondecreasing_on_reals() const {
    return kind != Kind::power;
}

void ConvexFn::validate() const {
    switch (kind) {
        case Kind::power:
        case Kind::pos_part_power:
            if (p < 1.0) throw std::invalid_argument("convex power requires p >= 1");
            break;
        case Kind::identity_nonneg:
            break;
        case Kind::ramp_sum:
            if (thresholds.size() != weights.size() || thresholds.empty())
                throw std::invalid_argument("ramp_sum needs matching nonempty thresholds/weights");
            for (double t : thresholds)
                if (t < 0.0) throw std::invalid_argument("ramp_sum thresholds must be >= 0 (g(0) = 0)");
            for (double w : weights)
                if (w < 0.0) throw std::invalid_argument("ramp_sum weights must be >= 0");
            break;
    }
}

ConvexFn ConvexFn::power(double p) {
    ConvexFn f;
    f.kind = Kind::power;
    f.p = p;
    f.validate();
    return f;
}

ConvexFn ConvexFn::pos_part_power(double p) {
    ConvexFn f;
    f.kind = Kind::pos_part_power;
    f.p = p;
    f.validate();
    return f;
}

ConvexFn ConvexFn::identity_nonneg() {
    ConvexFn f;
    f.kind = Kind::identity_nonneg;
    return f;
}

ConvexFn ConvexFn::ramp_sum(std::vector<double> thresholds, std::vector<double> weights) {
    ConvexFn f;
    f.kind = Kind::ramp_sum;
    f.thresholds = std::move(thresholds);
    f.weights = std::move(weights);
    f.validate();
    return f;
}

// --------------------------------------------------------------------------
// OrliczFn

double OrliczFn::operator()(double x) const {
    if (x < 0.0) throw std::domain_error("Orlicz functions are defined on [0, inf)");
    switch (kind) {
        case Kind::power:
            return std::pow(x, p);
        case Kind::xlogplus:
            return x > 1.0 ? x * std::log(x) : 0.0;
        case Kind::exp_minus_one:
            return std::expm1(r * x);
    }
    return 0.0;
}

double OrliczFn::deriv(double x) const {
    if (x < 0.0) throw std::domain_error("Orlicz functions are defined on [0, inf)");
    switch (kind) {
        case Kind::power:
            if (p == 1.0) return 1.0;
            return x == 0.0 ? 0.0 : p * std::pow(x, p - 1.0);
        case Kind::xlogplus:
            return x >= 1.0 ? std::log(x) + 1.0 : 0.0;  // right derivative at the kink
        case Kind::exp_minus_one:
            return r * std::exp(r * x);
    }
    return 0.0;
}

bool OrliczFn::deriv_over_r_integrable_at_zero() const {
    switch (kind) {
        case Kind::power:
            return p > 1.0;  // phi'(r)/r = p r^(p-2)
        case Kind::xlogplus:
            return true;  // identically 0 near 0
        case Kind::exp_minus_one:
            return false;  // ~ r_coef / r near 0
    }
    return false;
}

void OrliczFn::validate() const {
    switch (kind) {
        case Kind::power:
            if (p < 1.0)
                throw std::invalid_argument("Orlicz power requires p >= 1 (convexity)");
            break;
        case Kind::xlogplus:
            break;
        case Kind::exp_minus_one:
            if (r <= 0.0)
                throw std::invalid_argument("exp_minus_one requires rate r > 0");
            break;
    }
}

OrliczFn OrliczFn::power(double p) {
    OrliczFn f;
    f.kind = Kind::power;
    f.p = p;
    f.validate();
    return f;
}

OrliczFn OrliczFn::xlogplus() {
    OrliczFn f;
    f.kind = Kind::xlogplus;
    return f;
}

OrliczFn OrliczFn::exp_minus_one(double r) {
    OrliczFn f;
    f.kind = Kind::exp_minus_one;
    f.r = r;
    f.validate();
    return f;
}

namespace {

PhiExponent infinite_exponent() {
    PhiExponent e;
    e.is_infinite = true;
    e.value = std::numeric_limits<double>::infinity();
    return e;
}

}  // namespace

PhiExponent p_phi_star(const OrliczFn& phi) {
    switch (phi.kind) {
        case OrliczFn::Kind::power:
            return {phi.p, false, false};  // x * p x^(p-1) / x^p = p everywhere
        case OrliczFn::Kind::xlogplus:
            // ratio = 1 + 1/ln x diverges as x -> 1+, so the sup is infinite
            return infinite_exponent();
        case OrliczFn::Kind::exp_minus_one:
            // ratio = rx e^{rx}/(e^{rx}-1) increases from 1 to infinity
            return infinite_exponent();
    }
    return {};
}

PhiExponent p_phi_inf(const OrliczFn& phi) {
    switch (phi.kind) {
        case OrliczFn::Kind::power:
            return {phi.p, false, false};
        case OrliczFn::Kind::xlogplus:
        case OrliczFn::Kind::exp_minus_one:
            // both ratios decrease to 1 in the limit (x -> inf resp. x -> 0+);
            // the infimum over x > 0 is exactly 1 and is not attained
            return {1.0, false, false};
    }
    return {};
}

double q_phi(const OrliczFn& phi) {
    PhiExponent p_inf = p_phi_inf(phi);
    if (p_inf.grid_estimated || !(p_inf.value > 1.0))
        throw std::domain_error("q_phi requires an analytic p_phi > 1");
    return p_inf.value / (p_inf.value - 1.0);
}

namespace {

// adaptive Simpson with absolute tolerance
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    struct Impl {
        const std::function<double(double)>& f;
        double rec(double a, double fa, double b, double fb, double m, double fm,
                   double whole, double tol, int depth) {
            double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            double flm = f(lm), frm = f(rm);
            double left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
            double right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
            double delta = left + right - whole;
            if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return rec(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
                   rec(m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
        }
    } impl{f};
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
        throw std::invalid_argument("quadrature requires a finite integrand on the interval");
    double whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    return impl.rec(a, fa, b, fb, m, fm, whole, tol, 52);
}

double phi_a_closed(const OrliczFn& phi, double a, double x) {
    switch (phi.kind) {
        case OrliczFn::Kind::power: {
            double p = phi.p;
            if (p == 1.0)  // integrand 1/r: x ln(x/a) - (x - a)
                return x * std::log(x / a) - (x - a);
            return (std::pow(x, p) - std::pow(a, p)) / (p - 1.0) -
                   p * std::pow(a, p - 1.0) * (x - a) / (p - 1.0);
        }
        case OrliczFn::Kind::xlogplus: {
            // phi'(r)/r = (ln r + 1)/r on r >= 1, zero below; antiderivatives
            // (ln r)^2/2 + ln r and r ln r give the Fubini form directly
            double a0 = std::max(a, 1.0);
            if (x <= a0) return 0.0;
            double lx = std::log(x), la = std::log(a0);
            return x * (0.5 * lx * lx + lx - 0.5 * la * la - la) -
                   (x * lx - a0 * la);
        }
        case OrliczFn::Kind::exp_minus_one:
            throw std::invalid_argument("no closed form for exp_minus_one; use quadrature");
    }
    return 0.0;
}

}  // namespace

double big_phi_a(const OrliczFn& phi, double a, double x, PhiAMethod method) {
    if (a < 0.0) throw std::invalid_argument("big_phi_a requires a >= 0");
    if (a == 0.0 && !phi.deriv_over_r_integrable_at_zero())
        throw std::domain_error("phi'(r)/r is not integrable at 0; a = 0 is invalid");
    if (x <= a) return 0.0;
    bool has_closed = phi.kind != OrliczFn::Kind::exp_minus_one;
    if (method == PhiAMethod::closed_form ||
        (method == PhiAMethod::automatic && has_closed))
        return phi_a_closed(phi, a, x);
    return adaptive_simpson(
        [&](double r) { return r == 0.0 ? 0.0 : phi.deriv(r) / r * (x - r); }, a, x,
        1e-9);
}

double big_phi_a_deriv(const OrliczFn& phi, double a, double b) {
    if (a < 0.0) throw std::invalid_argument("big_phi_a_deriv requires a >= 0");
    if (a == 0.0 && !phi.deriv_over_r_integrable_at_zero())
        throw std::domain_error("phi'(r)/r is not integrable at 0; a = 0 is invalid");
    if (b <= a) return 0.0;
    switch (phi.kind) {
        case OrliczFn::Kind::power: {
            double p = phi.p;
            if (p == 1.0) return std::log(b / a);
            return p / (p - 1.0) * (std::pow(b, p - 1.0) - std::pow(a, p - 1.0));
        }
        case OrliczFn::Kind::xlogplus: {
            double a0 = std::max(a, 1.0);
            if (b <= a0) return 0.0;
            double lb = std::log(b), la = std::log(a0);
            return 0.5 * lb * lb + lb - 0.5 * la * la - la;
        }
        case OrliczFn::Kind::exp_minus_one:
            return adaptive_simpson([&](double r) { return phi.deriv(r) / r; }, a, b,
                                    1e-9);
    }
    return 0.0;
}

// --------------------------------------------------------------------------
// MonotoneFn

double MonotoneFn::operator()(double u) const {
    switch (kind) {
        case Kind::identity:
            return u;
        case Kind::pos_part_power:
            return u > 0.0 ? std::pow(u, p) : 0.0;
        case Kind::step:
            return u >= threshold ? 1.0 : 0.0;
    }
    return 0.0;
}

void MonotoneFn::validate() const {
    switch (kind) {
        case Kind::identity:
            break;
        case Kind::pos_part_power:
            if (p < 1.0) throw std::invalid_argument("pos_part_power requires p >= 1");
            break;
        case Kind::step:
            if (threshold <= 0.0)
                throw std::invalid_argument("step threshold must be > 0 (g(0) = 0)");
            break;
    }
}

MonotoneFn MonotoneFn::identity() { return MonotoneFn{}; }

MonotoneFn MonotoneFn::pos_part_power(double p) {
    MonotoneFn g;
    g.kind = Kind::pos_part_power;
    g.p = p;
    g.validate();
    return g;
}

MonotoneFn MonotoneFn::step(double threshold) {
    MonotoneFn g;
    g.kind = Kind::step;
    g.threshold = threshold;
    g.validate();
    return g;
}

double integral_u_dg(const MonotoneFn& g, double x) {
    g.validate();
    switch (g.kind) {
        case MonotoneFn::Kind::identity:
            return 0.5 * x * x;
        case MonotoneFn::Kind::pos_part_power:
            // dg = p u^(p-1) du on u > 0
            return x > 0.0 ? g.p * std::pow(x, g.p + 1.0) / (g.p + 1.0) : 0.0;
        case MonotoneFn::Kind::step:
            // unit atom at the threshold
            return x >= g.threshold ? g.threshold : 0.0;
    }
    return 0.0;
}

// --------------------------------------------------------------------------
// PsiFn

double PsiFn::operator()(double u) const {
    if (u <= 0.0) throw std::domain_error("psi is defined for u > 0");
    return std::pow(u, alpha);
}

void PsiFn::validate() const {
    if (alpha < 0.0)
        throw std::invalid_argument("psi exponent must be >= 0 (nondecreasing)");
}

// --------------------------------------------------------------------------
// WeightArray / ThresholdSeq

namespace {

// check monotonicity along every +e_d step; cmp(prev, next) must hold
template <typename Cmp>
void check_directional(const LatticeBox& box, const std::vector<double>& v,
                       Cmp cmp, const char* what) {
    auto strides = box.strides();
    std::uint64_t n = box.volume();
    for (std::uint64_t off = 0; off < n; ++off) {
        MultiIndex idx = box.from_linear(off);
        for (int d = 0; d < box.dims(); ++d) {
            if (idx[static_cast<std::size_t>(d)] >= box.upper[static_cast<std::size_t>(d)])
                continue;
            if (!cmp(v[off], v[off + strides[static_cast<std::size_t>(d)]]))
                throw std::invalid_argument(what);
        }
    }
}

}  // namespace

void WeightArray::validate() const {
    if (c.size() != box.volume())
        throw std::invalid_argument("weight array size must equal box volume");
    for (double w : c)
        if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    check_directional(box, c, [](double a, double b) { return a >= b; },
                      "weights must be nonincreasing along every direction");
}

WeightArray WeightArray::ones(const LatticeBox& box) {
    WeightArray w{box, std::vector<double>(box.volume(), 1.0)};
    return w;
}

WeightArray WeightArray::inverse_product(const LatticeBox& box) {
    WeightArray w{box, std::vector<double>(box.volume())};
    auto cells = box_iter(box);
    for (std::uint64_t off = 0; off < cells.size(); ++off) {
        double prod = 1.0;
        for (int c : cells[off]) prod *= c;
        w.c[off] = 1.0 / prod;
    }
    return w;
}

WeightArray WeightArray::inverse_sum(const LatticeBox& box) {
    WeightArray w{box, std::vector<double>(box.volume())};
    auto cells = box_iter(box);
    for (std::uint64_t off = 0; off < cells.size(); ++off) {
        double sum = 0.0;
        for (int c : cells[off]) sum += c;
        w.c[off] = 1.0 / sum;
    }
    return w;
}

WeightArray WeightArray::from_values(const LatticeBox& box, std::vector<double> values) {
    WeightArray w{box, std::move(values)};
    w.validate();
    return w;
}

void ThresholdSeq::validate() const {
    if (u.size() != box.volume())
        throw std::invalid_argument("threshold array size must equal box volume");
    for (double t : u)
        if (!(t > 0.0)) throw std::invalid_argument("thresholds must be positive");
    check_directional(box, u, [](double a, double b) { return a <= b; },
                      "thresholds must be nondecreasing along every direction");
    psi.validate();
}

ThresholdSeq ThresholdSeq::product_of_coords(const LatticeBox& box, PsiFn psi) {
    ThresholdSeq t{box, std::vector<double>(box.volume()), psi};
    auto cells = box_iter(box);
    for (std::uint64_t off = 0; off < cells.size(); ++off) {
        double prod = 1.0;
        for (int c : cells[off]) prod *= c;
        t.u[off] = prod;
    }
    return t;
}

ThresholdSeq ThresholdSeq::sum_of_coords(const LatticeBox& box, PsiFn psi) {
    ThresholdSeq t{box, std::vector<double>(box.volume()), psi};
    auto cells = box_iter(box);
    for (std::uint64_t off = 0; off < cells.size(); ++off) {
        double sum = 0.0;
        for (int c : cells[off]) sum += c;
        t.u[off] = sum;
    }
    return t;
}

}  // namespace demifield
