#include "demifield/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>

namespace demifield {

namespace {

// ---------------------------------------------------------------------------
// small JSON helpers

[[noreturn]] void bad_config(const std::string& what) {
    throw std::invalid_argument("config: " + what);
}

void require_keys(const Json& j, const std::set<std::string>& allowed,
                  const char* where) {
    if (!j.is_object()) bad_config(std::string(where) + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            bad_config(std::string("unknown key \"") + it.key() + "\" in " + where);
}

double get_num(const Json& j, const char* key) {
    if (!j.at(key).is_number()) bad_config(std::string(key) + " must be a number");
    return j.at(key).get<double>();
}

LatticeBox box_from_json(const Json& j, const char* where) {
    if (!j.is_array() || j.empty())
        bad_config(std::string(where) + " must be a nonempty array of extents");
    MultiIndex n;
    for (const Json& el : j) {
        if (!el.is_number_integer() || el.get<long long>() < 1)
            bad_config(std::string(where) + " extents must be positive integers");
        n.push_back(el.get<int>());
    }
    return LatticeBox(n);
}

Json box_to_json(const LatticeBox& box) {
    Json arr = Json::array();
    for (int n : box.upper) arr.push_back(n);
    return arr;
}

std::vector<double> doubles_from_json(const Json& j, const char* where) {
    if (!j.is_array()) bad_config(std::string(where) + " must be an array of numbers");
    std::vector<double> out;
    for (const Json& el : j) {
        if (!el.is_number()) bad_config(std::string(where) + " entries must be numbers");
        out.push_back(el.get<double>());
    }
    return out;
}

// ---------------------------------------------------------------------------
// kernel codec: one nested array level per lattice dimension, values in
// enumeration order

Json kernel_to_json(const KernelSpec& kernel) {
    std::vector<std::uint64_t> strides = kernel.taps_box.strides();
    std::function<Json(int, std::uint64_t)> build = [&](int d, std::uint64_t base) {
        Json arr = Json::array();
        for (int i = 0; i < kernel.taps_box.upper[d]; ++i) {
            std::uint64_t off = base + static_cast<std::uint64_t>(i) * strides[d];
            if (d + 1 == kernel.taps_box.dims())
                arr.push_back(kernel.taps[off]);
            else
                arr.push_back(build(d + 1, off));
        }
        return arr;
    };
    return build(0, 0);
}

void kernel_extents(const Json& j, std::vector<int>& ext) {
    if (!j.is_array() || j.empty()) bad_config("kernel arrays must be nonempty");
    ext.push_back(static_cast<int>(j.size()));
    if (j[0].is_array()) kernel_extents(j[0], ext);
}

void kernel_flatten(const Json& j, std::size_t depth, const std::vector<int>& ext,
                    std::vector<double>& out) {
    if (static_cast<int>(j.size()) != ext[depth])
        bad_config("kernel arrays are ragged");
    for (const Json& el : j) {
        if (depth + 1 == ext.size()) {
            if (!el.is_number()) bad_config("kernel taps must be numbers");
            out.push_back(el.get<double>());
        } else {
            if (!el.is_array()) bad_config("kernel nesting is uneven");
            kernel_flatten(el, depth + 1, ext, out);
        }
    }
}

KernelSpec kernel_from_json(const Json& j) {
    std::vector<int> ext;
    kernel_extents(j, ext);
    KernelSpec kernel;
    kernel.taps_box = LatticeBox(MultiIndex(ext.begin(), ext.end()));
    kernel_flatten(j, 0, ext, kernel.taps);
    return kernel;
}

// ---------------------------------------------------------------------------
// function-object codecs

Json convex_to_json(const ConvexFn& g) {
    Json j;
    switch (g.kind) {
        case ConvexFn::Kind::power:
            j["kind"] = "power";
            j["p"] = g.p;
            break;
        case ConvexFn::Kind::pos_part_power:
            j["kind"] = "pos_part_power";
            j["p"] = g.p;
            break;
        case ConvexFn::Kind::identity_nonneg:
            j["kind"] = "identity_nonneg";
            break;
        case ConvexFn::Kind::ramp_sum:
            j["kind"] = "ramp_sum";
            j["thresholds"] = g.thresholds;
            j["weights"] = g.weights;
            break;
    }
    return j;
}

ConvexFn convex_from_json(const Json& j) {
    require_keys(j, {"kind", "p", "thresholds", "weights"}, "g");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return ConvexFn::power(get_num(j, "p"));
    if (kind == "pos_part_power") return ConvexFn::pos_part_power(get_num(j, "p"));
    if (kind == "identity_nonneg") return ConvexFn::identity_nonneg();
    if (kind == "ramp_sum")
        return ConvexFn::ramp_sum(doubles_from_json(j.at("thresholds"), "g.thresholds"),
                                  doubles_from_json(j.at("weights"), "g.weights"));
    bad_config("unknown convex function kind: " + kind);
}

Json monotone_to_json(const MonotoneFn& g) {
    Json j;
    switch (g.kind) {
        case MonotoneFn::Kind::identity:
            j["kind"] = "identity";
            break;
        case MonotoneFn::Kind::pos_part_power:
            j["kind"] = "pos_part_power";
            j["p"] = g.p;
            break;
        case MonotoneFn::Kind::step:
            j["kind"] = "step";
            j["t"] = g.threshold;
            break;
    }
    return j;
}

MonotoneFn monotone_from_json(const Json& j) {
    require_keys(j, {"kind", "p", "t"}, "g_mono");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return MonotoneFn::identity();
    if (kind == "pos_part_power") return MonotoneFn::pos_part_power(get_num(j, "p"));
    if (kind == "step") return MonotoneFn::step(get_num(j, "t"));
    bad_config("unknown monotone function kind: " + kind);
}

Json orlicz_to_json(const OrliczFn& phi) {
    Json j;
    switch (phi.kind) {
        case OrliczFn::Kind::power:
            j["kind"] = "power";
            j["p"] = phi.p;
            break;
        case OrliczFn::Kind::xlogplus:
            j["kind"] = "xlogplus";
            break;
        case OrliczFn::Kind::exp_minus_one:
            j["kind"] = "exp";
            j["r"] = phi.r;
            break;
    }
    return j;
}

OrliczFn orlicz_from_json(const Json& j) {
    require_keys(j, {"kind", "p", "r"}, "phi");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return OrliczFn::power(get_num(j, "p"));
    if (kind == "xlogplus") return OrliczFn::xlogplus();
    if (kind == "exp") return OrliczFn::exp_minus_one(get_num(j, "r"));
    bad_config("unknown phi kind: " + kind);
}

Json side_to_json(const SideStats& s) {
    Json j;
    j["count"] = s.est.count;
    j["effective"] = s.effective;
    j["heavy"] = s.heavy;
    j["mean"] = s.est.mean;
    j["se"] = s.est.se;
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string box_label(const LatticeBox& box) {
    std::string s;
    for (std::size_t d = 0; d < box.upper.size(); ++d) {
        if (d) s += "x";
        s += std::to_string(box.upper[d]);
    }
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// generator codec

Json generator_to_json(const GeneratorSpec& spec) {
    Json j;
    j["model"] = spec.model_name();
    j["dist"] = spec.dist_name();
    if (spec.dist.kind == DistKind::lognormal_mean1) j["sigma"] = spec.dist.sigma;
    if (spec.dist.kind == DistKind::degenerate) j["value"] = spec.dist.value;
    j["box"] = box_to_json(spec.box);
    if (spec.model == Model::moving_average) j["kernel"] = kernel_to_json(spec.kernel);
    if (spec.model == Model::product_martingale) j["c"] = spec.c;
    if (spec.model == Model::fixed_increments) j["increments"] = spec.increments;
    return j;
}

GeneratorSpec generator_from_json(const Json& j) {
    require_keys(j, {"model", "dist", "sigma", "value", "box", "kernel", "c", "increments"},
                 "generator");
    for (const char* key : {"model", "dist", "box"})
        if (!j.contains(key))
            bad_config(std::string("generator needs \"") + key + "\"");
    GeneratorSpec spec;

    std::string model = j.at("model").get<std::string>();
    if (model == "iid_partial_sum") spec.model = Model::iid_partial_sum;
    else if (model == "moving_average") spec.model = Model::moving_average;
    else if (model == "product_martingale") spec.model = Model::product_martingale;
    else if (model == "fixed_increments") spec.model = Model::fixed_increments;
    else bad_config("unknown model: " + model);

    std::string dist = j.at("dist").get<std::string>();
    if (dist == "standard_normal") spec.dist.kind = DistKind::standard_normal;
    else if (dist == "centered_exponential") spec.dist.kind = DistKind::centered_exponential;
    else if (dist == "rademacher") spec.dist.kind = DistKind::rademacher;
    else if (dist == "lognormal_mean1") spec.dist.kind = DistKind::lognormal_mean1;
    else if (dist == "degenerate") spec.dist.kind = DistKind::degenerate;
    else bad_config("unknown dist: " + dist);
    if (j.contains("sigma")) spec.dist.sigma = get_num(j, "sigma");
    if (j.contains("value")) spec.dist.value = get_num(j, "value");

    spec.box = box_from_json(j.at("box"), "box");
    if (j.contains("kernel")) spec.kernel = kernel_from_json(j.at("kernel"));
    if (j.contains("c")) spec.c = get_num(j, "c");
    if (j.contains("increments"))
        spec.increments = doubles_from_json(j.at("increments"), "increments");

    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// check-config codec

Json check_config_to_json(const CheckConfig& cfg) {
    Json j;
    j["generator"] = generator_to_json(cfg.generator);
    j["replicates"] = cfg.replicates;
    j["z"] = cfg.z;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["p"] = cfg.p;
    j["eps_grid"] = cfg.eps_grid;
    j["lambda"] = cfg.lambda;
    j["x"] = cfg.x_thresh;
    j["a"] = cfg.a;
    j["b"] = cfg.b;
    j["gamma"] = cfg.gamma;
    j["r"] = cfg.r_rate;
    j["m"] = cfg.m_order;
    j["j"] = cfg.j_rank;
    j["s"] = cfg.s_direction;
    j["delta"] = cfg.delta;
    j["variant"] = cfg.variant;
    j["bound_id"] = cfg.bound_id;
    j["g"] = convex_to_json(cfg.g);
    j["g_mono"] = monotone_to_json(cfg.g_mono);
    j["phi"] = orlicz_to_json(cfg.phi);
    j["psi"] = Json{{"alpha", cfg.psi.alpha}};
    j["weight_kind"] = cfg.weight_kind;
    j["threshold_kind"] = cfg.threshold_kind;
    if (!cfg.weights.c.empty()) j["weights"] = cfg.weights.c;
    if (!cfg.thresholds.u.empty()) j["thresholds"] = cfg.thresholds.u;
    if (!cfg.box_sequence.empty()) {
        Json seq = Json::array();
        for (const LatticeBox& b : cfg.box_sequence) seq.push_back(box_to_json(b));
        j["box_sequence"] = seq;
    }
    return j;
}

CheckConfig check_config_from_json(const Json& j) {
    require_keys(j,
                 {"generator", "replicates", "z", "seed", "workers", "p", "eps_grid",
                  "lambda", "x", "a", "b", "gamma", "r", "m", "j", "s", "delta",
                  "variant", "bound_id", "g", "g_mono", "phi", "psi", "weights",
                  "thresholds", "weight_kind", "threshold_kind", "box_sequence"},
                 "check config");
    CheckConfig cfg;
    if (!j.contains("generator")) bad_config("check config needs a generator");
    cfg.generator = generator_from_json(j.at("generator"));

    if (j.contains("replicates")) cfg.replicates = j.at("replicates").get<std::uint64_t>();
    if (j.contains("z")) cfg.z = get_num(j, "z");
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("p")) cfg.p = get_num(j, "p");
    if (j.contains("eps_grid")) cfg.eps_grid = doubles_from_json(j.at("eps_grid"), "eps_grid");
    if (j.contains("lambda")) cfg.lambda = get_num(j, "lambda");
    if (j.contains("x")) cfg.x_thresh = get_num(j, "x");
    if (j.contains("a")) cfg.a = get_num(j, "a");
    if (j.contains("b")) cfg.b = get_num(j, "b");
    if (j.contains("gamma")) cfg.gamma = get_num(j, "gamma");
    if (j.contains("r")) cfg.r_rate = get_num(j, "r");
    if (j.contains("m")) cfg.m_order = j.at("m").get<int>();
    if (j.contains("j")) cfg.j_rank = j.at("j").get<std::uint64_t>();
    if (j.contains("s")) cfg.s_direction = j.at("s").get<int>();
    if (j.contains("delta")) cfg.delta = get_num(j, "delta");
    if (j.contains("variant")) cfg.variant = j.at("variant").get<std::string>();
    if (j.contains("bound_id")) cfg.bound_id = j.at("bound_id").get<std::string>();
    if (j.contains("g")) cfg.g = convex_from_json(j.at("g"));
    if (j.contains("g_mono")) cfg.g_mono = monotone_from_json(j.at("g_mono"));
    if (j.contains("phi")) cfg.phi = orlicz_from_json(j.at("phi"));
    if (j.contains("psi")) {
        require_keys(j.at("psi"), {"alpha"}, "psi");
        cfg.psi.alpha = get_num(j.at("psi"), "alpha");
    }
    if (j.contains("weight_kind")) cfg.weight_kind = j.at("weight_kind").get<std::string>();
    if (j.contains("threshold_kind"))
        cfg.threshold_kind = j.at("threshold_kind").get<std::string>();
    if (j.contains("weights"))
        cfg.weights = WeightArray::from_values(
            cfg.generator.box, doubles_from_json(j.at("weights"), "weights"));
    if (j.contains("thresholds")) {
        cfg.thresholds.box = cfg.generator.box;
        cfg.thresholds.u = doubles_from_json(j.at("thresholds"), "thresholds");
        cfg.thresholds.psi = cfg.psi;
        cfg.thresholds.validate();
    }
    if (j.contains("box_sequence")) {
        for (const Json& el : j.at("box_sequence"))
            cfg.box_sequence.push_back(box_from_json(el, "box_sequence"));
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// report codecs

Json report_to_json(const InequalityReport& rep) {
    Json j;
    j["theorem"] = rep.theorem;
    j["direction"] = rep.direction;
    j["lhs"] = side_to_json(rep.lhs);
    j["rhs"] = side_to_json(rep.rhs);
    j["margin"] = rep.margin;
    j["margin_se"] = rep.margin_se;
    j["z_score"] = rep.margin_se > 0.0 ? Json(rep.margin / rep.margin_se) : Json(nullptr);
    j["z_threshold"] = rep.z_threshold;
    j["verdict"] = verdict_name(rep.verdict);
    j["replicates"] = rep.replicates;
    j["seed"] = rep.seed;
    j["rng"] = rep.rng;
    j["constants"] = rep.constants;
    j["notes"] = rep.notes;
    j["config"] = check_config_to_json(rep.config);
    return j;
}

Json trend_to_json(const TrendReport& trend) {
    Json j;
    j["check"] = trend.check;
    j["quantity"] = trend.quantity;
    j["secondary_quantity"] = trend.secondary_quantity;
    Json pts = Json::array();
    for (const TrendPoint& p : trend.points) {
        Json pj;
        pj["box"] = box_to_json(p.box);
        pj["value"] = p.value;
        pj["se"] = p.se;
        pj["secondary"] = p.secondary;
        pts.push_back(pj);
    }
    j["points"] = pts;
    j["decreasing"] = trend.decreasing;
    j["final_within_bound"] = trend.final_within_bound;
    j["bound"] = trend.bound;
    j["note"] = trend.note;
    j["replicates"] = trend.replicates;
    j["seed"] = trend.seed;
    j["config"] = check_config_to_json(trend.config);
    return j;
}

Json upcross_to_json(const UpcrossReport& rep) {
    Json j;
    j["per_direction"] = rep.per_direction;
    j["total"] = rep.total;
    j["mode"] = upcross_mode_name(rep.mode);
    return j;
}

// ---------------------------------------------------------------------------
// registry

const std::vector<std::string>& check_ids() {
    static const std::vector<std::string> ids = {
        "cairoli_moment", "cairoli_prob", "doob", "rank_order", "moment_corollary",
        "harremoes", "chow", "hajek_renyi", "orlicz_prob", "orlicz_moment",
        "upcross_bound", "whittle", "negative_control", "limsup_trend",
        "chow_convergence_trend", "whittle_trend"};
    return ids;
}

bool is_trend_check(const std::string& id) {
    return id == "limsup_trend" || id == "chow_convergence_trend" ||
           id == "whittle_trend";
}

CheckRun run_check(const std::string& id, const CheckConfig& cfg) {
    CheckRun run;
    if (id == "cairoli_moment") run.reports = check_cairoli_moment(cfg);
    else if (id == "cairoli_prob") run.reports = check_cairoli_prob(cfg);
    else if (id == "doob") run.reports = check_doob_indicator(cfg);
    else if (id == "rank_order") run.reports = check_rank_order(cfg);
    else if (id == "moment_corollary") run.reports = check_moment_corollary(cfg);
    else if (id == "harremoes") run.reports = check_harremoes(cfg);
    else if (id == "chow") run.reports = check_chow(cfg);
    else if (id == "hajek_renyi") run.reports = check_hajek_renyi(cfg);
    else if (id == "orlicz_prob") run.reports = check_orlicz_prob(cfg);
    else if (id == "orlicz_moment") run.reports = check_orlicz_moment(cfg);
    else if (id == "upcross_bound") run.reports = check_upcross_bound(cfg);
    else if (id == "whittle") run.reports = check_whittle(cfg);
    else if (id == "negative_control") run.reports = check_negative_control(cfg);
    else if (id == "limsup_trend") run.trend = check_limsup_trend(cfg);
    else if (id == "chow_convergence_trend") run.trend = check_chow_convergence_trend(cfg);
    else if (id == "whittle_trend") run.trend = check_whittle_trend(cfg);
    else throw std::invalid_argument("unknown check id: " + id);
    return run;
}

// ---------------------------------------------------------------------------
// suite

void RunConfig::validate() const {
    if (replicates < 2) throw std::invalid_argument("suite replicates must be >= 2");
    if (!(z > 0.0)) throw std::invalid_argument("suite z margin must be positive");
    std::set<std::string> labels;
    const auto& ids = check_ids();
    for (const SuiteEntry& e : entries) {
        if (e.label.empty()) throw std::invalid_argument("suite entry without a label");
        if (!labels.insert(e.label).second)
            throw std::invalid_argument("duplicate suite label: " + e.label);
        if (std::find(ids.begin(), ids.end(), e.check) == ids.end())
            throw std::invalid_argument("unknown check id: " + e.check);
    }
}

RunConfig run_config_from_json(const Json& j) {
    require_keys(j, {"seed", "replicates", "z", "workers", "checks"}, "suite config");
    RunConfig cfg;
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("replicates")) cfg.replicates = j.at("replicates").get<std::uint64_t>();
    if (j.contains("z")) cfg.z = get_num(j, "z");
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (!j.contains("checks") || !j.at("checks").is_array())
        bad_config("suite config needs a \"checks\" array");

    std::size_t index = 0;
    for (const Json& entry : j.at("checks")) {
        require_keys(entry, {"check", "label", "config"}, "suite entry");
        if (!entry.contains("check")) bad_config("suite entry without a check id");
        SuiteEntry e;
        e.check = entry.at("check").get<std::string>();
        e.label = entry.contains("label") ? entry.at("label").get<std::string>()
                                          : e.check + "_" + std::to_string(index);
        Json body = entry.contains("config") ? entry.at("config") : Json::object();
        // suite-level defaults fill the holes; a missing seed is derived from
        // the suite seed and the entry position
        if (!body.contains("replicates")) body["replicates"] = cfg.replicates;
        if (!body.contains("z")) body["z"] = cfg.z;
        if (!body.contains("workers")) body["workers"] = cfg.workers;
        if (!body.contains("seed")) body["seed"] = derive_seed(cfg.seed, index);
        e.config = check_config_from_json(body);
        cfg.entries.push_back(std::move(e));
        ++index;
    }
    cfg.validate();
    return cfg;
}

SuiteResult run_suite(const RunConfig& cfg) {
    cfg.validate();
    Json checks = Json::array();
    std::uint64_t hold = 0, violation = 0, inconclusive = 0, errors = 0;

    std::string csv =
        "label,check,item,theorem,direction,verdict,"
        "lhs_mean,lhs_se,rhs_mean,rhs_se,margin,margin_se\n";
    auto csv_row = [&](const std::string& label, const std::string& check,
                       const std::string& item, const std::string& theorem,
                       const std::string& direction, const std::string& verdict,
                       double lm, double ls, double rm, double rs, double mg,
                       double mgse) {
        csv += label + "," + check + "," + item + "," + theorem + "," + direction +
               "," + verdict + "," + format_double(lm) + "," + format_double(ls) +
               "," + format_double(rm) + "," + format_double(rs) + "," +
               format_double(mg) + "," + format_double(mgse) + "\n";
    };

    for (const SuiteEntry& entry : cfg.entries) {
        Json section;
        section["check"] = entry.check;
        section["label"] = entry.label;
        try {
            CheckRun run = run_check(entry.check, entry.config);
            if (run.trend) {
                section["trend"] = trend_to_json(*run.trend);
                for (const TrendPoint& p : run.trend->points)
                    csv_row(entry.label, entry.check, box_label(p.box),
                            run.trend->check, "trend", "DIAGNOSTIC", p.value, p.se,
                            run.trend->bound, 0.0, run.trend->bound - p.value, p.se);
            } else {
                Json reps = Json::array();
                for (std::size_t i = 0; i < run.reports.size(); ++i) {
                    const InequalityReport& rep = run.reports[i];
                    reps.push_back(report_to_json(rep));
                    switch (rep.verdict) {
                        case Verdict::HOLD: ++hold; break;
                        case Verdict::VIOLATION: ++violation; break;
                        case Verdict::INCONCLUSIVE: ++inconclusive; break;
                    }
                    csv_row(entry.label, entry.check, std::to_string(i), rep.theorem,
                            rep.direction, verdict_name(rep.verdict),
                            rep.lhs.est.mean, rep.lhs.est.se, rep.rhs.est.mean,
                            rep.rhs.est.se, rep.margin, rep.margin_se);
                }
                section["reports"] = reps;
            }
        } catch (const std::exception& e) {
            section["error"] = e.what();
            ++errors;
            csv += entry.label + "," + entry.check + ",,,,ERROR,,,,,,\n";
        }
        checks.push_back(section);
    }

    SuiteResult result;
    result.exit_code = errors ? 2 : (violation ? 1 : 0);
    Json doc;
    doc["suite"] = Json{{"seed", cfg.seed},
                        {"replicates", cfg.replicates},
                        {"z", cfg.z},
                        {"workers", cfg.workers}};
    doc["rng"] = kRngId;
    doc["checks"] = checks;
    doc["summary"] = Json{{"hold", hold},
                          {"violation", violation},
                          {"inconclusive", inconclusive},
                          {"errors", errors}};
    doc["exit_code"] = result.exit_code;
    result.report = std::move(doc);
    result.summary_csv = std::move(csv);
    return result;
}

// ---------------------------------------------------------------------------
// the built-in suite: documented example configurations

namespace {

GeneratorSpec iid_normal(MultiIndex box) {
    GeneratorSpec g;
    g.model = Model::iid_partial_sum;
    g.dist.kind = DistKind::standard_normal;
    g.box = LatticeBox(std::move(box));
    return g;
}

GeneratorSpec lognormal_product(MultiIndex box, double sigma, double c = 1.0) {
    GeneratorSpec g;
    g.model = Model::product_martingale;
    g.dist.kind = DistKind::lognormal_mean1;
    g.dist.sigma = sigma;
    g.c = c;
    g.box = LatticeBox(std::move(box));
    return g;
}

// S identically equal to c (degenerate product field)
GeneratorSpec constant_field(MultiIndex box, double c) {
    GeneratorSpec g;
    g.model = Model::product_martingale;
    g.dist.kind = DistKind::degenerate;
    g.dist.value = 1.0;
    g.c = c;
    g.box = LatticeBox(std::move(box));
    return g;
}

GeneratorSpec zero_field(MultiIndex box) {
    GeneratorSpec g;
    g.model = Model::iid_partial_sum;
    g.dist.kind = DistKind::degenerate;
    g.dist.value = 0.0;
    g.box = LatticeBox(std::move(box));
    return g;
}

}  // namespace

RunConfig default_run_config(std::uint64_t replicates) {
    RunConfig suite;
    suite.seed = 20260401;
    suite.replicates = replicates;
    std::uint64_t trend_replicates = std::max<std::uint64_t>(2000, replicates / 10);

    std::uint64_t next_seed = 5001;
    auto add = [&](const std::string& check, const std::string& label,
                   CheckConfig cfg) {
        cfg.replicates = is_trend_check(check) ? trend_replicates : replicates;
        cfg.seed = next_seed++;
        suite.entries.push_back(SuiteEntry{check, label, std::move(cfg)});
    };

    CheckConfig cfg;

    // positive-field moment and tail bounds
    cfg = CheckConfig{};
    cfg.generator = lognormal_product({4, 4}, 0.1);
    cfg.p = 2.0;
    add("cairoli_moment", "cairoli-moment-lognormal-4x4", cfg);

    cfg = CheckConfig{};
    cfg.generator = constant_field({3, 3}, 1.0);
    cfg.p = 2.0;
    add("cairoli_moment", "cairoli-moment-constant-1", cfg);

    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.3);
    cfg.eps_grid = {0.5, 1.0, 2.0};
    add("cairoli_prob", "cairoli-prob-lognormal-3x3", cfg);

    cfg = CheckConfig{};
    cfg.generator = constant_field({3, 3}, 1.0);
    cfg.eps_grid = {2.0};
    add("cairoli_prob", "cairoli-prob-constant-eps2", cfg);

    // indicator bounds
    cfg = CheckConfig{};
    cfg.generator = iid_normal({4, 4});
    cfg.eps_grid = {1.0};
    cfg.variant = "max";
    add("doob", "doob-max-normal-4x4", cfg);

    cfg = CheckConfig{};
    cfg.generator = iid_normal({4, 4});
    cfg.eps_grid = {1.0};
    cfg.variant = "min";
    add("doob", "doob-min-normal-4x4", cfg);

    cfg = CheckConfig{};
    cfg.generator = iid_normal({16});
    cfg.eps_grid = {1.0};
    cfg.variant = "max";
    add("doob", "doob-max-normal-1d16", cfg);

    cfg = CheckConfig{};
    cfg.generator = zero_field({3, 3});
    cfg.eps_grid = {1.0};
    cfg.variant = "max";
    add("doob", "doob-max-zero-field", cfg);

    // rank orders
    cfg = CheckConfig{};
    cfg.generator = iid_normal({3, 3});
    cfg.j_rank = 2;
    cfg.g_mono = MonotoneFn::identity();
    cfg.eps_grid = {1.0};
    add("rank_order", "rank-order-j2-normal-3x3", cfg);

    cfg = CheckConfig{};
    cfg.generator = iid_normal({3, 3});
    cfg.j_rank = 10;  // exceeds the cell count: rank order falls back to the minimum
    cfg.g_mono = MonotoneFn::identity();
    cfg.eps_grid = {0.25};
    add("rank_order", "rank-order-min-fallback", cfg);

    // dimension-free moment bounds
    cfg = CheckConfig{};
    cfg.generator = lognormal_product({4, 4}, 0.1);
    cfg.p = 3.0;
    add("moment_corollary", "moment-lognormal-4x4-p3", cfg);

    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.2);
    cfg.p = 2.0;
    add("moment_corollary", "moment-lognormal-3x3-p2", cfg);

    cfg = CheckConfig{};
    cfg.generator = constant_field({3, 3}, 1.0);
    cfg.p = 1.0;
    add("moment_corollary", "moment-constant-p1", cfg);

    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.3);
    cfg.p = 1.0;
    add("moment_corollary", "moment-lognormal-3x3-p1", cfg);

    // entropy-style bound
    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.3, 1.0);
    add("harremoes", "harremoes-lognormal-3x3", cfg);

    cfg = CheckConfig{};
    cfg.generator = constant_field({2, 2}, 1.0);
    add("harremoes", "harremoes-constant-1", cfg);

    cfg = CheckConfig{};
    cfg.generator = constant_field({2, 2}, 0.5);
    add("harremoes", "harremoes-constant-05", cfg);

    // weighted maximal bound
    cfg = CheckConfig{};
    cfg.generator = iid_normal({3, 4});
    cfg.weight_kind = "inverse_product";
    cfg.g = ConvexFn::power(2.0);
    cfg.eps_grid = {0.5};
    add("chow", "chow-normal-3x4", cfg);

    cfg = CheckConfig{};
    cfg.generator = zero_field({3, 3});
    cfg.weight_kind = "ones";
    cfg.g = ConvexFn::power(1.0);
    cfg.eps_grid = {1.0};
    add("chow", "chow-zero-field", cfg);

    // weighted tail bound for associated increments
    cfg = CheckConfig{};
    cfg.generator = iid_normal({3, 3});
    cfg.generator.model = Model::moving_average;
    cfg.generator.kernel.taps_box = LatticeBox({2, 2});
    cfg.generator.kernel.taps = {1.0, 0.5, 0.5, 0.25};
    cfg.eps_grid = {1.0};
    add("hajek_renyi", "hajek-renyi-ma-3x3", cfg);

    cfg = CheckConfig{};
    cfg.generator = iid_normal({8});
    cfg.eps_grid = {2.0};
    add("hajek_renyi", "hajek-renyi-normal-1d8", cfg);

    cfg = CheckConfig{};
    cfg.generator = zero_field({3, 3});
    cfg.eps_grid = {1.0};
    add("hajek_renyi", "hajek-renyi-zero-field", cfg);

    // splitting tail bound
    for (double lam : {0.25, 0.5, 0.75}) {
        cfg = CheckConfig{};
        cfg.generator = lognormal_product({3, 3}, 0.3);
        cfg.lambda = lam;
        cfg.x_thresh = 1.0;
        add("orlicz_prob",
            "orlicz-prob-lambda-" + std::to_string(static_cast<int>(lam * 100)), cfg);
    }

    cfg = CheckConfig{};
    cfg.generator = constant_field({2, 2}, 1.0);
    cfg.lambda = 0.5;
    cfg.x_thresh = 2.0;
    add("orlicz_prob", "orlicz-prob-constant-1", cfg);

    // phi-moment bounds
    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.2);
    cfg.bound_id = "t51";
    cfg.phi = OrliczFn::power(2.0);
    cfg.a = 0.5;
    cfg.b = 1.0;
    cfg.lambda = 0.5;
    add("orlicz_moment", "orlicz-t51-power2", cfg);

    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.2);
    cfg.bound_id = "t52";
    cfg.phi = OrliczFn::power(2.0);
    cfg.a = 0.5;
    cfg.lambda = 0.5;
    add("orlicz_moment", "orlicz-t52-power2", cfg);

    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.3);
    cfg.bound_id = "t53";
    cfg.b = std::numbers::e;
    add("orlicz_moment", "orlicz-t53-lognormal", cfg);

    cfg = CheckConfig{};
    cfg.generator = constant_field({2, 2}, 1.0);
    cfg.bound_id = "t53";
    cfg.b = std::numbers::e;
    add("orlicz_moment", "orlicz-t53-constant-1", cfg);

    // E(S-1)^+ = 2 here, so this run lands in the regime where the b = e
    // bound undercuts the p = 1 log+ bound
    cfg = CheckConfig{};
    cfg.generator = constant_field({2, 2}, 3.0);
    cfg.bound_id = "t53";
    cfg.b = std::numbers::e;
    add("orlicz_moment", "orlicz-t53-constant-3", cfg);

    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.2);
    cfg.bound_id = "t54";
    cfg.phi = OrliczFn::power(2.0);
    add("orlicz_moment", "orlicz-t54-power2", cfg);

    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.2);
    cfg.bound_id = "t55";
    cfg.phi = OrliczFn::power(2.0);
    add("orlicz_moment", "orlicz-t55-power2", cfg);

    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.2);
    cfg.bound_id = "t56";
    cfg.phi = OrliczFn::power(2.0);
    cfg.gamma = 2.0;
    add("orlicz_moment", "orlicz-t56-power2", cfg);

    cfg = CheckConfig{};
    cfg.generator = zero_field({2, 2});
    cfg.bound_id = "t56_exp";
    cfg.r_rate = 1.0;
    add("orlicz_moment", "orlicz-t56-exp-zero", cfg);

    cfg = CheckConfig{};
    cfg.generator = constant_field({2, 2}, 0.75);
    cfg.bound_id = "t56_exp";
    cfg.r_rate = 0.5;
    add("orlicz_moment", "orlicz-t56-exp-constant", cfg);

    cfg = CheckConfig{};
    cfg.generator = lognormal_product({3, 3}, 0.2);
    cfg.bound_id = "t57";
    cfg.phi = OrliczFn::power(2.0);
    cfg.m_order = 1;
    add("orlicz_moment", "orlicz-t57-power2", cfg);

    // upcrossings
    cfg = CheckConfig{};
    cfg.generator.model = Model::fixed_increments;
    cfg.generator.dist.kind = DistKind::degenerate;
    cfg.generator.box = LatticeBox({4});
    cfg.generator.increments = {1.0, 1.0, 1.0, 1.0};  // S = (1, 2, 3, 4)
    cfg.a = 1.0;
    cfg.b = 3.0;
    cfg.s_direction = 1;
    add("upcross_bound", "upcross-ramp-1d", cfg);

    for (int s : {1, 2}) {
        cfg = CheckConfig{};
        cfg.generator = iid_normal({4, 4});
        cfg.a = -0.5;
        cfg.b = 0.5;
        cfg.s_direction = s;
        add("upcross_bound", "upcross-normal-4x4-s" + std::to_string(s), cfg);
    }

    cfg = CheckConfig{};
    cfg.generator = zero_field({3, 3});
    cfg.a = 1.0;
    cfg.b = 2.0;
    add("upcross_bound", "upcross-zero-field", cfg);

    // simultaneous containment
    cfg = CheckConfig{};
    cfg.generator = iid_normal({3, 3});
    cfg.variant = "monotone";
    cfg.g = ConvexFn::pos_part_power(2.0);  // squaring is not monotone on R
    cfg.psi.alpha = 1.0;
    add("whittle", "whittle-monotone-3x3", cfg);

    cfg = CheckConfig{};
    cfg.generator = iid_normal({3, 3});
    cfg.variant = "general";
    cfg.g = ConvexFn::power(2.0);
    cfg.psi.alpha = 1.0;
    add("whittle", "whittle-general-3x3", cfg);

    cfg = CheckConfig{};
    cfg.generator = iid_normal({3, 3});
    cfg.variant = "sup_form";
    cfg.g = ConvexFn::power(2.0);
    cfg.psi.alpha = 1.0;
    cfg.eps_grid = {0.5};
    add("whittle", "whittle-sup-3x3", cfg);

    cfg = CheckConfig{};
    cfg.generator = zero_field({3, 3});
    cfg.variant = "general";
    cfg.g = ConvexFn::power(1.0);
    cfg.psi.alpha = 1.0;
    add("whittle", "whittle-zero-field", cfg);

    // trend diagnostics
    cfg = CheckConfig{};
    cfg.generator = lognormal_product({4, 4}, 0.1);
    cfg.box_sequence = {LatticeBox({4, 4}), LatticeBox({8, 8}), LatticeBox({16, 16})};
    add("limsup_trend", "limsup-lognormal-2d", cfg);

    cfg = CheckConfig{};
    cfg.generator = lognormal_product({8}, 0.1);
    cfg.box_sequence = {LatticeBox({8}), LatticeBox({32}), LatticeBox({128})};
    add("limsup_trend", "limsup-lognormal-1d", cfg);

    cfg = CheckConfig{};
    cfg.generator = iid_normal({4, 4});
    cfg.box_sequence = {LatticeBox({4, 4}), LatticeBox({8, 8}), LatticeBox({16, 16})};
    cfg.weight_kind = "inverse_product";
    cfg.g = ConvexFn::power(1.0);
    cfg.p = 2.0;
    cfg.delta = 0.5;
    cfg.s_direction = 1;
    add("chow_convergence_trend", "chow-trend-normal-2d", cfg);

    cfg = CheckConfig{};
    cfg.generator = iid_normal({4, 4});
    cfg.box_sequence = {LatticeBox({4, 4}), LatticeBox({8, 8}), LatticeBox({16, 16})};
    cfg.threshold_kind = "product_of_coords";
    cfg.psi.alpha = 2.0;
    cfg.g = ConvexFn::power(2.0);
    cfg.delta = 0.5;
    cfg.s_direction = 1;
    add("whittle_trend", "whittle-trend-normal-2d", cfg);

    suite.validate();
    return suite;
}

// ---------------------------------------------------------------------------

std::string field_csv(const FieldSample& field) {
    std::string out;
    int k = field.box.dims();
    for (int d = 1; d <= k; ++d) {
        out += "i" + std::to_string(d) + ",";
    }
    out += "value\n";
    std::vector<MultiIndex> cells = box_iter(field.box);
    for (std::uint64_t off = 0; off < cells.size(); ++off) {
        for (int c : cells[off]) out += std::to_string(c) + ",";
        out += format_double(field.values[off]) + "\n";
    }
    return out;
}

}  // namespace demifield
