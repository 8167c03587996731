// demifield: simulate multidimensionally indexed fields and check maximal
// inequalities against Monte-Carlo estimates.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "demifield/harness.hpp"

namespace {

using demifield::Json;

Json load_json(const std::string& path) {
    Json j;
    if (path == "-") {
        std::cin >> j;
        return j;
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    in >> j;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

int cmd_gen(const std::string& config_path, std::optional<std::uint64_t> seed_arg,
            const std::string& out_path) {
    Json j = load_json(config_path);
    // a "seed" key in the config is allowed as an alternative to --seed
    std::uint64_t seed = 1;
    if (j.contains("seed")) {
        seed = j.at("seed").get<std::uint64_t>();
        j.erase("seed");
    }
    if (seed_arg) seed = *seed_arg;
    demifield::GeneratorSpec spec = demifield::generator_from_json(j);
    demifield::FieldSample field = demifield::sample_field(spec, seed);
    write_text(out_path, demifield::field_csv(field));
    return 0;
}

int cmd_check(const std::string& theorem, const std::string& config_path,
              std::optional<std::uint64_t> seed_arg, const std::string& out_path) {
    Json j = load_json(config_path);
    if (seed_arg) j["seed"] = *seed_arg;
    demifield::CheckConfig cfg = demifield::check_config_from_json(j);
    demifield::CheckRun run = demifield::run_check(theorem, cfg);

    Json doc;
    doc["check"] = theorem;
    int exit_code = 0;
    if (run.trend) {
        doc["trend"] = demifield::trend_to_json(*run.trend);
    } else {
        Json reports = Json::array();
        for (const demifield::InequalityReport& rep : run.reports) {
            reports.push_back(demifield::report_to_json(rep));
            if (rep.verdict == demifield::Verdict::VIOLATION) exit_code = 1;
        }
        doc["reports"] = reports;
    }
    write_text(out_path, doc.dump(2) + "\n");
    return exit_code;
}

int cmd_upcross(const std::string& config_path) {
    Json j = load_json(config_path);
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "a" && k != "b" && k != "mode" && k != "generator" &&
            k != "seed" && k != "box" && k != "values")
            throw std::invalid_argument("unknown key \"" + k + "\" in upcross config");
    }
    if (!j.contains("a") || !j.contains("b"))
        throw std::invalid_argument("upcross config needs \"a\" and \"b\"");
    double a = j.at("a").get<double>();
    double b = j.at("b").get<double>();
    demifield::UpcrossMode mode = demifield::UpcrossMode::corner_line;
    if (j.contains("mode")) {
        std::string name = j.at("mode").get<std::string>();
        if (name == "corner_line") mode = demifield::UpcrossMode::corner_line;
        else if (name == "all_lines_sum") mode = demifield::UpcrossMode::all_lines_sum;
        else throw std::invalid_argument("unknown upcross mode: " + name);
    }

    demifield::FieldSample field;
    if (j.contains("generator")) {
        std::uint64_t seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 1;
        field = demifield::sample_field(
            demifield::generator_from_json(j.at("generator")), seed);
    } else if (j.contains("box") && j.contains("values")) {
        demifield::MultiIndex n;
        for (const Json& el : j.at("box")) n.push_back(el.get<int>());
        field.box = demifield::LatticeBox(n);
        for (const Json& el : j.at("values")) field.values.push_back(el.get<double>());
        if (field.values.size() != field.box.volume())
            throw std::invalid_argument("values length does not match box volume");
    } else {
        throw std::invalid_argument(
            "upcross config needs either a generator or box+values");
    }

    demifield::UpcrossReport rep = demifield::upcross_total(field, a, b, mode);
    std::cout << demifield::upcross_to_json(rep).dump(2) << "\n";
    return 0;
}

int cmd_suite(const std::string& config_path, std::uint64_t replicates,
              const std::string& out_dir) {
    demifield::RunConfig cfg = config_path.empty()
                                   ? demifield::default_run_config(replicates)
                                   : demifield::run_config_from_json(load_json(config_path));
    demifield::SuiteResult result = demifield::run_suite(cfg);

    std::filesystem::create_directories(out_dir);
    auto path = [&](const std::string& name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    write_text(path("suite.json"), result.report.dump(2) + "\n");
    write_text(path("summary.csv"), result.summary_csv);
    for (const Json& section : result.report.at("checks")) {
        std::string label = section.at("label").get<std::string>();
        write_text(path(label + ".json"), section.dump(2) + "\n");
    }

    const Json& summary = result.report.at("summary");
    std::cout << "suite: " << cfg.entries.size() << " checks, "
              << summary.at("hold").get<std::uint64_t>() << " hold, "
              << summary.at("violation").get<std::uint64_t>() << " violation, "
              << summary.at("inconclusive").get<std::uint64_t>() << " inconclusive, "
              << summary.at("errors").get<std::uint64_t>() << " errors\n"
              << "reports written to " << out_dir << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulate multiindexed fields and check maximal inequalities"};
    app.require_subcommand(1);

    std::string config_path, out_path, theorem, out_dir;
    std::optional<std::uint64_t> seed_arg;
    std::uint64_t suite_replicates = 100000;

    CLI::App* gen = app.add_subcommand("gen", "sample one field and dump it as CSV");
    gen->add_option("--config", config_path, "generator spec (JSON file)")->required();
    gen->add_option("--seed", seed_arg, "replicate seed (default 1)");
    gen->add_option("--out", out_path, "output CSV path (default stdout)");

    CLI::App* check = app.add_subcommand("check", "run one inequality check");
    check->add_option("--theorem", theorem, "check id (see README)")->required();
    check->add_option("--config", config_path, "check config (JSON file)")->required();
    check->add_option("--seed", seed_arg, "override the config seed");
    check->add_option("--out", out_path, "output JSON path (default stdout)");

    CLI::App* upcross = app.add_subcommand(
        "upcross", "count upcrossings of one field over an interval");
    upcross->add_option("--config", config_path, "upcross config (JSON file)")
        ->required();

    CLI::App* suite = app.add_subcommand("suite", "run a batch of checks");
    suite->add_option("--config", config_path,
                      "suite config (JSON file; omit for the built-in suite)");
    suite->add_option("--replicates", suite_replicates,
                      "replicates for the built-in suite (default 100000)");
    suite->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_gen(config_path, seed_arg, out_path);
        if (check->parsed()) return cmd_check(theorem, config_path, seed_arg, out_path);
        if (upcross->parsed()) return cmd_upcross(config_path);
        if (suite->parsed()) return cmd_suite(config_path, suite_replicates, out_dir);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
