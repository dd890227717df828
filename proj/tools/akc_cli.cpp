#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "akc/certify.hpp"
#include "akc/construction.hpp"
#include "akc/dynamics.hpp"
#include "akc/measure.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace akc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitCompute = 2;
constexpr int kExitParse = 3;

struct RunConfig {
    json alpha_spec;
    int r = 1;
    Mode mode = Mode::relaxed;
    int stages = 1;
    std::vector<long long> q_overrides;
    int grid = 1 << 12;
    int bins = 1 << 12;
    std::vector<double> epsilons;
    uint64_t seed = 1;
    int r_max = 4;
    int samples = 200;
    int truncation_extra = 0;
    double mass_threshold = 0.9;
};

AlphaRepr alpha_from_spec(const json& spec) {
    std::string kind = spec.at("kind").get<std::string>();
    if (kind == "factorial_series")
        return liouville_series(spec.at("base").get<int>());
    if (kind == "exact_rational")
        return exact_rational_alpha(rat_from_string(spec.at("value").get<std::string>()));
    throw MalformedInput("unknown alpha kind: " + kind);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open config: " + path);
    json j = json::parse(in);
    RunConfig cfg;
    cfg.alpha_spec = j.at("alpha");
    alpha_from_spec(cfg.alpha_spec);  // validate early
    cfg.r = j.value("r", 1);
    cfg.mode = (j.value("mode", std::string("relaxed")) == "strict") ? Mode::strict
                                                                     : Mode::relaxed;
    cfg.stages = j.value("stages", 1);
    if (j.contains("q_overrides"))
        cfg.q_overrides = j["q_overrides"].get<std::vector<long long>>();
    cfg.grid = j.value("grid", 1 << 12);
    cfg.bins = j.value("bins", 1 << 12);
    if (j.contains("epsilons")) cfg.epsilons = j["epsilons"].get<std::vector<double>>();
    cfg.seed = j.value("seed", uint64_t{1});
    cfg.r_max = j.value("r_max", 4);
    cfg.samples = j.value("samples", 200);
    cfg.truncation_extra = j.value("truncation_extra", 0);
    cfg.mass_threshold = j.value("mass_threshold", 0.9);
    if (cfg.stages < 1 || cfg.r < 1 || cfg.grid < 16 || cfg.bins < 2)
        throw MalformedInput("config parameter out of documented range");
    return cfg;
}

void write_text(const fs::path& p, const std::string& s) {
    fs::create_directories(p.parent_path().empty() ? fs::path(".") : p.parent_path());
    std::ofstream out(p);
    if (!out) throw MalformedInput("cannot write " + p.string());
    out << s;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

json load_state_file(const std::string& path, ConstructionState& st, AlphaRepr& alpha) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open state: " + path);
    json j = json::parse(in);
    if (j.value("schema_version", 0) != 1)
        throw MalformedInput("unsupported state schema_version");
    st = state_from_json(j.at("state"));
    alpha = alpha_from_spec(j.at("alpha"));
    return j;
}

int cmd_construct(const std::string& config_path, const std::string& out_dir) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const json::exception& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const MalformedInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitParse;
    }
    try {
        AlphaRepr alpha = alpha_from_spec(cfg.alpha_spec);
        LemmaConstants consts = estimate_constants(cfg.r + cfg.stages + 2, 200, cfg.seed);
        ConstructionState st = stage_one(alpha, cfg.r, cfg.mode, 4.0, cfg.grid);
        for (int n = 2; n <= cfg.stages; ++n) {
            std::optional<long long> ovr;
            if (static_cast<int>(cfg.q_overrides.size()) >= n)
                ovr = cfg.q_overrides[static_cast<size_t>(n - 1)];
            next_stage(st, alpha, consts, ovr);
        }
        json out;
        out["schema_version"] = 1;
        out["alpha"] = cfg.alpha_spec;
        out["state"] = state_to_json(st);
        write_json(fs::path(out_dir) / "state.json", out);
        std::ostringstream csv;
        csv.precision(17);
        csv << "n,measured,bound,pass\n";
        for (const auto& e : st.contraction_log)
            csv << e.n << "," << e.measured << "," << e.bound << "," << (e.pass ? 1 : 0)
                << "\n";
        write_text(fs::path(out_dir) / "contraction.csv", csv.str());
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "construct failed: " << e.what() << "\n";
        return kExitCompute;
    }
}

int cmd_certify(const std::string& state_path, int stage, const std::string& out_dir) {
    ConstructionState st;
    AlphaRepr alpha = liouville_series(10);
    try {
        load_state_file(state_path, st, alpha);
    } catch (const json::exception& e) {
        std::cerr << "state parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const MalformedInput& e) {
        std::cerr << "state error: " << e.what() << "\n";
        return kExitParse;
    }
    try {
        int K = st.stage_count() - stage;
        BnCertificate cert = build_certificate(st, stage, K, alpha);
        write_json(fs::path(out_dir) / ("certificate_" + std::to_string(stage) + ".json"),
                   certificate_to_json(cert));
        GeometryReport geo = geometry_report(st, stage, K, alpha);
        write_json(fs::path(out_dir) / ("geometry_" + std::to_string(stage) + ".json"),
                   geometry_to_json(geo));
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "certify failed: " << e.what() << "\n";
        return kExitCompute;
    }
}

int cmd_dimension(const std::string& state_path, int stage, const std::string& config_path,
                  const std::string& out_dir) {
    ConstructionState st;
    AlphaRepr alpha = liouville_series(10);
    RunConfig cfg;
    try {
        load_state_file(state_path, st, alpha);
        cfg = load_config(config_path);
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const MalformedInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitParse;
    }
    try {
        if (stage < 1 || stage > st.stage_count())
            throw OutOfRange("dimension: no such stage in state");
        std::vector<MapPtr> parts(st.h.begin(), st.h.begin() + stage);
        MapPtr H = expr::compose(parts);
        MeasureHistogram mu = pushforward_lebesgue(H, cfg.bins);
        write_text(fs::path(out_dir) / ("measure_" + std::to_string(stage) + ".csv"),
                   histogram_to_csv(mu));
        std::vector<double> eps = cfg.epsilons;
        if (eps.empty())
            for (int k = 3; k <= 9; ++k) eps.push_back(std::ldexp(1.0, -k));
        DimensionEstimate est = lower_box_dimension(mu, cfg.mass_threshold, eps);
        json dj = dimension_to_json(est);
        dj["schema_version"] = 1;
        write_json(fs::path(out_dir) / ("dimension_" + std::to_string(stage) + ".json"), dj);

        int K = st.stage_count() - stage;
        BnCertificate cert = build_certificate(st, stage, K, alpha);
        IntervalFamily fam = certificate_family(cert);
        double mass = family_mass(mu, fam);
        json mj;
        mj["schema_version"] = 1;
        mj["n"] = stage;
        mj["family_mass"] = mass;
        mj["lemma_3_2_bound"] = 1.0 - std::ldexp(1.0, -stage);
        mj["meets_bound"] = mass >= 1.0 - std::ldexp(1.0, -stage) - 0.02;
        write_json(fs::path(out_dir) / ("mass_In_" + std::to_string(stage) + ".json"), mj);
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "dimension failed: " << e.what() << "\n";
        return kExitCompute;
    }
}

int cmd_lemmas(const std::string& config_path, const std::string& out_dir) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const json::exception& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const MalformedInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitParse;
    }
    try {
        if (cfg.r_max < 1) throw OutOfRange("lemmas: r_max >= 1 required");
        LemmaConstants consts = estimate_constants(cfg.r_max, cfg.samples, cfg.seed);
        json cj;
        cj["schema_version"] = 1;
        cj["provenance"] = "empirical";
        cj["C1"] = consts.c1;
        cj["C2"] = consts.c2;
        cj["C3"] = consts.c3;
        write_json(fs::path(out_dir) / "constants.json", cj);
        LemmaReport rep = lemma_oracles(consts, cfg.r_max, cfg.samples, cfg.seed + 1);
        json rj = lemma_report_to_json(rep);
        rj["schema_version"] = 1;
        write_json(fs::path(out_dir) / "lemma_report.json", rj);
        return rep.total_violations() == 0 ? kExitOk : kExitViolations;
    } catch (const Error& e) {
        std::cerr << "lemmas failed: " << e.what() << "\n";
        return kExitCompute;
    }
}

int cmd_rho_table(const std::string& out_dir) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "a,rho\n";
    for (int i = 0; i <= 99; ++i) {
        double a = 0.5 + 0.005 * i;
        csv << a << "," << rho_of_a(a) << "\n";
    }
    write_text(fs::path(out_dir) / "rho_table.csv", csv.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fast-approximation-by-conjugation construction toolkit"};
    app.require_subcommand(1);

    std::string config_path, state_path, out_dir = ".";
    int stage = 1;

    auto* construct = app.add_subcommand("construct", "build the schedule stages");
    construct->add_option("--config", config_path)->required();
    construct->add_option("--out", out_dir);

    auto* certify = app.add_subcommand("certify", "emit stage certificate and geometry");
    certify->add_option("--state", state_path)->required();
    certify->add_option("--stage", stage)->required();
    certify->add_option("--out", out_dir);

    auto* dimension = app.add_subcommand("dimension", "measure and dimension estimates");
    dimension->add_option("--state", state_path)->required();
    dimension->add_option("--stage", stage)->required();
    dimension->add_option("--config", config_path)->required();
    dimension->add_option("--out", out_dir);

    auto* lemmas = app.add_subcommand("lemmas", "estimate constants and run oracles");
    lemmas->add_option("--config", config_path)->required();
    lemmas->add_option("--out", out_dir);

    auto* rho_tab = app.add_subcommand("rho-table", "emit (a, rho) table");
    rho_tab->add_option("--out", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitParse : kExitOk;
    }

    if (construct->parsed()) return cmd_construct(config_path, out_dir);
    if (certify->parsed()) return cmd_certify(state_path, stage, out_dir);
    if (dimension->parsed()) return cmd_dimension(state_path, stage, config_path, out_dir);
    if (lemmas->parsed()) return cmd_lemmas(config_path, out_dir);
    if (rho_tab->parsed()) return cmd_rho_table(out_dir);
    return kExitParse;
}
