// spiked-wigner: theory constants and Monte Carlo validation for spiked
// deformed Wigner matrices.
//
// Subcommands: theory | simulate | validate | hs-check | block-variance | report
// Common flags: --config PATH [--seed U64] [--out DIR] [--jobs N]
// SPIKED_WIGNER_SEED overrides the config seed; --seed overrides both.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "sdw/errors.hpp"
#include "sdw/experiments.hpp"
#include "sdw/hsquad.hpp"
#include "sdw/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitSchema = 1;
constexpr int kExitDomain = 2;
constexpr int kExitValidation = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "runs";
    std::optional<std::uint64_t> seed;
    int jobs = 0;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sdw::SchemaError("cannot open config file: " + path);
    try {
        json j;
        in >> j;
        if (!j.is_object()) throw sdw::SchemaError("config root must be an object");
        return j;
    } catch (const json::exception& e) {
        throw sdw::SchemaError(std::string("config parse error: ") + e.what());
    }
}

std::optional<std::uint64_t> env_seed() {
    if (const char* v = std::getenv("SPIKED_WIGNER_SEED")) {
        try {
            return std::stoull(v);
        } catch (...) {
            throw sdw::SchemaError("SPIKED_WIGNER_SEED is not a valid integer");
        }
    }
    return std::nullopt;
}

std::uint64_t resolve_seed(const CommonArgs& args, std::uint64_t config_seed) {
    if (args.seed) return *args.seed;                        // --seed wins
    if (const auto s = env_seed()) return *s;                // then the environment
    return config_seed;                                      // then the config
}

void write_manifest(const CommonArgs& args, const std::string& command,
                    std::optional<std::uint64_t> seed, const std::vector<std::string>& outputs,
                    double wall_seconds, const std::string& stem) {
    ordered_json m;
    m["command"] = command;
    m["config_path"] = args.config_path;
    if (seed)
        m["resolved_seed"] = *seed;
    else
        m["resolved_seed"] = nullptr;
    m["outputs"] = outputs;
    m["version"] = sdw::kVersion;
    m["wall_time_s"] = wall_seconds;
    fs::create_directories(args.out_dir);
    std::ofstream out(fs::path(args.out_dir) / (stem + ".manifest.json"));
    out << m.dump(2) << "\n";
}

void emit(const ordered_json& doc, const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << doc.dump(2) << "\n";
}

sdw::HsGrid grid_from_json(const json& j) {
    sdw::HsGrid grid;
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        grid.nx = g.value("nx", grid.nx);
        grid.ny = g.value("ny", grid.ny);
        grid.y_min = g.value("y_min", grid.y_min);
    }
    return grid;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

int cmd_theory(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const json cfg = load_config(args.config_path);
    const auto nu = sdw::SpectralMeasure::from_json(cfg.at("measure"));
    const auto law = sdw::EntryLaw::from_json(cfg.at("law"));
    if (!cfg.contains("theta")) throw sdw::SchemaError("theory config needs theta");
    const double theta = cfg.at("theta").get<double>();

    const auto pred = sdw::predict(nu, law.sigma2(), theta, law);
    ordered_json doc = pred.to_json();
    doc["subordination_identity_residual"] =
        sdw::subordination_identity_residual(nu, law.sigma2(), theta);
    if (pred.near_critical)
        doc["warning"] = "spike is near-critical (margin < 0.05); constants are ill-conditioned";

    std::cout << doc.dump(2) << "\n";
    const auto out_path = fs::path(args.out_dir) / "theory.json";
    emit(doc, out_path);
    write_manifest(args, "theory", std::nullopt, {out_path.string()}, elapsed(t0), "theory");
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const json raw = load_config(args.config_path);
    auto cfg = sdw::ExperimentConfig::from_json(raw);
    cfg.seed = resolve_seed(args, cfg.seed);
    cfg.jobs = args.jobs;
    const std::string run_id = cfg.resolved_run_id();

    std::vector<std::string> outputs;
    ordered_json summary;
    summary["run_id"] = run_id;
    double wall = 0.0;

    switch (cfg.kind) {
        case sdw::ExperimentKind::eigenvector:
        case sdw::ExperimentKind::eigenvalue: {
            const sdw::SampleSet set = cfg.kind == sdw::ExperimentKind::eigenvector
                                           ? sdw::run_eigenvector_fluctuations(cfg)
                                           : sdw::run_eigenvalue_fluctuations(cfg);
            const auto [jp, cp] = set.write(args.out_dir, run_id);
            outputs = {jp, cp};
            summary["accepted"] = static_cast<int>(set.samples.size());
            summary["rejected_trials"] = set.rejected_trials;
            wall = set.wall_seconds;
            break;
        }
        case sdw::ExperimentKind::resolvent: {
            const auto run = sdw::run_resolvent_clt(cfg);
            const auto [jp, cp] = run.set.write(args.out_dir, run_id);
            ordered_json reports = ordered_json::array();
            for (const auto& rep : run.reports) {
                reports.push_back({{"z", {rep.z.real(), rep.z.imag()}},
                                   {"empirical_abs2", rep.empirical_abs2},
                                   {"stderr_abs2", rep.stderr_abs2},
                                   {"empirical_sq", {rep.empirical_sq.real(), rep.empirical_sq.imag()}},
                                   {"stderr_sq", rep.stderr_sq},
                                   {"theory_abs2", rep.theory_abs2},
                                   {"theory_sq", {rep.theory_sq.real(), rep.theory_sq.imag()}}});
            }
            summary["reports"] = reports;
            const auto rp = fs::path(args.out_dir) / (run_id + ".report.json");
            emit(summary, rp);
            outputs = {jp, cp, rp.string()};
            wall = run.set.wall_seconds;
            break;
        }
        case sdw::ExperimentKind::quadratic_form: {
            const auto report = sdw::run_quadratic_form_clt(cfg);
            summary["abs4_moment"] = report.abs4_moment;
            ordered_json pairs = ordered_json::array();
            for (const auto& p : report.pairs) {
                pairs.push_back(
                    {{"z1", {p.z1.real(), p.z1.imag()}},
                     {"z2", {p.z2.real(), p.z2.imag()}},
                     {"empirical_vv", {p.empirical_vv.real(), p.empirical_vv.imag()}},
                     {"stderr_vv", p.stderr_vv},
                     {"theory_vv", {p.theory_vv.real(), p.theory_vv.imag()}},
                     {"empirical_vvbar", {p.empirical_vvbar.real(), p.empirical_vvbar.imag()}},
                     {"stderr_vvbar", p.stderr_vvbar},
                     {"theory_vvbar", {p.theory_vvbar.real(), p.theory_vvbar.imag()}}});
            }
            summary["pairs"] = pairs;
            const auto rp = fs::path(args.out_dir) / (run_id + ".report.json");
            emit(summary, rp);
            outputs = {rp.string()};
            wall = elapsed(t0);
            break;
        }
        case sdw::ExperimentKind::concentration: {
            const auto report = sdw::run_concentration_scan(cfg);
            summary["z"] = {report.z.real(), report.z.imag()};
            summary["slope"] = report.slope;
            ordered_json rows = ordered_json::array();
            for (const auto& r : report.rows)
                rows.push_back({{"N", r.N}, {"variance", r.variance}, {"stderr", r.stderr_}});
            summary["rows"] = rows;
            const auto rp = fs::path(args.out_dir) / (run_id + ".report.json");
            emit(summary, rp);
            outputs = {rp.string()};
            wall = elapsed(t0);
            break;
        }
    }
    std::cout << summary.dump(2) << "\n";
    write_manifest(args, "simulate", cfg.seed, outputs, wall, run_id);
    return 0;
}

struct ValidationSpec {
    sdw::ReferenceKind reference;
    double ks_tolerance = 0.08;
    double variance_rel_tolerance = 0.2;
    double max_rejection_rate = 0.01;
};

int cmd_validate(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const json cfg = load_config(args.config_path);
    if (!cfg.contains("samples")) throw sdw::SchemaError("validate config needs samples path");
    const auto set = sdw::SampleSet::load(cfg.at("samples").get<std::string>());
    if (set.complex_kind) throw sdw::SchemaError("validate expects a real sample set");

    ValidationSpec vs;
    const std::string ref = cfg.value("reference", "eigenvector_limit");
    if (ref == "eigenvector_limit")
        vs.reference = sdw::ReferenceKind::eigenvector_limit;
    else if (ref == "eigenvalue_limit")
        vs.reference = sdw::ReferenceKind::eigenvalue_limit;
    else
        throw sdw::SchemaError("unknown reference kind: " + ref);
    if (cfg.contains("tolerances")) {
        const auto& t = cfg.at("tolerances");
        vs.ks_tolerance = t.value("ks", vs.ks_tolerance);
        vs.variance_rel_tolerance = t.value("variance_rel", vs.variance_rel_tolerance);
        vs.max_rejection_rate = t.value("rejection_rate", vs.max_rejection_rate);
    }

    // theory constants come from the embedded config snapshot unless the
    // validate config overrides them
    const json snap = cfg.contains("theory") ? cfg.at("theory") : json(set.config);
    const auto nu = sdw::SpectralMeasure::from_json(snap.at("measure"));
    const auto law = sdw::EntryLaw::from_json(snap.at("law"));
    const double theta = snap.at("theta").get<double>();
    const auto pred = sdw::predict(nu, law.sigma2(), theta, law);

    const double scale =
        vs.reference == sdw::ReferenceKind::eigenvector_limit ? pred.c_eigenvector : 1.0;
    const double gvar =
        vs.reference == sdw::ReferenceKind::eigenvector_limit ? pred.varZ : pred.v2_eigenvalue;
    const auto handle = sdw::convolved_cdf(law, scale, gvar);
    const double ref_variance = scale * scale * law.sigma2() + gvar;

    const double ks = sdw::ks_statistic(set.samples, handle);
    const auto moments = sdw::summarize(set.samples);
    const double var_rel_err = std::abs(moments.variance - ref_variance) / ref_variance;
    const double rejection_rate =
        set.trials > 0 ? static_cast<double>(set.rejected_trials) / set.trials : 0.0;

    const bool pass = ks < vs.ks_tolerance && var_rel_err < vs.variance_rel_tolerance &&
                      rejection_rate < vs.max_rejection_rate;

    ordered_json verdict;
    verdict["pass"] = pass;
    verdict["reference"] = ref;
    verdict["reference_tag"] = handle.tag;
    verdict["n"] = static_cast<int>(set.samples.size());
    verdict["ks"] = ks;
    verdict["ks_tolerance"] = vs.ks_tolerance;
    verdict["sample_mean"] = moments.mean;
    verdict["stderr_mean"] = moments.stderr_mean;
    verdict["sample_variance"] = moments.variance;
    verdict["reference_variance"] = ref_variance;
    verdict["variance_rel_error"] = var_rel_err;
    verdict["variance_rel_tolerance"] = vs.variance_rel_tolerance;
    verdict["rejection_rate"] = rejection_rate;
    std::cout << verdict.dump(2) << "\n";

    const std::string stem =
        set.config.contains("run_id") ? set.config.at("run_id").get<std::string>() : "validate";
    const auto vp = fs::path(args.out_dir) / (stem + ".verdict.json");
    emit(verdict, vp);
    write_manifest(args, "validate", std::nullopt, {vp.string()}, elapsed(t0),
                   stem + ".validate");
    return pass ? 0 : kExitValidation;
}

int cmd_hs_check(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const json cfg = load_config(args.config_path);
    const auto nu = sdw::SpectralMeasure::from_json(cfg.at("measure"));
    if (!cfg.contains("theta") || !cfg.contains("sigma2"))
        throw sdw::SchemaError("hs-check config needs theta and sigma2");
    const double theta = cfg.at("theta").get<double>();
    const double sigma2 = cfg.at("sigma2").get<double>();
    const double delta = cfg.value("delta", 0.0);
    const int k = cfg.value("k", 3);

    const auto rc =
        sdw::residue_check(nu, sigma2, theta, delta, k, grid_from_json(cfg), args.jobs);
    ordered_json doc;
    doc["integral"] = rc.integral;
    doc["minus_residue"] = rc.minus_residue;
    doc["abs_diff"] = rc.abs_diff;
    doc["delta"] = rc.delta;
    doc["rho"] = rc.rho;
    std::cout << doc.dump(2) << "\n";
    const auto out_path = fs::path(args.out_dir) / "hs-check.json";
    emit(doc, out_path);
    write_manifest(args, "hs-check", std::nullopt, {out_path.string()}, elapsed(t0), "hs-check");
    return 0;
}

int cmd_block_variance(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const json cfg = load_config(args.config_path);
    const auto law = sdw::EntryLaw::from_json(cfg.at("law"));
    if (!cfg.contains("theta")) throw sdw::SchemaError("block-variance config needs theta");
    const double theta = cfg.at("theta").get<double>();
    const int mc_trials = cfg.value("mc_trials", 50);
    const std::uint64_t seed = resolve_seed(args, cfg.value("seed", std::uint64_t{1}));

    std::vector<double> sub;
    if (cfg.contains("sub_spectrum")) {
        sub = cfg.at("sub_spectrum").get<std::vector<double>>();
    } else if (cfg.contains("sub_spectrum_csv")) {
        std::ifstream in(cfg.at("sub_spectrum_csv").get<std::string>());
        if (!in) throw sdw::SchemaError("cannot open sub_spectrum_csv");
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) sub.push_back(std::stod(line));
    } else {
        throw sdw::SchemaError("block-variance config needs sub_spectrum or sub_spectrum_csv");
    }
    if (sub.empty()) throw sdw::SchemaError("empty sub-spectrum");

    sdw::DeformationSpec spec{theta, sub, std::nullopt};
    if (cfg.contains("haar_seed") && !cfg.at("haar_seed").is_null())
        spec.haar_seed = cfg.at("haar_seed").get<std::uint64_t>();
    const Eigen::MatrixXcd subA =
        sdw::Deformation::build(spec).A.bottomRightCorner(sub.size(), sub.size());

    sdw::HsGrid grid{48, 48, 0.0};
    if (cfg.contains("grid")) grid = grid_from_json(cfg);
    const auto res =
        sdw::block_variance_estimate(subA, law, theta, mc_trials, grid, seed, cfg.value("k", 1), args.jobs);

    ordered_json doc;
    doc["varZN"] = res.varZN;
    doc["stderr"] = res.stderr_;
    doc["mc_trials"] = res.trials;
    doc["rho"] = res.rho;
    doc["delta"] = res.delta;
    // diagonal-limit reference from the empirical measure of the block
    const auto nu_emp = sdw::SpectralMeasure::empirical(sub);
    doc["diagonal_varZ"] = sdw::predict(nu_emp, law.sigma2(), theta, law).varZ;
    std::cout << doc.dump(2) << "\n";
    const auto out_path = fs::path(args.out_dir) / "block-variance.json";
    emit(doc, out_path);
    write_manifest(args, "block-variance", seed, {out_path.string()}, elapsed(t0),
                   "block-variance");
    return 0;
}

// density profile export: {"density": {"measure": .., "sigma2": .., "x_min": ..,
// "x_max": .., "points": ..}} -> CSV (x, density)
int cmd_report_density(const CommonArgs& args, const json& cfg,
                       std::chrono::steady_clock::time_point t0) {
    const auto& d = cfg.at("density");
    const auto nu = sdw::SpectralMeasure::from_json(d.at("measure"));
    const double sigma2 = d.at("sigma2").get<double>();
    const sdw::FreeConvolution fc(nu, sigma2);
    const double x_min = d.value("x_min", nu.support_min() - 3.0 * std::sqrt(sigma2));
    const double x_max = d.value("x_max", nu.support_max() + 3.0 * std::sqrt(sigma2));
    const int points = d.value("points", 400);

    fs::create_directories(args.out_dir);
    const auto csv_path = fs::path(args.out_dir) / "density.csv";
    std::ofstream out(csv_path, std::ios::binary);
    out << "x,density\n";
    char buf[80];
    for (int i = 0; i <= points; ++i) {
        const double x = x_min + (x_max - x_min) * i / points;
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x, fc.density(x));
        out << buf;
    }
    std::cout << "wrote " << csv_path.string() << "\n";
    write_manifest(args, "report", std::nullopt, {csv_path.string()}, elapsed(t0),
                   "density.report");
    return 0;
}

int cmd_report(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const json cfg = load_config(args.config_path);
    if (cfg.contains("density")) return cmd_report_density(args, cfg, t0);
    if (!cfg.contains("samples")) throw sdw::SchemaError("report config needs samples path");
    const auto set = sdw::SampleSet::load(cfg.at("samples").get<std::string>());
    if (set.complex_kind) throw sdw::SchemaError("report expects a real sample set");

    const json snap = cfg.contains("theory") ? cfg.at("theory") : json(set.config);
    const auto nu = sdw::SpectralMeasure::from_json(snap.at("measure"));
    const auto law = sdw::EntryLaw::from_json(snap.at("law"));
    const double theta = snap.at("theta").get<double>();
    const auto pred = sdw::predict(nu, law.sigma2(), theta, law);

    const std::string ref = cfg.value("reference", "eigenvector_limit");
    const bool evec = ref == "eigenvector_limit";
    if (!evec && ref != "eigenvalue_limit")
        throw sdw::SchemaError("unknown reference kind: " + ref);
    const auto handle = sdw::convolved_cdf(law, evec ? pred.c_eigenvector : 1.0,
                                           evec ? pred.varZ : pred.v2_eigenvalue);

    std::vector<double> sorted(set.samples);
    std::sort(sorted.begin(), sorted.end());
    const int points = cfg.value("points", 200);
    const double lo = sorted.front() - 0.5, hi = sorted.back() + 0.5;

    const std::string stem =
        set.config.contains("run_id") ? set.config.at("run_id").get<std::string>() : "report";
    fs::create_directories(args.out_dir);
    const auto csv_path = fs::path(args.out_dir) / (stem + ".report.csv");
    std::ofstream out(csv_path, std::ios::binary);
    out << "x,ecdf,reference_cdf\n";
    char buf[128];
    for (int i = 0; i <= points; ++i) {
        const double x = lo + (hi - lo) * i / points;
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        const double ecdf = static_cast<double>(it - sorted.begin()) / sorted.size();
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", x, ecdf, handle.cdf(x));
        out << buf;
    }
    std::cout << "wrote " << csv_path.string() << "\n";
    write_manifest(args, "report", std::nullopt, {csv_path.string()}, elapsed(t0),
                   stem + ".report");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spiked deformed Wigner matrices: outlier theory and Monte Carlo validation"};
    app.require_subcommand(1);

    CommonArgs args;
    int (*handler)(const CommonArgs&) = nullptr;
    for (const auto& [name, fn] :
         std::initializer_list<std::pair<const char*, int (*)(const CommonArgs&)>>{
             {"theory", cmd_theory},
             {"simulate", cmd_simulate},
             {"validate", cmd_validate},
             {"hs-check", cmd_hs_check},
             {"block-variance", cmd_block_variance},
             {"report", cmd_report}}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "JSON config document")->required();
        sub->add_option("--out", args.out_dir, "output directory (default: runs)");
        sub->add_option("--seed", args.seed, "seed override (beats SPIKED_WIGNER_SEED)");
        sub->add_option("--jobs", args.jobs, "parallel jobs, 0 = all cores");
        const auto fn_copy = fn;
        sub->callback([&handler, fn_copy] { handler = fn_copy; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return handler(args);
    } catch (const sdw::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const sdw::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const sdw::SolverError& e) {
        std::cerr << "solver error: " << e.what() << " (residual " << e.last_residual << ")\n";
        return kExitDomain;
    } catch (const sdw::ExperimentError& e) {
        std::cerr << "experiment error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    }
}
