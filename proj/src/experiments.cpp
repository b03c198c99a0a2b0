#include "sdw/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdw/errors.hpp"
#include "sdw/parallel.hpp"

namespace sdw {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> resolve_sub_spectrum(const ExperimentConfig& cfg, int N) {
    if (cfg.sub_spectrum) {
        if (static_cast<int>(cfg.sub_spectrum->size()) != N - 1)
            throw SchemaError("sub_spectrum size must be N-1");
        return *cfg.sub_spectrum;
    }
    return discretize_quantiles(cfg.nu, N - 1);
}

nlohmann::ordered_json cplx_to_json(cplx z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

cplx cplx_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw SchemaError("complex values are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

struct TrialValue {
    double value = 0.0;
    bool ok = false;
};

// Shared eigenvector / eigenvalue Monte Carlo loop.
SampleSet run_spectral_fluctuations(const ExperimentConfig& cfg, bool eigenvector_stat) {
    const auto t0 = std::chrono::steady_clock::now();
    const double sigma2 = cfg.law.sigma2();
    const std::vector<double> sub = resolve_sub_spectrum(cfg, cfg.N);
    const auto [tauN, rhoN] = finite_n_centerings(sub, sigma2, cfg.theta);
    const SpikePrediction pred = predict(cfg.nu, sigma2, cfg.theta, cfg.law);

    FreeConvolution fc(cfg.nu, sigma2);
    OutlierOptions opts;
    opts.window = 0.5 * fc.outlier_clearance(cfg.theta);

    const Deformation deformation =
        Deformation::build({cfg.theta, sub, cfg.haar_seed});
    const double sqrt_n = std::sqrt(static_cast<double>(cfg.N));

    auto trial = [&](std::size_t t) -> TrialValue {
        const DeformedSample sample = sample_deformed(deformation, cfg.law, cfg.seed + t);
        const OutlierResult res = outlier_eigenpair(sample, rhoN, opts);
        if (!res.ok) return {};
        const double value =
            eigenvector_stat
                ? sqrt_n * (spike_overlap(res.vector) - tauN)
                : pred.c_eigenvalue * sqrt_n * (res.lambda - rhoN);
        return {value, true};
    };
    const auto outcomes =
        map_indexed<TrialValue>(static_cast<std::size_t>(cfg.trials), cfg.jobs, trial);

    SampleSet set;
    set.config = cfg.to_json();
    set.trials = cfg.trials;
    set.seed = cfg.seed;
    for (int t = 0; t < cfg.trials; ++t) {
        if (outcomes[static_cast<std::size_t>(t)].ok) {
            set.trial_index.push_back(t);
            set.samples.push_back(outcomes[static_cast<std::size_t>(t)].value);
        } else {
            ++set.rejected_trials;
        }
    }
    if (set.samples.empty())
        throw ExperimentError("spectral fluctuation run: every trial was rejected");
    set.wall_seconds = elapsed_since(t0);
    return set;
}

} // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::eigenvector: return "eigenvector";
        case ExperimentKind::eigenvalue: return "eigenvalue";
        case ExperimentKind::resolvent: return "resolvent";
        case ExperimentKind::quadratic_form: return "quadratic_form";
        case ExperimentKind::concentration: return "concentration";
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    if (name == "eigenvector") return ExperimentKind::eigenvector;
    if (name == "eigenvalue") return ExperimentKind::eigenvalue;
    if (name == "resolvent") return ExperimentKind::resolvent;
    if (name == "quadratic_form") return ExperimentKind::quadratic_form;
    if (name == "concentration") return ExperimentKind::concentration;
    throw SchemaError("unknown experiment kind: " + name);
}

std::string ExperimentConfig::resolved_run_id() const {
    if (!run_id.empty()) return run_id;
    std::ostringstream os;
    os << to_string(kind) << "-" << to_string(law.kind()) << "-N" << N << "-s" << seed;
    return os.str();
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = to_string(kind);
    j["N"] = N;
    if (!N_list.empty()) j["N_list"] = N_list;
    j["trials"] = trials;
    j["law"] = law.to_json();
    j["theta"] = theta;
    j["measure"] = nu.to_json();
    if (sub_spectrum)
        j["sub_spectrum"] = *sub_spectrum;
    else
        j["sub_spectrum"] = "quantiles";
    if (haar_seed) j["haar_seed"] = *haar_seed;
    j["seed"] = seed;
    if (!z_points.empty()) {
        j["z_points"] = nlohmann::ordered_json::array();
        for (cplx z : z_points) j["z_points"].push_back(cplx_to_json(z));
    }
    if (!z_pairs.empty()) {
        j["z_pairs"] = nlohmann::ordered_json::array();
        for (const auto& [a, b] : z_pairs)
            j["z_pairs"].push_back(nlohmann::ordered_json::array({cplx_to_json(a), cplx_to_json(b)}));
    }
    j["run_id"] = resolved_run_id();
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("experiment config must be an object");
    ExperimentConfig cfg;
    try {
        cfg.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
        if (j.contains("N")) cfg.N = j.at("N").get<int>();
        if (j.contains("N_list")) cfg.N_list = j.at("N_list").get<std::vector<int>>();
        if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
        cfg.law = EntryLaw::from_json(j.at("law"));
        cfg.theta = j.at("theta").get<double>();
        cfg.nu = SpectralMeasure::from_json(j.at("measure"));
        if (j.contains("sub_spectrum") && j.at("sub_spectrum").is_array())
            cfg.sub_spectrum = j.at("sub_spectrum").get<std::vector<double>>();
        if (j.contains("haar_seed") && !j.at("haar_seed").is_null())
            cfg.haar_seed = j.at("haar_seed").get<std::uint64_t>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("z_points"))
            for (const auto& z : j.at("z_points")) cfg.z_points.push_back(cplx_from_json(z));
        if (j.contains("z_pairs"))
            for (const auto& p : j.at("z_pairs")) {
                if (!p.is_array() || p.size() != 2)
                    throw SchemaError("z_pairs entries are [[re,im],[re,im]]");
                cfg.z_pairs.emplace_back(cplx_from_json(p[0]), cplx_from_json(p[1]));
            }
        if (j.contains("run_id")) cfg.run_id = j.at("run_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("experiment config: ") + e.what());
    }
    if (cfg.trials < 1) throw SchemaError("trials must be >= 1");
    if (cfg.N < 2) throw SchemaError("N must be >= 2");
    return cfg;
}

std::pair<std::string, std::string> SampleSet::write(const std::string& dir,
                                                     const std::string& run_id) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string json_path = (fs::path(dir) / (run_id + ".json")).string();
    const std::string csv_path = (fs::path(dir) / (run_id + ".csv")).string();

    nlohmann::ordered_json j;
    j["schema"] = "spiked-wigner/sampleset-v1";
    j["config"] = config;
    j["trials"] = trials;
    j["accepted"] = static_cast<int>(trial_index.size());
    j["rejected_trials"] = rejected_trials;
    j["seed"] = seed;
    j["complex"] = complex_kind;
    j["z_count"] = z_count;
    j["samples_csv"] = run_id + ".csv";
    std::ofstream jf(json_path, std::ios::binary);
    jf << j.dump(2) << "\n";

    std::ofstream cf(csv_path, std::ios::binary);
    if (!complex_kind) {
        cf << "trial,value\n";
        for (std::size_t i = 0; i < samples.size(); ++i)
            cf << trial_index[i] << "," << format_double(samples[i]) << "\n";
    } else {
        cf << "trial,z_index,re,im\n";
        for (std::size_t i = 0; i < csamples.size(); ++i) {
            const std::size_t t = i / static_cast<std::size_t>(z_count);
            const std::size_t zi = i % static_cast<std::size_t>(z_count);
            cf << trial_index[t] << "," << zi << "," << format_double(csamples[i].real())
               << "," << format_double(csamples[i].imag()) << "\n";
        }
    }
    return {json_path, csv_path};
}

SampleSet SampleSet::load(const std::string& json_path) {
    std::ifstream jf(json_path);
    if (!jf) throw SchemaError("cannot open sample set: " + json_path);
    nlohmann::json j;
    try {
        jf >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("sample set header: ") + e.what());
    }
    if (j.value("schema", "") != std::string("spiked-wigner/sampleset-v1"))
        throw SchemaError("unexpected sample set schema");
    SampleSet set;
    set.config = j.at("config");
    set.trials = j.at("trials").get<int>();
    set.rejected_trials = j.at("rejected_trials").get<int>();
    set.seed = j.at("seed").get<std::uint64_t>();
    set.complex_kind = j.at("complex").get<bool>();
    set.z_count = j.at("z_count").get<int>();

    const auto csv_path =
        (std::filesystem::path(json_path).parent_path() / j.at("samples_csv").get<std::string>())
            .string();
    std::ifstream cf(csv_path);
    if (!cf) throw SchemaError("cannot open sample CSV: " + csv_path);
    std::string line;
    std::getline(cf, line); // header
    while (std::getline(cf, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(is, field, ',')) fields.push_back(field);
        if (!set.complex_kind) {
            if (fields.size() != 2) throw SchemaError("bad CSV row: " + line);
            set.trial_index.push_back(std::stoi(fields[0]));
            set.samples.push_back(std::stod(fields[1]));
        } else {
            if (fields.size() != 4) throw SchemaError("bad CSV row: " + line);
            if (std::stoi(fields[1]) == 0) set.trial_index.push_back(std::stoi(fields[0]));
            set.csamples.emplace_back(std::stod(fields[2]), std::stod(fields[3]));
        }
    }
    return set;
}

SampleSet run_eigenvector_fluctuations(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::eigenvector)
        throw SchemaError("config kind must be 'eigenvector'");
    return run_spectral_fluctuations(cfg, true);
}

SampleSet run_eigenvalue_fluctuations(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::eigenvalue)
        throw SchemaError("config kind must be 'eigenvalue'");
    return run_spectral_fluctuations(cfg, false);
}

cplx limit_covariance(const SpectralMeasure& nu, const FreeConvolution& fc, const EntryLaw& law,
                      cplx z1, cplx z2) {
    const double sigma2 = law.sigma2();
    const double s4 = sigma2 * sigma2;
    const cplx w1 = z1 - sigma2 * fc.g(z1);
    const cplx w2 = z2 - sigma2 * fc.g(z2);
    const cplx term1 = nu.integrate([&](double x) { return 1.0 / ((w1 - x) * (w2 - x)); });
    cplx term2;
    if (std::abs(z1 - z2) < 1e-12 * std::max(1.0, std::abs(z1)))
        term2 = -fc.g(z1, 1);
    else
        term2 = (fc.g(z1) - fc.g(z2)) / (z2 - z1);
    return 0.5 * (law.m4() - 3.0 * s4) * term1 + s4 * term2;
}

ResolventCltRun run_resolvent_clt(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::resolvent)
        throw SchemaError("config kind must be 'resolvent'");
    if (cfg.z_points.empty()) throw SchemaError("resolvent run needs z_points");
    for (cplx z : cfg.z_points)
        if (std::abs(z.imag()) < 0.5)
            throw SchemaError("resolvent z_points need |Im z| >= 0.5");

    const auto t0 = std::chrono::steady_clock::now();
    const double sigma2 = cfg.law.sigma2();
    const std::vector<double> sub = resolve_sub_spectrum(cfg, cfg.N);
    const int nz = static_cast<int>(cfg.z_points.size());

    // finite-N centering 1/(z - sigma2 g_{N-1}(z) - theta), g_{N-1} from the
    // empirical sub-spectrum measure
    FreeConvolution fc_n(SpectralMeasure::empirical(sub), sigma2);
    std::vector<cplx> center(nz);
    for (int i = 0; i < nz; ++i) {
        const cplx z = cfg.z_points[static_cast<std::size_t>(i)];
        center[static_cast<std::size_t>(i)] = 1.0 / (z - sigma2 * fc_n.g(z) - cfg.theta);
    }

    const Deformation deformation = Deformation::build({cfg.theta, sub, cfg.haar_seed});
    const double sqrt_n = std::sqrt(static_cast<double>(cfg.N));

    auto trial = [&](std::size_t t) {
        const DeformedSample sample = sample_deformed(deformation, cfg.law, cfg.seed + t);
        std::vector<cplx> xi(static_cast<std::size_t>(nz));
        ResolventRequest req;
        req.g11 = true;
        for (int i = 0; i < nz; ++i) {
            const auto stats =
                resolvent_stats(sample, cfg.z_points[static_cast<std::size_t>(i)], req);
            xi[static_cast<std::size_t>(i)] =
                sqrt_n * (stats.g11 - center[static_cast<std::size_t>(i)]);
        }
        return xi;
    };
    const auto rows =
        map_indexed<std::vector<cplx>>(static_cast<std::size_t>(cfg.trials), cfg.jobs, trial);

    ResolventCltRun run;
    run.set.config = cfg.to_json();
    run.set.complex_kind = true;
    run.set.z_count = nz;
    run.set.trials = cfg.trials;
    run.set.seed = cfg.seed;
    for (int t = 0; t < cfg.trials; ++t) {
        run.set.trial_index.push_back(t);
        for (int i = 0; i < nz; ++i)
            run.set.csamples.push_back(rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]);
    }

    // limit-law moments from Eq-(20) machinery
    FreeConvolution fc(cfg.nu, sigma2);
    for (int i = 0; i < nz; ++i) {
        const cplx z = cfg.z_points[static_cast<std::size_t>(i)];
        ResolventZReport rep;
        rep.z = z;
        const cplx den = z - sigma2 * fc.g(z) - cfg.theta;
        const cplx den2 = den * den;
        rep.theory_abs2 =
            (sigma2 + limit_covariance(cfg.nu, fc, cfg.law, z, std::conj(z)).real()) /
            std::norm(den2);
        rep.theory_sq =
            (sigma2 + limit_covariance(cfg.nu, fc, cfg.law, z, z)) / (den2 * den2);

        double sum_abs2 = 0.0;
        cplx sum_sq = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const cplx v = run.set.csamples[static_cast<std::size_t>(t * nz + i)];
            sum_abs2 += std::norm(v);
            sum_sq += v * v;
        }
        const double n = cfg.trials;
        rep.empirical_abs2 = sum_abs2 / n;
        rep.empirical_sq = sum_sq / n;
        double var_abs2 = 0.0, var_sq = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const cplx v = run.set.csamples[static_cast<std::size_t>(t * nz + i)];
            var_abs2 += (std::norm(v) - rep.empirical_abs2) * (std::norm(v) - rep.empirical_abs2);
            var_sq += std::norm(v * v - rep.empirical_sq);
        }
        rep.stderr_abs2 = std::sqrt(var_abs2 / (n - 1) / n);
        rep.stderr_sq = std::sqrt(var_sq / (n - 1) / n);
        run.reports.push_back(rep);
    }
    run.set.wall_seconds = elapsed_since(t0);
    return run;
}

QuadraticFormReport run_quadratic_form_clt(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::quadratic_form)
        throw SchemaError("config kind must be 'quadratic_form'");
    if (cfg.z_pairs.empty()) throw SchemaError("quadratic form run needs z_pairs");

    const double sigma2 = cfg.law.sigma2();
    const int N = cfg.N;
    const std::vector<double> diag = discretize_quantiles(cfg.nu, N);

    // distinct z values over pairs (conjugates are sampled independently when
    // they appear explicitly)
    std::vector<cplx> zs;
    auto z_index = [&](cplx z) {
        for (std::size_t i = 0; i < zs.size(); ++i)
            if (zs[i] == z) return static_cast<int>(i);
        zs.push_back(z);
        return static_cast<int>(zs.size() - 1);
    };
    std::vector<std::pair<int, int>> pair_idx;
    for (const auto& [a, b] : cfg.z_pairs) {
        if (a.imag() == 0.0 || b.imag() == 0.0)
            throw SchemaError("quadratic form z values must be nonreal");
        pair_idx.emplace_back(z_index(a), z_index(b));
    }
    const int nz = static_cast<int>(zs.size());

    std::vector<std::vector<cplx>> b_diag(static_cast<std::size_t>(nz),
                                          std::vector<cplx>(static_cast<std::size_t>(N)));
    for (int i = 0; i < nz; ++i)
        for (int j = 0; j < N; ++j)
            b_diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                1.0 / (zs[static_cast<std::size_t>(i)] - diag[static_cast<std::size_t>(j)]);

    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(N));
    const double scale = 1.0 / std::sqrt(2.0 * sigma2); // standardizes y

    auto trial = [&](std::size_t t) {
        Rng rng(cfg.seed + t);
        std::vector<double> abs2(static_cast<std::size_t>(N));
        for (int j = 0; j < N; ++j) {
            const double u = cfg.law.sample(rng) * scale;
            const double v = cfg.law.sample(rng) * scale;
            abs2[static_cast<std::size_t>(j)] = u * u + v * v;
        }
        std::vector<cplx> vn(static_cast<std::size_t>(nz));
        for (int i = 0; i < nz; ++i) {
            cplx acc = 0.0;
            for (int j = 0; j < N; ++j)
                acc += b_diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                       (abs2[static_cast<std::size_t>(j)] - 1.0);
            vn[static_cast<std::size_t>(i)] = inv_sqrt_n * acc;
        }
        return vn;
    };
    const auto rows =
        map_indexed<std::vector<cplx>>(static_cast<std::size_t>(cfg.trials), cfg.jobs, trial);

    QuadraticFormReport report;
    report.abs4_moment = (cfg.law.m4() + sigma2 * sigma2) / (2.0 * sigma2 * sigma2);

    for (int i = 0; i < nz; ++i) {
        QuadraticZMoment m;
        m.z = zs[static_cast<std::size_t>(i)];
        double acc = 0.0, trb = 0.0;
        for (int t = 0; t < cfg.trials; ++t)
            acc += std::norm(rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]);
        for (int j = 0; j < N; ++j)
            trb += std::norm(b_diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        m.mean_abs2 = acc / cfg.trials;
        m.tr_bstar_b_over_n = trb / N;
        report.z_moments.push_back(m);
    }

    auto pair_stats = [&](int i1, int i2, bool conj2) {
        cplx mean = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const cplx v1 = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i1)];
            cplx v2 = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i2)];
            if (conj2) v2 = std::conj(v2);
            mean += v1 * v2;
        }
        mean /= static_cast<double>(cfg.trials);
        double var = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const cplx v1 = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i1)];
            cplx v2 = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i2)];
            if (conj2) v2 = std::conj(v2);
            var += std::norm(v1 * v2 - mean);
        }
        const double se = std::sqrt(var / (cfg.trials - 1) / cfg.trials);
        return std::pair<cplx, double>(mean, se);
    };
    auto theory_cov = [&](cplx za, cplx zb) {
        // a(z1,z2) = b(z1,z2) = (1/N) sum B_ii(z1) B_ii(z2) for diagonal B
        cplx a = 0.0;
        for (int j = 0; j < N; ++j)
            a += 1.0 / ((za - diag[static_cast<std::size_t>(j)]) *
                        (zb - diag[static_cast<std::size_t>(j)]));
        a /= static_cast<double>(N);
        return (report.abs4_moment - 2.0) * a + a;
    };

    for (std::size_t p = 0; p < pair_idx.size(); ++p) {
        const auto [i1, i2] = pair_idx[p];
        QuadraticPairReport rep;
        rep.z1 = zs[static_cast<std::size_t>(i1)];
        rep.z2 = zs[static_cast<std::size_t>(i2)];
        std::tie(rep.empirical_vv, rep.stderr_vv) = pair_stats(i1, i2, false);
        rep.theory_vv = theory_cov(rep.z1, rep.z2);
        std::tie(rep.empirical_vvbar, rep.stderr_vvbar) = pair_stats(i1, i2, true);
        rep.theory_vvbar = theory_cov(rep.z1, std::conj(rep.z2));
        report.pairs.push_back(rep);
    }
    return report;
}

ConcentrationReport run_concentration_scan(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::concentration)
        throw SchemaError("config kind must be 'concentration'");
    if (cfg.N_list.size() < 3) throw SchemaError("concentration scan needs >= 3 sizes");
    if (cfg.sub_spectrum)
        throw SchemaError("concentration scan derives sub-spectra from the measure");

    ConcentrationReport report;
    report.z = cfg.z_points.empty() ? cplx(0.0, 2.0) : cfg.z_points.front();

    for (int N : cfg.N_list) {
        const std::vector<double> sub = discretize_quantiles(cfg.nu, N - 1);
        const Deformation deformation = Deformation::build({cfg.theta, sub, cfg.haar_seed});
        auto trial = [&](std::size_t t) {
            const DeformedSample sample = sample_deformed(deformation, cfg.law, cfg.seed + t);
            ResolventRequest req;
            req.trace = true;
            return resolvent_stats(sample, report.z, req).trace;
        };
        const auto traces =
            map_indexed<cplx>(static_cast<std::size_t>(cfg.trials), cfg.jobs, trial);
        cplx mean = 0.0;
        for (cplx v : traces) mean += v;
        mean /= static_cast<double>(cfg.trials);
        std::vector<double> dev2;
        dev2.reserve(traces.size());
        for (cplx v : traces) dev2.push_back(std::norm(v - mean));
        double variance = 0.0;
        for (double d : dev2) variance += d;
        variance /= (cfg.trials - 1);
        const MomentSummary ms = summarize(dev2);
        report.rows.push_back({N, variance, ms.stderr_mean});
    }

    // least-squares slope of log Var against log N
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(report.rows.size());
    for (const auto& row : report.rows) {
        const double x = std::log(static_cast<double>(row.N));
        const double y = std::log(row.variance);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return report;
}

ReferenceLaw reference_law(ReferenceKind kind, const SpikePrediction& pred, const EntryLaw& law,
                           std::size_t count, std::uint64_t seed) {
    const bool eigenvector = kind == ReferenceKind::eigenvector_limit;
    const double scale = eigenvector ? pred.c_eigenvector : 1.0;
    const double variance = eigenvector ? pred.varZ : pred.v2_eigenvalue;
    if (variance < 0.0)
        throw DomainError("reference_law: negative limit variance in the prediction");

    ReferenceLaw ref;
    Rng rng(seed);
    ref.samples.resize(count);
    const double sd = std::sqrt(variance);
    for (auto& s : ref.samples) s = scale * law.sample(rng) + sd * rng.gaussian();
    ref.handle = convolved_cdf(law, scale, variance);
    return ref;
}

} // namespace sdw
