#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdw/freeconv.hpp"
#include "sdw/measures.hpp"
#include "sdw/rmt.hpp"
#include "sdw/spike.hpp"
#include "sdw/stats.hpp"

namespace sdw {

enum class ExperimentKind { eigenvector, eigenvalue, resolvent, quadratic_form, concentration };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::eigenvector;
    int N = 600;
    std::vector<int> N_list;                    // concentration scan sizes
    int trials = 1000;
    EntryLaw law{LawKind::gaussian, 1.0};
    double theta = 2.0;
    SpectralMeasure nu = SpectralMeasure::dirac(0.0);
    std::optional<std::vector<double>> sub_spectrum; // default: quantiles of nu
    std::optional<std::uint64_t> haar_seed;
    std::uint64_t seed = 1;
    std::vector<cplx> z_points;
    std::vector<std::pair<cplx, cplx>> z_pairs; // quadratic-form covariance entries
    std::string run_id;
    int jobs = 0; // not part of the config snapshot; merges are deterministic

    std::string resolved_run_id() const;
    nlohmann::ordered_json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

// Reproducible Monte Carlo output: a config snapshot plus per-trial samples.
// Persisted as <run-id>.json + <run-id>.csv; wall time stays in the manifest
// so the files are byte-stable.
struct SampleSet {
    nlohmann::ordered_json config;
    bool complex_kind = false;
    int z_count = 1;
    int trials = 0;
    int rejected_trials = 0;
    std::uint64_t seed = 0;
    std::vector<int> trial_index;      // accepted trials, ascending
    std::vector<double> samples;       // real statistics
    std::vector<cplx> csamples;        // complex statistics, z-major per trial
    double wall_seconds = 0.0;

    // returns {json_path, csv_path}
    std::pair<std::string, std::string> write(const std::string& dir,
                                              const std::string& run_id) const;
    static SampleSet load(const std::string& json_path);
};

SampleSet run_eigenvector_fluctuations(const ExperimentConfig& cfg);
SampleSet run_eigenvalue_fluctuations(const ExperimentConfig& cfg);

// Eq (20) limit covariance E(G(z1) G(z2)) of the resolvent-entry CLT.
cplx limit_covariance(const SpectralMeasure& nu, const FreeConvolution& fc, const EntryLaw& law,
                      cplx z1, cplx z2);

struct ResolventZReport {
    cplx z;
    double empirical_abs2 = 0.0;
    double stderr_abs2 = 0.0;
    cplx empirical_sq{};
    double stderr_sq = 0.0;
    double theory_abs2 = 0.0;
    cplx theory_sq{};
};

struct ResolventCltRun {
    SampleSet set; // csamples: xi_N(z_j) per trial
    std::vector<ResolventZReport> reports;
};

ResolventCltRun run_resolvent_clt(const ExperimentConfig& cfg);

struct QuadraticPairReport {
    cplx z1, z2;
    cplx empirical_vv{};
    double stderr_vv = 0.0;
    cplx theory_vv{};
    cplx empirical_vvbar{};
    double stderr_vvbar = 0.0;
    cplx theory_vvbar{};
};

struct QuadraticZMoment {
    cplx z;
    double mean_abs2 = 0.0;        // E |V_N(z)|^2
    double tr_bstar_b_over_n = 0.0; // (1/N) Tr B(z)* B(z)
};

struct QuadraticFormReport {
    double abs4_moment = 0.0; // E|y_1|^4
    std::vector<QuadraticPairReport> pairs;
    std::vector<QuadraticZMoment> z_moments;
};

QuadraticFormReport run_quadratic_form_clt(const ExperimentConfig& cfg);

struct ConcentrationRow {
    int N = 0;
    double variance = 0.0; // Var (1/N) Tr G(z)
    double stderr_ = 0.0;
};

struct ConcentrationReport {
    cplx z;
    std::vector<ConcentrationRow> rows;
    double slope = 0.0; // log Var against log N
};

ConcentrationReport run_concentration_scan(const ExperimentConfig& cfg);

enum class ReferenceKind { eigenvector_limit, eigenvalue_limit };

struct ReferenceLaw {
    std::vector<double> samples;
    DistributionHandle handle;
};

// Seeded draws plus the exact CDF of the limit law: c W11 + Z for the
// eigenvector statistic, mu * N(0, v^2) for the eigenvalue one.
ReferenceLaw reference_law(ReferenceKind kind, const SpikePrediction& pred, const EntryLaw& law,
                           std::size_t count, std::uint64_t seed);

} // namespace sdw
