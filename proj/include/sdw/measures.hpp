#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdw/quadrature.hpp"
#include "sdw/rng.hpp"

#include <json.hpp>

namespace sdw {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Entry laws for Wigner matrices: symmetric, variance sigma2, and satisfying
// a Poincare inequality by construction. The closed enumeration is what makes
// the fourth moment available analytically.
// ---------------------------------------------------------------------------

enum class LawKind { gaussian, uniform, laplace };

std::string to_string(LawKind kind);
LawKind law_kind_from_string(const std::string& name);

class EntryLaw {
public:
    EntryLaw(LawKind kind, double sigma2);

    LawKind kind() const { return kind_; }
    double sigma2() const { return sigma2_; }
    double m4() const;

    double sample(Rng& rng) const;
    double cdf(double t) const;

    nlohmann::ordered_json to_json() const;
    static EntryLaw from_json(const nlohmann::json& j);

private:
    LawKind kind_;
    double sigma2_;
};

// (sigma2, m4) pair; m4 is 3 s^4 (gaussian), 9 s^4/5 (uniform), 6 s^4 (laplace).
std::pair<double, double> entry_moments(const EntryLaw& law);

// count iid draws, deterministic in seed.
std::vector<double> sample_entries(const EntryLaw& law, std::uint64_t seed, std::size_t count);

// ---------------------------------------------------------------------------
// Compactly supported probability measures: atoms plus absolutely continuous
// pieces whose densities are stored as values at fixed Gauss-Legendre nodes.
// ---------------------------------------------------------------------------

struct Atom {
    double x;
    double w;
};

struct AcPiece {
    double a;
    double b;
    std::vector<double> density; // values at the size()-point GL nodes of [a,b]
};

class SpectralMeasure {
public:
    SpectralMeasure(std::vector<Atom> atoms, std::vector<AcPiece> pieces);

    static SpectralMeasure dirac(double x);
    static SpectralMeasure from_atoms(std::vector<Atom> atoms);
    // Equal-weight atoms at the given points; coincident points merge.
    static SpectralMeasure empirical(std::span<const double> points);
    static SpectralMeasure uniform(double a, double b, int nodes = 64);
    // Semicircle of variance sigma2 on [-2s, 2s]; node values are scaled so the
    // quadrature mass is exactly one (the edge sqrt costs GL a few digits).
    static SpectralMeasure semicircle(double sigma2, int nodes = 256);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<AcPiece>& pieces() const { return pieces_; }

    double total_mass() const { return mass_; }
    double support_min() const { return support_min_; }
    double support_max() const { return support_max_; }
    double support_distance(double x) const;

    // g^(order)(z) = (-1)^order order! int dnu(x)/(z-x)^{order+1}.
    cplx stieltjes(cplx z, int order = 0, double proximity_tol = 1e-8) const;

    // int f dnu for arbitrary integrands (atoms exactly, pieces by their rule).
    template <class F>
    auto integrate(F&& f) const {
        using R = decltype(f(0.0));
        R acc{};
        for (const auto& atom : atoms_) acc += atom.w * f(atom.x);
        for (std::size_t p = 0; p < pieces_.size(); ++p) {
            const auto& rule = piece_rules_[p];
            for (std::size_t i = 0; i < rule.size(); ++i)
                acc += rule.w[i] * pieces_[p].density[i] * f(rule.x[i]);
        }
        return acc;
    }

    // (k-1/2)/n quantiles, k=1..n, sorted ascending.
    std::vector<double> quantiles(int n) const;

    nlohmann::ordered_json to_json() const;
    static SpectralMeasure from_json(const nlohmann::json& j);

private:
    double piece_mass(std::size_t p) const;
    double piece_cdf(std::size_t p, double x) const; // mass of piece p over [a,x]

    std::vector<Atom> atoms_;
    std::vector<AcPiece> pieces_;
    std::vector<QuadRule> piece_rules_;
    std::vector<std::vector<double>> piece_coeffs_; // Legendre series of densities
    double mass_ = 0.0;
    double support_min_ = 0.0;
    double support_max_ = 0.0;
};

// Spec-level operation aliases.
inline cplx stieltjes(const SpectralMeasure& m, cplx z, int order = 0, double tol = 1e-8) {
    return m.stieltjes(z, order, tol);
}
inline std::vector<double> discretize_quantiles(const SpectralMeasure& m, int n) {
    return m.quantiles(n);
}

} // namespace sdw
