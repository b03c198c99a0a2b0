#include "sdw/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdw/errors.hpp"

namespace sdw {

// ---------------------------------------------------------------------------
// EntryLaw
// ---------------------------------------------------------------------------

std::string to_string(LawKind kind) {
    switch (kind) {
        case LawKind::gaussian: return "gaussian";
        case LawKind::uniform: return "uniform";
        case LawKind::laplace: return "laplace";
    }
    return "?";
}

LawKind law_kind_from_string(const std::string& name) {
    if (name == "gaussian") return LawKind::gaussian;
    if (name == "uniform") return LawKind::uniform;
    if (name == "laplace") return LawKind::laplace;
    throw SchemaError("unknown entry law kind: " + name);
}

EntryLaw::EntryLaw(LawKind kind, double sigma2) : kind_(kind), sigma2_(sigma2) {
    if (!(sigma2 > 0.0)) throw DomainError("entry law requires sigma2 > 0");
}

double EntryLaw::m4() const {
    const double s4 = sigma2_ * sigma2_;
    switch (kind_) {
        case LawKind::gaussian: return 3.0 * s4;
        case LawKind::uniform: return 9.0 * s4 / 5.0;
        case LawKind::laplace: return 6.0 * s4;
    }
    return 0.0;
}

double EntryLaw::sample(Rng& rng) const {
    switch (kind_) {
        case LawKind::gaussian: return std::sqrt(sigma2_) * rng.gaussian();
        case LawKind::uniform: return rng.uniform_sym(std::sqrt(3.0 * sigma2_));
        case LawKind::laplace: return rng.laplace(std::sqrt(0.5 * sigma2_));
    }
    return 0.0;
}

double EntryLaw::cdf(double t) const {
    switch (kind_) {
        case LawKind::gaussian:
            return 0.5 * std::erfc(-t / std::sqrt(2.0 * sigma2_));
        case LawKind::uniform: {
            const double a = std::sqrt(3.0 * sigma2_);
            return std::clamp((t + a) / (2.0 * a), 0.0, 1.0);
        }
        case LawKind::laplace: {
            const double b = std::sqrt(0.5 * sigma2_);
            return t < 0.0 ? 0.5 * std::exp(t / b) : 1.0 - 0.5 * std::exp(-t / b);
        }
    }
    return 0.0;
}

nlohmann::ordered_json EntryLaw::to_json() const {
    return {{"kind", to_string(kind_)}, {"sigma2", sigma2_}};
}

EntryLaw EntryLaw::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("sigma2"))
        throw SchemaError("entry law document needs {kind, sigma2}");
    return EntryLaw(law_kind_from_string(j.at("kind").get<std::string>()),
                    j.at("sigma2").get<double>());
}

std::pair<double, double> entry_moments(const EntryLaw& law) {
    return {law.sigma2(), law.m4()};
}

std::vector<double> sample_entries(const EntryLaw& law, std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<double> out(count);
    for (auto& v : out) v = law.sample(rng);
    return out;
}

// ---------------------------------------------------------------------------
// SpectralMeasure
// ---------------------------------------------------------------------------

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms, std::vector<AcPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
    // zero-weight atoms are no-ops, not part of the measure
    std::erase_if(atoms_, [](const Atom& a) { return a.w == 0.0; });

    if (atoms_.empty() && pieces_.empty())
        throw DomainError("measure needs at least one atom or piece");

    for (const auto& atom : atoms_) {
        if (!(atom.w > 0.0) || atom.w > 1.0 + 1e-12)
            throw DomainError("atom weights must lie in (0,1]");
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
    for (std::size_t i = 1; i < atoms_.size(); ++i)
        if (atoms_[i].x == atoms_[i - 1].x)
            throw DomainError("atom locations must be pairwise distinct");

    std::sort(pieces_.begin(), pieces_.end(),
              [](const AcPiece& l, const AcPiece& r) { return l.a < r.a; });
    for (const auto& piece : pieces_) {
        if (!(piece.a < piece.b)) throw DomainError("piece requires a < b");
        if (piece.density.empty()) throw DomainError("piece has no density nodes");
        for (double d : piece.density)
            if (!(d >= 0.0)) throw DomainError("piece density must be nonnegative");
    }
    for (std::size_t i = 1; i < pieces_.size(); ++i)
        if (pieces_[i].a < pieces_[i - 1].b)
            throw DomainError("pieces must be pairwise disjoint");
    for (const auto& atom : atoms_)
        for (const auto& piece : pieces_)
            if (atom.x > piece.a && atom.x < piece.b)
                throw DomainError("atoms may not sit inside a piece interval");

    piece_rules_.reserve(pieces_.size());
    piece_coeffs_.reserve(pieces_.size());
    for (const auto& piece : pieces_) {
        piece_rules_.push_back(
            gauss_legendre(static_cast<int>(piece.density.size()), piece.a, piece.b));
        piece_coeffs_.push_back(legendre_coeffs(piece.density));
    }

    mass_ = 0.0;
    for (const auto& atom : atoms_) mass_ += atom.w;
    for (std::size_t p = 0; p < pieces_.size(); ++p) mass_ += piece_mass(p);
    if (std::abs(mass_ - 1.0) > 1e-10)
        throw DomainError("measure mass " + std::to_string(mass_) + " is not 1 within 1e-10");

    support_min_ = std::numeric_limits<double>::infinity();
    support_max_ = -std::numeric_limits<double>::infinity();
    for (const auto& atom : atoms_) {
        support_min_ = std::min(support_min_, atom.x);
        support_max_ = std::max(support_max_, atom.x);
    }
    for (const auto& piece : pieces_) {
        support_min_ = std::min(support_min_, piece.a);
        support_max_ = std::max(support_max_, piece.b);
    }
}

SpectralMeasure SpectralMeasure::dirac(double x) { return from_atoms({{x, 1.0}}); }

SpectralMeasure SpectralMeasure::from_atoms(std::vector<Atom> atoms) {
    return SpectralMeasure(std::move(atoms), {});
}

SpectralMeasure SpectralMeasure::empirical(std::span<const double> points) {
    if (points.empty()) throw DomainError("empirical measure needs points");
    std::vector<double> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    const double w = 1.0 / static_cast<double>(sorted.size());
    std::vector<Atom> atoms;
    for (double x : sorted) {
        if (!atoms.empty() && atoms.back().x == x)
            atoms.back().w += w;
        else
            atoms.push_back({x, w});
    }
    return from_atoms(std::move(atoms));
}

SpectralMeasure SpectralMeasure::uniform(double a, double b, int nodes) {
    AcPiece piece{a, b, std::vector<double>(static_cast<std::size_t>(nodes), 1.0 / (b - a))};
    return SpectralMeasure({}, {std::move(piece)});
}

SpectralMeasure SpectralMeasure::semicircle(double sigma2, int nodes) {
    if (!(sigma2 > 0.0)) throw DomainError("semicircle requires sigma2 > 0");
    const double edge = 2.0 * std::sqrt(sigma2);
    QuadRule rule = gauss_legendre(nodes, -edge, edge);
    std::vector<double> density(rule.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double x = rule.x[i];
        density[i] = std::sqrt(std::max(0.0, 4.0 * sigma2 - x * x)) /
                     (2.0 * std::numbers::pi * sigma2);
        mass += rule.w[i] * density[i];
    }
    for (double& d : density) d /= mass;
    return SpectralMeasure({}, {AcPiece{-edge, edge, std::move(density)}});
}

double SpectralMeasure::support_distance(double x) const {
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& atom : atoms_) dist = std::min(dist, std::abs(x - atom.x));
    for (const auto& piece : pieces_) {
        if (x >= piece.a && x <= piece.b) return 0.0;
        dist = std::min(dist, std::min(std::abs(x - piece.a), std::abs(x - piece.b)));
    }
    return dist;
}

cplx SpectralMeasure::stieltjes(cplx z, int order, double proximity_tol) const {
    if (order < 0 || order > 3) throw DomainError("stieltjes: order must be in {0,1,2,3}");
    if (z.imag() == 0.0 && support_distance(z.real()) < proximity_tol)
        throw DomainError("stieltjes: real evaluation point too close to the support");
    double factorial = 1.0;
    for (int r = 2; r <= order; ++r) factorial *= r;
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    const int power = order + 1;
    cplx integral = integrate([&](double x) {
        cplx d = z - x;
        cplx dp = d;
        for (int r = 1; r < power; ++r) dp *= d;
        return 1.0 / dp;
    });
    return sign * factorial * integral;
}

double SpectralMeasure::piece_mass(std::size_t p) const {
    const auto& piece = pieces_[p];
    const double half = 0.5 * (piece.b - piece.a);
    return half * legendre_antiderivative(piece_coeffs_[p], 1.0);
}

double SpectralMeasure::piece_cdf(std::size_t p, double x) const {
    const auto& piece = pieces_[p];
    if (x <= piece.a) return 0.0;
    if (x >= piece.b) return piece_mass(p);
    const double half = 0.5 * (piece.b - piece.a);
    const double t = (x - 0.5 * (piece.a + piece.b)) / half;
    return half * legendre_antiderivative(piece_coeffs_[p], t);
}

std::vector<double> SpectralMeasure::quantiles(int n) const {
    if (n < 1) throw DomainError("quantiles: n must be >= 1");

    // Walk atoms and pieces in support order, inverting within pieces.
    struct Segment {
        double position; // sort key: atom location or piece start
        int piece = -1;  // -1 for atoms
        double x = 0.0;
        double mass = 0.0;
    };
    std::vector<Segment> segments;
    for (const auto& atom : atoms_) segments.push_back({atom.x, -1, atom.x, atom.w});
    for (std::size_t p = 0; p < pieces_.size(); ++p)
        segments.push_back({pieces_[p].a, static_cast<int>(p), 0.0, piece_mass(p)});
    std::sort(segments.begin(), segments.end(),
              [](const Segment& l, const Segment& r) { return l.position < r.position; });

    std::vector<double> out;
    out.reserve(n);
    std::size_t seg = 0;
    double cum = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double q = (k - 0.5) / n;
        while (seg + 1 < segments.size() && cum + segments[seg].mass < q) {
            cum += segments[seg].mass;
            ++seg;
        }
        const Segment& s = segments[seg];
        if (s.piece < 0) {
            out.push_back(s.x);
        } else {
            const auto& piece = pieces_[static_cast<std::size_t>(s.piece)];
            const double target = std::clamp(q - cum, 0.0, s.mass);
            double lo = piece.a, hi = piece.b;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (piece_cdf(static_cast<std::size_t>(s.piece), mid) < target)
                    lo = mid;
                else
                    hi = mid;
            }
            out.push_back(0.5 * (lo + hi));
        }
    }
    return out;
}

nlohmann::ordered_json SpectralMeasure::to_json() const {
    nlohmann::ordered_json j;
    j["atoms"] = nlohmann::json::array();
    for (const auto& atom : atoms_) j["atoms"].push_back({atom.x, atom.w});
    j["pieces"] = nlohmann::json::array();
    for (const auto& piece : pieces_)
        j["pieces"].push_back(
            {{"a", piece.a}, {"b", piece.b}, {"density_nodes", piece.density}});
    return j;
}

SpectralMeasure SpectralMeasure::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("atoms") || !j.contains("pieces"))
        throw SchemaError("measure document needs {atoms, pieces}");
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
        if (!a.is_array() || a.size() != 2) throw SchemaError("atom entries are [x, w] pairs");
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
    std::vector<AcPiece> pieces;
    for (const auto& p : j.at("pieces")) {
        AcPiece piece;
        piece.a = p.at("a").get<double>();
        piece.b = p.at("b").get<double>();
        piece.density = p.at("density_nodes").get<std::vector<double>>();
        pieces.push_back(std::move(piece));
    }
    try {
        return SpectralMeasure(std::move(atoms), std::move(pieces));
    } catch (const DomainError& e) {
        throw SchemaError(std::string("invalid measure document: ") + e.what());
    }
}

} // namespace sdw
