#pragma once

#include <string>
#include <vector>

#include "wedge/geometry.hpp"

namespace wedge {

/// A smooth function on the unit torus: mean + sum of sinusoidal modes
/// amplitude * sin(2 pi (zeta_freq * zeta + tau_freq * tau) + phase).
struct PeriodicShape {
    struct Mode {
        double amplitude = 0.0;
        int zeta_freq = 0;
        int tau_freq = 0;
        double phase = 0.0;
    };

    double mean = 0.0;
    std::vector<Mode> modes;

    double operator()(double zeta, double tau) const;
    bool depends_on_tau() const;
    bool is_constant() const;
    /// Exact range up to dense sampling of the torus: {min, max}.
    std::pair<double, double> range() const;
};

enum class LawKind { constant, expanding, shrinking, autonomous };

std::string to_string(LawKind kind);
LawKind law_kind_from_string(const std::string& text);

/// Contact-slope law k_i(t, u) on side 1 (left ray) or 2 (right ray).
///
/// The discrete-similar kinds are realized by a periodic shape in
/// (log u mod log b, log t mod 2 log b); the shrinking kind replaces t by T - t.
class BoundaryLaw {
public:
    static BoundaryLaw constant(int side, double gamma);

    double operator()(double t, double u) const;

    /// True when evaluating at (t, u) would clamp a logarithm argument.
    bool clamps(double t, double u) const;

    int side() const { return side_; }
    LawKind kind() const { return kind_; }
    const PeriodicShape& shape() const { return shape_; }
    double ratio() const { return b_; }
    double horizon() const { return horizon_; }
    double clamp_floor() const { return clamp_floor_; }
    double gamma() const { return shape_.mean; }

    /// Global minimum k0 and maximum K0 of the law.
    double min_value() const { return min_; }
    double max_value() const { return max_; }

    bool time_dependent() const;

    friend BoundaryLaw make_discrete_similar_law(const PeriodicShape& shape, double b, int side,
                                                 LawKind mode, const SectorGeometry& geometry,
                                                 double horizon, double clamp_floor);

private:
    int side_ = 1;
    LawKind kind_ = LawKind::constant;
    PeriodicShape shape_;
    double b_ = 2.0;
    double horizon_ = 0.0;
    double clamp_floor_ = 1e-12;
    double min_ = 0.0;
    double max_ = 0.0;
};

/// Builds a discrete-similar law from a periodic shape. Rejects shapes whose
/// range leaves (-tan(beta) + sigma, tan(beta) - sigma).
BoundaryLaw make_discrete_similar_law(const PeriodicShape& shape, double b, int side, LawKind mode,
                                      const SectorGeometry& geometry, double horizon = 0.0,
                                      double clamp_floor = 1e-12);

struct LawPair {
    BoundaryLaw left;   // k_1
    BoundaryLaw right;  // k_2

    const BoundaryLaw& operator[](int side) const { return side == 1 ? left : right; }
};

struct ValidationReport {
    double similarity_defect = 0.0;
    double lattice_min = 0.0;  // k0 over the lattice
    double lattice_max = 0.0;  // K0 over the lattice
    bool similarity_ok = true;
    bool below_tan_beta = true;  // |k| < tan(beta)
    bool inside_margin = true;   // -tan(beta)+sigma < k < tan(beta)-sigma
    int clamp_hits = 0;
    int lattice_points = 0;
    bool clamp_warning = false;
    std::vector<std::string> messages;

    bool pass() const { return similarity_ok && below_tan_beta && inside_margin; }
};

/// Evaluates the law on a 50x50 log-spaced lattice and checks the similarity
/// identity of its kind together with the admissible slope range.
ValidationReport validate_boundary_law(const BoundaryLaw& law, const SectorGeometry& geometry,
                                       int lattice_size = 50, double lattice_max = 1e6);

}  // namespace wedge
