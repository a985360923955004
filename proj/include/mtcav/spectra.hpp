#pragma once

// Analytic absorption susceptibility of the damped Tavis-Cummings system,
// exact/dispersive Rabi doublet positions, and a numeric weak-probe
// steady-state spectrum used to cross-check the analytic line shape.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mtcav/dynamics.hpp"
#include "mtcav/errors.hpp"
#include "mtcav/fit.hpp"
#include "mtcav/qspace.hpp"
#include "mtcav/superop.hpp"

namespace mtcav {

struct SusceptibilityParams {
    double omega0;
    double omega;
    double lambda;
    int n_emitters;
    double gamma_plus;
    double gamma_minus;

    SusceptibilityParams(double omega0_, double omega_, double lambda_, int n, double gp, double gm)
        : omega0(omega0_), omega(omega_), lambda(lambda_), n_emitters(n), gamma_plus(gp),
          gamma_minus(gm) {
        if (n_emitters < 1) throw ConfigError("SusceptibilityParams: N must be >= 1");
        if (gamma_plus <= 0.0 || gamma_minus <= 0.0)
            throw ConfigError("SusceptibilityParams: Gamma+- must be > 0");
        if (lambda < 0.0) throw ConfigError("SusceptibilityParams: lambda must be >= 0");
    }

    double detuning() const { return omega0 - omega; }
};

namespace detail {
// Dressed-state mixing angle: tan 2θ = 2λ√N / Δ, θ in (0, π/2) so that the
// weight concentrates on the atomic line in the far-dispersive limit for
// either sign of Δ; θ = π/4 (equal weights) at resonance.
inline double mixing_angle(double delta, double lambda, int n) {
    const double g = 2.0 * lambda * std::sqrt(static_cast<double>(n));
    if (g == 0.0 && delta == 0.0) return 0.0;
    return 0.5 * std::atan2(g, delta);
}
} // namespace detail

// Im χ(Ω): a two-Lorentzian doublet with weights cos²θ / sin²θ around the
// dressed lines ω0 - Δ/2 ± R/2, R = √(Δ² + 4Nλ²).
inline double im_chi(const SusceptibilityParams& p, double omega_probe) {
    const double delta = p.detuning();
    const double r = std::hypot(delta, 2.0 * p.lambda * std::sqrt(static_cast<double>(p.n_emitters)));
    const double theta = detail::mixing_angle(delta, p.lambda, p.n_emitters);
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    const double du = omega_probe - p.omega0 + 0.5 * delta - 0.5 * r;
    const double dl = omega_probe - p.omega0 + 0.5 * delta + 0.5 * r;
    const double pi = 3.14159265358979323846;
    return c2 * (p.gamma_minus / pi) / (p.gamma_minus * p.gamma_minus + du * du) +
           s2 * (p.gamma_plus / pi) / (p.gamma_plus * p.gamma_plus + dl * dl);
}

struct RabiPeaks {
    double exact_upper;      // ω0 - Δ/2 + R/2
    double exact_lower;      // ω0 - Δ/2 - R/2
    double dispersive_upper; // ω0 + Nλ²/|Δ|
    double dispersive_lower; // ω0 - Nλ²/|Δ|
    bool dispersive_valid;   // λ²N/Δ² << 1
    double validity_ratio;
};

inline RabiPeaks rabi_peaks(double delta, double lambda, int n, double omega0 = 0.0) {
    const double r = std::hypot(delta, 2.0 * lambda * std::sqrt(static_cast<double>(n)));
    RabiPeaks out{};
    out.exact_upper = omega0 - 0.5 * delta + 0.5 * r;
    out.exact_lower = omega0 - 0.5 * delta - 0.5 * r;
    if (delta == 0.0) {
        out.dispersive_upper = out.dispersive_lower = omega0;
        out.dispersive_valid = false;
        out.validity_ratio = std::numeric_limits<double>::infinity();
    } else {
        const double shift = lambda * lambda * n / std::abs(delta);
        out.dispersive_upper = omega0 + shift;
        out.dispersive_lower = omega0 - shift;
        out.validity_ratio = lambda * lambda * n / (delta * delta);
        out.dispersive_valid = out.validity_ratio < 0.1;
    }
    return out;
}

struct SpectrumSeries {
    std::vector<double> omega;
    std::vector<double> value;
    std::string generator; // "analytic" or "numeric"
    std::map<std::string, double> params;

    void validate() const {
        if (omega.size() != value.size()) throw ConfigError("SpectrumSeries: size mismatch");
        for (size_t i = 0; i + 1 < omega.size(); ++i)
            if (!(omega[i] < omega[i + 1]))
                throw ConfigError("SpectrumSeries: omega grid must be strictly increasing");
        for (double v : value)
            if (!std::isfinite(v) || v < 0.0)
                throw ConfigError("SpectrumSeries: absorption values must be finite and >= 0");
    }
};

inline SpectrumSeries analytic_spectrum(const SusceptibilityParams& p,
                                        const std::vector<double>& grid) {
    SpectrumSeries s;
    s.generator = "analytic";
    s.omega = grid;
    s.value.reserve(grid.size());
    for (double w : grid) s.value.push_back(im_chi(p, w));
    s.params = {{"omega0", p.omega0}, {"omega", p.omega},       {"lambda", p.lambda},
                {"N", double(p.n_emitters)}, {"gamma_plus", p.gamma_plus}, {"gamma_minus", p.gamma_minus}};
    s.validate();
    return s;
}

struct NumericSpectrumSpec {
    TavisCummingsParams tc;
    double kappa;          // cavity leakage (paper convention)
    double gamma_atom;     // collective emitter damping, same convention
    double probe_strength = -1.0; // < 0: default 1e-3 * lambda
    int jobs = 1;
    bool check_linearity = true;
};

// Steady-state linear response of the damped Tavis-Cummings system to a
// weak dipole probe, scanned over probe frequency. In the frame rotating
// at the probe frequency the generator is time independent, so each grid
// point is one sparse steady-state solve. Absorption is read from the
// induced collective dipole amplitude.
inline SpectrumSeries numeric_spectrum(const NumericSpectrumSpec& spec,
                                       const std::vector<double>& grid) {
    if (grid.size() < 3) throw ConfigError("numeric_spectrum: grid needs at least 3 points");
    if (spec.kappa < 0.0 || spec.gamma_atom < 0.0)
        throw ConfigError("numeric_spectrum: damping rates must be >= 0");
    if (spec.kappa == 0.0 && spec.gamma_atom == 0.0)
        throw ConfigError("numeric_spectrum: at least one damping rate must be > 0");

    const CompositeSpace space = spec.tc.space();
    const int dim = space.dim();
    const SpinOps spin = collective_spin(space.spin);
    const Matrix sp = embed_spin(space, spin.s_plus).matrix();
    const Matrix sm = embed_spin(space, spin.s_minus).matrix();
    const Matrix a_full = embed_field(space, fock_ladder(space.field).a).matrix();
    const Matrix h0 = build_tc_hamiltonian(spec.tc, space).matrix();
    const Matrix c_full = tensor_and_excitation(space.spin, space.field).excitation.matrix();

    const double eta =
        spec.probe_strength > 0.0 ? spec.probe_strength : 1e-3 * std::max(spec.tc.lambda, 1e-6);

    auto response = [&](double omega_probe, double probe) -> double {
        Matrix h = h0 - omega_probe * c_full + probe * (sp + sm);
        std::vector<std::pair<double, Matrix>> jumps;
        if (spec.kappa > 0.0) jumps.emplace_back(spec.kappa, a_full);
        if (spec.gamma_atom > 0.0) jumps.emplace_back(spec.gamma_atom, sm);
        SparseMatrix liouv = lindblad_superoperator(h, jumps);
        Matrix rho = steady_state(liouv, dim);
        return -((sm * rho).trace()).imag() / probe;
    };

    std::vector<double> values(grid.size(), 0.0);
    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < grid.size(); ++i) values[i] = response(grid[i], eta);
    } else {
        std::vector<std::future<void>> futures;
        futures.reserve(static_cast<size_t>(jobs));
        std::atomic<size_t> next{0};
        for (int j = 0; j < jobs; ++j)
            futures.push_back(std::async(std::launch::async, [&]() {
                for (size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1))
                    values[i] = response(grid[i], eta);
            }));
        for (auto& f : futures) f.get();
    }

    if (spec.check_linearity) {
        const size_t peak_idx = static_cast<size_t>(
            std::distance(values.begin(), std::max_element(values.begin(), values.end())));
        const double full = values[peak_idx] * eta;
        const double half = response(grid[peak_idx], 0.5 * eta) * 0.5 * eta;
        if (full != 0.0 && std::abs(2.0 * half / full - 1.0) > 0.01)
            throw SolverError("numeric_spectrum: probe response is nonlinear; reduce probe_strength");
    }

    SpectrumSeries s;
    s.generator = "numeric";
    s.omega = grid;
    for (double& v : values) v = std::max(v, 0.0);
    s.value = std::move(values);
    s.params = {{"omega0", spec.tc.omega0},       {"omega", spec.tc.omega},
                {"lambda", spec.tc.lambda},       {"N", double(spec.tc.n_emitters)},
                {"kappa", spec.kappa},            {"gamma_atom", spec.gamma_atom},
                {"probe", eta}};
    s.validate();
    return s;
}

struct Peak {
    double omega;
    double height;
};

// Local maxima by 3-point comparison (ties broken toward lower Ω),
// refined by parabolic interpolation through the three bracketing samples.
inline std::vector<Peak> find_peaks(const SpectrumSeries& s) {
    s.validate();
    std::vector<Peak> peaks;
    for (size_t i = 1; i + 1 < s.omega.size(); ++i) {
        if (s.value[i - 1] < s.value[i] && s.value[i] >= s.value[i + 1]) {
            const double x = parabolic_vertex(s.omega[i - 1], s.value[i - 1], s.omega[i],
                                              s.value[i], s.omega[i + 1], s.value[i + 1]);
            peaks.push_back({x, s.value[i]});
        }
    }
    return peaks;
}

// The two dominant peaks, ordered by frequency. Throws when the grid
// misses the doublet.
inline std::pair<Peak, Peak> doublet(const SpectrumSeries& s) {
    std::vector<Peak> peaks = find_peaks(s);
    if (peaks.size() < 2)
        throw SolverError("doublet: found " + std::to_string(peaks.size()) +
                          " peak(s); grid misses the doublet");
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.height > b.height; });
    Peak lo = peaks[0], hi = peaks[1];
    if (lo.omega > hi.omega) std::swap(lo, hi);
    return {lo, hi};
}

} // namespace mtcav
