#pragma once

// Tavis-Cummings and dispersive Hamiltonians plus three dissipation models:
// cavity leakage (Markov master equation), secular damping in the energy
// eigenbasis and pure phase damping.
//
// Rate convention: the cavity master equation is
//     d rho/dt = -i[H, rho] - kappa (a†a rho - 2 a rho a† + rho a†a)
// without the conventional 1/2, so photon number decays at rate 2*kappa
// and field amplitude at kappa. Every derived rate below follows this.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mtcav/errors.hpp"
#include "mtcav/ode.hpp"
#include "mtcav/qspace.hpp"

namespace mtcav {

struct TavisCummingsParams {
    double omega0; // emitter angular frequency
    double omega;  // cavity mode angular frequency
    double lambda; // single-emitter coupling
    int n_emitters;
    int n_max;

    TavisCummingsParams(double omega0_, double omega_, double lambda_, int n, int n_max_)
        : omega0(omega0_), omega(omega_), lambda(lambda_), n_emitters(n), n_max(n_max_) {
        if (omega0 <= 0.0) throw ConfigError("TavisCummingsParams: omega0 must be > 0");
        if (omega <= 0.0) throw ConfigError("TavisCummingsParams: omega must be > 0");
        if (lambda < 0.0) throw ConfigError("TavisCummingsParams: lambda must be >= 0");
        if (n_emitters < 1) throw ConfigError("TavisCummingsParams: N must be >= 1");
        if (n_max < 1) throw ConfigError("TavisCummingsParams: n_max must be >= 1");
    }

    double detuning() const { return omega0 - omega; }
    CompositeSpace space() const { return {DickeSpace(n_emitters), FockSpace(n_max)}; }
};

// H = ω0 Sz⊗I + ω I⊗a†a + λ(S+⊗a + S-⊗a†), ħ = 1.
inline Operator build_tc_hamiltonian(const TavisCummingsParams& p, const CompositeSpace& space) {
    if (space.spin.n_emitters != p.n_emitters || space.field.n_max != p.n_max)
        throw ConfigError("build_tc_hamiltonian: space " + space.shape().str() +
                          " does not match params (N=" + std::to_string(p.n_emitters) +
                          ", n_max=" + std::to_string(p.n_max) + ")");
    const SpinOps spin = collective_spin(space.spin);
    const LadderPair ladder = fock_ladder(space.field);
    Matrix h = p.omega0 * embed_spin(space, spin.sz).matrix() +
               p.omega * embed_field(space, fock_number(space.field)).matrix();
    const Matrix sp_a = kron_matrix(spin.s_plus.matrix(), ladder.a.matrix());
    h += p.lambda * (sp_a + sp_a.adjoint());
    return Operator(space.shape(), std::move(h), true);
}

inline Operator build_tc_hamiltonian(const TavisCummingsParams& p) {
    return build_tc_hamiltonian(p, p.space());
}

// Cavity-damped evolution on a (spin, field) product space.
class LindbladSpec {
public:
    LindbladSpec(CompositeSpace space, Operator hamiltonian, double kappa)
        : space_(space), h_(std::move(hamiltonian)), kappa_(kappa) {
        if (kappa_ < 0.0) throw ConfigError("LindbladSpec: kappa must be >= 0");
        if (!(h_.shape() == space_.shape()))
            throw ConfigError("LindbladSpec: Hamiltonian shape " + h_.shape().str() +
                              " does not match space " + space_.shape().str());
        const double dev = (h_.matrix() - h_.matrix().adjoint()).cwiseAbs().maxCoeff();
        if (dev > 1e-12 * std::max(1.0, h_.max_abs()))
            throw ConfigError("LindbladSpec: Hamiltonian is not Hermitian");
        a_full_ = embed_field(space_, fock_ladder(space_.field).a).matrix();
        num_full_ = embed_field(space_, fock_number(space_.field)).matrix();
    }

    const CompositeSpace& space() const { return space_; }
    const Operator& hamiltonian() const { return h_; }
    double kappa() const { return kappa_; }
    const Matrix& a_full() const { return a_full_; }
    const Matrix& number_full() const { return num_full_; }

private:
    CompositeSpace space_;
    Operator h_;
    double kappa_;
    Matrix a_full_;
    Matrix num_full_;
};

namespace detail {

// Population of the highest retained Fock level, summed over the spin index.
inline double top_level_population(const Matrix& rho, const CompositeSpace& space) {
    double pop = 0.0;
    const int top = space.field.n_max;
    for (int m = 0; m < space.spin.dim(); ++m) {
        const int i = space.index(m, top);
        pop += rho(i, i).real();
    }
    return pop;
}

} // namespace detail

constexpr double kTruncationPopLimit = 1e-6;

// Integrates the cavity master equation from rho0 for a duration t.
// Throws StateError if the population of |n_max> exceeds 1e-6 (the
// truncation is no longer adequate) and StepUnderflow on step collapse.
inline DensityMatrix lindblad_evolve(const LindbladSpec& spec, const DensityMatrix& rho0,
                                     double t, double tol = 1e-8) {
    if (!(rho0.shape() == spec.space().shape()))
        throw ConfigError("lindblad_evolve: state shape does not match spec space");
    if (t < 0.0) throw ConfigError("lindblad_evolve: t must be >= 0");
    if (t == 0.0) return rho0;

    const Matrix& h = spec.hamiltonian().matrix();
    const Matrix& a = spec.a_full();
    const Matrix ad = a.adjoint();
    const Matrix& num = spec.number_full();
    const double kappa = spec.kappa();
    const Complex mi(0.0, -1.0);

    auto rhs = [&](double, const Matrix& rho) -> Matrix {
        Matrix out = mi * (h * rho - rho * h);
        if (kappa > 0.0) out -= kappa * (num * rho + rho * num - 2.0 * (a * rho * ad));
        return out;
    };
    auto monitor = [&](double t_now, const Matrix& rho, const Matrix&) {
        if (detail::top_level_population(rho, spec.space()) > kTruncationPopLimit)
            throw StateError("lindblad_evolve: population of |n_max> exceeded 1e-6 at t = " +
                             std::to_string(t_now) + "; raise n_max");
    };

    ode::Options opt;
    // Internal safety factor: the returned state must sit inside the
    // DensityMatrix invariant envelope, which is stricter than the
    // per-observable tolerance the caller asked for.
    opt.rtol = 0.01 * tol;
    Matrix rho = ode::integrate(rhs, Matrix(rho0.matrix()), 0.0, t, opt, monitor);
    return DensityMatrix(rho0.shape(), std::move(rho));
}

// States at the requested times (ascending, starting at >= 0).
inline std::vector<DensityMatrix> lindblad_evolve_series(const LindbladSpec& spec,
                                                         const DensityMatrix& rho0,
                                                         const std::vector<double>& times,
                                                         double tol = 1e-8) {
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    DensityMatrix state = rho0;
    double t_prev = 0.0;
    for (double t : times) {
        if (t < t_prev) throw ConfigError("lindblad_evolve_series: times must be ascending");
        state = lindblad_evolve(spec, state, t - t_prev, tol);
        t_prev = t;
        out.push_back(state);
    }
    return out;
}

struct SecularSpec {
    std::vector<double> energies;
    Eigen::MatrixXd gammas; // symmetric, non-negative, zero diagonal

    SecularSpec(std::vector<double> energies_, Eigen::MatrixXd gammas_)
        : energies(std::move(energies_)), gammas(std::move(gammas_)) {
        const auto n = static_cast<Eigen::Index>(energies.size());
        if (gammas.rows() != n || gammas.cols() != n)
            throw ConfigError("SecularSpec: gamma matrix size does not match energies");
        for (Eigen::Index i = 0; i < n; ++i) {
            if (gammas(i, i) != 0.0) throw ConfigError("SecularSpec: Gamma_ii must be 0");
            for (Eigen::Index j = 0; j < n; ++j) {
                if (gammas(i, j) < 0.0) throw ConfigError("SecularSpec: Gamma_ij must be >= 0");
                if (std::abs(gammas(i, j) - gammas(j, i)) > 1e-12)
                    throw ConfigError("SecularSpec: Gamma must be symmetric");
            }
        }
    }
};

// rho_ij(t) = exp(-i(E_i - E_j)t - Gamma_ij t) rho_ij(0); the diagonal is
// untouched bitwise. rho0 must already be expressed in the eigenbasis.
inline DensityMatrix secular_evolve(const SecularSpec& spec, const DensityMatrix& rho0, double t) {
    const auto n = static_cast<Eigen::Index>(spec.energies.size());
    if (rho0.dim() != n) throw ConfigError("secular_evolve: state dim does not match spec");
    Matrix rho = rho0.matrix();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const Complex phase(-spec.gammas(i, j) * t,
                                -(spec.energies[static_cast<size_t>(i)] -
                                  spec.energies[static_cast<size_t>(j)]) * t);
            rho(i, j) *= std::exp(phase);
        }
    return DensityMatrix(rho0.shape(), std::move(rho));
}

struct PhaseDampingSpec {
    double omega; // oscillator frequency (phase rotation only; 0 recovers pure dephasing)
    double kappa; // phase-damping rate

    PhaseDampingSpec(double omega_, double kappa_) : omega(omega_), kappa(kappa_) {
        if (kappa < 0.0) throw ConfigError("PhaseDampingSpec: rate must be >= 0");
    }
};

enum class EvolveMode { analytic, numeric };

// Pure phase damping in the number basis: the pointer basis is {|n>} since
// [a†a, H] = 0. Analytic mode applies
//     rho_nm(t) = exp(-i omega (n-m) t - kappa (n-m)^2 t / 2) rho_nm(0);
// numeric mode integrates the equivalent master equation
//     d rho/dt = -i omega [N, rho] + (kappa/2)(2 N rho N - N^2 rho - rho N^2).
inline DensityMatrix phase_damping_evolve(const PhaseDampingSpec& spec, const DensityMatrix& rho0,
                                          double t, EvolveMode mode = EvolveMode::analytic) {
    if (t < 0.0) throw ConfigError("phase_damping_evolve: t must be >= 0");
    const Eigen::Index d = rho0.dim();
    if (mode == EvolveMode::analytic) {
        Matrix rho = rho0.matrix();
        for (Eigen::Index n = 0; n < d; ++n)
            for (Eigen::Index m = 0; m < d; ++m) {
                if (n == m) continue; // diagonal untouched exactly
                const double diff = static_cast<double>(n - m);
                rho(n, m) *= std::exp(Complex(-0.5 * spec.kappa * diff * diff * t,
                                              -spec.omega * diff * t));
            }
        return DensityMatrix(rho0.shape(), std::move(rho));
    }

    Eigen::VectorXd levels(d);
    for (Eigen::Index n = 0; n < d; ++n) levels(n) = static_cast<double>(n);
    auto rhs = [&](double, const Matrix& rho) -> Matrix {
        Matrix out(d, d);
        for (Eigen::Index n = 0; n < d; ++n)
            for (Eigen::Index m = 0; m < d; ++m) {
                const double diff = levels(n) - levels(m);
                out(n, m) = rho(n, m) * Complex(-0.5 * spec.kappa * diff * diff, -spec.omega * diff);
            }
        return out;
    };
    ode::Options opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-14;
    Matrix rho = ode::integrate(rhs, Matrix(rho0.matrix()), 0.0, t, opt);
    return DensityMatrix(rho0.shape(), std::move(rho));
}

struct DispersiveSpec {
    double lambda;   // atom-field coupling
    double delta;    // detuning; must be nonzero
    double omega_ef; // bare probe transition frequency
};

struct DispersiveModel {
    CompositeSpace space;
    Operator h_atom;  // omega_ef D+D-
    Operator h_int;   // (lambda^2/Delta) a†a D+D-
    Operator h_total; // sector-wise equals (omega_ef + lambda^2 n/Delta) D+D-
    double shift_per_photon;
    double validity_ratio; // lambda^2 n_max / Delta^2
    bool dispersive_valid;
};

// Effective dispersive Hamiltonian on a two-level ⊗ Fock space. The photon
// number enters through a†a, so the per-sector transition frequency is
// omega_ef + lambda^2 n / Delta.
inline DispersiveModel dispersive_hamiltonian(const DispersiveSpec& spec,
                                              const CompositeSpace& space) {
    if (spec.delta == 0.0)
        throw ConfigError("dispersive_hamiltonian: Delta = 0 (dispersive regime undefined)");
    if (space.spin.n_emitters != 1)
        throw ConfigError("dispersive_hamiltonian: probe must be a two-level system (N = 1)");

    const SpinOps spin = collective_spin(space.spin);
    // D+D- = |e><e| on the two-level probe.
    Matrix proj_e = spin.s_plus.matrix() * spin.s_minus.matrix();
    Operator dpdm(space.shape(),
                  kron_matrix(proj_e, Matrix::Identity(space.field.dim(), space.field.dim())), true);
    Operator n_field = embed_field(space, fock_number(space.field));

    const double shift = spec.lambda * spec.lambda / spec.delta;
    Operator h_atom = spec.omega_ef * dpdm;
    Operator h_int = shift * (n_field * dpdm);
    Operator h_total(space.shape(), h_atom.matrix() + h_int.matrix(), true);

    const double ratio =
        spec.lambda * spec.lambda * space.field.n_max / (spec.delta * spec.delta);
    return {space,
            Operator(space.shape(), h_atom.matrix(), true),
            Operator(space.shape(), h_int.matrix(), true),
            std::move(h_total),
            shift,
            ratio,
            std::abs(ratio) < 0.1};
}

// Probe dephasing over time t: omega_ef t + lambda^2 n t / Delta.
inline double probe_phase(double t, double lambda, double delta, double n_photons,
                          double omega_ef = 0.0) {
    if (delta == 0.0) throw ConfigError("probe_phase: Delta = 0 (dispersive regime undefined)");
    return omega_ef * t + lambda * lambda * n_photons * t / delta;
}

// exp(-i H t) for Hermitian H, via eigendecomposition.
inline Matrix unitary_evolution(const Operator& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    const Eigen::VectorXd& ev = es.eigenvalues();
    Vector phases(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        phases(i) = std::exp(Complex(0.0, -ev(i) * t));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace mtcav
