#pragma once

// Test-only oracles, kept independent of the implementation paths they
// check: Gauss-Legendre quadrature over the real line and a matrix
// exponential built directly on Eigen's Hermitian eigensolver.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

// Nodes/weights on (-1, 1) by Newton iteration on Legendre polynomials.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

// ∫_{-inf}^{inf} f dΩ via the substitution Ω = center + scale·tan(u).
inline double integrate_real_line(const std::function<double(double)>& f, double center,
                                  double scale, int n = 4000) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    const double pi = 3.14159265358979323846;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = 0.5 * pi * x[i];
        const double c = std::cos(u);
        acc += 0.5 * pi * w[i] * f(center + scale * std::tan(u)) * scale / (c * c);
    }
    return acc;
}

inline Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, std::complex<double> factor) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(factor * es.eigenvalues()(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Deterministic random density matrix (positive, unit trace).
inline Eigen::MatrixXcd random_density(int dim, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = std::complex<double>(dist(gen), dist(gen));
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

} // namespace oracles
