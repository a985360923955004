#pragma once

// Sparse Liouvillian assembly on vectorized density matrices and the
// steady-state solve. Column-major vectorization: vec(A rho B) =
// (B^T ⊗ A) vec(rho).

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "mtcav/errors.hpp"
#include "mtcav/qspace.hpp"

namespace mtcav {

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

namespace superop {

inline void append_left(std::vector<Triplet>& out, const Matrix& a, Complex scale) {
    // I ⊗ A acting as rho -> A rho
    const Eigen::Index d = a.rows();
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c)
                if (a(r, c) != Complex(0.0, 0.0))
                    out.emplace_back(j * d + r, j * d + c, scale * a(r, c));
}

inline void append_right(std::vector<Triplet>& out, const Matrix& b, Complex scale) {
    // B^T ⊗ I acting as rho -> rho B
    const Eigen::Index d = b.rows();
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            if (b(r, c) != Complex(0.0, 0.0))
                for (Eigen::Index i = 0; i < d; ++i)
                    out.emplace_back(c * d + i, r * d + i, scale * b(r, c));
}

inline void append_sandwich(std::vector<Triplet>& out, const Matrix& l, const Matrix& r,
                            Complex scale) {
    // rho -> L rho R, i.e. (R^T ⊗ L)
    const Eigen::Index d = l.rows();
    for (Eigen::Index rr = 0; rr < d; ++rr)
        for (Eigen::Index rc = 0; rc < d; ++rc) {
            if (r(rr, rc) == Complex(0.0, 0.0)) continue;
            for (Eigen::Index lr = 0; lr < d; ++lr)
                for (Eigen::Index lc = 0; lc < d; ++lc)
                    if (l(lr, lc) != Complex(0.0, 0.0))
                        out.emplace_back(rc * d + lr, rr * d + lc, scale * l(lr, lc) * r(rr, rc));
        }
}

} // namespace superop

// -i[H, rho] plus, for each (rate, L), the dissipator in the convention
// rate * (2 L rho L† - L†L rho - rho L†L).
inline SparseMatrix lindblad_superoperator(const Matrix& h,
                                           const std::vector<std::pair<double, Matrix>>& jumps) {
    const Eigen::Index d = h.rows();
    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(d) * d * 8);
    const Complex mi(0.0, -1.0);
    superop::append_left(trip, h, mi);
    superop::append_right(trip, h, -mi);
    for (const auto& [rate, l] : jumps) {
        if (rate == 0.0) continue;
        const Matrix ld = l.adjoint();
        const Matrix ldl = ld * l;
        superop::append_sandwich(trip, l, ld, Complex(2.0 * rate, 0.0));
        superop::append_left(trip, ldl, Complex(-rate, 0.0));
        superop::append_right(trip, ldl, Complex(-rate, 0.0));
    }
    SparseMatrix out(d * d, d * d);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

// Unique steady state of a Liouvillian: one row is replaced by the trace
// functional (the Liouvillian's rows are linearly dependent, so no
// information is lost) and the system solved with sparse LU.
inline Matrix steady_state(const SparseMatrix& liouvillian, Eigen::Index dim) {
    const Eigen::Index n = dim * dim;
    if (liouvillian.rows() != n || liouvillian.cols() != n)
        throw ConfigError("steady_state: Liouvillian size does not match dim");

    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(liouvillian.nonZeros()) + static_cast<size_t>(dim));
    for (int k = 0; k < liouvillian.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(liouvillian, k); it; ++it)
            if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index i = 0; i < dim; ++i)
        trip.emplace_back(0, i * dim + i, Complex(1.0, 0.0));

    SparseMatrix m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();

    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success)
        throw SolverError("steady_state: sparse LU factorization failed (singular Liouvillian?)");
    Vector b = Vector::Zero(n);
    b(0) = Complex(1.0, 0.0);
    Vector x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw SolverError("steady_state: solve failed");

    return Eigen::Map<const Matrix>(x.data(), dim, dim);
}

} // namespace mtcav
