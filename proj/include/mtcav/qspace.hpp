#pragma once

// Truncated Fock spaces, collective-spin (Dicke) spaces, their tensor
// product and the elementary operators a, a†, Sz, S±, C = Sz + a†a.
//
// Only the maximal Dicke sector S = N/2 is represented: the symmetric
// initial states used throughout never leave it, and it keeps the spin
// dimension N+1 instead of 2^N.

#include <complex>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mtcav/errors.hpp"

namespace mtcav {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Ordered factor dimensions of a (possibly composite) Hilbert space.
class SpaceShape {
public:
    explicit SpaceShape(std::vector<int> dims) : dims_(std::move(dims)) {
        if (dims_.empty()) throw ConfigError("SpaceShape: no factors");
        for (int d : dims_)
            if (d < 1) throw ConfigError("SpaceShape: factor dimension < 1");
    }

    int dim() const {
        int n = 1;
        for (int d : dims_) n *= d;
        return n;
    }
    int factors() const { return static_cast<int>(dims_.size()); }
    int factor_dim(int i) const { return dims_.at(static_cast<size_t>(i)); }

    bool operator==(const SpaceShape&) const = default;

    std::string str() const {
        std::ostringstream os;
        for (size_t i = 0; i < dims_.size(); ++i) {
            if (i) os << "x";
            os << dims_[i];
        }
        return os.str();
    }

private:
    std::vector<int> dims_;
};

// Bosonic mode truncated at n_max photons; basis |0>,...,|n_max>.
struct FockSpace {
    int n_max;

    explicit FockSpace(int n_max_) : n_max(n_max_) {
        if (n_max < 1) throw ConfigError("FockSpace: n_max must be >= 1");
    }
    int dim() const { return n_max + 1; }
    SpaceShape shape() const { return SpaceShape({dim()}); }
};

// Default truncation for a state with a given expected photon number.
inline int default_fock_truncation(double expected_photons) {
    return static_cast<int>(4.0 * (expected_photons + 1.0));
}

// N two-level emitters in the symmetric sector: S = N/2, dim = N+1,
// basis ordered by Sz eigenvalue m = -S ... +S.
struct DickeSpace {
    int n_emitters;

    explicit DickeSpace(int n) : n_emitters(n) {
        if (n_emitters < 1) throw ConfigError("DickeSpace: N must be >= 1");
    }
    int dim() const { return n_emitters + 1; }
    double spin() const { return 0.5 * n_emitters; }
    SpaceShape shape() const { return SpaceShape({dim()}); }
};

// Tensor product with factor order fixed as (spin, field).
struct CompositeSpace {
    DickeSpace spin;
    FockSpace field;

    CompositeSpace(DickeSpace s, FockSpace f) : spin(s), field(f) {}
    int dim() const { return spin.dim() * field.dim(); }
    SpaceShape shape() const { return SpaceShape({spin.dim(), field.dim()}); }
    // Index of |m_idx> ⊗ |n> in the product basis.
    int index(int spin_idx, int fock_idx) const {
        return spin_idx * field.dim() + fock_idx;
    }
};

// Square complex matrix tagged with its Hilbert-space shape.
class Operator {
public:
    Operator(SpaceShape shape, Matrix m, bool expect_hermitian = false)
        : shape_(std::move(shape)), m_(std::move(m)), hermitian_(expect_hermitian) {
        if (m_.rows() != m_.cols() || m_.rows() != shape_.dim())
            throw ConfigError("Operator: matrix is " + std::to_string(m_.rows()) + "x" +
                              std::to_string(m_.cols()) + " but space " + shape_.str() +
                              " has dim " + std::to_string(shape_.dim()));
        if (hermitian_) {
            const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
            const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
            if (dev > 1e-12 * scale)
                throw StateError("Operator flagged Hermitian deviates by " + std::to_string(dev));
        }
    }

    static Operator identity(const SpaceShape& shape) {
        return Operator(shape, Matrix::Identity(shape.dim(), shape.dim()), true);
    }
    static Operator zero(const SpaceShape& shape) {
        return Operator(shape, Matrix::Zero(shape.dim(), shape.dim()), true);
    }

    const Matrix& matrix() const { return m_; }
    const SpaceShape& shape() const { return shape_; }
    int dim() const { return shape_.dim(); }
    bool hermitian_flag() const { return hermitian_; }

    Operator adjoint() const { return Operator(shape_, m_.adjoint(), hermitian_); }

    Operator operator+(const Operator& o) const {
        check_shape(o);
        return Operator(shape_, m_ + o.m_);
    }
    Operator operator-(const Operator& o) const {
        check_shape(o);
        return Operator(shape_, m_ - o.m_);
    }
    Operator operator*(const Operator& o) const {
        check_shape(o);
        return Operator(shape_, m_ * o.m_);
    }
    friend Operator operator*(Complex c, const Operator& o) {
        return Operator(o.shape_, c * o.m_);
    }
    friend Operator operator*(double c, const Operator& o) {
        return Operator(o.shape_, c * o.m_);
    }

    double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

private:
    void check_shape(const Operator& o) const {
        if (!(shape_ == o.shape_))
            throw ConfigError("Operator shape mismatch: " + shape_.str() + " vs " + o.shape_.str());
    }

    SpaceShape shape_;
    Matrix m_;
    bool hermitian_;
};

inline Matrix kron_matrix(const Matrix& a, const Matrix& b) {
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            k.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return k;
}

inline Operator commutator(const Operator& a, const Operator& b) {
    return a * b - b * a;
}

struct LadderPair {
    Operator a;
    Operator a_dagger;
};

// a|n> = √n |n-1>; hard truncation: a†|n_max> = 0.
inline LadderPair fock_ladder(const FockSpace& space) {
    const int d = space.dim();
    Matrix a = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Matrix ad = a.adjoint();
    return {Operator(space.shape(), std::move(a)), Operator(space.shape(), std::move(ad))};
}

inline Operator fock_number(const FockSpace& space) {
    const int d = space.dim();
    Matrix n = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
    return Operator(space.shape(), std::move(n), true);
}

struct SpinOps {
    Operator sz;
    Operator s_plus;
    Operator s_minus;
};

// Spin-S ladder matrices in the maximal sector S = N/2,
// <m±1|S±|m> = √(S(S+1) - m(m±1)).
inline SpinOps collective_spin(const DickeSpace& space) {
    const int d = space.dim();
    const double s = space.spin();
    Matrix sz = Matrix::Zero(d, d);
    Matrix sp = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const double m = -s + i;
        sz(i, i) = m;
        if (i + 1 < d) sp(i + 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    Matrix sm = sp.adjoint();
    return {Operator(space.shape(), std::move(sz), true),
            Operator(space.shape(), std::move(sp)),
            Operator(space.shape(), std::move(sm))};
}

// Lift a spin operator to the (spin, field) product space.
inline Operator embed_spin(const CompositeSpace& space, const Operator& spin_op) {
    if (spin_op.dim() != space.spin.dim())
        throw ConfigError("embed_spin: operator dim " + std::to_string(spin_op.dim()) +
                          " does not match spin dim " + std::to_string(space.spin.dim()));
    return Operator(space.shape(),
                    kron_matrix(spin_op.matrix(), Matrix::Identity(space.field.dim(), space.field.dim())),
                    spin_op.hermitian_flag());
}

inline Operator embed_field(const CompositeSpace& space, const Operator& field_op) {
    if (field_op.dim() != space.field.dim())
        throw ConfigError("embed_field: operator dim " + std::to_string(field_op.dim()) +
                          " does not match field dim " + std::to_string(space.field.dim()));
    return Operator(space.shape(),
                    kron_matrix(Matrix::Identity(space.spin.dim(), space.spin.dim()), field_op.matrix()),
                    field_op.hermitian_flag());
}

struct CompositeOps {
    CompositeSpace space;
    Operator excitation; // C = Sz ⊗ I + I ⊗ a†a
};

// C commutes with every Tavis-Cummings Hamiltonian on the same space.
inline CompositeOps tensor_and_excitation(const DickeSpace& spin, const FockSpace& field) {
    CompositeSpace space(spin, field);
    Operator c = embed_spin(space, collective_spin(spin).sz) + embed_field(space, fock_number(field));
    return {space, Operator(space.shape(), c.matrix(), true)};
}

struct StateHygiene {
    double trace_error;       // |tr - 1|
    double hermiticity_error; // max |rho - rho†|
    double min_eigenvalue;
};

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

inline StateHygiene check_state(const Matrix& rho) {
    StateHygiene h{};
    h.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
    h.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    h.min_eigenvalue = es.eigenvalues().minCoeff();
    return h;
}

// Hermitian, unit-trace, positive (to the stated floors) state.
class DensityMatrix {
public:
    static constexpr double kHermTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kEigFloor = -1e-8;

    DensityMatrix(SpaceShape shape, Matrix rho)
        : shape_(std::move(shape)), rho_(std::move(rho)) {
        if (rho_.rows() != rho_.cols() || rho_.rows() != shape_.dim())
            throw ConfigError("DensityMatrix: matrix dim does not match space " + shape_.str());
        const StateHygiene h = check_state(rho_);
        if (h.hermiticity_error > kHermTol)
            throw StateError("DensityMatrix: hermiticity deviation " + sci(h.hermiticity_error));
        if (h.trace_error > kTraceTol)
            throw StateError("DensityMatrix: trace deviation " + sci(h.trace_error));
        if (h.min_eigenvalue < kEigFloor)
            throw StateError("DensityMatrix: eigenvalue " + sci(h.min_eigenvalue) +
                             " below positivity floor");
    }

    static DensityMatrix pure(const SpaceShape& shape, const Vector& psi) {
        const double n = psi.norm();
        if (n == 0.0) throw ConfigError("DensityMatrix::pure: zero vector");
        Vector v = psi / n;
        return DensityMatrix(shape, v * v.adjoint());
    }

    const Matrix& matrix() const { return rho_; }
    const SpaceShape& shape() const { return shape_; }
    int dim() const { return shape_.dim(); }

    Complex expectation(const Operator& op) const {
        if (!(op.shape() == shape_))
            throw ConfigError("expectation: operator shape " + op.shape().str() +
                              " does not match state shape " + shape_.str());
        return (op.matrix() * rho_).trace();
    }
    double expectation_real(const Operator& op) const { return expectation(op).real(); }

    StateHygiene hygiene() const { return check_state(rho_); }

private:
    SpaceShape shape_;
    Matrix rho_;
};

} // namespace mtcav
