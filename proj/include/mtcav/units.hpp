#pragma once

// SI values with integer dimension exponents over (m, kg, s, A). Addition
// and comparison require equal dimensions; multiplication adds exponent
// vectors. Every estimate in the SI pipeline flows through Quantity so a
// unit error is a structural failure, not a silent factor.

#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "mtcav/errors.hpp"

namespace mtcav {

struct Dimension {
    int m = 0;
    int kg = 0;
    int s = 0;
    int A = 0;

    bool operator==(const Dimension&) const = default;

    Dimension operator+(const Dimension& o) const { return {m + o.m, kg + o.kg, s + o.s, A + o.A}; }
    Dimension operator-(const Dimension& o) const { return {m - o.m, kg - o.kg, s - o.s, A - o.A}; }
    Dimension operator*(int k) const { return {m * k, kg * k, s * k, A * k}; }

    bool dimensionless() const { return m == 0 && kg == 0 && s == 0 && A == 0; }
    bool all_even() const { return m % 2 == 0 && kg % 2 == 0 && s % 2 == 0 && A % 2 == 0; }
    Dimension half() const { return {m / 2, kg / 2, s / 2, A / 2}; }

    std::string str() const {
        if (dimensionless()) return "1";
        std::ostringstream os;
        auto put = [&](const char* name, int e) {
            if (e == 0) return;
            if (os.tellp() > 0) os << " ";
            os << name;
            if (e != 1) os << "^" << e;
        };
        put("m", m);
        put("kg", kg);
        put("s", s);
        put("A", A);
        return os.str();
    }
};

class Quantity {
public:
    Quantity() : value_(0.0), dim_{} {}
    Quantity(double value, Dimension dim) : value_(value), dim_(dim) {}
    static Quantity dimensionless(double v) { return {v, {}}; }

    double value() const { return value_; }
    const Dimension& dim() const { return dim_; }

    // Value expressed in the given unit (dimension-checked).
    double value_in(const Quantity& unit) const {
        require_dim(unit.dim_, "value_in");
        return value_ / unit.value_;
    }

    Quantity operator+(const Quantity& o) const {
        require_dim(o.dim_, "add");
        return {value_ + o.value_, dim_};
    }
    Quantity operator-(const Quantity& o) const {
        require_dim(o.dim_, "subtract");
        return {value_ - o.value_, dim_};
    }
    Quantity operator*(const Quantity& o) const { return {value_ * o.value_, dim_ + o.dim_}; }
    Quantity operator/(const Quantity& o) const { return {value_ / o.value_, dim_ - o.dim_}; }
    friend Quantity operator*(double c, const Quantity& q) { return {c * q.value_, q.dim_}; }
    Quantity operator*(double c) const { return {value_ * c, dim_}; }
    Quantity operator/(double c) const { return {value_ / c, dim_}; }

    bool operator<(const Quantity& o) const {
        require_dim(o.dim_, "compare");
        return value_ < o.value_;
    }
    bool operator>(const Quantity& o) const { return o < *this; }

    Quantity pow_int(int k) const { return {std::pow(value_, k), dim_ * k}; }

    Quantity sqrt() const {
        if (!dim_.all_even())
            throw DimensionError("sqrt of quantity with odd dimension exponents: " + dim_.str());
        return {std::sqrt(value_), dim_.half()};
    }

    Quantity abs() const { return {std::abs(value_), dim_}; }

private:
    void require_dim(const Dimension& d, const char* what) const {
        if (!(dim_ == d))
            throw DimensionError(std::string("cannot ") + what + " [" + dim_.str() + "] and [" +
                                 d.str() + "]");
    }

    double value_;
    Dimension dim_;
};

// Asserts a named quantity has the dimensions its name claims.
inline const Quantity& expect_dims(const Quantity& q, const Dimension& d, const std::string& name) {
    if (!(q.dim() == d))
        throw DimensionError(name + " has dims [" + q.dim().str() + "], expected [" + d.str() + "]");
    return q;
}

namespace si {
constexpr Dimension dim_length{1, 0, 0, 0};
constexpr Dimension dim_mass{0, 1, 0, 0};
constexpr Dimension dim_time{0, 0, 1, 0};
constexpr Dimension dim_current{0, 0, 0, 1};
constexpr Dimension dim_frequency{0, 0, -1, 0};
constexpr Dimension dim_speed{1, 0, -1, 0};
constexpr Dimension dim_energy{2, 1, -2, 0};
constexpr Dimension dim_charge{0, 0, 1, 1};
constexpr Dimension dim_dipole{1, 0, 1, 1};       // C·m
constexpr Dimension dim_efield{1, 1, -3, -1};     // V/m
constexpr Dimension dim_volume{3, 0, 0, 0};
constexpr Dimension dim_action{2, 1, -1, 0};      // J·s
constexpr Dimension dim_permittivity{-3, -1, 4, 2};
constexpr Dimension dim_moment_inertia{2, 1, 0, 0};

inline const Quantity meter{1.0, dim_length};
inline const Quantity second{1.0, dim_time};
inline const Quantity kilogram{1.0, dim_mass};
inline const Quantity ampere{1.0, dim_current};
inline const Quantity hertz{1.0, dim_frequency};
inline const Quantity per_second{1.0, dim_frequency};
inline const Quantity joule{1.0, dim_energy};
inline const Quantity coulomb{1.0, dim_charge};
inline const Quantity volt_per_meter{1.0, dim_efield};
inline const Quantity meters_per_second{1.0, dim_speed};
inline const Quantity cubic_meter{1.0, dim_volume};
inline const Quantity nanometer{1e-9, dim_length};
inline const Quantity angstrom{1e-10, dim_length};
} // namespace si

namespace constants {
// CODATA values.
inline const Quantity hbar{1.054571817e-34, si::dim_action};
inline const Quantity light_speed{2.99792458e8, si::dim_speed};
inline const Quantity vacuum_permittivity{8.8541878128e-12, si::dim_permittivity};
inline const Quantity elementary_charge{1.602176634e-19, si::dim_charge};
} // namespace constants

} // namespace mtcav
