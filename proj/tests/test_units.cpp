#include <catch2/catch_amalgamated.hpp>

#include "mtcav/units.hpp"

using namespace mtcav;

TEST_CASE("dimension algebra") {
    Quantity length{3.0, si::dim_length};
    Quantity time{2.0, si::dim_time};

    SECTION("multiplication adds exponent vectors") {
        Quantity speed = length / time;
        REQUIRE(speed.dim() == si::dim_speed);
        REQUIRE(speed.value() == Catch::Approx(1.5));
        REQUIRE((speed * time).dim() == si::dim_length);
    }

    SECTION("addition requires equal dimensions") {
        REQUIRE_NOTHROW(length + Quantity(1.0, si::dim_length));
        REQUIRE_THROWS_AS(length + time, DimensionError);
        try {
            (void)(length + time);
        } catch (const DimensionError& e) {
            REQUIRE(std::string(e.what()).find("m") != std::string::npos);
            REQUIRE(std::string(e.what()).find("s") != std::string::npos);
        }
    }

    SECTION("comparison requires equal dimensions") {
        REQUIRE(Quantity(1.0, si::dim_length) < length);
        REQUIRE_THROWS_AS((void)(length < time), DimensionError);
    }

    SECTION("sqrt requires even exponents") {
        Quantity area = length * length;
        REQUIRE(area.sqrt().dim() == si::dim_length);
        REQUIRE(area.sqrt().value() == Catch::Approx(3.0));
        REQUIRE_THROWS_AS(length.sqrt(), DimensionError);
    }

    SECTION("value_in checks the unit dimension") {
        Quantity d{4e-9, si::dim_length};
        REQUIRE(d.value_in(si::nanometer) == Catch::Approx(4.0));
        REQUIRE_THROWS_AS(d.value_in(si::second), DimensionError);
    }

    SECTION("expect_dims names the offending expression") {
        try {
            expect_dims(length, si::dim_time, "the_time");
            FAIL("should have thrown");
        } catch (const DimensionError& e) {
            REQUIRE(std::string(e.what()).find("the_time") != std::string::npos);
        }
    }
}

TEST_CASE("constants carry their dimensions") {
    REQUIRE(constants::hbar.dim() == si::dim_action);
    REQUIRE((constants::hbar / Quantity(1.0, si::dim_energy)).dim() == si::dim_time);
    // eps0 * E^2 has energy-density dimensions
    Quantity e_field{1.0, si::dim_efield};
    Quantity density = constants::vacuum_permittivity * e_field * e_field;
    REQUIRE(density.dim() == si::dim_energy - si::dim_volume);
}
