#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wptsim/quantities.hpp"

using Catch::Approx;
using namespace wptsim;

TEST_CASE("dBm to watts anchors", "[quantities]") {
  CHECK(dbm_to_watts(30.0).watts() == Approx(1.0).epsilon(1e-12));
  CHECK(dbm_to_watts(0.0).watts() == Approx(1e-3).epsilon(1e-12));
  // 27 dBm is the 500 mW omni ERP operating point.
  CHECK(dbm_to_watts(27.0).watts() ==
        Approx(0.5011872336272722).epsilon(1e-12));
  CHECK(dbm_to_watts(27.0).watts() == Approx(0.5).epsilon(3e-3));
}

TEST_CASE("dBm round trip is tight across the whole range", "[quantities]") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dbm(-100.0, 60.0);
  for (int i = 0; i < 2000; ++i) {
    const double p = i == 0 ? -100.0 : i == 1 ? 60.0 : dbm(rng);
    const double roundtrip = PowerQuantity::from_dbm(p).dbm();
    REQUIRE(std::fabs(roundtrip - p) < 1e-9);
  }
}

TEST_CASE("3.0103 dB doubles the linear power", "[quantities]") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> dbm(-80.0, 40.0);
  for (int i = 0; i < 200; ++i) {
    const double p = dbm(rng);
    const double ratio = dbm_to_watts(p + 3.0103).watts() /
                         dbm_to_watts(p).watts();
    REQUIRE(ratio == Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("power quantity rejects bad values", "[quantities]") {
  CHECK_THROWS_AS(PowerQuantity::from_watts(-1e-9), std::invalid_argument);
  CHECK_THROWS_AS(PowerQuantity::zero().dbm(), std::domain_error);
  CHECK(PowerQuantity::zero().is_zero());
}

TEST_CASE("ERP to EIRP is a fixed 2.15 dB shift", "[quantities]") {
  CHECK(erp_to_eirp(dbm_to_watts(27.0)).dbm() == Approx(29.15).margin(1e-9));
  CHECK(erp_to_eirp(dbm_to_watts(33.0)).dbm() == Approx(35.15).margin(1e-9));
  CHECK_THROWS_AS(erp_to_eirp(PowerQuantity::zero()), std::domain_error);

  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dbm(-30.0, 40.0);
  for (int i = 0; i < 200; ++i) {
    const PowerQuantity erp = dbm_to_watts(dbm(rng));
    const double ratio = erp_to_eirp(erp).watts() / erp.watts();
    REQUIRE(ratio == Approx(1.6406).margin(1e-4));
    REQUIRE(eirp_to_erp(erp_to_eirp(erp)).dbm() ==
            Approx(erp.dbm()).margin(1e-9));
  }
}

TEST_CASE("wavelength", "[quantities]") {
  CHECK(wavelength_m(Frequency::from_mhz(865.7)) ==
        Approx(0.3463006330137461).epsilon(1e-12));
  CHECK(wavelength_m(Frequency::from_ghz(2.45)) ==
        Approx(0.12236426857142857).epsilon(1e-12));
  CHECK(wavelength_m(Frequency::from_hz(speed_of_light_m_per_s)) ==
        Approx(1.0).epsilon(1e-15));
}

TEST_CASE("frequency and distance reject non-positive values",
          "[quantities]") {
  CHECK_THROWS_AS(Frequency::from_hz(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Frequency::from_mhz(-100.0), std::invalid_argument);
  CHECK_THROWS_AS(Distance::from_meters(0.0), std::invalid_argument);
}
