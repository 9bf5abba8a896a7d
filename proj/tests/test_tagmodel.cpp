#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wptsim/tagmodel.hpp"

using Catch::Approx;
using namespace wptsim;

TEST_CASE("fix energy", "[tagmodel]") {
  TagEnergyProfile p;  // 3.15 uJ x 4
  CHECK(fix_energy(p) == Approx(12.6e-6).epsilon(1e-12));
  p.rangings_per_fix = 1;
  CHECK(fix_energy(p) == Approx(3.15e-6).epsilon(1e-12));
  p.e_tag_j = 5e-6;
  p.rangings_per_fix = 4;
  CHECK(fix_energy(p) == Approx(20e-6).epsilon(1e-12));
}

TEST_CASE("profile invariants", "[tagmodel]") {
  TagEnergyProfile p;
  p.e_tag_j = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = TagEnergyProfile{};
  p.rangings_per_fix = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  // Decomposition consistency: P * tau_rx + E_on must recompose e_tag to 1%.
  p = TagEnergyProfile{};
  p.active_power_w = 2.0e-3;
  p.turnon_energy_j = 1.15e-6;  // 2.0e-3 * 1e-3 + 1.15e-6 = 3.15e-6
  CHECK_NOTHROW(p.validate());
  p.turnon_energy_j = 2.0e-6;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("storage feasibility against the paper defaults", "[tagmodel]") {
  StorageCapacitor cap;  // 22 uF, 3.10 / 2.80 V
  TagEnergyProfile profile;

  const auto with_ldo = storage_feasible(cap, profile, 0.7407);
  CHECK(with_ldo.feasible);
  CHECK(with_ldo.stored_j == Approx(1.947e-5).epsilon(1e-12));
  CHECK(with_ldo.margin_j == Approx(1.8214290e-6).epsilon(1e-6));

  const auto ideal_ldo = storage_feasible(cap, profile, 1.0);
  CHECK(ideal_ldo.feasible);
  CHECK(ideal_ldo.margin_j == Approx(6.87e-6).epsilon(1e-6));

  CHECK_THROWS_AS(storage_feasible(cap, profile, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(storage_feasible(cap, profile, 1.5), std::invalid_argument);
}

TEST_CASE("feasibility is monotone in the storage window", "[tagmodel]") {
  TagEnergyProfile profile;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> chrdy(2.9, 4.0);
  std::uniform_real_distribution<double> ovdis(0.0, 2.8);
  for (int i = 0; i < 200; ++i) {
    StorageCapacitor cap;
    cap.v_chrdy = chrdy(rng);
    cap.v_ovdis = ovdis(rng);
    const bool base = storage_feasible(cap, profile, 0.7407).feasible;
    StorageCapacitor wider = cap;
    wider.v_chrdy += 0.3;
    wider.v_ovdis = std::max(0.0, wider.v_ovdis - 0.3);
    const bool widened = storage_feasible(wider, profile, 0.7407).feasible;
    if (base) REQUIRE(widened);
  }
}

TEST_CASE("performing a fix lands on the over-discharge floor", "[tagmodel]") {
  StorageCapacitor cap;
  cap.v_now = cap.v_chrdy;
  const FixRecord rec = perform_fix(cap, 12.5);
  CHECK(cap.v_now == cap.v_ovdis);
  CHECK(rec.time_s == 12.5);
  CHECK(rec.v_before == Approx(3.10));
  CHECK(rec.energy_spent_j == Approx(1.947e-5).epsilon(1e-12));

  // Consumed state: a second fix without recharging must fail.
  CHECK_THROWS_WITH(perform_fix(cap, 13.0),
                    Catch::Matchers::ContainsSubstring("not charged"));

  cap.v_now = 3.05;
  CHECK_THROWS_WITH(perform_fix(cap, 14.0),
                    Catch::Matchers::ContainsSubstring("not charged"));
}

TEST_CASE("repeated charge/fix cycles stay inside the operating window",
          "[tagmodel]") {
  StorageCapacitor cap;
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> overshoot(0.0, 0.05);
  for (int i = 0; i < 100; ++i) {
    cap.v_now = cap.v_chrdy + overshoot(rng);  // ceiling configured higher
    perform_fix(cap, static_cast<double>(i));
    REQUIRE(cap.v_now == cap.v_ovdis);
  }
}

TEST_CASE("tag invariants", "[tagmodel]") {
  Tag t;
  CHECK_NOTHROW(t.validate());
  t.stages.clear();
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.stages.assign(3, HarvesterStage{});
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}
