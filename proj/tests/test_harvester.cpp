#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "wptsim/harvester.hpp"
#include "wptsim/linkbudget.hpp"

using Catch::Approx;
using namespace wptsim;

namespace {

PowerQuantity rx_at_5m(double erp_dbm) {
  Beacon b;
  b.erp = PowerQuantity::from_dbm(erp_dbm);
  b.frequency = Frequency::from_mhz(865.7);
  b.antenna = Antenna::omni(2.15);
  return received_power(b, Antenna::omni(2.15), Distance::from_meters(5.0));
}

}  // namespace

TEST_CASE("storage energy window", "[harvester]") {
  StorageCapacitor cap;  // 22 uF, 3.10 / 2.80 V
  const double e = storage_energy(cap, cap.v_ovdis, cap.v_chrdy);
  CHECK(e == Approx(1.947e-5).epsilon(1e-12));
  CHECK(e * 1e6 == Approx(19.5).margin(0.05));
  CHECK(storage_energy(cap, 3.0, 3.0) == 0.0);

  StorageCapacitor measured = cap;
  measured.capacitance_f = 39.7e-6;
  CHECK(storage_energy(measured, 2.8, 3.1) ==
        Approx(3.51345e-5).epsilon(1e-12));

  CHECK(storage_energy(cap, 0.0, cap.v_chrdy) ==
        Approx(1.0571e-4).epsilon(1e-12));
  CHECK_THROWS_AS(storage_energy(cap, 3.1, 2.8), std::invalid_argument);
  CHECK_THROWS_AS(storage_energy(cap, -0.1, 1.0), std::invalid_argument);
}

TEST_CASE("capacitor invariants", "[harvester]") {
  StorageCapacitor c;
  c.v_ovdis = 3.2;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = StorageCapacitor{};
  c.capacitance_f = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = StorageCapacitor{};
  c.v_ceiling = 3.0;  // below v_chrdy
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("harvested power through the 868 chain", "[harvester]") {
  HarvesterStage stage;  // 868 defaults
  const auto r = harvested_power(rx_at_5m(27.0), stage);
  CHECK_FALSE(r.clipped);
  CHECK_FALSE(r.below_sensitivity);
  CHECK(r.watts == Approx(8.502465812512722e-06).epsilon(1e-12));
  CHECK(r.watts == Approx(8.49e-6).epsilon(3e-3));

  const auto boost = harvested_power(rx_at_5m(33.0), stage);
  CHECK(boost.watts == Approx(3.384892607347282e-05).epsilon(1e-12));

  CHECK(harvested_power(PowerQuantity::zero(), stage).watts == 0.0);
  CHECK(harvested_power(PowerQuantity::zero(), stage).below_sensitivity);
}

TEST_CASE("sensitivity window boundaries", "[harvester]") {
  HarvesterStage stage;
  const double eta_d = stage.chain.eta_d;
  const double at_min_w = stage.sensitivity_min.watts() / eta_d;

  const auto just_below = harvested_power(
      PowerQuantity::from_watts(at_min_w * (1.0 - 1e-9)), stage);
  CHECK(just_below.watts == 0.0);
  CHECK(just_below.below_sensitivity);

  const auto just_above = harvested_power(
      PowerQuantity::from_watts(at_min_w * (1.0 + 1e-9)), stage);
  CHECK(just_above.watts > 0.0);
  CHECK_FALSE(just_above.below_sensitivity);

  // Above sensitivity_max the output clips to the value at the maximum.
  const double at_max_w = stage.sensitivity_max.watts() / eta_d;
  const auto clipped =
      harvested_power(PowerQuantity::from_watts(at_max_w * 4.0), stage);
  const auto at_max =
      harvested_power(PowerQuantity::from_watts(at_max_w), stage);
  CHECK(clipped.clipped);
  CHECK_FALSE(at_max.clipped);
  CHECK(clipped.watts == Approx(at_max.watts).epsilon(1e-12));
}

TEST_CASE("table chain multipliers at -10 dBm receive power", "[harvester]") {
  CHECK(EfficiencyChain::aem40940_868mhz().end_to_end_multiplier(-10.0) ==
        Approx(0.2075).margin(5e-4));
  CHECK(EfficiencyChain::aem40940_2g4().end_to_end_multiplier(-10.0) ==
        Approx(0.0828).margin(5e-4));
}

TEST_CASE("eta_rf curve parsing and interpolation", "[harvester]") {
  auto curve = EtaRfCurve::from_points(
      {{-19.0, 0.20}, {-10.0, 0.3778}, {0.0, 0.45}});
  CHECK(curve.at(-14.5) == Approx((0.20 + 0.3778) / 2.0).epsilon(1e-12));
  CHECK(curve.at(-10.0) == Approx(0.3778).epsilon(1e-12));
  CHECK(curve.at(-40.0) == 0.20);  // clamped
  CHECK(curve.at(20.0) == 0.45);

  CHECK_THROWS_AS(EtaRfCurve::from_points({{-10.0, 0.3}, {-10.0, 0.4}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(EtaRfCurve::from_points({{-10.0, 1.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(EtaRfCurve::from_points({}), std::invalid_argument);

  std::istringstream csv("input_dbm,eta_rf\n-19,0.2\n-10,0.3778\n10,0.45\n");
  auto from_csv = EtaRfCurve::from_csv(csv);
  CHECK(from_csv.points().size() == 3);
  CHECK(from_csv.at(-10.0) == Approx(0.3778));

  std::istringstream bad("=-19;0.2\n");
  CHECK_THROWS_AS(EtaRfCurve::from_csv(bad), std::invalid_argument);
  std::istringstream decreasing("-10,0.3\n-19,0.2\n");
  CHECK_THROWS_AS(EtaRfCurve::from_csv(decreasing), std::invalid_argument);
}

TEST_CASE("harvest is monotone in receive power for a monotone curve",
          "[harvester]") {
  HarvesterStage stage;
  stage.chain.eta_rf = EtaRfCurve::from_points(
      {{-19.0, 0.20}, {-10.0, 0.3778}, {10.0, 0.50}});
  double last = -1.0;
  for (double dbm = -35.0; dbm <= 25.0; dbm += 0.25) {
    const double w =
        harvested_power(PowerQuantity::from_dbm(dbm), stage).watts;
    REQUIRE(w >= last);
    last = w;
  }
}

TEST_CASE("charge time closed form", "[harvester]") {
  StorageCapacitor cap;
  HarvesterStage stage;
  const double p27 = harvested_power(rx_at_5m(27.0), stage).watts;
  const double p33 = harvested_power(rx_at_5m(33.0), stage).watts;

  const auto update = charge_time(cap, cap.v_ovdis, cap.v_chrdy, p27);
  CHECK_FALSE(update.never);
  CHECK(update.seconds == Approx(2.289923938458752).epsilon(1e-12));

  const auto initial = charge_time(cap, 0.0, cap.v_chrdy, p27);
  CHECK(initial.seconds == Approx(12.432863869259085).epsilon(1e-12));

  const auto boost = charge_time(cap, cap.v_ovdis, cap.v_chrdy, p33);
  CHECK(boost.seconds == Approx(0.5752028870203517).epsilon(1e-12));

  const auto doubled = charge_time(cap, cap.v_ovdis, cap.v_chrdy, 2.0 * p27);
  CHECK(doubled.seconds == Approx(update.seconds / 2.0).epsilon(1e-12));

  const auto stalled = charge_time(cap, cap.v_ovdis, cap.v_chrdy, 0.0);
  CHECK(stalled.never);
  const auto empty_window = charge_time(cap, 3.0, 3.0, 0.0);
  CHECK_FALSE(empty_window.never);
  CHECK(empty_window.seconds == 0.0);
  CHECK_THROWS_AS(charge_time(cap, 2.8, 3.1, -1.0), std::invalid_argument);
}

TEST_CASE("charge time is additive across windows", "[harvester]") {
  StorageCapacitor cap;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> volt(0.0, 5.0);
  std::uniform_real_distribution<double> power(1e-7, 1e-3);
  for (int i = 0; i < 300; ++i) {
    std::array<double, 3> v = {volt(rng), volt(rng), volt(rng)};
    std::sort(v.begin(), v.end());
    const double p = power(rng);
    const double split = charge_time(cap, v[0], v[1], p).seconds +
                         charge_time(cap, v[1], v[2], p).seconds;
    const double whole = charge_time(cap, v[0], v[2], p).seconds;
    REQUIRE(split == Approx(whole).epsilon(1e-9));
  }
}

TEST_CASE("integrating at constant power reproduces the charge time",
          "[harvester]") {
  StorageCapacitor cap;
  cap.v_now = cap.v_ovdis;
  const double p = 8.502465812512722e-06;
  const auto t = charge_time(cap, cap.v_ovdis, cap.v_chrdy, p);
  const PowerSegment seg{p, t.seconds};
  const auto res = integrate_charge(cap, std::span(&seg, 1), t.seconds);
  CHECK(res.cap.v_now == Approx(cap.v_chrdy).margin(1e-9));
}

TEST_CASE("duty-cycled profile delivers the average power", "[harvester]") {
  StorageCapacitor cap;
  cap.v_now = cap.v_ovdis;
  cap.v_ceiling = 100.0;  // keep the ceiling out of the way
  const double p = 1e-5;
  std::vector<PowerSegment> profile;
  for (int i = 0; i < 10; ++i) {
    profile.push_back({p, 1.0});
    profile.push_back({0.0, 0.1});
  }
  const auto res = integrate_charge(cap, profile, 11.0);
  CHECK(res.total_absorbed_j == Approx(p * 10.0).epsilon(1e-12));
  // Average power over the period is p / 1.1: reaching a target therefore
  // takes 1.1x the continuous-wave time.
  CHECK(res.total_absorbed_j / 11.0 == Approx(p / 1.1).epsilon(1e-12));
}

TEST_CASE("zero-power profile leaves the capacitor untouched", "[harvester]") {
  StorageCapacitor cap;
  cap.v_now = 1.7;
  const PowerSegment seg{0.0, 5.0};
  const auto res = integrate_charge(cap, std::span(&seg, 1), 5.0);
  CHECK(res.cap.v_now == 1.7);
  CHECK(res.total_absorbed_j == 0.0);
}

TEST_CASE("integration conserves energy and respects the ceiling",
          "[harvester]") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> power(0.0, 2e-5);
  std::uniform_real_distribution<double> duration(0.0, 3.0);
  for (int iter = 0; iter < 100; ++iter) {
    StorageCapacitor cap;
    cap.v_now = 0.5;
    cap.v_ceiling = 50.0;
    std::vector<PowerSegment> profile;
    double total = 0.0;
    for (int i = 0; i < 8; ++i) {
      profile.push_back({power(rng), duration(rng)});
      total += profile.back().duration_s;
    }
    const auto res = integrate_charge(cap, profile, total);
    const double gained =
        res.cap.stored_energy_j() - cap.stored_energy_j();
    double ledger_sum = 0.0;
    for (const auto& e : res.ledger) ledger_sum += e.energy_absorbed_j;
    REQUIRE(gained == Approx(ledger_sum).epsilon(1e-9).margin(1e-18));
    REQUIRE(ledger_sum == Approx(res.total_absorbed_j).epsilon(1e-12).margin(1e-18));
  }

  // Ceiling clamp: offered energy beyond the ceiling is not absorbed.
  StorageCapacitor cap;
  cap.v_now = cap.v_chrdy - 1e-3;
  const PowerSegment big{1.0, 10.0};
  const auto res = integrate_charge(cap, std::span(&big, 1), 10.0);
  CHECK(res.cap.v_now == Approx(cap.v_chrdy).margin(1e-12));
  CHECK(res.ledger.at(0).clamped);
  CHECK(res.total_absorbed_j < 1.0);
}

TEST_CASE("parallel stages add exactly", "[harvester]") {
  const std::vector<HarvesterStage> stages(2);
  const PowerQuantity rx = rx_at_5m(27.0);
  const std::vector<PowerQuantity> both = {rx, rx};
  const auto combined = combine_stages(stages, both);
  const double single = harvested_power(rx, stages[0]).watts;
  CHECK(combined.watts == Approx(2.0 * single).epsilon(1e-12));
  CHECK(combined.watts == Approx(1.7004931625025444e-05).epsilon(1e-12));

  const std::vector<PowerQuantity> uneven = {rx, PowerQuantity::from_dbm(-40.0)};
  const auto partial = combine_stages(stages, uneven);
  CHECK(partial.watts == Approx(single).epsilon(1e-12));
  CHECK(partial.per_stage.at(1).below_sensitivity);

  const std::vector<PowerQuantity> swapped = {uneven[1], uneven[0]};
  CHECK(combine_stages(stages, swapped).watts ==
        Approx(partial.watts).epsilon(1e-15));

  const std::vector<PowerQuantity> short_list = {rx};
  CHECK_THROWS_AS(combine_stages(stages, short_list), std::invalid_argument);
}

TEST_CASE("maximum cold-start distance", "[harvester]") {
  Beacon b;
  b.erp = PowerQuantity::from_dbm(27.0);
  b.frequency = Frequency::from_mhz(865.7);
  b.antenna = Antenna::omni(2.15);
  const Antenna tag = Antenna::omni(2.15);
  HarvesterStage stage;

  const auto range = max_coldstart_distance(b, tag, stage);
  CHECK_FALSE(range.unbounded);
  CHECK(range.meters == Approx(7.821061420517674).epsilon(1e-9));

  // Independent check: at the returned distance the harvester input equals
  // the sensitivity threshold.
  const double p_in =
      received_power(b, tag, Distance::from_meters(range.meters)).watts() *
      stage.chain.eta_d;
  CHECK(p_in == Approx(stage.sensitivity_min.watts()).epsilon(1e-9));

  Beacon stronger = b;
  stronger.erp = b.erp.scaled(4.0);
  const auto doubled = max_coldstart_distance(stronger, tag, stage);
  CHECK(doubled.meters == Approx(2.0 * range.meters).epsilon(1e-12));

  HarvesterStage bottomless = stage;
  bottomless.sensitivity_min = PowerQuantity::zero();
  CHECK(max_coldstart_distance(b, tag, bottomless).unbounded);

  Beacon feeble = b;
  feeble.erp = PowerQuantity::from_watts(1e-15);
  CHECK(max_coldstart_distance(feeble, tag, stage).meters == 0.0);
}
