#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vibrobench/dut.hpp"

using namespace vibrobench;

namespace {

DutModel default_dut(const std::string& id = "S1") {
    DutModel dut;
    dut.specimen_id = id;
    return dut;
}

double sample_cov(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs)
        mean += x;
    mean /= xs.size();
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (xs.size() - 1)) / mean;
}

} // namespace

TEST_CASE("axis gain normalization and peak") {
    AxisParams p;
    CHECK(axis_gain(p, 0.0) == 1.0);

    const double zeta = p.damping_ratio;
    const double f_peak = p.natural_frequency_hz * std::sqrt(1.0 - 2.0 * zeta * zeta);
    const double peak_gain = 1.0 / (2.0 * zeta * std::sqrt(1.0 - zeta * zeta));
    CHECK_THAT(f_peak, Catch::Matchers::WithinAbs(1994.99, 0.01));
    CHECK_THAT(axis_gain(p, f_peak), Catch::Matchers::WithinAbs(10.0125, 0.001));
    CHECK_THAT(peak_gain, Catch::Matchers::WithinAbs(10.0125, 0.001));
    CHECK_THAT(axis_gain(p, 20000.0), Catch::Matchers::WithinAbs(0.0101, 1e-4));
}

TEST_CASE("axis gain peak matches dense grid search") {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> zdist(0.01, 0.3);
    std::uniform_real_distribution<double> fdist(500.0, 5000.0);
    for (int trial = 0; trial < 20; ++trial) {
        AxisParams p;
        p.damping_ratio = zdist(gen);
        p.natural_frequency_hz = fdist(gen);
        const double lo = 0.4 * p.natural_frequency_hz;
        const double hi = 1.2 * p.natural_frequency_hz;
        const int n = 20000;
        const double step = (hi - lo) / n;
        double best_f = lo, best_g = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double f = lo + step * i;
            const double g = axis_gain(p, f);
            if (g > best_g) {
                best_g = g;
                best_f = f;
            }
        }
        const double zeta = p.damping_ratio;
        const double closed = p.natural_frequency_hz * std::sqrt(1.0 - 2.0 * zeta * zeta);
        CHECK(std::abs(best_f - closed) <= step);
    }
}

TEST_CASE("output voltage of a pristine specimen") {
    const DutModel dut = default_dut();
    CHECK(output_voltage(dut, Axis::X, 0.0, 80.0) == 1.65);
    CHECK_THAT(output_voltage(dut, Axis::Y, 1.08, 80.0),
               Catch::Matchers::WithinAbs(2.3637, 5e-4));
}

TEST_CASE("output voltage is affine in acceleration") {
    const DutModel dut = default_dut();
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> adist(0.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double a1 = adist(gen), a2 = adist(gen);
        const double v0 = output_voltage(dut, Axis::Z, 0.0, 80.0);
        const double lhs = output_voltage(dut, Axis::Z, a1 + a2, 80.0) - v0;
        const double rhs = (output_voltage(dut, Axis::Z, a1, 80.0) - v0) +
                           (output_voltage(dut, Axis::Z, a2, 80.0) - v0);
        CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-9));
    }
}

TEST_CASE("failure modes dominate the output") {
    DutModel dut = default_dut();
    dut.degradation.failure_mode = FailureMode::open_output;
    CHECK(output_voltage(dut, Axis::X, 1.08, 80.0) == 0.0);
    dut.degradation.failure_mode = FailureMode::stuck_output;
    CHECK(output_voltage(dut, Axis::X, 1.08, 80.0) == 1.65);
}

TEST_CASE("true resonance frequency") {
    DutModel dut = default_dut();
    CHECK_THAT(resonance_frequency_true(dut, Axis::X),
               Catch::Matchers::WithinAbs(1994.99, 0.01));

    for (Axis a : all_axes)
        axis_at(dut.axes, a).damping_ratio = 1e-9;
    CHECK_THAT(resonance_frequency_true(dut, Axis::X),
               Catch::Matchers::WithinAbs(2000.0, 1e-6));

    DutModel shifted = default_dut();
    shifted.degradation.resonance_shift_fraction = {-0.02, -0.02, -0.02};
    CHECK_THAT(resonance_frequency_true(shifted, Axis::X),
               Catch::Matchers::WithinAbs(1955.09, 0.01));
}

TEST_CASE("population generation with zero variance copies the nominal") {
    PopulationSpec spec;
    spec.count = 10;
    const auto population = generate_population(spec, default_dut(""));
    REQUIRE(population.size() == 10);
    for (const auto& dut : population) {
        CHECK(dut.degradation.is_pristine());
        for (Axis a : all_axes) {
            CHECK(axis_at(dut.axes, a).natural_frequency_hz == 2000.0);
            CHECK(axis_at(dut.axes, a).sensitivity_v_per_g == 0.66);
        }
    }
    CHECK(population[0].specimen_id != population[1].specimen_id);
}

TEST_CASE("population dispersion tracks the configured CoVs") {
    PopulationSpec spec;
    spec.count = 10;
    spec.natural_frequency_cov = {0.0514, 0.0514, 0.018};
    spec.seed = 42;
    const auto population = generate_population(spec, default_dut(""));
    std::vector<double> fx, fz;
    for (const auto& dut : population) {
        fx.push_back(axis_at(dut.axes, Axis::X).natural_frequency_hz);
        fz.push_back(axis_at(dut.axes, Axis::Z).natural_frequency_hz);
    }
    const double cov_x = sample_cov(fx);
    const double cov_z = sample_cov(fz);
    CHECK(cov_x >= 0.025);
    CHECK(cov_x <= 0.08);
    CHECK(cov_z >= 0.009);
    CHECK(cov_z <= 0.028);
}

TEST_CASE("population generation is deterministic per seed") {
    PopulationSpec spec;
    spec.count = 4;
    spec.natural_frequency_cov = {0.05, 0.05, 0.02};
    spec.sensitivity_cov = 0.01;
    spec.seed = 1234;
    const auto a = generate_population(spec, default_dut(""));
    const auto b = generate_population(spec, default_dut(""));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (Axis axis : all_axes) {
            CHECK(axis_at(a[i].axes, axis).natural_frequency_hz ==
                  axis_at(b[i].axes, axis).natural_frequency_hz);
            CHECK(axis_at(a[i].axes, axis).sensitivity_v_per_g ==
                  axis_at(b[i].axes, axis).sensitivity_v_per_g);
        }
    spec.seed = 1235;
    const auto c = generate_population(spec, default_dut(""));
    CHECK(axis_at(c[0].axes, Axis::X).natural_frequency_hz !=
          axis_at(a[0].axes, Axis::X).natural_frequency_hz);
}

TEST_CASE("population rejects bad specs") {
    PopulationSpec spec;
    spec.count = 0;
    CHECK_THROWS_AS(generate_population(spec, default_dut()), std::domain_error);
}

TEST_CASE("fatigue without damage is a behavioral identity") {
    const DutModel dut = default_dut();
    const DutModel aged = apply_fatigue(dut, 9'216'000);
    CHECK(aged.accumulated_cycles == 9'216'000);
    for (Axis a : all_axes) {
        CHECK(output_voltage(aged, a, 1.08, 80.0) == output_voltage(dut, a, 1.08, 80.0));
        CHECK(resonance_frequency_true(aged, a) == resonance_frequency_true(dut, a));
    }
    CHECK(aged.supply_current_a == dut.supply_current_a);
}

TEST_CASE("damage takes effect only at its onset cycle") {
    DegradationState damage;
    damage.resonance_shift_fraction = {-0.02, -0.02, -0.02};
    damage.onset_cycle = 5'000'000;

    const DutModel dut = default_dut();
    const DutModel before_onset = apply_fatigue(dut, 0, damage);
    CHECK(resonance_frequency_true(before_onset, Axis::X) ==
          resonance_frequency_true(dut, Axis::X));

    const DutModel after_onset = apply_fatigue(dut, 10'000'000, damage);
    CHECK_THAT(resonance_frequency_true(after_onset, Axis::X),
               Catch::Matchers::WithinRel(0.98 * resonance_frequency_true(dut, Axis::X),
                                          1e-12));
}
