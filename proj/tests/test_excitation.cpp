#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vibrobench/excitation.hpp"

using namespace vibrobench;

TEST_CASE("peak acceleration from amplitude and frequency") {
    CHECK(peak_acceleration_g(0.0, 80.0) == 0.0);
    CHECK_THAT(peak_acceleration_g(0.001, 80.0),
               Catch::Matchers::WithinAbs(25.756, 0.01));
    // the rounded display coefficient 4.0243 * A * f^2
    const double coefficient = peak_acceleration_g(1.0, 1.0);
    CHECK_THAT(coefficient, Catch::Matchers::WithinRel(4.0243, 5e-4));
}

TEST_CASE("peak acceleration rejects bad inputs") {
    CHECK_THROWS_AS(peak_acceleration_g(-0.001, 80.0), std::domain_error);
    CHECK_THROWS_AS(peak_acceleration_g(0.001, 0.0), std::domain_error);
    CHECK_THROWS_AS(peak_acceleration_g(0.001, -80.0), std::domain_error);
}

TEST_CASE("amplitude for target acceleration") {
    CHECK_THAT(amplitude_for_acceleration(20.0, 80.0),
               Catch::Matchers::WithinAbs(7.766e-4, 1e-7));
    CHECK(amplitude_for_acceleration(0.0, 123.0) == 0.0);
    CHECK_THAT(amplitude_for_acceleration(25.756, 80.0),
               Catch::Matchers::WithinAbs(0.001, 1e-6));
    CHECK_THROWS_AS(amplitude_for_acceleration(-1.0, 80.0), std::domain_error);
    CHECK_THROWS_AS(amplitude_for_acceleration(20.0, 0.0), std::domain_error);
}

TEST_CASE("round trip through the two forms") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> freq(1.0, 5000.0);
    std::uniform_real_distribution<double> accel(0.0, 100.0);
    for (int i = 0; i < 200; ++i) {
        const double f = freq(gen);
        const double n = accel(gen);
        const double back = peak_acceleration_g(amplitude_for_acceleration(n, f), f);
        CHECK_THAT(back, Catch::Matchers::WithinRel(n, 1e-9) ||
                             Catch::Matchers::WithinAbs(n, 1e-12));
    }
}

TEST_CASE("quadratic frequency scaling") {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> freq(1.0, 2000.0);
    std::uniform_real_distribution<double> amp(1e-6, 1e-2);
    for (int i = 0; i < 100; ++i) {
        const double f = freq(gen);
        const double a = amp(gen);
        CHECK_THAT(peak_acceleration_g(a, 2.0 * f),
                   Catch::Matchers::WithinRel(4.0 * peak_acceleration_g(a, f), 1e-12));
    }
}

TEST_CASE("waveform samples") {
    ExcitationSpec sine{80.0, 0.001, Waveform::sine, 1.0};
    CHECK_THAT(waveform_sample(sine, 0.0), Catch::Matchers::WithinAbs(0.0, 1e-15));
    CHECK_THAT(waveform_sample(sine, 1.0 / (4.0 * 80.0)),
               Catch::Matchers::WithinAbs(0.001, 1e-12));

    ExcitationSpec square{80.0, 0.001, Waveform::square, 0.5};
    CHECK(waveform_sample(square, 0.9 / 80.0) == -0.001);
    CHECK(waveform_sample(square, 0.1 / 80.0) == 0.001);

    ExcitationSpec triangle{80.0, 0.001, Waveform::triangle, 1.0};
    CHECK_THAT(waveform_sample(triangle, 0.25 / 80.0),
               Catch::Matchers::WithinAbs(0.001, 1e-15));
    CHECK_THAT(waveform_sample(triangle, 0.75 / 80.0),
               Catch::Matchers::WithinAbs(-0.001, 1e-15));
}

TEST_CASE("waveform periodicity and bound") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> tdist(0.0, 1.0);
    for (Waveform w : {Waveform::sine, Waveform::square, Waveform::triangle}) {
        ExcitationSpec spec{80.0, 0.001, w, 0.3};
        for (int i = 0; i < 200; ++i) {
            const double t = tdist(gen);
            const double x = waveform_sample(spec, t);
            CHECK(std::abs(x) <= spec.amplitude_m + 1e-15);
            for (int k : {1, 3, 17})
                CHECK_THAT(waveform_sample(spec, t + k / spec.frequency_hz),
                           Catch::Matchers::WithinAbs(x, 1e-12));
        }
    }
}
