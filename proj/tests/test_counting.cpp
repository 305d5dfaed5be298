// Copyright 2026 The gslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "gslab/counting.hpp"
#include "gslab/optics.hpp"

using namespace gslab;

namespace {

MeasurementSetting z6() { return MeasurementSetting::uniform(LocalMeasurement::z(), "Z^6"); }

std::vector<int> parity_signs() {
    std::vector<int> s(64);
    for (int o = 0; o < 64; ++o) s[o] = std::popcount(unsigned(o)) % 2 == 0 ? 1 : -1;
    return s;
}

}  // namespace

TEST_CASE("GHZ outcome distribution in the computational basis", "[counting]") {
    const Eigen::VectorXd p = outcome_distribution(density_matrix(ghz_state(6)), z6());
    CHECK(p(0) == Catch::Approx(0.5).margin(1e-14));
    CHECK(p(63) == Catch::Approx(0.5).margin(1e-14));
    CHECK(p.segment(1, 62).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("GHZ outcome distribution in the x basis is uniform over even parity", "[counting]") {
    const MeasurementSetting x6 = MeasurementSetting::uniform(LocalMeasurement::x(), "X^6");
    const Eigen::VectorXd p = outcome_distribution(density_matrix(ghz_state(6)), x6);
    for (int o = 0; o < 64; ++o) {
        const double expected = std::popcount(unsigned(o)) % 2 == 0 ? 1.0 / 32 : 0.0;
        CHECK(p(o) == Catch::Approx(expected).margin(1e-13));
    }
}

TEST_CASE("cluster outcomes satisfy the measured stabilizer constraints", "[counting]") {
    const MeasurementSetting s =
        MeasurementSetting::split(LocalMeasurement::z(), LocalMeasurement::x(), "Z^3 X^3");
    const Eigen::VectorXd p = outcome_distribution(density_matrix(cluster_state_six()), s);
    std::vector<PauliString> measured;
    for (const auto& g : stabilizers_of_c6().generators) {
        if (measurable_under(g, s)) measured.push_back(g);
    }
    REQUIRE(measured.size() == 3);
    double mass_on_allowed = 0.0;
    for (int o = 0; o < 64; ++o) {
        bool allowed = true;
        for (const auto& g : measured) allowed = allowed && outcome_sign(g, o) == +1;
        if (allowed) {
            mass_on_allowed += p(o);
        } else {
            CHECK(p(o) <= 1e-13);
        }
    }
    CHECK(mass_on_allowed == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("outcome distribution rejects wrong arity", "[counting]") {
    CHECK_THROWS_AS(outcome_distribution(density_matrix(epr_phi_plus()), z6()),
                    std::invalid_argument);
}

TEST_CASE("sampling the ideal GHZ state only hits the two poles", "[counting]") {
    const CountRecord rec = sample_counts(density_matrix(ghz_state(6)), z6(), 100, 7);
    CHECK(rec.counts[0] + rec.counts[63] == 100);
    CHECK(rec.n_events == 100);
}

TEST_CASE("fixed seeds replay identically", "[counting]") {
    const MixedState rho = white_noise_state(ghz_state(6), 0.7);
    const CountRecord a = sample_counts(rho, z6(), 500, 42);
    const CountRecord b = sample_counts(rho, z6(), 500, 42);
    const CountRecord c = sample_counts(rho, z6(), 500, 43);
    CHECK(a.counts == b.counts);
    CHECK(a.counts != c.counts);
    CHECK_THROWS_AS(sample_counts(rho, z6(), 0, 1), std::invalid_argument);
}

TEST_CASE("large samples track the analytic distribution", "[counting]") {
    const MixedState rho = white_noise_state(cluster_state_six(), 0.6);
    const MeasurementSetting s =
        MeasurementSetting::split(LocalMeasurement::z(), LocalMeasurement::m(1), "Z^3 M(1)^3");
    const Eigen::VectorXd p = outcome_distribution(rho, s);
    const std::int64_t n = 1000000;
    const CountRecord rec = sample_counts(rho, s, n, 12345);
    for (int o = 0; o < 64; ++o) {
        const double freq = double(rec.counts[o]) / double(n);
        const double sigma = std::sqrt(p(o) * (1 - p(o)) / double(n));
        CHECK(std::abs(freq - p(o)) <= 5.0 * sigma + 1e-9);
    }
}

TEST_CASE("parity expectation plug-in formula", "[counting]") {
    CountRecord rec;
    rec.setting = z6();
    rec.counts.assign(64, 0);
    rec.counts[0b000000] = 32;  // even parity, sign +1
    rec.counts[0b000001] = 32;  // odd parity, sign -1
    rec.n_events = 64;

    const EstimatedValue ev = parity_expectation(rec, parity_signs());
    CHECK(ev.mean == Catch::Approx(0.0).margin(1e-15));
    CHECK(ev.std_error == Catch::Approx(0.125).margin(1e-15));

    CountRecord all_plus = rec;
    all_plus.counts[0b000001] = 0;
    all_plus.counts[0b000011] = 32;  // still even parity
    const EstimatedValue ev2 = parity_expectation(all_plus, parity_signs());
    CHECK(ev2.mean == Catch::Approx(1.0).margin(1e-15));
    CHECK(ev2.std_error == 0.0);

    std::vector<int> zeros(64, 0);
    CHECK_THROWS_AS(parity_expectation(rec, zeros), std::runtime_error);
}

TEST_CASE("sampled x-y parity sits on the analytic value", "[counting]") {
    const MeasurementSetting m1 = MeasurementSetting::uniform(LocalMeasurement::m(1), "M(1)^6");
    const CountRecord rec = sample_counts(density_matrix(ghz_state(6)), m1, 64, 99);
    const EstimatedValue ev = parity_expectation(rec, parity_signs());
    CHECK(std::abs(ev.mean - (-1.0)) <= 5.0 * ev.std_error + 1e-12);
}

TEST_CASE("the protocol reproduces the witness trace analytically", "[counting]") {
    SplitMix64 rng(211);
    const WitnessPlan plan = ghz_witness_plan();
    for (int rep = 0; rep < 5; ++rep) {
        const MixedState rho = random_mixed_state(6, rng);
        const ProtocolRun run = run_protocol(rho, plan, 64, 0, /*analytic=*/true);
        CHECK(run.report.value == Catch::Approx(expectation(rho, plan.observable)).margin(1e-10));
        CHECK(run.report.std_error == 0.0);
        CHECK(run.records.empty());
    }
}

TEST_CASE("the ideal GHZ protocol is deterministic and sharply negative", "[counting]") {
    const ProtocolRun run =
        run_protocol(density_matrix(ghz_state(6)), ghz_witness_plan(), 64, 5);
    CHECK(run.report.value == Catch::Approx(-0.5).margin(1e-12));
    CHECK(run.report.genuine_multipartite);
    CHECK(run.report.fidelity_bound == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(run.records.size() == 7);
    for (size_t i = 0; i < run.records.size(); ++i) {
        CHECK(run.records[i].seed == derive_subseed(5, i));
        CHECK(run.records[i].n_events == 64);
    }
}

TEST_CASE("white noise at the threshold nulls the cluster witness", "[counting]") {
    const ProtocolRun run = run_protocol(white_noise_state(cluster_state_six(), 0.5),
                                         cluster_witness_plan(), 64, 0, /*analytic=*/true);
    CHECK(run.report.value == Catch::Approx(0.0).margin(1e-12));
    CHECK_FALSE(run.report.genuine_multipartite);
}

TEST_CASE("sampled protocol error bars are sane", "[counting]") {
    NoiseModel noise;
    noise.pair_visibility_hv = 0.93;
    noise.pair_visibility_pm = 0.91;
    noise.fusion_overlap = {0.73, 0.71};
    const MixedState rho = build_setup(SetupConfig::preset(SetupPreset::ghz6), noise).state;
    const WitnessPlan plan = ghz_witness_plan();
    const double analytic = expectation(rho, plan.observable);

    const ProtocolRun run = run_protocol(rho, plan, 64, 1);
    CHECK(run.report.std_error > 0.0);
    CHECK(std::abs(run.report.value - analytic) <= 6.0 * run.report.std_error);
    CHECK(run.report.sigmas_below_zero ==
          Catch::Approx(-run.report.value / run.report.std_error));
}

TEST_CASE("fringe of the ideal four-photon GHZ state", "[counting]") {
    const auto points = fringe_scan(density_matrix(ghz_state(4)), 73);
    REQUIRE(points.size() == 73);
    for (const auto& pt : points) {
        CHECK(pt.expectation == Catch::Approx(std::cos(4.0 * pt.phi)).margin(1e-12));
    }
    CHECK(fringe_visibility(points) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("fringe visibility calibrates to the fusion overlap", "[counting]") {
    const PureState product = tensor({epr_phi_plus(), epr_phi_plus()});
    const FusionOutcome fused = pbs_fusion(density_matrix(product), 2, 3, 0.73);
    const auto points = fringe_scan(fused.state, 73);
    CHECK(fringe_visibility(points) == Catch::Approx(0.73).margin(1e-9));
}

TEST_CASE("a flat fringe has zero visibility", "[counting]") {
    const MixedState mixed(4, Mat::Identity(16, 16) / 16.0);
    const auto points = fringe_scan(mixed, 21);
    for (const auto& pt : points) CHECK(std::abs(pt.expectation) <= 1e-13);
    CHECK(fringe_visibility(points) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("fringe scan rejects wrong arity", "[counting]") {
    CHECK_THROWS_AS(fringe_scan(density_matrix(ghz_state(6)), 10), std::invalid_argument);
}
