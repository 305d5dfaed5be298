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

#include <map>

#include <catch2/catch_amalgamated.hpp>

#include "gslab/graphs.hpp"
#include "gslab/measurement.hpp"
#include "gslab/optics.hpp"

using namespace gslab;

namespace {

Observable pauli_pair(const char* s) { return PauliString::parse(s).to_observable(); }

Observable mn_power(int n, int copies) {
    Mat2 m = xy_plane_observable(n * std::numbers::pi / 6.0);
    Mat acc = m;
    for (int i = 1; i < copies; ++i) acc = Eigen::kroneckerProduct(acc, m).eval();
    return Observable(copies, std::move(acc));
}

}  // namespace

TEST_CASE("ideal source emits the photon pair state exactly", "[optics]") {
    const MixedState pair = epr_pair(NoiseModel::ideal());
    const Mat expected = epr_phi_plus().amplitudes * epr_phi_plus().amplitudes.adjoint();
    CHECK((pair.matrix - expected).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("dephased source keeps the diagonal and scales the coherence", "[optics]") {
    NoiseModel noise;
    noise.pair_visibility_pm = 0.8;
    const MixedState pair = epr_pair(noise);
    CHECK(pair.matrix(0, 0).real() == Catch::Approx(0.5).margin(1e-15));
    CHECK(pair.matrix(3, 3).real() == Catch::Approx(0.5).margin(1e-15));
    CHECK(pair.matrix(0, 3).real() == Catch::Approx(0.4).margin(1e-15));
    CHECK(expectation(pair, pauli_pair("XX")) == Catch::Approx(0.8).margin(1e-14));
    CHECK(expectation(pair, pauli_pair("ZZ")) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("the reported visibilities are reproduced exactly", "[optics]") {
    NoiseModel noise;
    noise.pair_visibility_hv = 0.93;
    noise.pair_visibility_pm = 0.91;
    const MixedState pair = epr_pair(noise);
    CHECK(expectation(pair, pauli_pair("ZZ")) == Catch::Approx(0.93).margin(1e-14));
    CHECK(expectation(pair, pauli_pair("XX")) == Catch::Approx(0.91).margin(1e-14));
    pair.assert_valid();
}

TEST_CASE("noise parameters must be in range", "[optics]") {
    NoiseModel noise;
    noise.pair_visibility_hv = 1.2;
    CHECK_THROWS_AS(epr_pair(noise), std::invalid_argument);
}

TEST_CASE("wave plate matrices", "[optics]") {
    const Mat2 hadamard = waveplate_unitary(WaveplateKind::HWP, 22.5);
    Mat2 expected;
    expected << 1, 1, 1, -1;
    expected /= std::sqrt(2.0);
    CHECK((hadamard - expected).cwiseAbs().maxCoeff() <= 1e-15);

    const Mat2 zero = waveplate_unitary(WaveplateKind::HWP, 0.0);
    CHECK(zero(0, 0).real() == Catch::Approx(1.0).margin(1e-15));
    CHECK(zero(1, 1).real() == Catch::Approx(-1.0).margin(1e-15));
    CHECK(std::abs(zero(0, 1)) <= 1e-15);

    const Mat2 flip = waveplate_unitary(WaveplateKind::HWP, 45.0);
    CHECK(std::abs(flip(0, 1) - cxd(1, 0)) <= 1e-15);
    CHECK(std::abs(flip(1, 0) - cxd(1, 0)) <= 1e-15);

    const Mat2 qwp0 = waveplate_unitary(WaveplateKind::QWP, 0.0);
    CHECK(std::abs(qwp0(0, 0) - cxd(1, 0)) <= 1e-15);
    CHECK(std::abs(qwp0(1, 1) - cxd(0, 1)) <= 1e-15);
    for (double deg : {10.0, 30.0, 77.5}) {
        const Mat2 u = waveplate_unitary(WaveplateKind::QWP, deg);
        CHECK((u * u.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("fusing two pairs yields the four-photon GHZ state", "[optics]") {
    const PureState product = tensor({epr_phi_plus(), epr_phi_plus()});
    // Independent oracle: keep the amplitudes with equal polarization on the
    // fused modes (2, 3), then renormalize.
    Vec expected = Vec::Zero(16);
    double norm_sq = 0.0;
    for (int i = 0; i < 16; ++i) {
        if (bit_of(i, 4, 2) == bit_of(i, 4, 3)) {
            expected(i) = product.amplitudes(i);
            norm_sq += std::norm(product.amplitudes(i));
        }
    }
    expected /= std::sqrt(norm_sq);

    const FusionOutcome fused = pbs_fusion(density_matrix(product), 2, 3, 1.0);
    CHECK(fused.success_probability == Catch::Approx(0.5).margin(1e-12));
    CHECK(norm_sq == Catch::Approx(0.5).margin(1e-15));
    CHECK((fused.state.matrix - expected * expected.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(fidelity(fused.state, ghz_state(4)) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("two fusions turn three pairs into the six-photon GHZ state", "[optics]") {
    const PureState product = tensor({epr_phi_plus(), epr_phi_plus(), epr_phi_plus()});
    const FusionOutcome first = pbs_fusion(density_matrix(product), 2, 3, 1.0);
    const FusionOutcome second = pbs_fusion(first.state, 4, 5, 1.0);
    CHECK(first.success_probability * second.success_probability ==
          Catch::Approx(0.25).margin(1e-12));
    CHECK(fidelity(second.state, ghz_state(6)) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("distinguishable photons keep counts but lose coherence", "[optics]") {
    const PureState product = tensor({epr_phi_plus(), epr_phi_plus(), epr_phi_plus()});
    const MixedState rho = density_matrix(product);

    auto pipeline = [&](double v) {
        const FusionOutcome a = pbs_fusion(rho, 2, 3, v);
        return pbs_fusion(a.state, 4, 5, v);
    };
    const FusionOutcome coherent = pipeline(1.0);
    const FusionOutcome scrambled = pipeline(0.0);

    // H/V-basis diagonal identical, x-y plane coherence gone.
    CHECK((coherent.state.matrix.diagonal() - scrambled.state.matrix.diagonal())
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
    CHECK(std::abs(expectation(scrambled.state, mn_power(0, 6))) <= 1e-12);
    CHECK(expectation(coherent.state, mn_power(0, 6)) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("success probability does not depend on the overlap", "[optics]") {
    const PureState product = tensor({epr_phi_plus(), epr_phi_plus()});
    const MixedState rho = density_matrix(product);
    const double p1 = pbs_fusion(rho, 2, 3, 1.0).success_probability;
    for (double v : {0.0, 0.3, 0.72, 0.9}) {
        CHECK(pbs_fusion(rho, 2, 3, v).success_probability == p1);
    }
}

TEST_CASE("fidelity grows with the photon overlap", "[optics]") {
    const PureState product = tensor({epr_phi_plus(), epr_phi_plus()});
    const MixedState rho = density_matrix(product);
    double last = -1.0;
    for (double v : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double f = fidelity(pbs_fusion(rho, 2, 3, v).state, ghz_state(4));
        CHECK(f >= last - 1e-14);
        last = f;
    }
    CHECK(last == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("post-selection can annihilate the state", "[optics]") {
    const PureState hv = tensor({ket_h(), ket_v()});
    CHECK_THROWS_AS(pbs_fusion(density_matrix(hv), 1, 2, 1.0), std::runtime_error);
    CHECK_THROWS_AS(pbs_fusion(density_matrix(hv), 1, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pbs_fusion(density_matrix(hv), 1, 2, 1.5), std::invalid_argument);
}

TEST_CASE("the GHZ preset produces the GHZ state at quarter probability", "[optics]") {
    const FusionOutcome out = build_setup(SetupConfig::preset(SetupPreset::ghz6),
                                          NoiseModel::ideal());
    CHECK(out.success_probability == Catch::Approx(0.25).margin(1e-12));
    CHECK(fidelity(out.state, ghz_state(6)) >= 1.0 - 1e-10);
}

TEST_CASE("the cluster preset produces the cluster state at quarter probability", "[optics]") {
    const FusionOutcome out = build_setup(SetupConfig::preset(SetupPreset::cluster6),
                                          NoiseModel::ideal());
    CHECK(out.success_probability == Catch::Approx(0.25).margin(1e-12));
    CHECK(fidelity(out.state, cluster_state_six()) >= 1.0 - 1e-10);
}

TEST_CASE("preset outputs match their graphs up to local Hadamards", "[optics]") {
    auto top_eigenvector = [](const MixedState& rho) {
        Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix);
        Vec v = es.eigenvectors().col(rho.dim() - 1);
        return PureState(rho.n_qubits, std::move(v));
    };
    const FusionOutcome ghz = build_setup(SetupConfig::preset(SetupPreset::ghz6),
                                          NoiseModel::ideal());
    CHECK(lu_hadamard_equivalent(top_eigenvector(ghz.state), named_graph(NamedGraph::star6),
                                 {2, 3, 4, 5, 6}));
    const FusionOutcome cl = build_setup(SetupConfig::preset(SetupPreset::cluster6),
                                         NoiseModel::ideal());
    CHECK(lu_hadamard_equivalent(top_eigenvector(cl.state), named_graph(NamedGraph::c6_graph),
                                 {1, 3, 4, 6}));
}

TEST_CASE("degraded overlaps leave the fidelity strictly between half and one", "[optics]") {
    NoiseModel noise;
    noise.fusion_overlap = {0.72, 0.72};
    const FusionOutcome out = build_setup(SetupConfig::preset(SetupPreset::ghz6), noise);
    const double f = fidelity(out.state, ghz_state(6));
    CHECK(f > 0.5);
    CHECK(f < 1.0);
}

TEST_CASE("source declaration order does not matter", "[optics]") {
    SetupConfig shuffled = SetupConfig::preset(SetupPreset::cluster6);
    shuffled.sources = {{3, 4}, {5, 6}, {1, 2}};
    const FusionOutcome a = build_setup(SetupConfig::preset(SetupPreset::cluster6),
                                        NoiseModel::ideal());
    const FusionOutcome b = build_setup(shuffled, NoiseModel::ideal());
    CHECK((a.state.matrix - b.state.matrix).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("wiring validation", "[optics]") {
    SetupConfig missing_mode;
    missing_mode.sources = {{1, 2}, {3, 4}, {3, 5}};
    CHECK_THROWS_AS(build_setup(missing_mode, NoiseModel::ideal()), std::invalid_argument);

    SetupConfig overlapping_fusions = SetupConfig::preset(SetupPreset::ghz6);
    overlapping_fusions.fusions = {{2, 3}, {3, 4}};
    CHECK_THROWS_AS(build_setup(overlapping_fusions, NoiseModel::ideal()), std::invalid_argument);
}

TEST_CASE("without post-selection the trace carries the probability", "[optics]") {
    SetupConfig config = SetupConfig::preset(SetupPreset::ghz6);
    config.postselect = false;
    const FusionOutcome out = build_setup(config, NoiseModel::ideal());
    CHECK_FALSE(out.state.normalized);
    CHECK(out.state.matrix.trace().real() == Catch::Approx(0.25).margin(1e-12));
}

// --- multi-pair emissions ------------------------------------------------------

namespace {

// Independent oracle for the GHZ preset: with no wave plate the PBS network is
// a pure mode permutation, so emission patterns push through as probability
// weights with no interference.  Enumerate them directly.
Eigen::VectorXd counting_oracle_ghz(double lambda) {
    Eigen::VectorXd bins = Eigen::VectorXd::Zero(64);
    for (int n1 = 0; n1 <= 2; ++n1) {
        for (int n2 = 0; n2 <= 2; ++n2) {
            for (int n3 = 0; n3 <= 2; ++n3) {
                const int total = n1 + n2 + n3;
                if (total != 3 && total != 4) continue;
                const double weight = std::pow(lambda * lambda, total - 3);
                const int n[3] = {n1, n2, n3};
                int k[3];
                for (k[0] = 0; k[0] <= n[0]; ++k[0]) {
                    for (k[1] = 0; k[1] <= n[1]; ++k[1]) {
                        for (k[2] = 0; k[2] <= n[2]; ++k[2]) {
                            // Photon multiset per (spatial, pol): sources feed
                            // (1,2), (3,4), (5,6); V photons swap 2<->3, 4<->5.
                            int occ[7][2] = {};
                            for (int s = 0; s < 3; ++s) {
                                const int a = 2 * s + 1, b = 2 * s + 2;
                                for (int m : {a, b}) {
                                    int out_h = m, out_v = m;
                                    if (m == 2) out_v = 3;
                                    if (m == 3) out_v = 2;
                                    if (m == 4) out_v = 5;
                                    if (m == 5) out_v = 4;
                                    occ[out_h][0] += k[s];
                                    occ[out_v][1] += n[s] - k[s];
                                }
                            }
                            bool sixfold = true;
                            for (int m = 1; m <= 6; ++m) {
                                if (occ[m][0] + occ[m][1] == 0) sixfold = false;
                            }
                            if (!sixfold) continue;
                            std::vector<int> outcomes = {0};
                            for (int m = 1; m <= 6; ++m) {
                                std::vector<int> next;
                                for (int o : outcomes) {
                                    if (occ[m][0] > 0) next.push_back(o);
                                    if (occ[m][1] > 0) next.push_back(o | (1 << (6 - m)));
                                }
                                outcomes = std::move(next);
                            }
                            for (int o : outcomes) bins(o) += weight;
                        }
                    }
                }
            }
        }
    }
    return bins / bins.sum();
}

}  // namespace

TEST_CASE("vanishing pump strength leaves only the ideal coincidences", "[optics]") {
    const Eigen::VectorXd p = higher_order_coincidences(0.0, SetupPreset::ghz6);
    CHECK(p(0) == Catch::Approx(0.5).margin(1e-12));
    CHECK(p(63) == Catch::Approx(0.5).margin(1e-12));
    CHECK(p.sum() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("double emissions populate wrong-polarization bins", "[optics]") {
    const Eigen::VectorXd p = higher_order_coincidences(0.1, SetupPreset::ghz6);
    CHECK(p.sum() == Catch::Approx(1.0).margin(1e-12));
    double off = 0.0;
    for (int o = 1; o < 63; ++o) off += p(o);
    CHECK(off > 0.0);

    // H <-> V relabeling symmetry.
    for (int o = 0; o < 64; ++o) {
        CHECK(p(o) == Catch::Approx(p(63 - o)).margin(1e-12));
    }
}

TEST_CASE("the GHZ-preset distribution matches the combinatorial oracle", "[optics]") {
    for (double lambda : {0.05, 0.1, 0.2}) {
        const Eigen::VectorXd got = higher_order_coincidences(lambda, SetupPreset::ghz6);
        const Eigen::VectorXd expected = counting_oracle_ghz(lambda);
        CHECK((got - expected).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("the cluster preset reproduces the four ideal outcomes", "[optics]") {
    const Eigen::VectorXd p = higher_order_coincidences(0.0, SetupPreset::cluster6);
    for (int o : {0b000000, 0b000111, 0b111000, 0b111111}) {
        CHECK(p(o) == Catch::Approx(0.25).margin(1e-12));
    }
    const Eigen::VectorXd noisy = higher_order_coincidences(0.1, SetupPreset::cluster6);
    CHECK(noisy.sum() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("pump strength is bounded", "[optics]") {
    CHECK_THROWS_AS(higher_order_coincidences(0.5, SetupPreset::ghz6), std::invalid_argument);
    CHECK_THROWS_AS(higher_order_coincidences(-0.1, SetupPreset::ghz6), std::invalid_argument);
}
