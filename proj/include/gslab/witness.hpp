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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gslab/graphs.hpp"
#include "gslab/measurement.hpp"
#include "gslab/rng.hpp"

namespace gslab {

/// The sign-flipped companion of the six-photon cluster state,
/// (-|HHHHHH> + |HHHVVV> + |VVVHHH> + |VVVVVV>)/2.
inline PureState cluster_state_six_signflip() {
    Vec v = Vec::Zero(64);
    v(0b000000) = -0.5;
    v(0b000111) = 0.5;
    v(0b111000) = 0.5;
    v(0b111111) = 0.5;
    return PureState(6, std::move(v));
}

/// A witness observable together with the local settings that measure it.
/// The combined value is constant + sum_i <weights_i, outcome probabilities_i>
/// and equals Tr(W rho) for every state.
struct WitnessPlan {
    std::string name;  // "W_G" or "W_C_tilde" on the wire
    Observable observable;
    PureState target;            // the pure state the witness is built around
    bool fidelity_is_exact = false;  // exact fidelity vs lower bound
    std::vector<MeasurementSetting> settings;
    std::vector<Eigen::VectorXd> setting_weights;  // one 64-vector per setting
    double constant = 0.0;

    double combine(const std::vector<Eigen::VectorXd>& probabilities) const {
        detail::require(probabilities.size() == settings.size(),
                        "WitnessPlan: probability vector count mismatch");
        double value = constant;
        for (size_t i = 0; i < settings.size(); ++i) {
            detail::require(probabilities[i].size() == 64, "WitnessPlan: need 64 probabilities");
            value += setting_weights[i].dot(probabilities[i]);
        }
        return value;
    }

    /// Exact value on a state, via the analytic outcome distributions.
    double evaluate_analytic(const MixedState& rho) const {
        std::vector<Eigen::VectorXd> probs;
        probs.reserve(settings.size());
        for (const auto& s : settings) probs.push_back(outcome_distribution(rho, s));
        return combine(probs);
    }
};

/// Evaluated witness with counting statistics.
struct WitnessReport {
    std::string witness_name;
    double value = 0.0;
    double std_error = 0.0;
    double fidelity_bound = 0.0;  // 1/2 - value
    bool genuine_multipartite = false;
    double sigmas_below_zero = 0.0;

    static WitnessReport from_value(const std::string& name, double value, double std_error) {
        WitnessReport r;
        r.witness_name = name;
        r.value = value;
        r.std_error = std_error;
        r.fidelity_bound = 0.5 - value;
        r.genuine_multipartite = value < 0.0;
        r.sigmas_below_zero = -value / std_error;  // +/-inf in analytic mode
        return r;
    }
};

/// GHZ witness I/2 - |G6><G6| as seven local settings: the H/V projector pair
/// from Z^6 and the x-y plane tensor powers M(n)^6 with alternating signs.
inline WitnessPlan ghz_witness_plan() {
    WitnessPlan plan;
    plan.name = "W_G";
    plan.target = ghz_state(6);
    plan.fidelity_is_exact = true;
    Mat proj = plan.target.amplitudes * plan.target.amplitudes.adjoint();
    plan.observable = Observable(6, Mat::Identity(64, 64) / 2.0 - proj, "W_G");
    plan.constant = 0.5;

    plan.settings.push_back(MeasurementSetting::uniform(LocalMeasurement::z(), "Z^6"));
    Eigen::VectorXd wz = Eigen::VectorXd::Zero(64);
    wz(0) = wz(63) = -0.5;
    plan.setting_weights.push_back(wz);

    for (int n = -2; n <= 3; ++n) {
        plan.settings.push_back(MeasurementSetting::uniform(
            LocalMeasurement::m(n), "M(" + std::to_string(n) + ")^6"));
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        Eigen::VectorXd w(64);
        for (int o = 0; o < 64; ++o) {
            const double parity = (std::popcount(unsigned(o)) % 2 == 0) ? 1.0 : -1.0;
            w(o) = -sign * parity / 12.0;
        }
        plan.setting_weights.push_back(w);
    }
    return plan;
}

namespace detail {

/// Projector onto the joint +1 eigenspace of a commuting generator triple.
inline Mat joint_plus_projector(const std::vector<PauliString>& generators) {
    Mat p = Mat::Identity(64, 64);
    for (const auto& g : generators) {
        p = (p * (Mat::Identity(64, 64) + g.matrix()) / 2.0).eval();
    }
    return p;
}

// Z-diagonal sign of |VVV><VVV| - |HHH><HHH| on a bit triple: -1 for 000,
// +1 for 111, 0 otherwise.
inline double code_sign(int bits) {
    if (bits == 0b000) return -1.0;
    if (bits == 0b111) return 1.0;
    return 0.0;
}

}  // namespace detail

/// Cluster-state witness I/2 - |C6><C6| + |C6~><C6~| as six local settings.
///
/// The two stabilizer triples contribute joint +1 projectors measured in
/// Z Z Z X X X and X X X Z Z Z; those settings also carry the Z-diagonal
/// penalty I - |HHH><HHH| - |VVV><VVV| on the triple they measure in Z.  The
/// four mixed settings Z^3 M(+-1)^3 and M(+-1)^3 Z^3 assemble the cross terms
/// via signed Z outcomes on one triple times the x-y parity on the other,
/// scaled by 1/(2 sqrt(3)).
inline WitnessPlan cluster_witness_plan() {
    WitnessPlan plan;
    plan.name = "W_C_tilde";
    plan.target = cluster_state_six();
    plan.fidelity_is_exact = false;

    const PureState shifted = cluster_state_six_signflip();
    Mat w = Mat::Identity(64, 64) / 2.0 -
            plan.target.amplitudes * plan.target.amplitudes.adjoint() +
            shifted.amplitudes * shifted.amplitudes.adjoint();
    plan.observable = Observable(6, std::move(w), "W_C_tilde");
    plan.constant = 1.5;

    const MeasurementSetting zzxxx =
        MeasurementSetting::split(LocalMeasurement::z(), LocalMeasurement::x(), "Z^3 X^3");
    const MeasurementSetting xxxzz =
        MeasurementSetting::split(LocalMeasurement::x(), LocalMeasurement::z(), "X^3 Z^3");

    // Partition the stabilizer generators by which of the two settings
    // measures them; the combined value does not depend on the labeling.
    std::vector<PauliString> triple_zx, triple_xz;
    for (const auto& g : stabilizers_of_c6().generators) {
        if (measurable_under(g, zzxxx)) {
            triple_zx.push_back(g);
        } else {
            detail::require(measurable_under(g, xxxzz),
                            "cluster_witness_plan: generator fits neither setting");
            triple_xz.push_back(g);
        }
    }
    detail::require(triple_zx.size() == 3 && triple_xz.size() == 3,
                    "cluster_witness_plan: generators did not split into triples");

    auto triple_weights = [](const std::vector<PauliString>& triple, bool penalty_on_first) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(64);
        for (int o = 0; o < 64; ++o) {
            bool all_plus = true;
            for (const auto& g : triple) all_plus = all_plus && outcome_sign(g, o) == +1;
            if (all_plus) w(o) -= 1.0;
            const int bits = penalty_on_first ? (o >> 3) : (o & 0b111);
            if (bits != 0b000 && bits != 0b111) w(o) -= 0.5;
        }
        return w;
    };
    plan.settings.push_back(zzxxx);
    plan.setting_weights.push_back(triple_weights(triple_zx, /*penalty_on_first=*/true));
    plan.settings.push_back(xxxzz);
    plan.setting_weights.push_back(triple_weights(triple_xz, /*penalty_on_first=*/false));

    const double scale = 1.0 / (2.0 * std::sqrt(3.0));
    for (int n : {1, -1}) {
        MeasurementSetting s = MeasurementSetting::split(
            LocalMeasurement::z(), LocalMeasurement::m(n),
            "Z^3 M(" + std::to_string(n) + ")^3");
        Eigen::VectorXd w(64);
        for (int o = 0; o < 64; ++o) {
            const double parity = (std::popcount(unsigned(o & 0b111)) % 2 == 0) ? 1.0 : -1.0;
            w(o) = -scale * detail::code_sign(o >> 3) * parity;
        }
        plan.settings.push_back(std::move(s));
        plan.setting_weights.push_back(std::move(w));
    }
    for (int n : {1, -1}) {
        MeasurementSetting s = MeasurementSetting::split(
            LocalMeasurement::m(n), LocalMeasurement::z(),
            "M(" + std::to_string(n) + ")^3 Z^3");
        Eigen::VectorXd w(64);
        for (int o = 0; o < 64; ++o) {
            const double parity = (std::popcount(unsigned(o >> 3)) % 2 == 0) ? 1.0 : -1.0;
            w(o) = -scale * parity * detail::code_sign(o & 0b111);
        }
        plan.settings.push_back(std::move(s));
        plan.setting_weights.push_back(std::move(w));
    }
    return plan;
}

/// The cluster witness assembled from its operator ingredients instead of the
/// closed form: (3/2)I - P_odd - P_even - (I (x) A0 + A0 (x) I)/2
/// - (A1 (x) B1 + B1 (x) A1).  Used to cross-check cluster_witness_plan.
inline Observable cluster_witness_from_operators() {
    const MeasurementSetting zzxxx =
        MeasurementSetting::split(LocalMeasurement::z(), LocalMeasurement::x(), "Z^3 X^3");
    std::vector<PauliString> triple_zx, triple_xz;
    for (const auto& g : stabilizers_of_c6().generators) {
        (measurable_under(g, zzxxx) ? triple_zx : triple_xz).push_back(g);
    }

    const Mat i8 = Mat::Identity(8, 8);
    Mat hhh = Mat::Zero(8, 8), vvv = Mat::Zero(8, 8);
    hhh(0, 0) = 1.0;
    vvv(7, 7) = 1.0;
    const Mat a0 = i8 - hhh - vvv;
    const Mat a1 = vvv - hhh;
    auto m_cubed = [](int n) {
        Mat2 m = xy_plane_observable(n * std::numbers::pi / 6.0);
        return Eigen::kroneckerProduct(m, Eigen::kroneckerProduct(m, m).eval()).eval();
    };
    const Mat b1 = (m_cubed(1) + m_cubed(-1)) / (2.0 * std::sqrt(3.0));

    Mat w = 1.5 * Mat::Identity(64, 64);
    w -= detail::joint_plus_projector(triple_zx);
    w -= detail::joint_plus_projector(triple_xz);
    w -= 0.5 * Eigen::kroneckerProduct(i8, a0).eval();
    w -= 0.5 * Eigen::kroneckerProduct(a0, i8).eval();
    w -= Eigen::kroneckerProduct(a1, b1).eval();
    w -= Eigen::kroneckerProduct(b1, a1).eval();
    w = ((w + w.adjoint()) / 2.0).eval();
    return Observable(6, std::move(w), "W_C_tilde (operator form)");
}

inline WitnessPlan witness_plan_by_name(std::string_view name) {
    if (name == "ghz" || name == "W_G") return ghz_witness_plan();
    if (name == "cluster" || name == "W_C_tilde") return cluster_witness_plan();
    throw std::invalid_argument("witness plan: unknown name '" + std::string(name) + "'");
}

struct FidelityEstimate {
    double value = 0.0;
    bool is_lower_bound = false;
};

/// F = 1/2 - <W>.  Exact for the GHZ witness, a lower bound for the cluster
/// witness.
inline FidelityEstimate fidelity_from_witness(const WitnessPlan& plan, double witness_value) {
    return FidelityEstimate{0.5 - witness_value, !plan.fidelity_is_exact};
}

/// p target + (1-p) I/2^n.
inline MixedState white_noise_state(const PureState& target, double p) {
    detail::require(p >= 0.0 && p <= 1.0, "white_noise_state: p out of [0,1]");
    const int d = target.dim();
    Mat rho = p * (target.amplitudes * target.amplitudes.adjoint()) +
              (1.0 - p) / double(d) * Mat::Identity(d, d);
    return MixedState(target.n_qubits, std::move(rho));
}

/// Largest admixture of white noise the witness still detects: bisection on
/// Tr(W rho(p)) = 0 over p in [0,1], accurate to 1e-9.
inline double noise_threshold(const WitnessPlan& plan, const MixedState& target) {
    detail::require(plan.observable.n_qubits == target.n_qubits,
                    "noise_threshold: dimension mismatch");
    const int d = target.dim();
    auto value_at = [&](double p) {
        const Mat rho = p * target.matrix + (1.0 - p) / double(d) * Mat::Identity(d, d);
        return expectation(MixedState(target.n_qubits, rho), plan.observable);
    };
    double lo = 0.0, hi = 1.0;
    double flo = value_at(lo), fhi = value_at(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) {
        throw std::runtime_error("noise_threshold: no sign change over [0, 1]");
    }
    while (hi - lo > 1e-9) {
        const double mid = (lo + hi) / 2.0;
        const double fmid = value_at(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0) == (flo > 0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2.0;
}

inline double noise_threshold(const WitnessPlan& plan, const PureState& target) {
    return noise_threshold(plan, density_matrix(target));
}

// --- Validation ----------------------------------------------------------------

struct WitnessCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
};

struct WitnessDiagnostics {
    std::vector<WitnessCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

/// Largest squared Schmidt coefficient of a pure state over all 31 one-vs-rest
/// and group-vs-group bipartitions: the best overlap any biseparable pure
/// state can have with it.
inline double max_bipartite_overlap(const PureState& psi) {
    detail::require(psi.n_qubits == 6, "max_bipartite_overlap: need 6 qubits");
    double best = 0.0;
    for (int mask = 1; mask < 64; ++mask) {
        if (!(mask & 0b100000)) continue;  // fix qubit 1 on one side; 31 splits
        if (mask == 0b111111) continue;
        std::vector<int> side_a, side_b;
        for (int q = 1; q <= 6; ++q) {
            ((mask >> bit_position(6, q)) & 1 ? side_a : side_b).push_back(q);
        }
        const int da = dim_for(int(side_a.size()));
        const int db = dim_for(int(side_b.size()));
        Mat reshaped(da, db);
        for (int r = 0; r < da; ++r) {
            for (int c = 0; c < db; ++c) {
                int idx = 0;
                for (size_t j = 0; j < side_a.size(); ++j) {
                    idx |= ((r >> (int(side_a.size()) - 1 - int(j))) & 1)
                           << bit_position(6, side_a[j]);
                }
                for (size_t j = 0; j < side_b.size(); ++j) {
                    idx |= ((c >> (int(side_b.size()) - 1 - int(j))) & 1)
                           << bit_position(6, side_b[j]);
                }
                reshaped(r, c) = psi.amplitudes(idx);
            }
        }
        const double top = Eigen::JacobiSVD<Mat>(reshaped).singularValues()(0);
        best = std::max(best, top * top);
    }
    return best;
}

/// Structural checks that the plan really is a witness measured correctly:
/// the combiner reproduces the dense trace on random mixed states, the
/// cluster surplus over I/2 - |C6><C6| is positive semidefinite, and for the
/// GHZ witness the I/2 offset is tight across every bipartition.
inline WitnessDiagnostics validate_witness(const WitnessPlan& plan) {
    WitnessDiagnostics diag;

    SplitMix64 rng(0x57A717C5u);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const MixedState rho = random_mixed_state(6, rng);
        const double combined = plan.evaluate_analytic(rho);
        const double direct = expectation(rho, plan.observable);
        worst = std::max(worst, std::abs(combined - direct));
    }
    diag.checks.push_back({"combiner_matches_matrix", worst <= 1e-9, worst});

    if (plan.name == "W_C_tilde") {
        const PureState c6 = cluster_state_six();
        Mat base = Mat::Identity(64, 64) / 2.0 - c6.amplitudes * c6.amplitudes.adjoint();
        Mat surplus = plan.observable.matrix - base;
        surplus = ((surplus + surplus.adjoint()) / 2.0).eval();
        const double min_eig = min_eigenvalue(Observable(6, std::move(surplus)));
        diag.checks.push_back({"surplus_psd", min_eig >= -kEigenTol, min_eig});
    }
    if (plan.name == "W_G") {
        const double overlap = max_bipartite_overlap(plan.target);
        diag.checks.push_back(
            {"offset_tight_across_bipartitions", std::abs(overlap - 0.5) <= kEigenTol, overlap});
    }
    return diag;
}

}  // namespace gslab
