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

#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gslab/qalgebra.hpp"

namespace gslab {

enum class WaveplateKind { HWP, QWP };

struct WaveplateSpec {
    int mode = 0;
    WaveplateKind kind = WaveplateKind::HWP;
    double angle_deg = 0.0;
};

enum class SetupPreset { ghz6, cluster6 };

inline SetupPreset preset_from_string(std::string_view name) {
    if (name == "ghz6") return SetupPreset::ghz6;
    if (name == "cluster6") return SetupPreset::cluster6;
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

/// Declarative description of the tabletop: three photon-pair sources, wave
/// plates on single modes, then polarizing-beam-splitter fusions in order.
struct SetupConfig {
    std::vector<std::pair<int, int>> sources = {{1, 2}, {3, 4}, {5, 6}};
    std::vector<WaveplateSpec> waveplates;
    std::vector<std::pair<int, int>> fusions = {{2, 3}, {4, 5}};
    bool postselect = true;

    static SetupConfig preset(SetupPreset which) {
        SetupConfig c;
        if (which == SetupPreset::cluster6) {
            // The Hadamard on mode 4 ahead of the second fusion turns the GHZ
            // pipeline into the cluster-state one.
            c.waveplates.push_back({4, WaveplateKind::HWP, 22.5});
        }
        return c;
    }

    void validate() const {
        detail::require(sources.size() == 3, "SetupConfig: need exactly three sources");
        std::set<int> seen;
        for (auto [a, b] : sources) {
            detail::require(a >= 1 && a <= 6 && b >= 1 && b <= 6 && a != b,
                            "SetupConfig: source modes out of range");
            detail::require(seen.insert(a).second && seen.insert(b).second,
                            "SetupConfig: mode used by more than one source");
        }
        detail::require(seen.size() == 6, "SetupConfig: sources must wire modes 1..6");
        for (const auto& wp : waveplates) {
            detail::require(wp.mode >= 1 && wp.mode <= 6, "SetupConfig: waveplate mode out of range");
        }
        std::set<int> fused;
        for (auto [a, b] : fusions) {
            detail::require(a >= 1 && a <= 6 && b >= 1 && b <= 6 && a != b,
                            "SetupConfig: fusion modes out of range");
            detail::require(fused.insert(a).second && fused.insert(b).second,
                            "SetupConfig: fusion pairs must be disjoint");
        }
    }
};

/// Imperfection knobs: two-basis pair visibilities, one photon-overlap value
/// per fusion, and the pair-generation strength for the multi-pair model.
struct NoiseModel {
    double pair_visibility_hv = 1.0;
    double pair_visibility_pm = 1.0;
    std::vector<double> fusion_overlap;  // defaults to 1.0 per fusion
    double pair_amplitude = 0.0;         // lambda

    static NoiseModel ideal() { return {}; }

    void validate() const {
        detail::require(pair_visibility_hv >= 0.0 && pair_visibility_hv <= 1.0,
                        "NoiseModel: pair_visibility_hv out of [0,1]");
        detail::require(pair_visibility_pm >= 0.0 && pair_visibility_pm <= 1.0,
                        "NoiseModel: pair_visibility_pm out of [0,1]");
        for (double v : fusion_overlap) {
            detail::require(v >= 0.0 && v <= 1.0, "NoiseModel: fusion overlap out of [0,1]");
        }
        detail::require(pair_amplitude >= 0.0, "NoiseModel: pair amplitude must be >= 0");
    }

    double overlap_for_fusion(size_t index) const {
        return index < fusion_overlap.size() ? fusion_overlap[index] : 1.0;
    }
};

/// Post-selected fusion output plus the probability of surviving selection.
struct FusionOutcome {
    MixedState state;
    double success_probability = 1.0;
};

/// Two-photon source output.  The two measured visibilities fix a Bell-diagonal
/// mixture: a bit-flip admixture q_x = (1 - v_hv)/2 sets the H/V correlation
/// and a dephasing admixture q_z = (1 - v_pm)/2 sets the +/- correlation, so
/// <ZZ> = v_hv and <XX> = v_pm exactly.
inline MixedState epr_pair(const NoiseModel& noise) {
    noise.validate();
    const double qx = (1.0 - noise.pair_visibility_hv) / 2.0;
    const double qz = (1.0 - noise.pair_visibility_pm) / 2.0;

    auto bell = [](int z_parity, int sign) {
        Vec v = Vec::Zero(4);
        if (z_parity == 0) {
            v(0b00) = 1.0 / std::sqrt(2.0);
            v(0b11) = sign / std::sqrt(2.0);
        } else {
            v(0b01) = 1.0 / std::sqrt(2.0);
            v(0b10) = sign / std::sqrt(2.0);
        }
        return v;
    };

    Mat rho = Mat::Zero(4, 4);
    const double w[4] = {(1 - qx) * (1 - qz), (1 - qx) * qz, qx * (1 - qz), qx * qz};
    const Vec kets[4] = {bell(0, +1), bell(0, -1), bell(1, +1), bell(1, -1)};
    for (int i = 0; i < 4; ++i) rho += w[i] * (kets[i] * kets[i].adjoint());
    return MixedState(2, std::move(rho));
}

/// Jones matrices.  HWP(theta) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]];
/// QWP(theta) retards the slow axis by a quarter wave with the fast axis at
/// theta from horizontal.
inline Mat2 waveplate_unitary(WaveplateKind kind, double angle_deg) {
    const double t = angle_deg * std::numbers::pi / 180.0;
    Mat2 m;
    if (kind == WaveplateKind::HWP) {
        m << std::cos(2 * t), std::sin(2 * t), std::sin(2 * t), -std::cos(2 * t);
        return m;
    }
    Mat2 rot, ret;
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    ret << 1.0, 0.0, 0.0, cxd(0, 1);
    return rot * ret * rot.transpose();
}

/// Conjugate a single-qubit unitary onto one mode of an n-qubit state.
inline MixedState apply_single_qubit(const MixedState& rho, int mode, const Mat2& u) {
    const int n = rho.n_qubits;
    detail::require(mode >= 1 && mode <= n, "apply_single_qubit: mode out of range");
    const int d = rho.dim();
    const int stride = 1 << bit_position(n, mode);
    Mat left = Mat::Zero(d, d);
    // Row transform: left = (U on mode) * rho
    for (int i = 0; i < d; ++i) {
        const int bi = (i & stride) ? 1 : 0;
        const int partner = i ^ stride;
        for (int j = 0; j < d; ++j) {
            left(i, j) = u(bi, bi) * rho.matrix(i, j) + u(bi, 1 - bi) * rho.matrix(partner, j);
        }
    }
    Mat out = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        const int bj = (j & stride) ? 1 : 0;
        const int partner = j ^ stride;
        for (int i = 0; i < d; ++i) {
            out(i, j) =
                left(i, j) * std::conj(u(bj, bj)) + left(i, partner) * std::conj(u(bj, 1 - bj));
        }
    }
    return MixedState(n, std::move(out), rho.normalized);
}

/// Polarizing-beam-splitter fusion of two modes with photon overlap v.
///
/// With K = |HH><HH| + |VV><VV| on (a, b), the output is proportional to
/// v K rho K + (1 - v)(P_HH rho P_HH + P_VV rho P_VV): same-parity blocks
/// survive untouched, cross-parity coherences are scaled by v.  The trace
/// before renormalization is the post-selection probability and does not
/// depend on v.
inline FusionOutcome pbs_fusion(const MixedState& rho, int mode_a, int mode_b, double overlap) {
    const int n = rho.n_qubits;
    detail::require(mode_a >= 1 && mode_a <= n && mode_b >= 1 && mode_b <= n && mode_a != mode_b,
                    "pbs_fusion: invalid modes");
    detail::require(overlap >= 0.0 && overlap <= 1.0, "pbs_fusion: overlap out of [0,1]");
    const int d = rho.dim();
    const int mask_a = 1 << bit_position(n, mode_a);
    const int mask_b = 1 << bit_position(n, mode_b);

    // -1: killed by post-selection, else the shared parity bit.
    auto parity = [&](int idx) -> int {
        const bool a = idx & mask_a, b = idx & mask_b;
        if (a != b) return -1;
        return a ? 1 : 0;
    };

    Mat out = Mat::Zero(d, d);
    double trace = 0.0;
    for (int i = 0; i < d; ++i) {
        const int pi = parity(i);
        if (pi < 0) continue;
        trace += rho.matrix(i, i).real();
        for (int j = 0; j < d; ++j) {
            const int pj = parity(j);
            if (pj < 0) continue;
            out(i, j) = rho.matrix(i, j) * (pi == pj ? 1.0 : overlap);
        }
    }
    if (trace < 1e-15) {
        throw std::runtime_error("pbs_fusion: empty post-selection (success probability 0)");
    }
    out /= trace;
    return FusionOutcome{MixedState(n, std::move(out)), trace};
}

/// Full pipeline: sources -> wave plates -> fusions in order -> post-selection.
/// The overall success probability is the product of the conditional fusion
/// traces.  With postselect = false the returned state carries the overall
/// probability as its trace instead of being renormalized.
inline FusionOutcome build_setup(const SetupConfig& config, const NoiseModel& noise) {
    config.validate();
    noise.validate();

    // Tensor the pairs in declared order, then permute qubit slots to modes.
    MixedState pair = epr_pair(noise);
    Mat rho6 = Eigen::kroneckerProduct(pair.matrix,
                                       Eigen::kroneckerProduct(pair.matrix, pair.matrix).eval())
                   .eval();
    std::vector<int> slot_mode;  // slot index (0-based, MSB first) -> mode label
    for (auto [a, b] : config.sources) {
        slot_mode.push_back(a);
        slot_mode.push_back(b);
    }
    bool already_ordered = true;
    for (int s = 0; s < 6; ++s) already_ordered = already_ordered && slot_mode[s] == s + 1;
    if (!already_ordered) {
        // index remap: mode bit of the target index comes from the slot that
        // carries that mode.
        auto remap = [&](int idx) {
            int out = 0;
            for (int s = 0; s < 6; ++s) {
                const int bit = (idx >> (5 - s)) & 1;
                out |= bit << bit_position(6, slot_mode[s]);
            }
            return out;
        };
        Mat permuted = Mat::Zero(64, 64);
        for (int i = 0; i < 64; ++i) {
            for (int j = 0; j < 64; ++j) permuted(remap(i), remap(j)) = rho6(i, j);
        }
        rho6 = std::move(permuted);
    }

    MixedState state(6, std::move(rho6));
    for (const auto& wp : config.waveplates) {
        state = apply_single_qubit(state, wp.mode, waveplate_unitary(wp.kind, wp.angle_deg));
    }

    double probability = 1.0;
    for (size_t f = 0; f < config.fusions.size(); ++f) {
        FusionOutcome step =
            pbs_fusion(state, config.fusions[f].first, config.fusions[f].second,
                       noise.overlap_for_fusion(f));
        probability *= step.success_probability;
        state = std::move(step.state);
    }

    if (!config.postselect) {
        state = MixedState(6, state.matrix * probability, /*is_normalized=*/false);
    }
    return FusionOutcome{std::move(state), probability};
}

// --- Multi-pair emission model ------------------------------------------------
//
// Sixfold coincidence distribution in the H/V basis when each source can emit
// up to two photon pairs per pulse.  Emission patterns are enumerated at the
// Fock level (the n-pair component of a source carries amplitude lambda^n for
// each split into H-pairs and V-pairs), pushed through the wave plate and PBS
// network as creation-operator transforms, and detected by threshold detectors
// behind per-mode polarization analyzers.  A mode holding both polarizations
// fires both analyzer outputs, so such an event registers in every compatible
// outcome bin.

namespace detail {

struct FockTerm {
    std::array<int, 12> occupation{};  // (spatial-1)*2 + pol, pol: 0 = H, 1 = V
    cxd amplitude{1.0, 0.0};
};

inline int fock_mode(int spatial, int pol) { return (spatial - 1) * 2 + pol; }

// Expand one creation operator (a linear combination over output modes) into
// an existing polynomial of Fock monomials.
inline std::vector<FockTerm> multiply_in(const std::vector<FockTerm>& terms,
                                         const std::vector<std::pair<int, cxd>>& op) {
    std::vector<FockTerm> out;
    out.reserve(terms.size() * op.size());
    for (const auto& t : terms) {
        for (const auto& [mode, coeff] : op) {
            FockTerm nt = t;
            nt.occupation[mode] += 1;
            nt.amplitude *= coeff;
            out.push_back(nt);
        }
    }
    return out;
}

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace detail

/// H/V-basis sixfold outcome distribution including double-pair emissions,
/// truncated at four pairs total (second order per source).
inline Eigen::VectorXd higher_order_coincidences(double lambda, SetupPreset preset) {
    detail::require(lambda >= 0.0 && lambda <= 0.3,
                    "higher_order_coincidences: lambda out of [0, 0.3]");

    // Creation-operator transform of each input mode through (optional HWP on
    // mode 4, cluster preset) followed by PBS routing: transmitted H keeps its
    // spatial index, reflected V crosses to the partner output.
    auto routed = [](int spatial, int pol) {
        int out_spatial = spatial;
        if (pol == 1) {
            if (spatial == 2) out_spatial = 3;
            else if (spatial == 3) out_spatial = 2;
            else if (spatial == 4) out_spatial = 5;
            else if (spatial == 5) out_spatial = 4;
        }
        return detail::fock_mode(out_spatial, pol);
    };
    auto input_op = [&](int spatial, int pol) {
        std::vector<std::pair<int, cxd>> op;
        if (preset == SetupPreset::cluster6 && spatial == 4) {
            Mat2 h = waveplate_unitary(WaveplateKind::HWP, 22.5);
            for (int q = 0; q < 2; ++q) {
                cxd c = h(q, pol);
                if (std::abs(c) > 0) op.push_back({routed(spatial, q), c});
            }
        } else {
            op.push_back({routed(spatial, pol), cxd(1.0, 0.0)});
        }
        return op;
    };

    const std::array<std::pair<int, int>, 3> source_modes = {{{1, 2}, {3, 4}, {5, 6}}};
    Eigen::VectorXd bins = Eigen::VectorXd::Zero(64);

    // Pattern weights are quoted relative to the triple-single-pair order, so
    // the lambda -> 0 limit stays finite.
    for (int n1 = 0; n1 <= 2; ++n1) {
        for (int n2 = 0; n2 <= 2; ++n2) {
            for (int n3 = 0; n3 <= 2; ++n3) {
                const int total = n1 + n2 + n3;
                if (total != 3 && total != 4) continue;
                const double relative_amp = std::pow(lambda, total - 3);
                const std::array<int, 3> n = {n1, n2, n3};
                // k_s = number of H pairs from source s.
                std::array<int, 3> k{};
                for (k[0] = 0; k[0] <= n[0]; ++k[0]) {
                    for (k[1] = 0; k[1] <= n[1]; ++k[1]) {
                        for (k[2] = 0; k[2] <= n[2]; ++k[2]) {
                            std::vector<detail::FockTerm> terms(1);
                            double coeff = relative_amp;
                            for (int s = 0; s < 3; ++s) {
                                coeff /= detail::factorial(k[s]) * detail::factorial(n[s] - k[s]);
                                auto [ma, mb] = source_modes[s];
                                for (int rep = 0; rep < k[s]; ++rep) {
                                    terms = detail::multiply_in(terms, input_op(ma, 0));
                                    terms = detail::multiply_in(terms, input_op(mb, 0));
                                }
                                for (int rep = 0; rep < n[s] - k[s]; ++rep) {
                                    terms = detail::multiply_in(terms, input_op(ma, 1));
                                    terms = detail::multiply_in(terms, input_op(mb, 1));
                                }
                            }
                            // Collect amplitudes per output occupation.
                            std::map<std::array<int, 12>, cxd> collected;
                            for (const auto& t : terms) collected[t.occupation] += t.amplitude;
                            for (const auto& [occ, amp] : collected) {
                                double norm_sq = std::norm(amp * coeff);
                                if (norm_sq == 0.0) continue;
                                for (int m = 0; m < 12; ++m) {
                                    norm_sq *= detail::factorial(occ[m]);
                                }
                                // Threshold detection: outcome o registers iff
                                // every mode holds a photon of polarization o_i.
                                std::array<int, 6> choices;  // 0:H, 1:V, 2:both, -1:none
                                bool sixfold = true;
                                for (int sp = 1; sp <= 6; ++sp) {
                                    const bool h = occ[detail::fock_mode(sp, 0)] > 0;
                                    const bool v = occ[detail::fock_mode(sp, 1)] > 0;
                                    if (!h && !v) { sixfold = false; break; }
                                    choices[sp - 1] = h && v ? 2 : (v ? 1 : 0);
                                }
                                if (!sixfold) continue;
                                std::vector<int> outcomes = {0};
                                for (int sp = 1; sp <= 6; ++sp) {
                                    const int bitpos = bit_position(6, sp);
                                    std::vector<int> next;
                                    for (int o : outcomes) {
                                        if (choices[sp - 1] == 0 || choices[sp - 1] == 2)
                                            next.push_back(o);
                                        if (choices[sp - 1] == 1 || choices[sp - 1] == 2)
                                            next.push_back(o | (1 << bitpos));
                                    }
                                    outcomes = std::move(next);
                                }
                                for (int o : outcomes) bins(o) += norm_sq;
                            }
                        }
                    }
                }
            }
        }
    }

    const double total = bins.sum();
    detail::require(total > 0.0, "higher_order_coincidences: no sixfold events");
    return bins / total;
}

}  // namespace gslab
