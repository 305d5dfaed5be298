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

#include <cstdint>

#include "gslab/qalgebra.hpp"

namespace gslab {

/// splitmix64: the counter-based generator behind every sampled number in this
/// library.  State advances by the 64-bit golden ratio; each output is the
/// finalizer of the new state.  Fixed here as a bit-exact contract so count
/// records reproduce across platforms and implementations.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        state += kGolden;
        return mix(state);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe under log().
    double next_double_open() { return (double(next() >> 11) + 1.0) * 0x1.0p-53; }
};

/// Independent stream seed for sub-task `index` of a master seed.  Parallel
/// and serial execution agree because each stream is derived, not shared.
inline std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t index) {
    return SplitMix64::mix(master + (index + 1) * SplitMix64::kGolden);
}

inline double gaussian(SplitMix64& rng) {
    const double u1 = rng.next_double_open();
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline PureState random_pure_state(int n_qubits, SplitMix64& rng) {
    Vec v(dim_for(n_qubits));
    for (int i = 0; i < v.size(); ++i) v(i) = cxd(gaussian(rng), gaussian(rng));
    v /= v.norm();
    return PureState(n_qubits, std::move(v));
}

/// Full-rank random density matrix, G G^dag normalized.
inline MixedState random_mixed_state(int n_qubits, SplitMix64& rng) {
    const int d = dim_for(n_qubits);
    Mat g(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) g(i, j) = cxd(gaussian(rng), gaussian(rng));
    }
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = ((rho + rho.adjoint()) / 2.0).eval();
    return MixedState(n_qubits, std::move(rho));
}

/// Product of single-qubit states cos(t)|H> + e^{i p} sin(t)|V>.
inline PureState random_product_state(int n_qubits, SplitMix64& rng) {
    Vec v = Vec::Ones(1);
    for (int q = 0; q < n_qubits; ++q) {
        const double t = std::acos(std::clamp(1.0 - 2.0 * rng.next_double(), -1.0, 1.0)) / 2.0;
        const double p = 2.0 * std::numbers::pi * rng.next_double();
        Vec q1(2);
        q1 << std::cos(t), std::exp(cxd(0, p)) * std::sin(t);
        v = Eigen::kroneckerProduct(v, q1).eval();
    }
    return PureState(n_qubits, std::move(v));
}

}  // namespace gslab
