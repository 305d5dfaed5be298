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

#include <array>
#include <numbers>
#include <string>

#include "gslab/qalgebra.hpp"

namespace gslab {

/// cos(n pi/6) sigma_x + sin(n pi/6) sigma_y, the x-y plane measurement family.
/// M(0) is sigma_x and M(3) is sigma_y.
inline Mat2 xy_plane_observable(double phi) {
    Mat2 m;
    m << 0.0, std::exp(cxd(0, -phi)), std::exp(cxd(0, phi)), 0.0;
    return m;
}

/// One single-qubit measurement choice: Z, X, or M(n) with n in [-2, 3].
struct LocalMeasurement {
    enum class Kind { Z, X, M };
    Kind kind = Kind::Z;
    int m_index = 0;

    static LocalMeasurement z() { return {Kind::Z, 0}; }
    static LocalMeasurement x() { return {Kind::X, 0}; }
    static LocalMeasurement m(int n) {
        detail::require(n >= -2 && n <= 3, "LocalMeasurement: M index must be in [-2, 3]");
        return {Kind::M, n};
    }

    double phase_angle() const { return m_index * std::numbers::pi / 6.0; }

    Mat2 observable() const {
        switch (kind) {
            case Kind::Z: return pauli_matrix(Pauli::Z);
            case Kind::X: return pauli_matrix(Pauli::X);
            case Kind::M: return xy_plane_observable(phase_angle());
        }
        throw std::logic_error("LocalMeasurement: unreachable");
    }

    /// 2x2 matrix whose rows are the eigenbras; row 0 is the +1 eigenvector,
    /// so outcome bit 0 always means eigenvalue +1.
    Mat2 eigenbasis() const {
        const double r = 1.0 / std::sqrt(2.0);
        Mat2 b;
        switch (kind) {
            case Kind::Z:
                b << 1, 0, 0, 1;
                return b;
            case Kind::X:
                b << r, r, r, -r;
                return b;
            case Kind::M: {
                // +1 eigenvector is (|H> + e^{i phi}|V>)/sqrt(2)
                cxd e = std::exp(cxd(0, -phase_angle()));
                b << r, r * e, r, -r * e;
                return b;
            }
        }
        throw std::logic_error("LocalMeasurement: unreachable");
    }

    std::string label() const {
        switch (kind) {
            case Kind::Z: return "Z";
            case Kind::X: return "X";
            case Kind::M: return "M(" + std::to_string(m_index) + ")";
        }
        throw std::logic_error("LocalMeasurement: unreachable");
    }
};

/// A full six-qubit local measurement setting.
struct MeasurementSetting {
    std::array<LocalMeasurement, 6> qubits;
    std::string label;

    static MeasurementSetting uniform(LocalMeasurement m, std::string lbl) {
        MeasurementSetting s;
        s.qubits.fill(m);
        s.label = std::move(lbl);
        return s;
    }

    /// One choice on qubits 1-3, another on qubits 4-6.
    static MeasurementSetting split(LocalMeasurement first, LocalMeasurement second,
                                    std::string lbl) {
        MeasurementSetting s;
        for (int i = 0; i < 3; ++i) s.qubits[i] = first;
        for (int i = 3; i < 6; ++i) s.qubits[i] = second;
        s.label = std::move(lbl);
        return s;
    }

    /// 64x64 rotation mapping the joint eigenbasis onto the computational one.
    Mat rotation() const {
        Mat u = qubits[0].eigenbasis();
        for (int i = 1; i < 6; ++i) {
            u = Eigen::kroneckerProduct(u, qubits[i].eigenbasis()).eval();
        }
        return u;
    }

    /// Tensor product of the six single-qubit observables (oracle use).
    Observable observable() const {
        Mat m = qubits[0].observable();
        for (int i = 1; i < 6; ++i) {
            m = Eigen::kroneckerProduct(m, qubits[i].observable()).eval();
        }
        return Observable(6, std::move(m), label);
    }
};

/// Born probabilities of the 64 joint outcomes; outcome bit 0 on a qubit means
/// the +1 eigenvalue of that qubit's observable.
inline Eigen::VectorXd outcome_distribution(const MixedState& rho,
                                            const MeasurementSetting& setting) {
    detail::require(rho.n_qubits == 6, "outcome_distribution: state must have 6 qubits");
    Mat u = setting.rotation();
    Eigen::VectorXd p = (u * rho.matrix * u.adjoint()).diagonal().real();
    // Clamp eigensolver-scale negatives so downstream CDFs stay monotone.
    for (int i = 0; i < p.size(); ++i) {
        if (p(i) < 0) {
            detail::require(p(i) > -kEigenTol, "outcome_distribution: negative probability");
            p(i) = 0.0;
        }
    }
    return p;
}

/// Product of outcome signs over the qubits where `string` is not identity;
/// valid when every non-identity letter matches the setting's observable.
inline int outcome_sign(const PauliString& pauli, int outcome) {
    int sign = pauli.phase;
    for (int q = 1; q <= pauli.n_qubits(); ++q) {
        if (pauli.letters[q - 1] == Pauli::I) continue;
        if (bit_of(outcome, pauli.n_qubits(), q)) sign = -sign;
    }
    return sign;
}

/// True iff every non-identity letter of the Pauli string equals the
/// observable measured on that qubit by the setting.
inline bool measurable_under(const PauliString& pauli, const MeasurementSetting& setting) {
    detail::require(pauli.n_qubits() == 6, "measurable_under: need a 6-qubit string");
    for (int i = 0; i < 6; ++i) {
        Pauli letter = pauli.letters[i];
        if (letter == Pauli::I) continue;
        const LocalMeasurement& m = setting.qubits[i];
        switch (m.kind) {
            case LocalMeasurement::Kind::Z:
                if (letter != Pauli::Z) return false;
                break;
            case LocalMeasurement::Kind::X:
                if (letter != Pauli::X) return false;
                break;
            case LocalMeasurement::Kind::M:
                return false;
        }
    }
    return true;
}

}  // namespace gslab
