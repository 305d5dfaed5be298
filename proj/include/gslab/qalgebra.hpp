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

#include <bit>
#include <cmath>
#include <complex>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace gslab {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;

// Tolerances shared across the library. Exact-algebra identities are held to
// kAlgebraTol; anything that goes through an eigensolver gets kEigenTol.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kEigenTol = 1e-10;
inline constexpr int kMaxQubits = 12;

inline int dim_for(int n_qubits) { return 1 << n_qubits; }

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline bool is_hermitian(const Mat& m, double tol = kAlgebraTol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline int qubits_for_dim(Eigen::Index d, const char* what) {
    int n = 0;
    while ((Eigen::Index(1) << n) < d) ++n;
    require((Eigen::Index(1) << n) == d, std::string(what) + ": dimension is not a power of two");
    return n;
}

}  // namespace detail

// Convention used everywhere: qubit 1 is the most significant bit of a basis
// index, |H> maps to bit 0 and |V> to bit 1. So |H...H> is index 0 and
// |V...V> is index 2^n - 1.
inline int bit_position(int n_qubits, int qubit) { return n_qubits - qubit; }

inline int bit_of(int index, int n_qubits, int qubit) {
    return (index >> bit_position(n_qubits, qubit)) & 1;
}

/// Dense amplitude vector over n polarization qubits.
struct PureState {
    int n_qubits = 0;
    Vec amplitudes;
    bool normalized = true;

    PureState() = default;
    PureState(int n, Vec amps, bool is_normalized = true)
        : n_qubits(n), amplitudes(std::move(amps)), normalized(is_normalized) {
        detail::require(n >= 1 && n <= kMaxQubits, "PureState: qubit count out of range");
        detail::require(amplitudes.size() == dim_for(n), "PureState: amplitude length != 2^n");
        if (normalized) {
            detail::require(std::abs(amplitudes.squaredNorm() - 1.0) <= kAlgebraTol,
                            "PureState: amplitudes are not normalized");
        }
    }

    int dim() const { return dim_for(n_qubits); }
};

/// Hermitian density matrix over n qubits.  Positivity is not re-checked on
/// every construction (it is an eigensolve); `assert_valid` does the full
/// check and is used at module boundaries and in tests.
struct MixedState {
    int n_qubits = 0;
    Mat matrix;
    bool normalized = true;

    MixedState() = default;
    MixedState(int n, Mat m, bool is_normalized = true)
        : n_qubits(n), matrix(std::move(m)), normalized(is_normalized) {
        detail::require(n >= 1 && n <= kMaxQubits, "MixedState: qubit count out of range");
        detail::require(matrix.rows() == dim_for(n) && matrix.cols() == dim_for(n),
                        "MixedState: matrix is not 2^n x 2^n");
        detail::require(detail::is_hermitian(matrix), "MixedState: matrix is not Hermitian");
        if (normalized) {
            detail::require(std::abs(matrix.trace().real() - 1.0) <= kAlgebraTol &&
                                std::abs(matrix.trace().imag()) <= kAlgebraTol,
                            "MixedState: trace != 1");
        }
    }

    int dim() const { return dim_for(n_qubits); }

    void assert_valid(double eig_tol = kEigenTol) const {
        Eigen::SelfAdjointEigenSolver<Mat> es(matrix, Eigen::EigenvaluesOnly);
        detail::require(es.eigenvalues()(0) >= -eig_tol, "MixedState: negative eigenvalue");
    }
};

inline MixedState density_matrix(const PureState& psi) {
    return MixedState(psi.n_qubits, psi.amplitudes * psi.amplitudes.adjoint(), psi.normalized);
}

/// Hermitian observable with a human-readable label.
struct Observable {
    int n_qubits = 0;
    Mat matrix;
    std::string label;

    Observable() = default;
    Observable(int n, Mat m, std::string lbl = "")
        : n_qubits(n), matrix(std::move(m)), label(std::move(lbl)) {
        detail::require(n >= 1 && n <= kMaxQubits, "Observable: qubit count out of range");
        detail::require(matrix.rows() == dim_for(n) && matrix.cols() == dim_for(n),
                        "Observable: matrix is not 2^n x 2^n");
        detail::require(detail::is_hermitian(matrix), "Observable: matrix is not Hermitian");
    }

    int dim() const { return dim_for(n_qubits); }

    static Observable identity(int n, std::string lbl = "I") {
        return Observable(n, Mat::Identity(dim_for(n), dim_for(n)), std::move(lbl));
    }
};

inline Observable projector_observable(const PureState& psi, std::string label = "") {
    return Observable(psi.n_qubits, psi.amplitudes * psi.amplitudes.adjoint(), std::move(label));
}

// --- Pauli strings -----------------------------------------------------------

enum class Pauli : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

inline Mat2 pauli_matrix(Pauli p) {
    Mat2 m;
    switch (p) {
        case Pauli::I: m << 1, 0, 0, 1; break;
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, cxd(0, -1), cxd(0, 1), 0; break;
        case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

/// Signed tensor product of single-qubit Paulis, e.g. "-ZZIIII".
struct PauliString {
    std::vector<Pauli> letters;
    int phase = +1;  // +1 or -1

    PauliString() = default;
    PauliString(std::vector<Pauli> ls, int ph = +1) : letters(std::move(ls)), phase(ph) {
        detail::require(phase == 1 || phase == -1, "PauliString: phase must be +1 or -1");
        detail::require(!letters.empty() && int(letters.size()) <= kMaxQubits,
                        "PauliString: bad length");
    }

    static PauliString parse(std::string_view s) {
        int ph = +1;
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
            ph = (s.front() == '-') ? -1 : +1;
            s.remove_prefix(1);
        }
        std::vector<Pauli> ls;
        ls.reserve(s.size());
        for (char c : s) {
            switch (c) {
                case 'I': ls.push_back(Pauli::I); break;
                case 'X': ls.push_back(Pauli::X); break;
                case 'Y': ls.push_back(Pauli::Y); break;
                case 'Z': ls.push_back(Pauli::Z); break;
                default: throw std::invalid_argument("PauliString: unknown letter");
            }
        }
        return PauliString(std::move(ls), ph);
    }

    int n_qubits() const { return int(letters.size()); }

    bool is_identity() const {
        for (Pauli p : letters)
            if (p != Pauli::I) return false;
        return true;
    }

    std::string str() const {
        std::string out = phase < 0 ? "-" : "";
        for (Pauli p : letters) out.push_back(char(p));
        return out;
    }

    /// Two Pauli strings commute iff they anticommute on an even number of
    /// positions.
    bool commutes_with(const PauliString& other) const {
        detail::require(letters.size() == other.letters.size(), "PauliString: length mismatch");
        int anti = 0;
        for (size_t i = 0; i < letters.size(); ++i) {
            Pauli a = letters[i], b = other.letters[i];
            if (a != Pauli::I && b != Pauli::I && a != b) ++anti;
        }
        return anti % 2 == 0;
    }

    Mat matrix() const {
        Mat m = pauli_matrix(letters[0]);
        for (size_t i = 1; i < letters.size(); ++i) {
            m = Eigen::kroneckerProduct(m, pauli_matrix(letters[i])).eval();
        }
        return double(phase) * m;
    }

    Observable to_observable() const { return Observable(n_qubits(), matrix(), str()); }
};

// --- Core operations ---------------------------------------------------------

inline PureState tensor(std::span<const PureState> parts) {
    detail::require(!parts.empty(), "tensor: no parts");
    int total = 0;
    bool normalized = true;
    for (const auto& p : parts) {
        total += p.n_qubits;
        normalized = normalized && p.normalized;
    }
    detail::require(total <= kMaxQubits, "tensor: total qubit count exceeds limit");
    Vec v = parts[0].amplitudes;
    for (size_t i = 1; i < parts.size(); ++i) {
        v = Eigen::kroneckerProduct(v, parts[i].amplitudes).eval();
    }
    return PureState(total, std::move(v), normalized);
}

inline PureState tensor(std::initializer_list<PureState> parts) {
    return tensor(std::span<const PureState>(parts.begin(), parts.size()));
}

inline Observable tensor(std::span<const Observable> parts) {
    detail::require(!parts.empty(), "tensor: no parts");
    int total = 0;
    std::string label;
    for (const auto& p : parts) {
        total += p.n_qubits;
        if (!label.empty()) label += "*";
        label += p.label;
    }
    detail::require(total <= kMaxQubits, "tensor: total qubit count exceeds limit");
    Mat m = parts[0].matrix;
    for (size_t i = 1; i < parts.size(); ++i) {
        m = Eigen::kroneckerProduct(m, parts[i].matrix).eval();
    }
    return Observable(total, std::move(m), std::move(label));
}

inline Observable tensor(std::initializer_list<Observable> parts) {
    return tensor(std::span<const Observable>(parts.begin(), parts.size()));
}

namespace detail {

inline double real_with_small_imag(cxd z, const char* what) {
    require(std::abs(z.imag()) <= kEigenTol, std::string(what) + ": imaginary residue too large");
    return z.real();
}

}  // namespace detail

inline double expectation(const PureState& psi, const Observable& obs) {
    detail::require(psi.n_qubits == obs.n_qubits, "expectation: dimension mismatch");
    cxd val = (psi.amplitudes.adjoint() * obs.matrix * psi.amplitudes)(0, 0);
    return detail::real_with_small_imag(val, "expectation");
}

inline double expectation(const MixedState& rho, const Observable& obs) {
    detail::require(rho.n_qubits == obs.n_qubits, "expectation: dimension mismatch");
    cxd val = (obs.matrix * rho.matrix).trace();
    return detail::real_with_small_imag(val, "expectation");
}

/// <psi|rho|psi>, the fidelity of a mixed state against a pure target.
inline double fidelity(const MixedState& rho, const PureState& target) {
    detail::require(rho.n_qubits == target.n_qubits, "fidelity: dimension mismatch");
    cxd val = (target.amplitudes.adjoint() * rho.matrix * target.amplitudes)(0, 0);
    return detail::real_with_small_imag(val, "fidelity");
}

inline MixedState partial_trace(const MixedState& rho, const std::set<int>& keep) {
    detail::require(!keep.empty(), "partial_trace: keep set is empty");
    const int n = rho.n_qubits;
    for (int q : keep) {
        detail::require(q >= 1 && q <= n, "partial_trace: qubit index out of range");
    }
    std::vector<int> kept(keep.begin(), keep.end());  // ascending labels
    std::vector<int> traced;
    for (int q = 1; q <= n; ++q) {
        if (!keep.count(q)) traced.push_back(q);
    }
    if (traced.empty()) return rho;

    const int nk = int(kept.size());
    const int nt = int(traced.size());
    const int dk = dim_for(nk);
    const int dt = 1 << nt;

    // Original index for (kept-subindex r, traced-subindex t); both subindices
    // keep the original qubit order, most significant first.
    auto embed = [&](int r, int t) {
        int idx = 0;
        for (int j = 0; j < nk; ++j) {
            idx |= ((r >> (nk - 1 - j)) & 1) << bit_position(n, kept[j]);
        }
        for (int j = 0; j < nt; ++j) {
            idx |= ((t >> (nt - 1 - j)) & 1) << bit_position(n, traced[j]);
        }
        return idx;
    };

    Mat out = Mat::Zero(dk, dk);
    for (int r = 0; r < dk; ++r) {
        for (int c = 0; c < dk; ++c) {
            cxd acc = 0;
            for (int t = 0; t < dt; ++t) acc += rho.matrix(embed(r, t), embed(c, t));
            out(r, c) = acc;
        }
    }
    // Hermiticity can pick up rounding at the 1e-16 level; symmetrize.
    out = ((out + out.adjoint()) / 2.0).eval();
    return MixedState(nk, std::move(out), rho.normalized);
}

inline double min_eigenvalue(const Observable& obs) {
    Eigen::SelfAdjointEigenSolver<Mat> es(obs.matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// State equality up to a single global phase: max over phases of the overlap
/// must be within tol of 1.
inline bool equal_up_to_phase(const PureState& a, const PureState& b, double tol = kEigenTol) {
    detail::require(a.n_qubits == b.n_qubits, "equal_up_to_phase: dimension mismatch");
    double overlap = std::abs((a.amplitudes.adjoint() * b.amplitudes)(0, 0));
    double na = a.amplitudes.norm(), nb = b.amplitudes.norm();
    if (na == 0.0 || nb == 0.0) return false;
    return overlap / (na * nb) >= 1.0 - tol;
}

// --- Stock states ------------------------------------------------------------

inline PureState basis_state(int n, int index) {
    detail::require(index >= 0 && index < dim_for(n), "basis_state: index out of range");
    Vec v = Vec::Zero(dim_for(n));
    v(index) = 1.0;
    return PureState(n, std::move(v));
}

inline PureState ket_h() { return basis_state(1, 0); }
inline PureState ket_v() { return basis_state(1, 1); }

inline PureState ket_plus() {
    Vec v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return PureState(1, std::move(v));
}

inline PureState ket_minus() {
    Vec v(2);
    v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    return PureState(1, std::move(v));
}

/// (|HH> + |VV>)/sqrt(2)
inline PureState epr_phi_plus() {
    Vec v = Vec::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return PureState(2, std::move(v));
}

/// (|H..H> + |V..V>)/sqrt(2) on n qubits.
inline PureState ghz_state(int n) {
    detail::require(n >= 2 && n <= kMaxQubits, "ghz_state: qubit count out of range");
    Vec v = Vec::Zero(dim_for(n));
    v(0) = v(dim_for(n) - 1) = 1.0 / std::sqrt(2.0);
    return PureState(n, std::move(v));
}

/// The six-photon cluster state
/// (|HHHHHH> + |HHHVVV> + |VVVHHH> - |VVVVVV>)/2.
inline PureState cluster_state_six() {
    Vec v = Vec::Zero(64);
    v(0b000000) = 0.5;
    v(0b000111) = 0.5;
    v(0b111000) = 0.5;
    v(0b111111) = -0.5;
    return PureState(6, std::move(v));
}

}  // namespace gslab
