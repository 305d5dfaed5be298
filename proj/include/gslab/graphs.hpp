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

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "gslab/qalgebra.hpp"

namespace gslab {

/// Simple undirected graph on vertices 1..n, no self-loops, no duplicates.
struct Graph {
    int n_vertices = 0;
    std::set<std::pair<int, int>> edges;  // stored with first < second

    Graph() = default;
    Graph(int n, const std::vector<std::pair<int, int>>& edge_list) : n_vertices(n) {
        detail::require(n >= 1 && n <= kMaxQubits, "Graph: vertex count out of range");
        for (auto [a, b] : edge_list) {
            detail::require(a >= 1 && a <= n && b >= 1 && b <= n, "Graph: vertex out of range");
            detail::require(a != b, "Graph: self-loop");
            if (a > b) std::swap(a, b);
            detail::require(edges.insert({a, b}).second, "Graph: duplicate edge");
        }
    }
};

/// A set of commuting +/- Pauli strings that jointly pin down one state.
struct StabilizerSet {
    std::vector<PauliString> generators;
};

/// |+>^n followed by one controlled-phase diag(1,1,1,-1) per edge.
inline PureState graph_to_state(const Graph& g) {
    const int n = g.n_vertices;
    const int d = dim_for(n);
    Vec v = Vec::Constant(d, 1.0 / std::sqrt(double(d)));
    for (auto [a, b] : g.edges) {
        for (int i = 0; i < d; ++i) {
            if (bit_of(i, n, a) && bit_of(i, n, b)) v(i) = -v(i);
        }
    }
    return PureState(n, std::move(v));
}

/// Generator for vertex v is X_v times Z on every neighbor of v.
inline StabilizerSet stabilizer_generators(const Graph& g) {
    StabilizerSet out;
    for (int v = 1; v <= g.n_vertices; ++v) {
        std::vector<Pauli> letters(g.n_vertices, Pauli::I);
        letters[v - 1] = Pauli::X;
        for (auto [a, b] : g.edges) {
            if (a == v) letters[b - 1] = Pauli::Z;
            if (b == v) letters[a - 1] = Pauli::Z;
        }
        out.generators.emplace_back(std::move(letters), +1);
    }
    return out;
}

/// Stabilizer generators of the six-photon cluster state, indexed by qubit.
/// The odd triple {g1,g3,g5} is jointly measurable in Z Z Z X X X and the even
/// triple {g2,g4,g6} in X X X Z Z Z.
inline StabilizerSet stabilizers_of_c6() {
    StabilizerSet out;
    out.generators = {
        PauliString::parse("ZZIIII"),  // g1
        PauliString::parse("XXXZII"),  // g2
        PauliString::parse("IZZIII"),  // g3
        PauliString::parse("IIIZZI"),  // g4
        PauliString::parse("ZIIXXX"),  // g5
        PauliString::parse("IIIIZZ"),  // g6
    };
    return out;
}

/// Apply a Hadamard to each listed qubit of a state.
inline PureState apply_hadamards(const PureState& psi, const std::set<int>& qubits) {
    const int n = psi.n_qubits;
    for (int q : qubits) {
        detail::require(q >= 1 && q <= n, "apply_hadamards: qubit out of range");
    }
    Vec v = psi.amplitudes;
    const double r = 1.0 / std::sqrt(2.0);
    for (int q : qubits) {
        const int stride = 1 << bit_position(n, q);
        Vec w(v.size());
        for (int i = 0; i < v.size(); ++i) {
            const int j = i ^ stride;
            if (i & stride) {
                w(i) = r * (v(j) - v(i));
            } else {
                w(i) = r * (v(i) + v(j));
            }
        }
        v.swap(w);
    }
    return PureState(n, std::move(v), psi.normalized);
}

/// True iff (H on the listed vertices) applied to the graph state of g equals
/// psi up to a global phase.
inline bool lu_hadamard_equivalent(const PureState& psi, const Graph& g,
                                   const std::set<int>& hadamard_on) {
    detail::require(psi.n_qubits == g.n_vertices, "lu_hadamard_equivalent: dimension mismatch");
    PureState candidate = apply_hadamards(graph_to_state(g), hadamard_on);
    return equal_up_to_phase(psi, candidate, kEigenTol);
}

enum class NamedGraph { star6, linear6, y6, c6_graph };

inline NamedGraph named_graph_from_string(std::string_view name) {
    if (name == "star6") return NamedGraph::star6;
    if (name == "linear6") return NamedGraph::linear6;
    if (name == "y6") return NamedGraph::y6;
    if (name == "c6_graph") return NamedGraph::c6_graph;
    throw std::invalid_argument("named_graph: unknown name '" + std::string(name) + "'");
}

/// The named six-vertex graphs used throughout:
///  - star6: central vertex 1 connected to 2..6 (GHZ up to local Hadamards)
///  - linear6: the path 1-2-3-4-5-6
///  - y6: path 1-2-3-4-5 plus edge (3,6); a convention, the single
///    degree-3-vertex tree we ship under this name
///  - c6_graph: two three-vertex paths 1-2-3 and 4-5-6 bridged by (2,5); the
///    cluster state equals its graph state up to Hadamards on {1,3,4,6}
inline Graph named_graph(NamedGraph which) {
    switch (which) {
        case NamedGraph::star6:
            return Graph(6, {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}});
        case NamedGraph::linear6:
            return Graph(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}});
        case NamedGraph::y6:
            return Graph(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 6}});
        case NamedGraph::c6_graph:
            return Graph(6, {{1, 2}, {2, 3}, {2, 5}, {4, 5}, {5, 6}});
    }
    throw std::logic_error("named_graph: unreachable");
}

inline Graph named_graph(std::string_view name) {
    return named_graph(named_graph_from_string(name));
}

inline const std::vector<std::string>& named_graph_names() {
    static const std::vector<std::string> names = {"star6", "linear6", "y6", "c6_graph"};
    return names;
}

}  // namespace gslab
