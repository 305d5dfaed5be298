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
#include <vector>

#include "gslab/measurement.hpp"
#include "gslab/rng.hpp"
#include "gslab/witness.hpp"

namespace gslab {

/// One setting's worth of sixfold coincidences: a 64-bin histogram.
struct CountRecord {
    MeasurementSetting setting;
    std::vector<std::int64_t> counts;  // indexed by outcome bitstring
    std::int64_t n_events = 0;
    std::uint64_t seed = 0;
};

struct EstimatedValue {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Multinomial draw from the setting's outcome distribution; bit-exact given
/// the seed (splitmix64 stream, inverse-CDF per event).
inline CountRecord sample_counts(const MixedState& rho, const MeasurementSetting& setting,
                                 std::int64_t n_events, std::uint64_t seed) {
    detail::require(n_events >= 1, "sample_counts: need at least one event");
    const Eigen::VectorXd p = outcome_distribution(rho, setting);
    std::vector<double> cdf(64);
    double acc = 0.0;
    for (int i = 0; i < 64; ++i) {
        acc += p(i);
        cdf[i] = acc;
    }

    CountRecord rec;
    rec.setting = setting;
    rec.counts.assign(64, 0);
    rec.n_events = n_events;
    rec.seed = seed;
    SplitMix64 rng(seed);
    for (std::int64_t e = 0; e < n_events; ++e) {
        const double u = rng.next_double() * acc;
        int bin = int(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (bin > 63) bin = 63;
        rec.counts[bin] += 1;
    }
    return rec;
}

/// Plug-in estimate of a signed-outcome expectation, conditioned on the
/// events that carry a nonzero sign.
inline EstimatedValue parity_expectation(const CountRecord& record,
                                         const std::vector<int>& sign_assignment) {
    detail::require(sign_assignment.size() == 64, "parity_expectation: need 64 signs");
    double sum = 0.0, sum_sq = 0.0;
    std::int64_t effective = 0;
    for (int o = 0; o < 64; ++o) {
        const int s = sign_assignment[o];
        if (s == 0) continue;
        detail::require(s == 1 || s == -1, "parity_expectation: signs must be in {-1,0,1}");
        sum += double(s) * double(record.counts[o]);
        sum_sq += double(record.counts[o]);
        effective += record.counts[o];
    }
    if (effective == 0) {
        throw std::runtime_error("parity_expectation: every event carries sign 0");
    }
    const double mean = sum / double(effective);
    const double second_moment = sum_sq / double(effective);
    const double variance = std::max(0.0, second_moment - mean * mean);
    return EstimatedValue{mean, std::sqrt(variance / double(effective))};
}

/// Signs of a Pauli string under a setting that measures it, per outcome bin.
inline std::vector<int> sign_assignment_for(const PauliString& pauli,
                                            const MeasurementSetting& setting) {
    detail::require(measurable_under(pauli, setting),
                    "sign_assignment_for: string not measurable under setting");
    std::vector<int> signs(64);
    for (int o = 0; o < 64; ++o) signs[o] = outcome_sign(pauli, o);
    return signs;
}

struct ProtocolRun {
    WitnessReport report;
    std::vector<CountRecord> records;             // empty in analytic mode
    std::vector<Eigen::VectorXd> distributions;   // exact Born probabilities
};

/// Sample every setting of a plan (one independent sub-seeded stream each),
/// combine to the witness value, and propagate the per-setting multinomial
/// plug-in errors as a root sum of squares.  Analytic mode skips sampling and
/// evaluates the exact distributions (std_error 0).
inline ProtocolRun run_protocol(const MixedState& rho, const WitnessPlan& plan,
                                std::int64_t n_events_per_setting, std::uint64_t seed,
                                bool analytic = false) {
    detail::require(!plan.settings.empty(), "run_protocol: plan has no settings");
    ProtocolRun run;
    double value = plan.constant;
    double variance = 0.0;
    for (size_t i = 0; i < plan.settings.size(); ++i) {
        const Eigen::VectorXd exact = outcome_distribution(rho, plan.settings[i]);
        run.distributions.push_back(exact);
        const Eigen::VectorXd& w = plan.setting_weights[i];
        if (analytic) {
            value += w.dot(exact);
            continue;
        }
        CountRecord rec = sample_counts(rho, plan.settings[i], n_events_per_setting,
                                        derive_subseed(seed, i));
        Eigen::VectorXd freq(64);
        for (int o = 0; o < 64; ++o) freq(o) = double(rec.counts[o]) / double(rec.n_events);
        const double contribution = w.dot(freq);
        const double second_moment = w.cwiseProduct(w).dot(freq);
        value += contribution;
        variance += std::max(0.0, second_moment - contribution * contribution) /
                    double(rec.n_events);
        run.records.push_back(std::move(rec));
    }
    run.report = WitnessReport::from_value(plan.name, value, std::sqrt(variance));
    return run;
}

// --- Fringe scans ---------------------------------------------------------------

struct FringePoint {
    double phi = 0.0;
    double expectation = 0.0;
};

/// Exact <M_phi^4> over phi in [0, pi] for a four-qubit state.
inline std::vector<FringePoint> fringe_scan(const MixedState& rho4, int n_points) {
    detail::require(rho4.n_qubits == 4, "fringe_scan: need a 4-qubit state");
    detail::require(n_points >= 2, "fringe_scan: need at least two points");
    std::vector<FringePoint> points;
    points.reserve(n_points);
    for (int j = 0; j < n_points; ++j) {
        const double phi = std::numbers::pi * double(j) / double(n_points - 1);
        Mat2 m = xy_plane_observable(phi);
        Mat m4 = Eigen::kroneckerProduct(
                     m, Eigen::kroneckerProduct(m, Eigen::kroneckerProduct(m, m).eval()).eval())
                     .eval();
        points.push_back({phi, expectation(rho4, Observable(4, std::move(m4)))});
    }
    return points;
}

/// Count-fringe contrast (max - min)/(max + min) of the even-parity
/// probability (1 + <M_phi^4>)/2 over the scanned points.
inline double fringe_visibility(const std::vector<FringePoint>& points) {
    detail::require(!points.empty(), "fringe_visibility: no points");
    double lo = points[0].expectation, hi = points[0].expectation;
    for (const auto& pt : points) {
        lo = std::min(lo, pt.expectation);
        hi = std::max(hi, pt.expectation);
    }
    const double pmax = (1.0 + hi) / 2.0, pmin = (1.0 + lo) / 2.0;
    return (pmax - pmin) / (pmax + pmin);
}

}  // namespace gslab
