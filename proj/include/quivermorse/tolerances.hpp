#pragma once

#include <string>

namespace qm {

// Every numerical threshold used by the library. Defaults are the values the
// tests are written against; the CLI can override individual keys.
struct Tolerances {
    double rank_rel = 1e-9;       // singular values below rank_rel * sigma_max count as zero
    double rank_floor = 1e-300;   // floor applied to sigma_max
    double margin_factor = 1e3;   // required separation of kept/dropped singular values
    double grad_tol = 1e-8;
    long max_steps = 100000;
    double h0 = 1e-2;
    double shrink = 0.5;
    double grow = 1.2;
    double h_min = 1e-14;
    double step_err = 1e-10;      // local error bound of the embedded RK pair
    double descent_slack = 1e-14; // relative slack in the f-decrease test (round-off only)
    double critical_tol = 1e-6;   // gradient norm accepted as "critical" by classifiers
    double class_tol_factor = 1e-6;
    double cluster_gap_factor = 1e2;
    double hess_h = 1e-5;
    double hess_tol_factor = 1e-4;
    double angle_tol = 1e-8;
    double flow_line_margin = 1e-6;
    double trace_drift = 1e-6;
    int trace_len = 4;
    int dim_cap = 8;

    // Sets a field by name; throws Error(InvalidParameter) for unknown keys.
    void set(const std::string& key, double value);
    double get(const std::string& key) const;
};

} // namespace qm
