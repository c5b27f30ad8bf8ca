#include "quivermorse/tolerances.hpp"

#include "quivermorse/errors.hpp"

#include <map>

namespace qm {

namespace {

template <typename F>
void visit(Tolerances& t, F&& f) {
    f("rank_rel", t.rank_rel);
    f("rank_floor", t.rank_floor);
    f("margin_factor", t.margin_factor);
    f("grad_tol", t.grad_tol);
    f("max_steps", t.max_steps);
    f("h0", t.h0);
    f("shrink", t.shrink);
    f("grow", t.grow);
    f("h_min", t.h_min);
    f("step_err", t.step_err);
    f("descent_slack", t.descent_slack);
    f("critical_tol", t.critical_tol);
    f("class_tol_factor", t.class_tol_factor);
    f("cluster_gap_factor", t.cluster_gap_factor);
    f("hess_h", t.hess_h);
    f("hess_tol_factor", t.hess_tol_factor);
    f("angle_tol", t.angle_tol);
    f("flow_line_margin", t.flow_line_margin);
    f("trace_drift", t.trace_drift);
    f("trace_len", t.trace_len);
    f("dim_cap", t.dim_cap);
}

} // namespace

void Tolerances::set(const std::string& key, double value) {
    bool found = false;
    visit(*this, [&](const char* name, auto& field) {
        if (key == name) {
            field = static_cast<std::remove_reference_t<decltype(field)>>(value);
            found = true;
        }
    });
    if (!found) throw Error(ErrorCode::InvalidParameter, "unknown tolerance key '" + key + "'");
}

double Tolerances::get(const std::string& key) const {
    double out = 0.0;
    bool found = false;
    visit(const_cast<Tolerances&>(*this), [&](const char* name, auto& field) {
        if (key == name) {
            out = static_cast<double>(field);
            found = true;
        }
    });
    if (!found) throw Error(ErrorCode::InvalidParameter, "unknown tolerance key '" + key + "'");
    return out;
}

} // namespace qm
