#include "quivermorse/verify.hpp"

#include "quivermorse/deformation.hpp"
#include "quivermorse/errors.hpp"
#include "quivermorse/expansion.hpp"
#include "quivermorse/fixtures.hpp"
#include "quivermorse/flow.hpp"
#include "quivermorse/io.hpp"
#include "quivermorse/ledger.hpp"
#include "quivermorse/slice.hpp"
#include "quivermorse/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace qm {

namespace {

constexpr std::size_t kMaxMessages = 5;

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

class Ctx {
public:
    Ctx(const VerifyConfig& cfg, std::string suite) : cfg_(cfg) {
        report_.suite = std::move(suite);
        report_.seed = cfg.seed;
        report_.start = cfg.start;
        report_.trials = cfg.trials > 0 ? cfg.trials : default_trials(report_.suite);
    }

    const Tolerances& tol() const { return cfg_.tol; }
    std::uint64_t seed() const { return cfg_.seed; }
    int first() const { return cfg_.start; }
    int count() const { return report_.trials; }

    std::string repro(int trial) const {
        std::string cmd = "quivermorse verify --suite " + report_.suite + " --seed " + std::to_string(cfg_.seed) +
                          " --start " + std::to_string(trial) + " --trials 1";
        for (const auto& [k, v] : cfg_.overrides) cmd += " --tol." + k + "=" + fmt(v);
        return cmd;
    }

    /// value is compared against bound (value <= bound passes unless ok says otherwise).
    void check(const std::string& name, int trial, bool ok, double value, double bound, const std::string& what = {}) {
        auto& p = get(name);
        ++p.checks;
        if (std::isfinite(value)) p.worst = std::max(p.worst, value);
        else if (!ok) p.worst = std::numeric_limits<double>::infinity();
        p.bound = bound;
        if (ok) return;
        ++p.failures;
        if (p.messages.size() < kMaxMessages) {
            std::string msg = name + " failed at trial " + std::to_string(trial) + " (seed " +
                              std::to_string(cfg_.seed) + "): value " + fmt(value) + ", bound " + fmt(bound);
            if (!what.empty()) msg += "; " + what;
            msg += "; repro: " + repro(trial);
            p.messages.push_back(msg);
        }
    }

    void check_le(const std::string& name, int trial, double value, double bound, const std::string& what = {}) {
        check(name, trial, value <= bound, value, bound, what);
    }

    void check_eq(const std::string& name, int trial, long got, long want, const std::string& what = {}) {
        check(name, trial, got == want, std::fabs(static_cast<double>(got - want)), 0.0,
              "got " + std::to_string(got) + ", expected " + std::to_string(want) + (what.empty() ? "" : "; " + what));
    }

    void margin(const std::string& name, double m) {
        auto& p = get(name);
        if (p.min_margin < 0.0 || m < p.min_margin) p.min_margin = m;
    }

    void reject() { ++report_.rejected; }
    void note(std::string s) { report_.notes.push_back(std::move(s)); }

    /// Runs body once per trial with the trial's own stream; library errors count as failures.
    void trials(const std::function<void(int, Rng&)>& body) {
        for (int t = cfg_.start; t < cfg_.start + report_.trials; ++t) {
            Rng rng(cfg_.seed, report_.suite, static_cast<std::uint64_t>(t));
            try {
                body(t, rng);
                check("no-errors", t, true, 0.0, 0.0);
            } catch (const Error& e) {
                check("no-errors", t, false, 1.0, 0.0, e.what());
            }
        }
    }

    /// Checks that are independent of the trial index; they run with the first trial.
    void once(const std::function<void()>& body) {
        try {
            body();
            check("no-errors", cfg_.start, true, 0.0, 0.0);
        } catch (const Error& e) {
            check("no-errors", cfg_.start, false, 1.0, 0.0, e.what());
        }
    }

    SuiteReport finish() { return std::move(report_); }

private:
    PropertyResult& get(const std::string& name) {
        for (auto& p : report_.properties)
            if (p.name == name) return p;
        PropertyResult p;
        p.name = name;
        report_.properties.push_back(std::move(p));
        return report_.properties.back();
    }

    const VerifyConfig& cfg_;
    SuiteReport report_;
};

DimensionVector random_dims(const Quiver& q, Rng& rng, int lo, int hi) {
    std::vector<int> d(q.num_vertices());
    for (auto& x : d) x = rng.uniform_int(lo, hi);
    return DimensionVector(d);
}

/// Framed dimension vector: 1 at the framing vertex, [lo, hi] elsewhere.
DimensionVector framed_dims(const Quiver& q, Rng& rng, int lo, int hi) {
    auto d = random_dims(q, rng, lo, hi);
    d[*q.framing()] = 1;
    return d;
}

DimensionVector dims_of(const std::vector<int>& d) { return DimensionVector(d); }

std::vector<bool> w_vertices(const Quiver& q) {
    std::vector<bool> avoid(q.num_vertices());
    for (std::size_t k = 0; k < q.num_vertices(); ++k) avoid[k] = q.vertex_id(k).front() == 'W';
    return avoid;
}

double rel_scale(double n) { return 1.0 + n * n; }

bool project_ok(Representation& x, const RelationSet& r) {
    if (r.empty()) return true;
    double res = 0.0;
    x = project_to_relations(x, r, 60, &res);
    return res <= 1e-10 * rel_scale(x.norm());
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : num; }

/// Projector of Rel(v, v) onto the complement of the identity on the relations with t = h.
Mat trace_free_projector(const RelationSet& r, const DimensionVector& v) {
    auto layout = rel_layout(r, v, v);
    auto blocks = layout.zeros();
    bool any = false;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].tail != r[i].head || v[r[i].head] == 0) continue;
        blocks[i].setIdentity();
        any = true;
    }
    auto n = static_cast<Eigen::Index>(layout.size());
    Mat p = Mat::Identity(n, n);
    if (!any) return p;
    Vec z = layout.flatten(blocks).normalized();
    return p - z * z.adjoint();
}

struct PairSpec {
    const char* fixture;
    std::vector<int> v;
    std::vector<int> v_u;
};

// k is always the first (gauge) vertex of these fixtures.
const std::vector<PairSpec>& adjacent_pairs() {
    static const std::vector<PairSpec> pairs = {
        {"jordan", {1, 1}, {0, 1}}, {"jordan", {2, 1}, {0, 1}}, {"jordan", {2, 1}, {1, 1}},
        {"jordan", {3, 1}, {1, 1}}, {"jordan", {3, 1}, {2, 1}}, {"a1", {1, 1}, {0, 1}},
        {"adhm", {2, 1}, {1, 1}},
    };
    return pairs;
}

// Critical points x_u (+) 0 for the Hessian check; these need not bound a flow line.
const std::vector<PairSpec>& critical_pairs() {
    static const std::vector<PairSpec> pairs = [] {
        auto p = adjacent_pairs();
        p.push_back({"a1", {2, 1}, {1, 1}});
        p.push_back({"jordan", {3, 1}, {0, 1}});
        return p;
    }();
    return pairs;
}

// ---------------------------------------------------------------------------------------------

void suite_adjointness(Ctx& c) {
    static const std::vector<std::string> names = {"jordan", "a1", "adhm", "handsaw3", "adhm-ext", "jordan-cubic",
                                                   "edgeless"};
    c.trials([&](int t, Rng& rng) {
        const auto& name = names[static_cast<std::size_t>(t) % names.size()];
        auto qr = fixtures::by_name(name);
        const auto& q = *qr.quiver;
        auto v1 = random_dims(q, rng, 0, 3);
        auto v2 = random_dims(q, rng, 0, 3);
        auto x1 = Representation::random(qr.quiver, v1, rng);
        auto x2 = Representation::random(qr.quiver, v2, rng);
        auto u = LieAlgebraElement::random(v2, v1, rng);
        auto dx = GradedLinearMap::random(qr.quiver, v2, v1, rng);
        const double scale = 1.0 + x1.norm() + x2.norm();
        const std::string where = name + " v1=" + v1.str() + " v2=" + v2.str();

        double d = std::abs(inner(inf_action(x1, x2, u), dx) - inner(u, inf_action_adjoint(x1, x2, dx)));
        c.check_le("rho-pairing", t, safe_ratio(d, scale * u.norm() * dx.norm()), 1e-9, where);

        Vec lhs = inf_action_matrix(x1, x2) * hom0_layout(v2, v1).flatten(u.blocks);
        Vec rhs = hom1_layout(q, v2, v1).flatten(inf_action(x1, x2, u).blocks);
        double m = (lhs - rhs).norm();

        if (relation_set_checks(q, qr.relations).quadratic) {
            auto w = RelationValue::random(qr.relations, v2, v1, rng);
            double e = std::abs(inner(d_nu(x1, x2, qr.relations, dx), w) -
                                inner(dx, d_nu_adjoint(x1, x2, qr.relations, w)));
            c.check_le("dnu-pairing", t, safe_ratio(e, scale * dx.norm() * w.norm()), 1e-9, where);
        }
        Vec dl = d_nu_matrix(x1, x2, qr.relations) * hom1_layout(q, v2, v1).flatten(dx.blocks);
        Vec dr = rel_layout(qr.relations, v2, v1).flatten(d_nu(x1, x2, qr.relations, dx).blocks);
        m = std::max(m, (dl - dr).norm() / std::max(1.0, dx.norm()));
        c.check_le("matrix-forms", t, safe_ratio(m, scale * std::max(1.0, u.norm())), 1e-12, where);

        auto mu = moment_map(x1);
        cplx tr = 0.0;
        for (const auto& b : mu.blocks) tr += b.trace();
        double s = rel_scale(x1.norm());
        c.check_le("moment-trace", t, std::abs(tr) / s, 1e-12, where);
        c.check_le("moment-skew", t, mu.skew_defect() / s, 1e-12, where);
    });
}

void suite_linearization(Ctx& c) {
    static const std::vector<std::string> names = {"jordan", "a1", "handsaw3", "handsaw4", "adhm-ext", "adhm"};
    c.trials([&](int t, Rng& rng) {
        const auto& name = names[static_cast<std::size_t>(t) % names.size()];
        auto qr = fixtures::by_name(name);
        const auto& r = qr.relations;
        auto v1 = random_dims(*qr.quiver, rng, 0, 2);
        auto v2 = random_dims(*qr.quiver, rng, 0, 2);
        auto x1 = Representation::random(qr.quiver, v1, rng);
        auto x2 = Representation::random(qr.quiver, v2, rng);
        auto dx = GradedLinearMap::random(qr.quiver, v2, v1, rng);
        auto X = block_triangular(x1, x2, dx);
        auto n0 = relation_map(direct_sum(x1, x2), r);
        auto n1 = relation_map(X, r);
        auto dn = d_nu(x1, x2, r, dx);
        double res = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            Mat diff = n1.blocks[i] - n0.blocks[i];
            diff.block(0, v1[r[i].tail], v1[r[i].head], v2[r[i].tail]) -= dn.blocks[i];
            res += diff.squaredNorm();
        }
        double s = 1.0 + X.norm();
        c.check_le("linearization-exact", t, std::sqrt(res) / (s * s), 1e-12,
                   name + " v1=" + v1.str() + " v2=" + v2.str());
    });
}

void suite_index(Ctx& c) {
    static const std::vector<std::string> names = {"jordan", "a1", "adhm", "handsaw3", "adhm-ext", "jordan-cubic",
                                                   "edgeless"};
    c.trials([&](int t, Rng& rng) {
        const auto& name = names[static_cast<std::size_t>(t) % names.size()];
        auto qr = fixtures::by_name(name);
        const auto& q = *qr.quiver;
        const auto& r = qr.relations;
        for (int attempt = 0; attempt < 25; ++attempt) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(attempt));
            auto v1 = random_dims(q, sub, 0, 2);
            auto v2 = random_dims(q, sub, 0, 2);
            auto x1 = Representation::random(qr.quiver, v1, sub);
            auto x2 = Representation::random(qr.quiver, v2, sub);
            if (!project_ok(x1, r) || !project_ok(x2, r)) {
                c.reject();
                continue;
            }
            auto rep = deformation_complex(r, x1, x2, c.tol());
            if (rep.min_margin() < c.tol().margin_factor) {
                c.reject();
                continue;
            }
            const std::string where = name + " v1=" + v1.str() + " v2=" + v2.str();
            auto forms = dims_and_forms(q, r, v1, v2);
            c.check_eq("index-identity", t, rep.h0 - rep.h1 + rep.h2, forms.ringel_R, where);
            c.margin("index-identity", rep.min_margin());

            double gram = 0.0, kern = 0.0;
            const double scale = 1.0 + x1.norm() + x2.norm();
            for (std::size_t i = 0; i < rep.slice_basis.size(); ++i) {
                const auto& b = rep.slice_basis[i];
                for (std::size_t j = 0; j < rep.slice_basis.size(); ++j)
                    gram = std::max(gram, std::abs(inner(b, rep.slice_basis[j]) - (i == j ? 1.0 : 0.0)));
                kern = std::max(kern, inf_action_adjoint(x1, x2, b).norm() / scale);
                kern = std::max(kern, d_nu(x1, x2, r, b).norm() / rel_scale(scale));
            }
            c.check_le("slice-orthonormal", t, gram, 1e-10, where);
            c.check_le("slice-in-kernels", t, kern, 1e-8, where);
            return;
        }
        c.check("index-identity", t, false, 0.0, 0.0, "no sample with adequate rank margins in 25 draws");
    });
}

void suite_cokernel(Ctx& c) {
    static const std::vector<std::string> names = {"jordan", "a1", "handsaw3"};
    int nonzero = 0;
    c.trials([&](int t, Rng& rng) {
        const auto& name = names[static_cast<std::size_t>(t) % names.size()];
        auto qr = fixtures::by_name(name);
        const auto& q = *qr.quiver;
        const bool framed = q.framing().has_value();
        for (int attempt = 0; attempt < 30; ++attempt) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(attempt));
            DimensionVector v1 = framed ? framed_dims(q, sub, 0, 2) : random_dims(q, sub, 0, 2);
            if (!framed) {
                for (std::size_t k = 0; k < q.num_vertices(); ++k)
                    v1[k] = q.vertex_id(k).front() == 'V' ? sub.uniform_int(1, 2) : sub.uniform_int(0, 1);
            }
            auto x1 = Representation::random(qr.quiver, v1, sub);
            // Zero blocks give nontrivial image complements; projection keeps the sample on the relation locus.
            for (auto& b : x1.blocks)
                if (sub.bernoulli(0.35)) b.setZero();
            if (sub.bernoulli(0.5) && !project_ok(x1, qr.relations)) {
                c.reject();
                continue;
            }
            bool stable = framed ? is_alpha_stable(x1, canonical_central(q, v1), c.tol())
                                 : is_framing_stable(x1, w_vertices(q), c.tol());
            if (!stable) {
                c.reject();
                continue;
            }
            auto v2 = random_dims(q, sub, 0, 2);
            if (framed) v2[*q.framing()] = sub.uniform_int(0, 1);
            auto chk = coker_dnu_check(qr.relations, x1, v2, c.tol());
            if (chk.rank.margin < c.tol().margin_factor) {
                c.reject();
                continue;
            }
            c.check_eq("cokernel-dimension", t, chk.numeric, chk.formula,
                       name + " v1=" + v1.str() + " v2=" + v2.str() + " perp=" + chk.image_perp.str());
            c.margin("cokernel-dimension", chk.rank.margin);
            if (chk.formula > 0) ++nonzero;
            return;
        }
        c.check("cokernel-dimension", t, false, 0.0, 0.0, "no stable sample with adequate margins in 30 draws");
    });
    c.note(std::to_string(nonzero) + " samples with a nonzero cokernel");
}

/// Random Jordan-fixture start. Half of them are direct sums of a random part on the framed quotient and a
/// random part on a framing-free summand W of the gauge vertex; the zero coupling blocks stay exactly zero
/// along the flow, so the limit stays in the stratum of the start.
Representation flow_start(const QuiverWithRelations& qr, Rng& rng) {
    const auto& q = *qr.quiver;
    std::size_t inf = *q.framing();
    std::size_t g = inf == 0 ? 1 : 0;
    std::vector<int> d(q.num_vertices(), 1);
    d[g] = rng.uniform_int(1, 3);
    auto x = Representation::random(qr.quiver, DimensionVector(d), rng);
    if (rng.bernoulli(0.5)) {
        int w = rng.uniform_int(1, d[g]);
        for (std::size_t a = 0; a < q.num_edges(); ++a) {
            const auto& e = q.edge(a);
            if (e.tail == g && e.head == g) {
                x[a].block(w, 0, d[g] - w, w).setZero();
                x[a].block(0, w, w, d[g] - w).setZero();
            } else if (e.tail == g) {
                x[a].leftCols(w).setZero();
            } else if (e.head == g) {
                x[a].topRows(w).setZero();
            }
        }
    }
    return x;
}

void suite_flow(Ctx& c) {
    auto qr = fixtures::jordan();
    const auto& q = *qr.quiver;
    c.once([&] {
        auto v = dims_of({1, 1});
        auto x = Representation::zero(qr.quiver, v);
        x.at("a")(0, 0) = 1.0;
        x.at("abar")(0, 0) = 1.0;
        auto res = integrate_flow(x, canonical_central(q, v), c.tol());
        double f = energy(res.limit, canonical_central(q, v));
        double gap = res.limit.at("abar").squaredNorm() - res.limit.at("a").squaredNorm();
        int t = c.first();
        c.check("start-converges", t, res.status == FlowStatus::Converged, 0.0, 0.0, to_string(res.status));
        c.check_le("start-f-limit", t, f, 1e-10);
        c.check_le("start-moment-gap", t, std::fabs(gap - 2.0), 1e-5);
    });

    int agree = 0, total = 0;
    c.trials([&](int t, Rng& rng) {
        auto x = flow_start(qr, rng);
        auto alpha = canonical_central(q, x.dims);
        const std::string where = "v=" + x.dims.str();

        Rng fd_rng = rng.fork(1);
        auto dir = GradedLinearMap::random(qr.quiver, x.dims, x.dims, fd_rng);
        const double h = 1e-6;
        auto shifted = [&](double s) {
            auto y = x;
            for (std::size_t a = 0; a < q.num_edges(); ++a) y[a] += s * dir[a];
            return energy(y, alpha);
        };
        double fd = (shifted(h) - shifted(-h)) / (2 * h);
        double an = inner(grad_energy(x, alpha), dir).real();
        c.check_le("grad-vs-fd", t, std::fabs(fd - an) / (1.0 + std::fabs(an)), 1e-6, where);
        c.check("descent-certified", t, descent_direction_certified(x, alpha), 0.0, 0.0, where);

        auto res = integrate_flow(x, alpha, c.tol());
        double f0 = res.trajectory.empty() ? energy(x, alpha) : res.trajectory.front().f;
        c.check_le("f-non-increasing", t, res.max_f_increase / (1.0 + f0), 1e-12, where);
        c.check_le("trace-drift", t, res.invariant_drift, c.tol().trace_drift, where);

        ++total;
        auto expected = hn_type_algebraic(x, alpha, c.tol());
        std::string why;
        if (res.status != FlowStatus::Converged) {
            why = std::string("status ") + to_string(res.status);
        } else {
            try {
                auto cls = classify_critical(res.limit, alpha, c.tol());
                if (cls.hn == expected) {
                    ++agree;
                    c.margin("label-agreement", cls.cluster_margin);
                    return;
                }
                why = "classified " + cls.hn.str() + ", cluster margin " + fmt(cls.cluster_margin);
            } catch (const Error& e) {
                why = e.what();
            }
        }
        c.note("flow trial " + std::to_string(t) + " " + where + ": expected " + expected.str() + ", " + why +
               ", grad " + fmt(res.trajectory.empty() ? 0.0 : res.trajectory.back().grad_norm) + "; repro: " +
               c.repro(t));
    });
    // At most 2% of the starts may disagree.
    int required = total - static_cast<int>(std::floor(0.02 * total));
    c.check("label-agreement", c.first(), agree >= required, static_cast<double>(total - agree),
            static_cast<double>(total - required),
            std::to_string(agree) + " of " + std::to_string(total) + " agree");
}

AdjacentPair sample_pair(const PairSpec& s, Rng& rng, const Tolerances& tol) {
    auto qr = fixtures::by_name(s.fixture);
    return sample_adjacent_pair(qr, dims_of(s.v), dims_of(s.v_u), 0, rng, tol);
}

void suite_adjacent(Ctx& c) {
    const auto& pairs = adjacent_pairs();
    c.trials([&](int t, Rng& rng) {
        const auto& s = pairs[static_cast<std::size_t>(t) % pairs.size()];
        Rng pr = rng.fork(0), dr = rng.fork(1);
        auto pair = sample_pair(s, pr, c.tol());
        auto dx = sample_flow_line_point(pair, RelationSet(), dr, c.tol());
        auto start = block_triangular(pair.x_u, Representation::zero(pair.quiver, pair.complement()), dx);
        const std::string where = std::string(s.fixture) + " v=" + pair.v.str() + " v_u=" + pair.v_u.str();

        auto kd = kernel_dims(dx, c.tol());
        c.check("kernel-dims", t, kd == pair.remainder(), 0.0, 0.0, where + " kernel " + kd.str());
        auto alg = hn_type_algebraic(start, pair.alpha, c.tol());
        c.check("algebraic-label", t, alg.label() == pair.v_ell, 0.0, 0.0, where + " got " + alg.str());

        auto res = integrate_flow(start, pair.alpha, c.tol());
        bool ok = res.status == FlowStatus::Converged;
        std::string got = to_string(res.status);
        if (ok) {
            auto cls = classify_critical(res.limit, pair.alpha, c.tol());
            ok = cls.hn.label() == pair.v_ell;
            got = cls.hn.str();
            c.margin("flow-label", cls.cluster_margin);
        }
        c.check("flow-label", t, ok, 0.0, 0.0, where + " got " + got);
        c.check_le("trace-drift", t, res.invariant_drift, c.tol().trace_drift, where);
    });
}

void suite_hessian(Ctx& c) {
    const auto& pairs = critical_pairs();
    c.once([&] {
        auto qr = fixtures::jordan();
        auto v = dims_of({1, 1});
        auto h = hessian_index(Representation::zero(qr.quiver, v), canonical_central(*qr.quiver, v), c.tol());
        c.check_eq("index-at-zero", c.first(), h.index, 2);
        c.margin("index-at-zero", h.eigen_margin);
    });
    c.trials([&](int t, Rng& rng) {
        const auto& s = pairs[static_cast<std::size_t>(t) % pairs.size()];
        auto qr = fixtures::by_name(s.fixture);
        auto v = dims_of(s.v), v_u = dims_of(s.v_u);
        auto x_u = upper_critical_point(qr, v, v_u, rng, c.tol());
        auto x = direct_sum(x_u, Representation::zero(qr.quiver, v - v_u));
        auto h = hessian_index(x, canonical_central(*qr.quiver, v), c.tol());
        auto slice = negative_slice_at(x_u, RelationSet(), v - v_u, c.tol());
        c.check_eq("index-vs-slice", t, h.index, 2 * static_cast<long>(slice.size()),
                   std::string(s.fixture) + " v=" + v.str() + " v_u=" + v_u.str());
        c.margin("index-vs-slice", h.eigen_margin);
    });
}

void suite_transversality(Ctx& c) {
    auto qr = fixtures::jordan();
    c.trials([&](int t, Rng& rng) {
        auto check_pair = [&](const std::vector<int>& v, const std::vector<int>& v_u, const std::string& tag,
                              Rng& r) {
            Rng pr = r.fork(0), dr = r.fork(1);
            auto pair = sample_adjacent_pair(qr, dims_of(v), dims_of(v_u), 0, pr, c.tol());
            auto dx = sample_flow_line_point(pair, RelationSet(), dr, c.tol());
            auto b = bundle_ranks(pair, dx, c.tol());
            const std::string where = "v=" + pair.v.str() + " v_u=" + pair.v_u.str();
            c.check_eq("rank-sum" + tag, t, b.rank_V, b.rank_D + b.rank_T, where);
            c.check_eq("rank-T" + tag, t, b.rank_T, b.expected_T, where);
            c.margin("rank-T" + tag, b.margin);
            auto cd = flow_line_codimension(pair, RelationSet(), dx, c.tol());
            c.check_eq("codim-vs-D" + tag, t, cd.codim_real, b.rank_D, where);
            c.margin("codim-vs-D" + tag, cd.margin);
        };
        Rng a = rng.fork(0);
        check_pair({2, 1}, {0, 1}, "", a);
        if (t % 5 == 0) {
            Rng b = rng.fork(1);
            check_pair({3, 1}, {1, 1}, "-wide", b);
        }
    });
}

void suite_hecke(Ctx& c) {
    static const std::vector<PairSpec> pairs = {
        {"jordan", {2, 1}, {1, 1}}, {"jordan", {1, 1}, {0, 1}}, {"jordan", {3, 1}, {2, 1}}, {"a1", {1, 1}, {0, 1}}};
    c.trials([&](int t, Rng& rng) {
        const auto& s = pairs[static_cast<std::size_t>(t) % pairs.size()];
        Rng pr = rng.fork(0), yr = rng.fork(1);
        auto pair = sample_pair(s, pr, c.tol());
        auto y = sample_hecke_point(pair, yr, c.tol());
        auto h = hecke_tangent_report(pair, pair.relations, y, c.tol());
        const std::string where = std::string(s.fixture) + " v=" + pair.v.str() + " v_u=" + pair.v_u.str();
        if (h.loop_condition) c.check_eq("d-formula-vs-adjoint", t, h.d_numeric, h.d, where);
        c.check("B-is-T-and-N", t, h.in_B == (h.in_T && h.in_N), 0.0, 0.0, where);
        c.check("point-membership", t, h.in_F && h.in_N && h.in_T && h.in_B, 0.0, 0.0, where);
        c.check_eq("rank-B-in-T", t, h.rank_B_in_T, h.d, where);
        c.check_eq("rank-Ntilde", t, h.rank_Ntilde, h.d, where);
        c.check_le("normal-angle", t, h.normal_angle, c.tol().angle_tol, where);
        c.margin("d-formula-vs-adjoint", h.min_margin);

        auto start = block_triangular(pair.x_u, Representation::zero(pair.quiver, pair.ek()), y);
        auto alpha = canonical_central(*pair.quiver, pair.v_ell);
        auto res = integrate_flow(start, alpha, c.tol());
        bool ok = res.status == FlowStatus::Converged &&
                  classify_critical(res.limit, alpha, c.tol()).hn.label() == pair.v_ell;
        c.check("lower-limit", t, ok, 0.0, 0.0, where + " " + to_string(res.status));
        c.check_le("lower-limit-traces", t, res.invariant_drift, c.tol().trace_drift, where);
    });
}

bool same_relations(const Quiver& qa, const RelationSet& a, const Quiver& qb, const RelationSet& b, std::string& why) {
    if (a.size() != b.size()) {
        why = std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " relations";
        return false;
    }
    auto terms = [](const Quiver& q, const Relation& r) {
        std::vector<std::pair<std::string, std::pair<double, double>>> out;
        for (const auto& term : r.terms) out.push_back({path_name(q, term.path), {term.coeff.real(), term.coeff.imag()}});
        std::sort(out.begin(), out.end());
        return out;
    };
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& ra = a[i];
        const auto& rb = b[i];
        if (qa.vertex_id(ra.tail) != qb.vertex_id(rb.tail) || qa.vertex_id(ra.head) != qb.vertex_id(rb.head) ||
            terms(qa, ra) != terms(qb, rb)) {
            why = "relation " + ra.id + " differs from " + rb.id;
            return false;
        }
    }
    return true;
}

/// nu(S(x')) assembled from nu'(x'): every relation of R' fills its block of the relation it lifts.
RelationValue transferred(const ExpansionSpec& spec, const RestrictionResult& res, const Representation& xp) {
    std::vector<int> offset(spec.vertices.size(), 0), fill(spec.base->num_vertices(), 0);
    for (std::size_t i = 0; i < spec.vertices.size(); ++i) {
        offset[i] = fill[spec.vertices[i].base];
        fill[spec.vertices[i].base] += spec.vertices[i].dim;
    }
    auto base_dims = spec.base_dims();
    auto out = RelationValue::zero(spec.base_relations, base_dims, base_dims);
    auto nup = relation_map(xp, res.rprime);
    for (std::size_t i = 0; i < res.rprime.size(); ++i) {
        const auto& r = res.rprime[i];
        out.blocks[res.base_relation[i]].block(offset[r.head], offset[r.tail], nup.blocks[i].rows(),
                                               nup.blocks[i].cols()) += nup.blocks[i];
    }
    return out;
}

double transfer_residual(const ExpansionSpec& spec, const RestrictionResult& res, const Representation& xp) {
    auto full = relation_map(embed_restricted_rep(spec, xp), spec.base_relations);
    auto want = transferred(spec, res, xp);
    double d = 0.0;
    for (std::size_t i = 0; i < full.blocks.size(); ++i) d += (full.blocks[i] - want.blocks[i]).squaredNorm();
    return std::sqrt(d) / rel_scale(xp.norm());
}

/// x' on the negative-slice quiver from x1 on the first copy and y in Hom^1(v2, v1).
Representation slice_quiver_rep(const RestrictionResult& res, const Representation& x1, const GradedLinearMap& y) {
    const auto& qp = *res.qprime;
    auto xp = Representation::zero(res.qprime, res.dims);
    const auto& q = *x1.quiver;
    for (std::size_t a = 0; a < qp.num_edges(); ++a) {
        const auto& id = qp.edge(a).id;
        auto dot = id.rfind('.');
        std::size_t base = q.edge_index(id.substr(0, dot));
        xp[a] = id.substr(dot + 1) == "11" ? x1[base] : y[base];
    }
    return xp;
}

void suite_restriction(Ctx& c) {
    auto jordan = fixtures::jordan();
    const auto& jq = *jordan.quiver;
    c.once([&] {
        int t = c.first();
        std::vector<int> vd = {1, 2}, wd = {1, 1, 1};
        auto spec = adhm_to_handsaw_spec(3, vd, wd);
        auto res = expand_restrict(spec);
        c.check("adhm-handsaw-fully-restricted", t, res.fully_restricted, 0.0, 0.0);
        auto hs = build_handsaw(3, vd, wd);
        std::string why;
        c.check("adhm-handsaw-relations", t, same_relations(*res.qprime, res.rprime, *hs.quiver, hs.relations, why),
                0.0, 0.0, why);
        c.check("adhm-handsaw-quiver", t, *res.qprime == *hs.quiver, 0.0, 0.0);

        auto nsq = build_negative_slice_quiver(jq, jordan.relations, dims_of({1, 1}), dims_of({1, 0}));
        c.check("negative-slice-not-fully-restricted", t, !expand_restrict(nsq.spec).fully_restricted, 0.0, 0.0);

        auto triv = expand_restrict(trivial_expansion(jordan.quiver, jordan.relations, dims_of({2, 1})));
        c.check("trivial-fully-restricted", t, triv.fully_restricted && *triv.qprime == jq, 0.0, 0.0);
    });

    int big_stable = 0;
    c.trials([&](int t, Rng& rng) {
        // Handsaw transfer, surjectivity and stability transfer.
        std::vector<int> vd = {rng.uniform_int(1, 2), rng.uniform_int(1, 2)};
        std::vector<int> wd = {rng.uniform_int(1, 2), rng.uniform_int(1, 2), rng.uniform_int(1, 2)};
        auto spec = adhm_to_handsaw_spec(3, vd, wd);
        auto res = expand_restrict(spec);
        const std::string where = "handsaw dims " + res.dims.str();

        auto xp = Representation::random(res.qprime, res.dims, rng);
        c.check_le("transfer-handsaw", t, transfer_residual(spec, res, xp), 1e-13, where);

        auto avoid_p = w_vertices(*res.qprime);
        std::vector<bool> avoid_b(spec.base->num_vertices(), false);
        avoid_b[spec.base->vertex_index("W")] = true;
        auto xs = Representation::random(res.qprime, res.dims, rng);
        for (auto& b : xs.blocks)
            if (rng.bernoulli(0.3)) b.setZero();
        bool big = is_framing_stable(embed_restricted_rep(spec, xs), avoid_b, c.tol());
        bool small = is_framing_stable(xs, avoid_p, c.tol());
        c.check("stability-transfer", t, !big || small, 0.0, 0.0, where);
        if (big) ++big_stable;

        bool sampled = false;
        for (int attempt = 0; attempt < 30 && !sampled; ++attempt) {
            Rng sub = rng.fork(100 + static_cast<std::uint64_t>(attempt));
            auto x = Representation::random(res.qprime, res.dims, sub);
            if (!project_ok(x, res.rprime) || !is_framing_stable(x, avoid_p, c.tol())) {
                c.reject();
                continue;
            }
            Mat p0 = trace_free_projector(res.rprime, res.dims);
            auto rk = numerical_rank(p0 * d_nu_matrix(x, x, res.rprime), c.tol());
            long target = static_cast<long>(rel_dim(res.rprime, res.dims, res.dims)) -
                          (p0.rows() - static_cast<long>(p0.trace().real() + 0.5));
            c.check_eq("surjective-handsaw", t, rk.rank, target, where);
            c.margin("surjective-handsaw", rk.margin);
            sampled = true;
        }
        if (!sampled) c.check("surjective-handsaw", t, false, 0.0, 0.0, where + ": no stable sample in 30 draws");

        // Negative-slice quiver of the Jordan fixture at v1 = (1,1), v2 = (1,0).
        auto v1 = dims_of({1, 1}), v2 = dims_of({1, 0});
        auto nsq = build_negative_slice_quiver(jq, jordan.relations, v1, v2);
        auto nres = expand_restrict(nsq.spec);
        Rng cr = rng.fork(1);
        auto x_u = upper_critical_point(jordan, v1 + v2, v1, cr, c.tol());
        auto y = GradedLinearMap::random(jordan.quiver, v2, v1, cr);
        auto np = slice_quiver_rep(nres, x_u, y);
        c.check_le("transfer-negative-slice", t, transfer_residual(nsq.spec, nres, np), 1e-13);

        auto xn = np;
        auto alpha = canonical_central(jq, v1 + v2);
        if (project_ok(xn, nres.rprime) && is_alpha_stable(embed_restricted_rep(nsq.spec, xn), alpha, c.tol())) {
            Mat p0 = trace_free_projector(nres.rprime, nres.dims);
            auto rk = numerical_rank(p0 * d_nu_matrix(xn, xn, nres.rprime), c.tol());
            long target = static_cast<long>(rel_dim(nres.rprime, nres.dims, nres.dims)) -
                          (p0.rows() - static_cast<long>(p0.trace().real() + 0.5));
            c.check_eq("surjective-negative-slice", t, rk.rank, target);
            c.margin("surjective-negative-slice", rk.margin);
        } else {
            c.reject();
        }
    });
    c.note(std::to_string(big_stable) + " stability-transfer samples with a stable image");
}

void suite_ledger_jordan(Ctx& c) {
    auto qr = fixtures::jordan();
    const auto& q = *qr.quiver;
    c.trials([&](int t, Rng& rng) {
        std::uint64_t seed = rng.next();
        Rng pr = rng.fork(0);
        auto pair = sample_adjacent_pair(qr, dims_of({1, 1}), dims_of({0, 1}), 0, pr, c.tol());
        auto l = build_ledger(pair, qr.relations, 5, seed, c.tol());
        auto again = build_ledger(pair, qr.relations, 5, seed, c.tol());
        auto text = io::to_json(q, l).dump();
        c.check("byte-reproducible", t, text == io::to_json(q, again).dump(), 0.0, 0.0);
        auto got = std::vector<int>{l.lambda_u, l.nu, l.euler_degree, l.d, l.shift, l.grassmannian_dim};
        auto want = std::vector<int>{2, 0, 0, 0, -2, 0};
        c.check("worked-ledger", t, got == want, 0.0, 0.0, text);
        c.check("d-matches-adjoint", t, l.d_matches, 0.0, 0.0, text);
        c.margin("worked-ledger", std::min(l.min_hessian_margin, l.min_rank_margin));

        Rng wr = rng.fork(1);
        auto wide = sample_adjacent_pair(qr, dims_of({2, 1}), dims_of({0, 1}), 0, wr, c.tol());
        auto lw = build_ledger(wide, qr.relations, 3, seed, c.tol());
        c.check_eq("euler-degree-wide", t, lw.euler_degree, 4);
        c.check_eq("shift-arithmetic", t, lw.shift, lw.d - lw.lambda_u);
    });
}

using SuiteFn = void (*)(Ctx&);

struct SuiteEntry {
    const char* name;
    SuiteFn fn;
    int trials;
};

const std::vector<SuiteEntry>& registry() {
    static const std::vector<SuiteEntry> r = {
        {"adjointness", suite_adjointness, 1000},    {"linearization", suite_linearization, 500},
        {"index", suite_index, 200},                 {"cokernel", suite_cokernel, 100},
        {"flow", suite_flow, 100},                   {"adjacent", suite_adjacent, 50},
        {"hessian", suite_hessian, 20},              {"transversality", suite_transversality, 50},
        {"hecke", suite_hecke, 50},                  {"restriction", suite_restriction, 50},
        {"ledger-jordan", suite_ledger_jordan, 3},
    };
    return r;
}

} // namespace

bool SuiteReport::passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed(); });
}

std::vector<std::string> known_suites() {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.name);
    out.push_back("all");
    return out;
}

bool is_known_suite(const std::string& name) {
    auto s = known_suites();
    return std::find(s.begin(), s.end(), name) != s.end();
}

int default_trials(const std::string& suite) {
    for (const auto& e : registry())
        if (suite == e.name) return e.trials;
    throw Error(ErrorCode::InvalidParameter, "unknown suite '" + suite + "'");
}

SuiteReport run_verify_suite(const VerifyConfig& cfg) {
    if (cfg.trials < 0 || cfg.start < 0) throw Error(ErrorCode::InvalidParameter, "trials and start must be >= 0");
    for (const auto& e : registry()) {
        if (cfg.suite != e.name) continue;
        Ctx c(cfg, e.name);
        e.fn(c);
        return c.finish();
    }
    throw Error(ErrorCode::InvalidParameter, "unknown suite '" + cfg.suite + "'");
}

std::vector<SuiteReport> run_verify(const VerifyConfig& cfg) {
    if (cfg.suite != "all") return {run_verify_suite(cfg)};
    std::vector<SuiteReport> out;
    for (const auto& e : registry()) {
        VerifyConfig sub = cfg;
        sub.suite = e.name;
        out.push_back(run_verify_suite(sub));
    }
    return out;
}

nlohmann::json to_json(const SuiteReport& r) {
    using nlohmann::json;
    auto num = [](double x) -> json {
        if (std::isfinite(x)) return x;
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    };
    json props = json::array();
    for (const auto& p : r.properties) {
        json j = {{"name", p.name}, {"passed", p.passed()}, {"checks", p.checks},  {"failures", p.failures},
                  {"worst", num(p.worst)}, {"bound", num(p.bound)}};
        if (p.min_margin >= 0.0) j["min_margin"] = num(p.min_margin);
        if (!p.messages.empty()) j["messages"] = p.messages;
        props.push_back(j);
    }
    return {{"suite", r.suite},     {"seed", r.seed},         {"start", r.start},
            {"trials", r.trials},   {"passed", r.passed()},   {"rejected", r.rejected},
            {"properties", props},  {"notes", r.notes}};
}

} // namespace qm
