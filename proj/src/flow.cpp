#include "quivermorse/flow.hpp"

#include "quivermorse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qm {

const char* to_string(FlowStatus s) {
    switch (s) {
    case FlowStatus::Converged: return "Converged";
    case FlowStatus::MaxSteps: return "MaxSteps";
    case FlowStatus::Diverged: return "Diverged";
    case FlowStatus::NumericalStall: return "NumericalStall";
    }
    return "Unknown";
}

namespace {

void require_admissible(const Representation& x, const CentralElement& alpha) {
    if (alpha.scalars.size() != x.dims.size() || !is_admissible(alpha, x.dims))
        throw Error(ErrorCode::InadmissibleCentral, "alpha is not admissible for " + x.dims.str());
}

} // namespace

LieAlgebraElement beta_of(const Representation& x, const CentralElement& alpha) {
    auto beta = moment_map(x) - LieAlgebraElement::central(alpha, x.dims);
    beta.skew = true;
    return beta;
}

double energy(const Representation& x, const CentralElement& alpha) {
    double n = beta_of(x, alpha).norm();
    return n * n;
}

GradedLinearMap grad_energy(const Representation& x, const CentralElement& alpha) {
    require_admissible(x, alpha);
    // d/dt f(x + t X) = 2 Re <d mu(X), beta> and d mu_x(X) = (1/2i) rho-type terms; pairing
    // against beta gives grad f = 2i rho_x(beta) for skew-Hermitian beta.
    return inf_action(x, beta_of(x, alpha)) * cplx(0.0, 2.0);
}

bool descent_direction_certified(const Representation& x, const CentralElement& alpha) {
    auto g = grad_energy(x, alpha);
    double gn = g.norm();
    if (gn == 0.0) return true;
    double eps = 1e-6 / gn;
    auto shifted = [&](double s) {
        Representation y = x;
        for (std::size_t a = 0; a < y.blocks.size(); ++a) y[a] += s * g[a];
        return energy(y, alpha);
    };
    double f0 = energy(x, alpha);
    return shifted(-eps) < f0 && shifted(eps) > f0;
}

// ------------------------------------------------------------ traces

std::map<std::string, cplx> closed_path_traces(const Representation& x, int max_len) {
    if (max_len < 1) throw Error(ErrorCode::InvalidParameter, "trace length must be at least 1");
    const auto& q = *x.quiver;
    std::map<std::string, cplx> out;
    std::vector<std::size_t> path;
    auto canonical = [](const std::vector<std::size_t>& p) {
        std::vector<std::size_t> best = p;
        std::vector<std::size_t> r = p;
        for (std::size_t i = 1; i < p.size(); ++i) {
            std::rotate(r.begin(), r.begin() + 1, r.end());
            best = std::min(best, r);
        }
        return best;
    };
    auto dfs = [&](auto&& self, std::size_t start) -> void {
        std::size_t here = q.edge(path.back()).head;
        if (here == start && path == canonical(path)) {
            Path p{path};
            Mat m = evaluate_path(x, p);
            out[path_name(q, p)] = m.trace();
        }
        if (static_cast<int>(path.size()) == max_len) return;
        for (std::size_t a = 0; a < q.num_edges(); ++a) {
            if (q.edge(a).tail != here) continue;
            path.push_back(a);
            self(self, start);
            path.pop_back();
        }
    };
    for (std::size_t a = 0; a < q.num_edges(); ++a) {
        path = {a};
        dfs(dfs, q.edge(a).tail);
    }
    return out;
}

double max_trace_difference(const std::map<std::string, cplx>& a, const std::map<std::string, cplx>& b) {
    double worst = 0.0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it == b.end()) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(v - it->second));
    }
    return worst;
}

// ---------------------------------------------------------- integrator

FlowResult integrate_flow(const Representation& x0, const CentralElement& alpha, const Tolerances& tol) {
    require_admissible(x0, alpha);
    const auto layout = hom1_layout(*x0.quiver, x0.dims, x0.dims);
    auto to_rep = [&](const Vec& v) { return Representation{x0.quiver, x0.dims, layout.unflatten(v)}; };
    auto rhs = [&](const Vec& v) { return Vec(-layout.flatten(grad_energy(to_rep(v), alpha).blocks)); };

    // Cash-Karp embedded pair; the fourth-order solution is propagated.
    static constexpr double a2[] = {1.0 / 5};
    static constexpr double a3[] = {3.0 / 40, 9.0 / 40};
    static constexpr double a4[] = {3.0 / 10, -9.0 / 10, 6.0 / 5};
    static constexpr double a5[] = {-11.0 / 54, 5.0 / 2, -70.0 / 27, 35.0 / 27};
    static constexpr double a6[] = {1631.0 / 55296, 175.0 / 512, 575.0 / 13824, 44275.0 / 110592, 253.0 / 4096};
    static constexpr double b5[] = {37.0 / 378, 0.0, 250.0 / 621, 125.0 / 594, 0.0, 512.0 / 1771};
    static constexpr double b4[] = {2825.0 / 27648, 0.0, 18575.0 / 48384, 13525.0 / 55296, 277.0 / 14336, 1.0 / 4};

    FlowResult out;
    out.traces_start = closed_path_traces(x0, tol.trace_len);
    Vec x = layout.flatten(x0.blocks);
    Vec k1 = rhs(x);
    double f = energy(x0, alpha);
    double gnorm = k1.norm();
    double t = 0.0;
    double h = tol.h0;
    out.trajectory.push_back({t, f, gnorm});
    const long max_attempts = 20 * std::max<long>(tol.max_steps, 1);
    long attempts = 0;

    while (true) {
        if (gnorm <= tol.grad_tol) {
            out.status = FlowStatus::Converged;
            break;
        }
        if (out.accepted_steps >= tol.max_steps || attempts >= max_attempts) {
            out.status = FlowStatus::MaxSteps;
            break;
        }
        ++attempts;
        Vec k2 = rhs(x + h * (a2[0] * k1));
        Vec k3 = rhs(x + h * (a3[0] * k1 + a3[1] * k2));
        Vec k4 = rhs(x + h * (a4[0] * k1 + a4[1] * k2 + a4[2] * k3));
        Vec k5 = rhs(x + h * (a5[0] * k1 + a5[1] * k2 + a5[2] * k3 + a5[3] * k4));
        Vec k6 = rhs(x + h * (a6[0] * k1 + a6[1] * k2 + a6[2] * k3 + a6[3] * k4 + a6[4] * k5));
        Vec y4 = x + h * (b4[0] * k1 + b4[2] * k3 + b4[3] * k4 + b4[4] * k5 + b4[5] * k6);
        Vec y5 = x + h * (b5[0] * k1 + b5[2] * k3 + b5[3] * k4 + b5[5] * k6);
        double err = (y5 - y4).norm();
        double f_new = energy(to_rep(y4), alpha);
        if (!std::isfinite(f_new) || !std::isfinite(err) || y4.norm() > 1e8) {
            if (!std::isfinite(f)) {
                out.status = FlowStatus::Diverged;
                break;
            }
            h *= tol.shrink;
            ++out.rejected_steps;
        } else if (err <= tol.step_err * (1.0 + x.norm()) && f_new <= f + tol.descent_slack * (1.0 + f)) {
            out.max_f_increase = std::max(out.max_f_increase, f_new - f);
            t += h;
            x = std::move(y4);
            f = f_new;
            k1 = rhs(x);
            gnorm = k1.norm();
            ++out.accepted_steps;
            out.trajectory.push_back({t, f, gnorm});
            h *= tol.grow;
        } else {
            h *= tol.shrink;
            ++out.rejected_steps;
        }
        if (h < tol.h_min) {
            out.status = FlowStatus::NumericalStall;
            break;
        }
    }
    out.limit = to_rep(x);
    out.traces_end = closed_path_traces(out.limit, tol.trace_len);
    out.invariant_drift = max_trace_difference(out.traces_start, out.traces_end);
    return out;
}

// ----------------------------------------------------- classification

std::string HNType::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < blocks.size(); ++i)
        os << (i ? ", " : "") << blocks[i].str() << "@" << qm::to_string(slopes[i]);
    os << ']';
    return os.str();
}

CriticalClassification classify_critical(const Representation& x, const CentralElement& alpha,
                                         const Tolerances& tol) {
    const auto& q = *x.quiver;
    CriticalClassification out;
    auto g = grad_energy(x, alpha);
    out.grad_norm = g.norm();
    if (out.grad_norm > tol.critical_tol)
        throw Error(ErrorCode::NotCritical, "gradient norm " + std::to_string(out.grad_norm) + " exceeds " +
                                                std::to_string(tol.critical_tol));
    out.beta = beta_of(x, alpha);
    out.class_tol = tol.class_tol_factor * (1.0 + out.beta.norm());

    struct Eig {
        double value;
        std::size_t vertex;
        int index;
    };
    std::vector<Eig> all;
    std::vector<Mat> bases(q.num_vertices());
    for (std::size_t k = 0; k < q.num_vertices(); ++k) {
        if (x.dims[k] == 0) {
            bases[k] = Mat(0, 0);
            continue;
        }
        Mat herm = cplx(0.0, 1.0) * out.beta[k];
        herm = 0.5 * (herm + herm.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(herm);
        bases[k] = es.eigenvectors();
        for (int i = 0; i < x.dims[k]; ++i) all.push_back({es.eigenvalues()[i], k, i});
    }
    std::sort(all.begin(), all.end(), [](const Eig& a, const Eig& b) { return a.value < b.value; });

    // Cluster: gaps <= class_tol merge, gaps >= cluster_gap_factor * class_tol separate.
    std::vector<std::vector<Eig>> clusters;
    out.cluster_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (i == 0) {
            clusters.push_back({all[i]});
            continue;
        }
        double gap = all[i].value - all[i - 1].value;
        if (gap <= out.class_tol) {
            clusters.back().push_back(all[i]);
        } else if (gap >= tol.cluster_gap_factor * out.class_tol) {
            out.cluster_margin = std::min(out.cluster_margin, gap / out.class_tol);
            clusters.push_back({all[i]});
        } else {
            throw Error(ErrorCode::DegenerateSpectrum,
                        "eigenvalue gap " + std::to_string(gap) + " is ambiguous (class_tol " +
                            std::to_string(out.class_tol) + ", margin " + std::to_string(gap / out.class_tol) + ")");
        }
    }

    // cluster_of[k][i]: cluster index of eigenvector i at vertex k.
    std::vector<std::vector<int>> cluster_of(q.num_vertices());
    for (std::size_t k = 0; k < q.num_vertices(); ++k) cluster_of[k].assign(x.dims[k], -1);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        std::vector<int> dims(q.num_vertices(), 0);
        double mean = 0.0;
        for (const auto& e : clusters[c]) {
            cluster_of[e.vertex][e.index] = static_cast<int>(c);
            ++dims[e.vertex];
            mean += e.value;
        }
        mean /= static_cast<double>(clusters[c].size());
        DimensionVector w(dims);
        Rational slope = slope_data(alpha, w).slope;
        if (std::abs(mean - to_double(slope)) > tol.cluster_gap_factor * out.class_tol)
            throw Error(ErrorCode::DegenerateSpectrum, "cluster eigenvalue " + std::to_string(mean) +
                                                           " does not match the block slope " + to_string(slope));
        if (!out.hn.slopes.empty() && !(out.hn.slopes.back() < slope))
            throw Error(ErrorCode::DegenerateSpectrum, "coincident block slopes " + to_string(slope));
        out.hn.blocks.push_back(w);
        out.hn.slopes.push_back(slope);
        out.eigenvalues.push_back(mean);
    }

    // Off-block entries and per-block residuals in the eigenbasis.
    std::vector<Mat> rotated(q.num_edges());
    for (std::size_t a = 0; a < q.num_edges(); ++a) {
        const auto& e = q.edge(a);
        rotated[a] = bases[e.head].adjoint() * x[a] * bases[e.tail];
        for (Eigen::Index i = 0; i < rotated[a].rows(); ++i)
            for (Eigen::Index j = 0; j < rotated[a].cols(); ++j)
                if (cluster_of[e.head][i] != cluster_of[e.tail][j])
                    out.off_block = std::max(out.off_block, std::abs(rotated[a](i, j)));
    }
    if (out.off_block > out.class_tol)
        throw Error(ErrorCode::NotCritical, "off-block entry " + std::to_string(out.off_block) + " exceeds class_tol");

    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const auto& w = out.hn.blocks[c];
        auto xl = Representation::zero(x.quiver, w);
        std::vector<std::vector<int>> idx(q.num_vertices());
        for (std::size_t k = 0; k < q.num_vertices(); ++k)
            for (int i = 0; i < x.dims[k]; ++i)
                if (cluster_of[k][i] == static_cast<int>(c)) idx[k].push_back(i);
        for (std::size_t a = 0; a < q.num_edges(); ++a) {
            const auto& e = q.edge(a);
            for (std::size_t i = 0; i < idx[e.head].size(); ++i)
                for (std::size_t j = 0; j < idx[e.tail].size(); ++j)
                    xl[a](i, j) = rotated[a](idx[e.head][i], idx[e.tail][j]);
        }
        auto alpha_l = induced_central(alpha, x.dims, w);
        out.residuals.push_back((moment_map(xl) - LieAlgebraElement::central(alpha_l, w)).norm());
    }
    return out;
}

// ------------------------------------------------------------ Hessian

HessianIndex hessian_index(const Representation& x, const CentralElement& alpha, const Tolerances& tol) {
    auto g0 = grad_energy(x, alpha);
    if (g0.norm() > tol.critical_tol)
        throw Error(ErrorCode::NotCritical, "gradient norm " + std::to_string(g0.norm()) + " at the Hessian point");
    const auto layout = hom1_layout(*x.quiver, x.dims, x.dims);
    const auto n = layout.size();
    Vec x0 = layout.flatten(x.blocks);
    auto grad_at = [&](const Vec& v) {
        return layout.flatten(grad_energy(Representation{x.quiver, x.dims, layout.unflatten(v)}, alpha).blocks);
    };
    Eigen::MatrixXd h(2 * n, 2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (int part = 0; part < 2; ++part) {
            Vec d = Vec::Zero(n);
            d[j] = part == 0 ? cplx(tol.hess_h, 0.0) : cplx(0.0, tol.hess_h);
            Vec diff = (grad_at(x0 + d) - grad_at(x0 - d)) / (2.0 * tol.hess_h);
            h.col(j + part * n) << diff.real(), diff.imag();
        }
    }
    Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
    HessianIndex out;
    if (n == 0) {
        out.eigen_margin = std::numeric_limits<double>::infinity();
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const auto& ev = es.eigenvalues();
    out.hess_norm = ev.cwiseAbs().maxCoeff();
    out.hess_tol = tol.hess_tol_factor * out.hess_norm;
    out.eigen_margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        double lam = ev[i];
        out.eigenvalues.push_back(lam);
        if (lam < -out.hess_tol) ++out.index;
        else if (std::abs(lam) <= out.hess_tol) ++out.nullity;
        if (out.hess_tol > 0.0) {
            double ratio = std::abs(lam) > out.hess_tol ? std::abs(lam) / out.hess_tol
                                                        : (lam == 0.0 ? std::numeric_limits<double>::infinity()
                                                                      : out.hess_tol / std::abs(lam));
            out.eigen_margin = std::min(out.eigen_margin, ratio);
        }
    }
    return out;
}

} // namespace qm
