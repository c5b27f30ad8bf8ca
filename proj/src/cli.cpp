#include "quivermorse/cli.hpp"

#include "quivermorse/deformation.hpp"
#include "quivermorse/errors.hpp"
#include "quivermorse/fixtures.hpp"
#include "quivermorse/io.hpp"
#include "quivermorse/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>

namespace qm::cli {

namespace {

using io::json;

struct Opts {
    std::string quiver;
    std::string rep;
    std::string rep2;
    std::string v;
    std::string v1;
    std::string v2;
    std::string vu;
    std::string k;
    std::string alpha = "canonical";
    std::string json_out;
    std::string csv_out;
    std::string suite = "all";
    std::uint64_t seed = 1;
    int trials = 0;
    int start = 0;
    bool ambient = false;
    Tolerances tol;
    std::map<std::string, double> overrides;
};

QuiverWithRelations load_quiver(const std::string& spec) {
    if (std::filesystem::is_regular_file(spec)) return io::quiver_from_json(io::load_file(spec));
    // Fixture names are accepted with or without a .json suffix.
    std::string name = std::filesystem::path(spec).filename().string();
    if (name.size() > 5 && name.ends_with(".json")) name.resize(name.size() - 5);
    return fixtures::by_name(name);
}

CentralElement load_alpha(const Opts& o, const Quiver& q, const DimensionVector& v) {
    if (o.alpha == "canonical") return canonical_central(q, v);
    return io::central_from_json(q, io::load_file(o.alpha));
}

std::size_t vertex_arg(const Quiver& q, const std::string& id) {
    auto k = q.find_vertex(id);
    if (!k) throw Error(ErrorCode::InvalidParameter, "unknown vertex '" + id + "'");
    return *k;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::InvalidParameter, "cannot write '" + path + "'");
    f << text;
}

void emit(const json& j, const Opts& o, std::ostream& out) {
    auto text = j.dump(2) + "\n";
    out << text;
    if (!o.json_out.empty()) write_file(o.json_out, text);
}

int cmd_check(const Opts& o, std::ostream& out) {
    auto qr = load_quiver(o.quiver);
    emit(io::to_json(*qr.quiver, relation_set_checks(*qr.quiver, qr.relations)), o, out);
    return kExitOk;
}

int cmd_dims(const Opts& o, std::ostream& out) {
    auto qr = load_quiver(o.quiver);
    const auto& q = *qr.quiver;
    auto v1 = io::parse_dims(q, o.v1);
    auto v2 = io::parse_dims(q, o.v2);
    json j = io::to_json(dims_and_forms(q, qr.relations, v1, v2));
    j["v1"] = io::dims_to_json(q, v1);
    j["v2"] = io::dims_to_json(q, v2);
    emit(j, o, out);
    return kExitOk;
}

Representation load_rep(const QuiverWithRelations& qr, const std::string& path, const std::string& dims) {
    auto x = io::rep_from_json(qr.quiver, io::load_file(path));
    if (!dims.empty() && io::parse_dims(*qr.quiver, dims) != x.dims)
        throw Error(ErrorCode::PreconditionFailed, "--v " + dims + " does not match the representation " +
                                                       x.dims.str());
    return x;
}

int cmd_flow(const Opts& o, std::ostream& out) {
    auto qr = load_quiver(o.quiver);
    const auto& q = *qr.quiver;
    auto x = load_rep(qr, o.rep, o.v);
    auto alpha = load_alpha(o, q, x.dims);
    auto res = integrate_flow(x, alpha, o.tol);
    json j;
    j["flow"] = io::to_json(res);
    if (res.status == FlowStatus::Converged) {
        try {
            j["classification"] = io::to_json(q, classify_critical(res.limit, alpha, o.tol));
        } catch (const Error& e) {
            j["classification_error"] = e.what();
        }
    }
    if (q.framing() && x.dims[*q.framing()] == 1 && alpha == canonical_central(q, x.dims))
        j["hn_algebraic"] = io::to_json(q, hn_type_algebraic(x, alpha, o.tol));
    emit(j, o, out);
    if (!o.csv_out.empty()) write_file(o.csv_out, io::trajectory_csv(res));
    return res.status == FlowStatus::Converged ? kExitOk : kExitStall;
}

int cmd_hn(const Opts& o, std::ostream& out) {
    auto qr = load_quiver(o.quiver);
    const auto& q = *qr.quiver;
    auto x = load_rep(qr, o.rep, o.v);
    auto alpha = load_alpha(o, q, x.dims);
    json j = io::to_json(q, hn_type_algebraic(x, alpha, o.tol));
    if (x.dims[*q.framing()] == 1 && alpha == canonical_central(q, x.dims))
        j["stable"] = is_alpha_stable(x, alpha, o.tol);
    emit(j, o, out);
    return kExitOk;
}

int cmd_slice(const Opts& o, std::ostream& out) {
    auto qr = load_quiver(o.quiver);
    const auto& q = *qr.quiver;
    auto x1 = load_rep(qr, o.rep, o.v1);
    Representation x2 = !o.rep2.empty() ? load_rep(qr, o.rep2, o.v2)
                                        : Representation::zero(qr.quiver, io::parse_dims(q, o.v2));
    RelationSet r = o.ambient ? RelationSet() : qr.relations;
    json j = io::to_json(deformation_complex(r, x1, x2, o.tol));
    j["forms"] = io::to_json(dims_and_forms(q, r, x1.dims, x2.dims));
    j["ambient"] = o.ambient;
    emit(j, o, out);
    return kExitOk;
}

AdjacentPair pair_from(const Opts& o, const QuiverWithRelations& qr) {
    const auto& q = *qr.quiver;
    auto v = io::parse_dims(q, o.v);
    auto v_u = io::parse_dims(q, o.vu);
    auto k = vertex_arg(q, o.k);
    if (!o.rep.empty()) return make_adjacent_pair(qr, v, v_u, k, load_rep(qr, o.rep, o.vu), o.tol);
    Rng rng(o.seed, "cli-pair");
    return sample_adjacent_pair(qr, v, v_u, k, rng, o.tol);
}

json graded_to_json(const GradedLinearMap& m) {
    json j = json::object();
    for (std::size_t a = 0; a < m.quiver->num_edges(); ++a) j[m.quiver->edge(a).id] = io::matrix_to_json(m[a]);
    return j;
}

int cmd_hecke(const Opts& o, std::ostream& out) {
    auto qr = load_quiver(o.quiver);
    auto pair = pair_from(o, qr);
    Rng rng(o.seed, "cli-hecke");
    auto y = sample_hecke_point(pair, rng, o.tol);
    json j = io::to_json(hecke_tangent_report(pair, qr.relations, y, o.tol));
    j["x_u"] = io::rep_to_json(pair.x_u);
    j["y"] = graded_to_json(y);
    emit(j, o, out);
    return kExitOk;
}

int cmd_ledger(const Opts& o, std::ostream& out) {
    auto qr = load_quiver(o.quiver);
    auto pair = pair_from(o, qr);
    int samples = o.trials > 0 ? o.trials : 5;
    emit(io::to_json(*qr.quiver, build_ledger(pair, qr.relations, samples, o.seed, o.tol)), o, out);
    return kExitOk;
}

int cmd_verify(const Opts& o, std::ostream& out, std::ostream& err) {
    if (!is_known_suite(o.suite)) {
        err << "unknown suite '" << o.suite << "'; known suites:";
        for (const auto& s : known_suites()) err << " " << s;
        err << "\n";
        return kExitUsage;
    }
    VerifyConfig cfg;
    cfg.suite = o.suite;
    cfg.seed = o.seed;
    cfg.trials = o.trials;
    cfg.start = o.start;
    cfg.tol = o.tol;
    cfg.overrides = o.overrides;
    auto reports = run_verify(cfg);
    bool passed = true;
    json suites = json::array();
    for (const auto& r : reports) {
        passed = passed && r.passed();
        suites.push_back(to_json(r));
        if (!r.passed())
            for (const auto& p : r.properties)
                for (const auto& m : p.messages) err << r.suite << ": " << m << "\n";
    }
    json j = reports.size() == 1 ? suites[0] : json{{"passed", passed}, {"suites", suites}};
    emit(j, o, out);
    return passed ? kExitOk : 1;
}

int exit_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::NumericalStall:
    case ErrorCode::UnstableLedger:
    case ErrorCode::DegenerateSpectrum:
        return kExitStall;
    default:
        return kExitPrecondition;
    }
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Opts o;
    std::vector<std::string> rest;
    for (const auto& a : args) {
        if (!a.starts_with("--tol.")) {
            rest.push_back(a);
            continue;
        }
        auto eq = a.find('=');
        if (eq == std::string::npos) {
            err << "expected --tol.key=value, got '" << a << "'\n";
            return kExitUsage;
        }
        std::string key = a.substr(6, eq - 6);
        try {
            double val = std::stod(a.substr(eq + 1));
            o.tol.set(key, val);
            o.overrides[key] = val;
        } catch (const std::exception& e) {
            err << "bad tolerance override '" << a << "': " << e.what() << "\n";
            return kExitUsage;
        }
    }

    CLI::App app{"Morse-theoretic computations on quiver representations", "quivermorse"};
    app.require_subcommand(1);
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--json-out", o.json_out, "Also write the JSON result to this file");
        sub->add_option("--seed", o.seed, "Seed for sampled quantities");
    };
    auto quiver_opt = [&](CLI::App* sub) {
        sub->add_option("--quiver", o.quiver, "Quiver JSON file or fixture name")->required();
    };

    auto* check = app.add_subcommand("check", "Relation set checks");
    quiver_opt(check);
    add_common(check);

    auto* dims = app.add_subcommand("dims", "Hom and relation dimensions and Euler forms");
    quiver_opt(dims);
    dims->add_option("--v1", o.v1, "Target dimension vector, comma separated")->required();
    dims->add_option("--v2", o.v2, "Source dimension vector, comma separated")->required();
    add_common(dims);

    auto* flow = app.add_subcommand("flow", "Gradient flow of the moment-map energy and classification");
    quiver_opt(flow);
    flow->add_option("--rep", o.rep, "Start representation JSON")->required();
    flow->add_option("--v", o.v, "Expected dimension vector");
    flow->add_option("--alpha", o.alpha, "canonical or a central element JSON file");
    flow->add_option("--csv-out", o.csv_out, "Write the trajectory as CSV");
    add_common(flow);

    auto* hn = app.add_subcommand("hn", "Algebraic HN type for the canonical central element");
    quiver_opt(hn);
    hn->add_option("--rep", o.rep, "Representation JSON")->required();
    hn->add_option("--v", o.v, "Expected dimension vector");
    hn->add_option("--alpha", o.alpha, "canonical or a central element JSON file");
    add_common(hn);

    auto* slice = app.add_subcommand("slice", "Deformation complex and negative slice at (x1, x2)");
    quiver_opt(slice);
    slice->add_option("--rep", o.rep, "x1 representation JSON")->required();
    slice->add_option("--rep2", o.rep2, "x2 representation JSON (default: zero on --v2)");
    slice->add_option("--v1", o.v1, "Expected dimension vector of x1");
    slice->add_option("--v2", o.v2, "Dimension vector of x2");
    slice->add_flag("--ambient", o.ambient, "Ignore the relations");
    add_common(slice);

    auto add_pair = [&](CLI::App* sub) {
        quiver_opt(sub);
        sub->add_option("--v", o.v, "Total dimension vector")->required();
        sub->add_option("--vu", o.vu, "Upper critical dimension vector")->required();
        sub->add_option("--k", o.k, "Vertex id of the added unit vector")->required();
        sub->add_option("--rep", o.rep, "Upper critical point x_u (default: sampled from the seed)");
    };
    auto* hecke = app.add_subcommand("hecke", "Hecke point sets and tangent ranks at a sampled point");
    add_pair(hecke);
    add_common(hecke);

    auto* ledger = app.add_subcommand("ledger", "Degree ledger of an adjacent pair");
    add_pair(ledger);
    ledger->add_option("--trials", o.trials, "Number of samples (default 5)");
    add_common(ledger);

    auto* verify = app.add_subcommand("verify", "Seeded property suites");
    verify->add_option("--suite", o.suite, "Suite name or all");
    verify->add_option("--trials", o.trials, "Trials per suite (default: suite-specific)");
    verify->add_option("--start", o.start, "Index of the first trial");
    add_common(verify);

    if (rest.empty()) {
        err << app.help();
        return kExitUsage;
    }
    try {
        std::vector<std::string> rev(rest.rbegin(), rest.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(o, out);
        if (dims->parsed()) return cmd_dims(o, out);
        if (flow->parsed()) return cmd_flow(o, out);
        if (hn->parsed()) return cmd_hn(o, out);
        if (slice->parsed()) return cmd_slice(o, out);
        if (hecke->parsed()) return cmd_hecke(o, out);
        if (ledger->parsed()) return cmd_ledger(o, out);
        if (verify->parsed()) return cmd_verify(o, out, err);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitPrecondition;
    }
    err << app.help();
    return kExitUsage;
}

} // namespace qm::cli
