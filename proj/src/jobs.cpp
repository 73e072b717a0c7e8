#include "ophom/jobs.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ophom/csc.hpp"
#include "ophom/errors.hpp"
#include "ophom/ger.hpp"
#include "ophom/graphs.hpp"
#include "ophom/mdo.hpp"
#include "ophom/mixed.hpp"
#include "ophom/operad.hpp"
#include "ophom/poly.hpp"
#include "ophom/trees.hpp"
#include "ophom/twist.hpp"

namespace ophom {

namespace {

using json = nlohmann::ordered_json;

// version tag for the table cache; bump when structure constants change
constexpr const char* kCodeVersion = "1";

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Usage, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json dims_json(const std::map<int, size_t>& dims) {
    json by_degree = json::object();
    size_t total = 0;
    for (const auto& [d, n] : dims) {
        by_degree[std::to_string(d)] = n;
        total += n;
    }
    json out;
    out["total"] = total;
    out["by_degree"] = by_degree;
    return out;
}

json cmd_dims(const JobSpec& spec) {
    json out;
    if (spec.target == "Ger") {
        GerOperad ger(std::max<size_t>(spec.arity, 2));
        out = dims_json(ger.basis(spec.arity).dims_by_degree());
    } else if (spec.target == "M") {
        MOperad m(spec.arity);
        out = dims_json(m.basis(spec.arity).dims_by_degree());
    } else if (spec.target == "Mcirc") {
        MOperad m(spec.arity);
        MCircLevel mc(m, spec.arity);
        std::map<int, size_t> dims;
        for (size_t i = 0; i < mc.dim(); ++i) {
            FormalSum<> v = mc.vec(i);
            ++dims[m.degree_of(v)];
        }
        out = dims_json(dims);
    } else if (spec.target == "Gra") {
        GraOperad gra(spec.arity, static_cast<int>(spec.trunc));
        out = dims_json(gra.basis(spec.arity).dims_by_degree());
    } else if (spec.target == "vKGra") {
        auto basis = enumerate_vkgra(static_cast<int>(spec.arity), static_cast<int>(spec.trunc),
                                     2, 1);
        std::map<int, size_t> dims;
        for (const auto& [k, d] : basis) ++dims[d];
        out = dims_json(dims);
    } else if (spec.target == "TwGra") {
        TwistedGra tw(2, static_cast<int>(spec.trunc));
        std::map<int, size_t> dims;
        for (const auto& [k, d] : tw.basis(static_cast<int>(spec.arity))) ++dims[d];
        out = dims_json(dims);
    } else {
        throw Error(ErrorCode::Usage, "dims: unknown target " + spec.target);
    }
    return out;
}

json cmd_homology(const JobSpec& spec) {
    json out;
    if (spec.target == "M") {
        MOperad m(spec.arity);
        GradedComplex cx(m.basis(spec.arity),
                         [&](const std::string& k) { return m.differential(k); });
        out = dims_json(cx.homology_dims());
    } else if (spec.target == "Mcirc") {
        MOperad m(spec.arity);
        MCircLevel mc(m, spec.arity);
        out = dims_json(mc.homology_dims());
    } else if (spec.target == "Ger-ccminus") {
        GerOperad ger(std::max<size_t>(spec.arity, 2));
        CcOperad cc(ger, CcKind::Minus, spec.trunc);
        out = dims_json(cc.homology_dims(spec.arity));
    } else {
        throw Error(ErrorCode::Usage, "homology: unknown target " + spec.target);
    }
    return out;
}

json cmd_verify(const JobSpec& spec) {
    json out;
    if (spec.check == "homology-vs-grav") {
        MOperad m(spec.arity);
        MCircLevel mc(m, spec.arity);
        size_t dim_h = total_dim(mc.homology_dims());
        GerOperad ger(std::max<size_t>(spec.arity, 2));
        SparseMatrix r = ger.r_matrix(spec.arity);
        size_t dim_grav = r.cols() - r.rank();
        out["dim_H_Mcirc"] = dim_h;
        out["dim_Grav"] = dim_grav;
        out["pass"] = dim_h == dim_grav;
    } else if (spec.check == "grav-dims") {
        GerOperad ger(std::max<size_t>(spec.arity, 2));
        SparseMatrix r = ger.r_matrix(spec.arity);
        size_t rank = r.rank();
        out["dim_Ger"] = r.cols();
        out["rank_R"] = rank;
        out["dim_ker_R"] = r.cols() - rank;
        out["pass"] = rank == r.cols() - rank;  // exactness
    } else if (spec.check == "rotational-law") {
        MOperad m(std::max<size_t>(spec.arity, 2));
        CheckReport rep = check_rotational(m, spec.arity, spec.samples, spec.seed);
        out["pass"] = rep.pass;
        out["checks"] = rep.checks;
        out["failures"] = rep.failures;
    } else if (spec.check == "operad-axioms") {
        if (spec.target == "Gra") {
            GraOperad gra(spec.arity, 2);
            CheckReport rep = check_operad_axioms(gra, spec.arity, spec.samples, spec.seed);
            out["pass"] = rep.pass;
            out["checks"] = rep.checks;
            out["failures"] = rep.failures;
        } else if (spec.target == "M") {
            MOperad m(spec.arity);
            CheckReport rep = check_operad_axioms(m, spec.arity, spec.samples, spec.seed);
            out["pass"] = rep.pass;
            out["checks"] = rep.checks;
            out["failures"] = rep.failures;
        } else {
            throw Error(ErrorCode::Usage, "operad-axioms: unknown target " + spec.target);
        }
    } else if (spec.check == "sigma-order") {
        Rng rng(spec.seed);
        bool pass = true;
        size_t checks = 0;
        int m_max = std::min<int>(static_cast<int>(spec.arity), 3);
        for (size_t s = 0; s < spec.samples; ++s) {
            int mm = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(m_max)));
            int nn = 1 + static_cast<int>(rng.below(4));
            Graph g;
            g.m = mm;
            g.n2 = nn;
            g.vpow.assign(static_cast<size_t>(mm), 0);
            int ne = 1 + static_cast<int>(rng.below(3));
            for (int e = 0; e < ne; ++e) {
                int src = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(mm)));
                int tgt = rng.below(2) ? 1 + static_cast<int>(rng.below(static_cast<uint64_t>(mm)))
                                       : -(1 + static_cast<int>(rng.below(static_cast<uint64_t>(nn))));
                g.edges.emplace_back(src, tgt);
            }
            FormalSum<> x = graph_term(g);
            if (x.is_zero()) continue;
            FormalSum<> cur = x;
            for (int j = 0; j <= nn; ++j) cur = vkgra_sigma(cur);
            ++checks;
            if (!(cur == x)) pass = false;
        }
        out["pass"] = pass;
        out["checks"] = checks;
    } else {
        throw Error(ErrorCode::Usage, "verify: unknown check " + spec.check);
    }
    return out;
}

json cmd_act(const JobSpec& spec) {
    auto [g, sign] = graph_from_json(slurp(spec.graph_path));
    auto inputs = nlohmann::json::parse(slurp(spec.inputs_path));
    std::vector<Polyvector> args;
    for (const auto& item : inputs) args.push_back(Polyvector::from_json(item.dump()));
    json out;
    if (g.n2 == 0 && !g.has_tadpole()) {
        bool plain = true;
        for (int p : g.vpow)
            if (p) plain = false;
        for (const auto& a : args)
            if (a.upower()) plain = false;
        if (plain) {
            Polyvector res = Rational(sign) * gra_act(g, args);
            out["kind"] = "polyvector";
            out["result"] = nlohmann::json::parse(res.to_json());
            return out;
        }
    }
    MultiDiffOp res = Rational(sign) * vkgra_act(g, args);
    out["kind"] = "operator";
    out["result"] = nlohmann::json::parse(res.to_json());
    return out;
}

json cmd_export(const JobSpec& spec) {
    json out;
    if (spec.target == "Ger") {
        GerOperad ger(std::max<size_t>(spec.arity, 2));
        GradedBasis b = ger.basis(spec.arity);
        json basis = json::array();
        for (size_t i = 0; i < b.size(); ++i) {
            json item;
            item["key"] = b.label(i);
            item["degree"] = b.degree(i);
            json terms = json::array();
            for (const auto& [k, c] : ger.realize(b.label(i)).terms())
                terms.push_back(json::array({k, c.str()}));
            item["gra_realization"] = terms;
            basis.push_back(item);
        }
        out["basis"] = basis;
        out["r_matrix"] = nlohmann::json::parse(ger.r_matrix(spec.arity).to_json());
    } else if (spec.target == "M") {
        MOperad m(spec.arity);
        GradedBasis b = m.basis(spec.arity);
        json basis = json::array();
        for (size_t i = 0; i < b.size(); ++i) {
            json item;
            item["key"] = b.label(i);
            item["degree"] = b.degree(i);
            item["tree"] = nlohmann::json::parse(tree_to_json(parse_tree_key(b.label(i))));
            basis.push_back(item);
        }
        out["basis"] = basis;
    } else {
        throw Error(ErrorCode::Usage, "export: unknown target " + spec.target);
    }
    return out;
}

}  // namespace

std::optional<std::string> cache_lookup(const std::string& key) {
    const char* dir = std::getenv("OPHOM_CACHE_DIR");
    if (!dir) return std::nullopt;
    std::filesystem::path p = std::filesystem::path(dir) / (key + ".json");
    if (!std::filesystem::exists(p)) return std::nullopt;
    return slurp(p.string());
}

void cache_store(const std::string& key, const std::string& value) {
    const char* dir = std::getenv("OPHOM_CACHE_DIR");
    if (!dir) return;
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / (key + ".json"));
    out << value;
}

JobResult run_job(const JobSpec& spec) {
    JobResult result;
    json report;
    report["command"] = spec.command;
    report["target"] = spec.target;
    report["arity"] = spec.arity;
    report["seed"] = spec.seed;
    std::string cache_key;
    try {
        json payload;
        if (spec.command == "dims" || spec.command == "homology") {
            cache_key = spec.command + "-" + spec.target + "-" + std::to_string(spec.arity) +
                        "-" + std::to_string(spec.trunc) + "-v" + kCodeVersion;
            if (auto hit = cache_lookup(cache_key)) {
                payload = nlohmann::json::parse(*hit);
            } else {
                payload = spec.command == "dims" ? cmd_dims(spec) : cmd_homology(spec);
                cache_store(cache_key, payload.dump());
            }
        } else if (spec.command == "verify") {
            report["check"] = spec.check;
            payload = cmd_verify(spec);
            if (payload.contains("pass") && !payload["pass"].get<bool>()) result.exit_code = 1;
        } else if (spec.command == "act") {
            payload = cmd_act(spec);
        } else if (spec.command == "export") {
            payload = cmd_export(spec);
        } else {
            throw Error(ErrorCode::Usage, "unknown command " + spec.command);
        }
        report["result"] = payload;
    } catch (const Error& e) {
        report["error"] = e.what();
        report["error_code"] = error_code_name(e.code);
        result.exit_code = e.code == ErrorCode::Usage || e.code == ErrorCode::BoundExceeded ? 2 : 1;
    }
    result.report_json = report.dump(2) + "\n";
    return result;
}

}  // namespace ophom
