// dalg: command line front end.
//
// Exit status: 0 success, 1 domain error, 2 parse or usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dalg/dalg.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace dalg;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tuple_string(const MonoidElem& m) {
    std::string out = "(";
    for (std::size_t i = 0; i < m.data().size(); ++i) out += (i ? "," : "") + std::to_string(m.data()[i]);
    return out + ")";
}

std::string point_string(const std::map<Var, Rational>& pt) {
    std::vector<std::pair<Var, Rational>> entries(pt.begin(), pt.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return CanonicalVarLess{}(a.first, b.first); });
    std::string out;
    for (const auto& [v, r] : entries) out += (out.empty() ? "" : ", ") + v.to_string() + " = " + r.get_str();
    return out;
}

json point_json(const std::map<Var, Rational>& pt) {
    std::vector<std::pair<Var, Rational>> entries(pt.begin(), pt.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return CanonicalVarLess{}(a.first, b.first); });
    json j = json::object();
    for (const auto& [v, r] : entries) j[v.to_string()] = r.get_str();
    return j;
}

json values_json(const std::vector<RatFun>& vs) {
    json j = json::array();
    for (const auto& v : vs) j.push_back(v.to_string());
    return j;
}

std::string values_string(const std::vector<RatFun>& vs) { return "(" + format_values(vs) + ")"; }

MonoidKind parse_mode(const std::string& m) {
    if (m == "comm" || m == "commutative" || m == "theta") return MonoidKind::commutative;
    if (m == "free" || m == "gamma") return MonoidKind::free;
    throw ParseError("unknown mode '" + m + "' (expected comm or free)", 1, 1);
}

// ---- derive -----------------------------------------------------------------

struct DeriveOpts {
    std::string expr, der = "eta: none";
    bool twisted = false, as_json = false;
};

int run_derive(const DeriveOpts& o) {
    DerSpec d = parse_derspec(o.der);
    RatFun q = parse_ratfun(o.expr);
    if (o.twisted) {
        auto tl = twisted_lift(q, d);
        if (o.as_json) {
            json xs = json::array();
            for (auto v : tl.xs) xs.push_back(v.to_string());
            std::cout << json{{"lift", tl.lift.to_string()}, {"coeff_only", tl.coeff_only.to_string()}, {"xs", xs}}.dump(2) << "\n";
        } else {
            std::cout << tl.lift.to_string() << "\n";
        }
        return 0;
    }
    RatFun r = apply_derivation(q, d);
    if (o.as_json) std::cout << json{{"input", q.to_string()}, {"derivative", r.to_string()}}.dump(2) << "\n";
    else std::cout << r.to_string() << "\n";
    return 0;
}

// ---- jet --------------------------------------------------------------------

struct JetOpts {
    std::string term, mode = "comm", eta = "none";
    std::size_t k = 0;
    std::vector<std::string> params;
    bool as_json = false;
};

int run_jet(const JetOpts& o) {
    JetSetting s;
    s.mode = parse_mode(o.mode);
    std::size_t inferred = std::max(detail::infer_k(o.term, true), detail::infer_k("[" + o.eta + "]", false));
    s.k = o.k ? o.k : std::max<std::size_t>(1, inferred);
    s.eta = parse_eta_table(o.eta, s.k);
    std::set<std::string> params;
    for (const auto& m : s.eta)
        for (const auto& [v, r] : m) params.insert(v.base());
    for (const auto& p : o.params) {
        params.insert(p);
        s.eta[0].try_emplace(Var::plain(p), RatFun(0));
    }
    DiffTerm t = parse_term(o.term, params, ParseOptions{s.mode, s.k});
    RatFun r = rewrite_term(t, s);
    if (o.as_json)
        std::cout << json{{"term", t.to_string()}, {"mode", s.mode == MonoidKind::free ? "free" : "comm"}, {"k", s.k}, {"jet", r.to_string()}}.dump(2) << "\n";
    else
        std::cout << r.to_string() << "\n";
    return 0;
}

// ---- config-check ------------------------------------------------------------

struct CheckOpts {
    std::string file;
    std::size_t bound = 0;
    unsigned jobs = 1;
    std::uint64_t seed = 0x5eed;
    bool as_json = false;
};

json result_json(const CommutationResult& r) {
    json j{{"alpha", tuple_string(r.alpha)}, {"status", to_string(r.status)}};
    j["factorizations"] = r.factorizations;
    if (r.witness) {
        const auto& w = *r.witness;
        json wj{{"word", w.word.to_string()}, {"leader", w.leader.to_string()}, {"other_word", w.other_word.to_string()},
                {"other_leader", w.other_leader.to_string()}};
        if (w.point) wj["point"] = point_json(*w.point);
        if (w.value) wj["value"] = w.value->get_str();
        j["witness"] = wj;
        j["reduced_difference"] = w.reduced_difference.to_string();
    }
    return j;
}

void print_report(const std::string& label, const CommutationReport& rep) {
    std::cout << label << ": " << (rep.commutes ? "commutes" : "fails") << "\n";
    std::string checked;
    for (const auto& r : rep.results) checked += (checked.empty() ? "" : ", ") + tuple_string(r.alpha);
    std::cout << "  checked: " << (checked.empty() ? "none" : checked) << "\n";
    for (const auto& r : rep.results) {
        if (r.status == CommutationStatus::commutes) continue;
        const auto& w = *r.witness;
        std::cout << "  alpha " << tuple_string(r.alpha) << ": " << to_string(r.status) << "\n";
        std::cout << "    f[" << w.word.to_string() << "; " << w.leader.to_string() << "] vs f[" << w.other_word.to_string()
                  << "; " << w.other_leader.to_string() << "]\n";
        std::cout << "    reduced difference: " << w.reduced_difference.to_string() << "\n";
        if (w.point) std::cout << "    point: " << point_string(*w.point) << "\n";
        if (w.value) std::cout << "    value: " << w.value->get_str() << "\n";
    }
}

int run_config_check(const CheckOpts& o) {
    Configuration c = parse_config(read_file(o.file));
    SampleOptions so;
    so.seed = o.seed;
    auto local = check_local(c, so, o.jobs);
    std::optional<CommutationReport> global;
    if (o.bound > 0) global = verify_global(c, o.bound, so, o.jobs);
    bool ok = local.commutes && (!global || global->commutes);
    auto status = [](const CommutationReport& rep) {
        for (const auto& r : rep.results)
            if (r.status != CommutationStatus::commutes) return std::string(to_string(r.status));
        return std::string("commutes");
    };
    if (o.as_json) {
        json j{{"status", ok ? "commutes" : status(global && local.commutes ? *global : local)}};
        j["theta"] = tuple_string(c.theta());
        auto rep_json = [&](const CommutationReport& rep) {
            json checked = json::array(), results = json::array();
            for (const auto& r : rep.results) {
                checked.push_back(tuple_string(r.alpha));
                results.push_back(result_json(r));
            }
            return json{{"status", status(rep)}, {"checked", checked}, {"results", results}};
        };
        j["local"] = rep_json(local);
        if (global) {
            j["global"] = rep_json(*global);
            j["global"]["degree_bound"] = o.bound;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "status: " << (ok ? "commutes" : status(global && local.commutes ? *global : local)) << "\n";
        std::cout << "theta: " << tuple_string(c.theta()) << "\n";
        print_report("local", local);
        if (global) print_report("global (degree <= " + std::to_string(o.bound) + ")", *global);
    }
    return 0;
}

// ---- config-g ----------------------------------------------------------------

struct GOpts {
    std::string file, alpha, word, leader;
    bool all = false, as_json = false;
};

int run_config_g(const GOpts& o) {
    Configuration c = parse_config(read_file(o.file));
    if (!o.word.empty() || !o.leader.empty()) {
        if (o.word.empty() || o.leader.empty()) throw ParseError("--word and --leader go together", 1, 1);
        auto w = parse_monoid(o.word, MonoidKind::free, c.k());
        auto pi = parse_monoid(o.leader, MonoidKind::commutative, c.k());
        auto g = compute_f(w, pi, c);
        if (o.as_json)
            std::cout << json{{"word", w.to_string()}, {"leader", pi.to_string()}, {"value", g.value.to_string()}}.dump(2) << "\n";
        else
            std::cout << g.value.to_string() << "\n";
        return 0;
    }
    if (o.alpha.empty()) throw ParseError("give --alpha, or --word and --leader", 1, 1);
    auto alpha = parse_monoid(o.alpha, MonoidKind::commutative, c.k());
    auto g = canonical_f(alpha, c);
    std::vector<std::pair<MonoidElem, MonoidElem>> facts;
    if (o.all && c.is_leader(alpha))
        for (const auto& pi : c.leaders())
            if (preceq(pi, alpha))
                for (auto& w : words_with_class(quotient(alpha, pi))) facts.emplace_back(w, pi);
    if (o.as_json) {
        json j{{"alpha", tuple_string(alpha)}, {"value", g.value.to_string()}};
        if (g.witness) j["witness"] = json{{"word", g.witness->first.to_string()}, {"leader", g.witness->second.to_string()}};
        else j["witness"] = "free variable";
        if (o.all) {
            json all = json::array();
            for (const auto& [w, pi] : facts)
                all.push_back(json{{"word", w.to_string()}, {"leader", pi.to_string()}, {"value", compute_f(w, pi, c).value.to_string()}});
            j["factorizations"] = all;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << g.value.to_string() << "\n";
        for (const auto& [w, pi] : facts)
            std::cout << "  f[" << w.to_string() << "; " << pi.to_string() << "] = " << compute_f(w, pi, c).value.to_string() << "\n";
    }
    return 0;
}

// ---- prolong -----------------------------------------------------------------

struct ProlongOpts {
    std::string file;
    std::optional<std::size_t> reg;
    bool as_json = false;
};

int run_prolong(const ProlongOpts& o) {
    VarietyFile vf = parse_variety(read_file(o.file));
    auto pr = twisted_bundle(vf.variety, vf.dspec);
    json j;
    json eqs = json::array();
    for (const auto& e : pr.equations) eqs.push_back(e.to_string());
    json ys = json::array();
    for (auto y : pr.ys) ys.push_back(y.to_string());
    j["coords"] = json::array();
    for (auto x : vf.variety.coords) j["coords"].push_back(x.to_string());
    j["fiber_coords"] = ys;
    j["equations"] = eqs;
    std::ostringstream text;
    text << "equations:\n";
    for (const auto& e : pr.equations) text << "  " << e.to_string() << " = 0\n";
    if (vf.point) {
        TowerField field = vf.tower();
        TowerFieldPolicy pol{&field};
        auto space = tangent_space_at(vf.variety, vf.dspec, *vf.point, pol);
        auto tangent = reg_rank_at(vf.variety, *vf.point, o.reg.value_or(0), pol);
        json pj{{"at", values_json(*vf.point)}, {"rank", space.rank}, {"consistent", space.consistent}};
        pj["dimension"] = space.consistent ? json(space.dimension()) : json(nullptr);
        pj["tangent_dimension"] = tangent.dim;
        if (o.reg) pj["in_reg"] = tangent.in_reg;
        if (space.particular) pj["particular"] = values_json(*space.particular);
        json ker = json::array();
        for (const auto& v : space.kernel) ker.push_back(values_json(v));
        pj["kernel"] = ker;
        text << "at " << values_string(*vf.point) << ":\n";
        text << "  rank: " << space.rank << "\n";
        if (space.consistent) {
            text << "  fiber dimension: " << space.dimension() << "\n";
            text << "  particular: " << values_string(*space.particular) << "\n";
            for (const auto& v : space.kernel) text << "  kernel: " << values_string(v) << "\n";
        } else {
            text << "  fiber: empty\n";
        }
        text << "  tangent dimension: " << tangent.dim << "\n";
        if (o.reg) text << "  in Reg^" << *o.reg << ": " << (tangent.in_reg ? "yes" : "no") << "\n";
        if (vf.fiber) {
            DerSpec eps = extend_at_point(vf.variety, vf.dspec, field, *vf.point, *vf.fiber);
            pj["extension"] = eps.to_string();
            text << "  extension: " << eps.to_string() << "\n";
        }
        j["point"] = pj;
    }
    if (o.as_json) std::cout << j.dump(2) << "\n";
    else std::cout << text.str();
    return 0;
}

// ---- axiom-wide, dim-cert, fmt ---------------------------------------------------

json set_json(const DefinableSetDesc& d) {
    json coords = json::array(), proj = json::array(), atoms = json::array();
    for (auto v : d.coords) coords.push_back(v.to_string());
    for (auto v : d.projection) proj.push_back(v.to_string());
    for (const auto& a : d.atoms) atoms.push_back(json{{"expr", a.expr.to_string()}, {"rel", a.rel == Relation::eq ? "=" : "!="}});
    json meta = json::object();
    for (const auto& [k, v] : d.metadata) meta[k] = v;
    return json{{"coords", coords}, {"constraints", atoms}, {"projection", proj}, {"metadata", meta}};
}

int run_axiom_wide(const std::string& file, std::size_t n, bool as_json) {
    auto z = parse_definable_set(read_file(file));
    if (n == 0) {
        if (z.coords.size() < 2) detail::domain_fail("Z needs at least two coordinates");
        n = z.coords.size() - 1;
    }
    auto w = wide_from_deep(z, n);
    if (as_json) std::cout << set_json(w).dump(2) << "\n";
    else std::cout << format_definable_set(w);
    return 0;
}

bool looks_like_config(const std::string& text) {
    for (auto line : detail::split_lines(text)) {
        line = detail::strip_comment(line);
        if (detail::blank(line)) continue;
        detail::Cursor c(line);
        return detail::accept_word(c, "k") && c.peek() == '=';
    }
    return false;
}

int run_dim_cert(const std::string& file, bool as_json) {
    std::string text = read_file(file);
    DimensionCertificate cert;
    std::vector<std::string> labels;
    if (looks_like_config(text)) {
        auto c = parse_config(text);
        cert = triangular_dimension_certificate(c);
        for (const auto& pi : c.leaders()) labels.push_back("p[" + pi.to_string() + "]");
    } else {
        auto s = parse_system(text);
        cert = triangular_dimension_certificate(s.coords, s.eqs);
        for (std::size_t i = 0; i < s.eqs.size(); ++i) labels.push_back("eq" + std::to_string(i + 1));
    }
    if (as_json) {
        json free = json::array(), order = json::array();
        for (auto v : cert.free) free.push_back(v.to_string());
        for (const auto& [v, e] : cert.order) order.push_back(json{{"main", v.to_string()}, {"equation", labels[e]}});
        std::cout << json{{"dimension", cert.dimension}, {"free", free}, {"order", order}}.dump(2) << "\n";
    } else {
        std::cout << "dimension: " << cert.dimension << "\n";
        std::string free;
        for (auto v : cert.free) free += (free.empty() ? "" : ", ") + v.to_string();
        std::cout << "free: " << (free.empty() ? "none" : free) << "\n";
        std::cout << "order:";
        for (const auto& [v, e] : cert.order) std::cout << " " << v.to_string() << " (" << labels[e] << ")";
        std::cout << "\n";
    }
    return 0;
}

/// Term files: optional "params: a, b" line, then the term.
std::string format_term_file(const std::string& text) {
    std::set<std::string> params;
    std::string body;
    for (auto line : detail::split_lines(text)) {
        auto l = detail::strip_comment(line);
        if (detail::blank(l)) continue;
        detail::Cursor c(l);
        if (detail::accept_keyword(c, "params")) {
            do params.insert(c.ident());
            while (c.accept(','));
            c.expect_end();
            continue;
        }
        body += std::string(l) + "\n";
    }
    DiffTerm t = parse_term(body, params);
    std::string out;
    if (!params.empty()) {
        out = "params: ";
        bool first = true;
        for (const auto& p : params) {
            out += (first ? "" : ", ") + p;
            first = false;
        }
        out += "\n";
    }
    return out + t.to_string() + "\n";
}

int run_fmt(const std::string& file, std::string kind) {
    std::string text = read_file(file);
    if (kind.empty()) kind = std::filesystem::path(file).extension().string();
    if (!kind.empty() && kind[0] == '.') kind.erase(0, 1);
    if (kind == "cfg") std::cout << format_config(parse_config(text));
    else if (kind == "var") std::cout << format_variety(parse_variety(text));
    else if (kind == "set") std::cout << format_definable_set(parse_definable_set(text));
    else if (kind == "sys") std::cout << format_system(parse_system(text));
    else if (kind == "term") std::cout << format_term_file(text);
    else if (kind == "poly") std::cout << parse_ratfun(text).to_string() << "\n";
    else if (kind == "der") std::cout << parse_derspec(text).to_string() << "\n";
    else throw InputError("unknown file kind '" + kind + "' (cfg, var, set, sys, term, poly, der)");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dalg: differential algebra toolkit"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "dalg 0.1.0");

    DeriveOpts d;
    auto* derive = app.add_subcommand("derive", "Apply a derivation to a rational function");
    derive->add_option("expr", d.expr, "Rational function")->required();
    derive->add_option("--der", d.der, "Derivation, e.g. \"eta: t -> 1; d: x -> u\"");
    derive->add_flag("--twisted", d.twisted, "Print the twisted lift with fresh y-variables instead");
    derive->add_flag("--json", d.as_json, "JSON output");

    JetOpts jo;
    auto* jet = app.add_subcommand("jet", "Rewrite a differential term in jet variables");
    jet->add_option("term", jo.term, "Differential term, e.g. \"d1(x*d1(x))\"")->required();
    jet->add_option("--mode", jo.mode, "comm (Theta) or free (Gamma)");
    jet->add_option("--k", jo.k, "Number of derivations (default: largest dN used)");
    jet->add_option("--eta", jo.eta, "Coefficient derivations, e.g. \"d1: t -> 1; d2: t -> 2\"");
    jet->add_option("--param", jo.params, "Declare a constant parameter");
    jet->add_flag("--json", jo.as_json, "JSON output");

    CheckOpts co;
    auto* check = app.add_subcommand("config-check", "Check commutation of a configuration");
    check->add_option("file", co.file, "Configuration file")->required();
    check->add_option("--bound", co.bound, "Also verify every alpha up to this total degree");
    check->add_option("--jobs", co.jobs, "Worker threads for independent alpha checks")->check(CLI::Range(1u, 256u));
    check->add_option("--seed", co.seed, "Seed for witness sampling");
    check->add_flag("--json", co.as_json, "JSON output");

    GOpts go;
    auto* cg = app.add_subcommand("config-g", "Print f_alpha or f_{w,pi} of a configuration");
    cg->add_option("file", go.file, "Configuration file")->required();
    cg->add_option("--alpha", go.alpha, "Theta element, e.g. \"d1 d2\"");
    cg->add_option("--word", go.word, "Gamma word w");
    cg->add_option("--leader", go.leader, "Minimal leader pi");
    cg->add_flag("--all", go.all, "List f_{w,pi} for every factorization of alpha");
    cg->add_flag("--json", go.as_json, "JSON output");

    ProlongOpts po;
    auto* prolong = app.add_subcommand("prolong", "Twisted tangent bundle, tangent spaces and extensions");
    prolong->add_option("file", po.file, "Variety file")->required();
    prolong->add_option("--reg", po.reg, "Test membership in Reg^d");
    prolong->add_flag("--json", po.as_json, "JSON output");

    std::string wide_file;
    std::size_t wide_n = 0;
    bool wide_json = false;
    auto* wide = app.add_subcommand("axiom-wide", "Encode a deep-axiom instance as a wide one");
    wide->add_option("file", wide_file, "Definable set file over n+1 coordinates")->required();
    wide->add_option("--n", wide_n, "n (default: coordinates - 1)");
    wide->add_flag("--json", wide_json, "JSON output");

    std::string dim_file;
    bool dim_json = false;
    auto* dim = app.add_subcommand("dim-cert", "Dimension certificate of a triangular system or configuration");
    dim->add_option("file", dim_file, "System or configuration file")->required();
    dim->add_flag("--json", dim_json, "JSON output");

    std::string fmt_file, fmt_kind;
    auto* fmt = app.add_subcommand("fmt", "Parse a file and print it in canonical form");
    fmt->add_option("file", fmt_file, "Input file")->required();
    fmt->add_option("--kind", fmt_kind, "cfg, var, set, sys, term, poly or der (default: extension)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*derive) return run_derive(d);
        if (*jet) return run_jet(jo);
        if (*check) return run_config_check(co);
        if (*cg) return run_config_g(go);
        if (*prolong) return run_prolong(po);
        if (*wide) return run_axiom_wide(wide_file, wide_n, wide_json);
        if (*dim) return run_dim_cert(dim_file, dim_json);
        if (*fmt) return run_fmt(fmt_file, fmt_kind);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
