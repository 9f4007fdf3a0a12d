#include "cli.hpp"

#include "hsec/classify2d.hpp"
#include "hsec/cohomology.hpp"
#include "hsec/dim3.hpp"
#include "hsec/xmod.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

namespace hsec::cli {

namespace {

using oj = nlohmann::ordered_json;

bool is_file(const std::string& spec) {
    std::error_code ec;
    return std::filesystem::is_regular_file(spec, ec);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CWComplex resolve_source(const std::string& spec) {
    if (spec.empty()) throw ValidationError("--source is required");
    return is_file(spec) ? load_file(spec) : catalog::get(spec);
}

using Target = std::variant<ModuleXMod, SpecialTarget>;

Target resolve_target(const std::string& spec) {
    if (spec.empty()) throw ValidationError("--target is required");
    if (is_file(spec)) return load_xmod_file(spec);
    if (spec == "so3" || spec == "s3" || spec.rfind("lens:", 0) == 0) return special_targets::get(spec);
    return targets::get(spec);
}

oj group_json(const AbelianGroup& g) {
    oj a = oj::array();
    for (std::size_t i = 0; i < g.free_rank(); ++i) a.push_back(0);
    for (const auto& t : g.torsion()) a.push_back(to_ll(t));
    return a;
}

std::string group_text(const oj& a) {
    if (a.empty()) return "0";
    std::string s;
    for (const auto& x : a) {
        if (!s.empty()) s += " x ";
        s += x.get<long long>() == 0 ? "Z" : "Z_" + std::to_string(x.get<long long>());
    }
    return s;
}

oj ints_json(const IntVector& v) {
    oj a = oj::array();
    for (const auto& x : v) a.push_back(to_ll(x));
    return a;
}

oj phi1_json(const CWComplex& M, const Phi1Class& s) {
    oj phi1 = oj::object();
    for (std::size_t a = 0; a < s.size(); ++a) {
        const IntVector& l = s[a];
        const std::string& name = M.alphabet->names()[a];
        if (l.size() == 1)
            phi1[name] = to_ll(l[0]);
        else if (l.empty())
            phi1[name] = 0;
        else
            phi1[name] = ints_json(l);
    }
    return phi1;
}

bool is_group_key(const std::string& k) {
    return k == "based_group" || k == "group" || k == "classify" || k == "oracle" || k == "total" || k == "pi2" ||
           k == "sectors_group";
}

// Plain-text rendering of a report document.
void render(std::ostream& os, const oj& j, int indent) {
    std::string pad(indent, ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string label = [&] {
            std::string s = it.key();
            std::replace(s.begin(), s.end(), '_', ' ');
            return s;
        }();
        const oj& v = it.value();
        if (is_group_key(it.key()) && v.is_array()) {
            os << pad << label << ": " << group_text(v) << "\n";
        } else if (v.is_object()) {
            os << pad << label << ":\n";
            render(os, v, indent + 2);
        } else if (v.is_array() && !v.empty() && v[0].is_object()) {
            os << pad << label << ":\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                os << pad << "  [" << i + 1 << "]\n";
                render(os, v[i], indent + 4);
            }
        } else if (v.is_string()) {
            os << pad << label << ": " << v.get<std::string>() << "\n";
        } else {
            os << pad << label << ": " << v.dump() << "\n";
        }
    }
}

std::string emit(const oj& doc, const std::string& format) {
    if (format == "json") return doc.dump(2) + "\n";
    std::ostringstream os;
    render(os, doc, 0);
    return os.str();
}

// H_1 M as an abelian group
AbelianGroup first_homology(const CWComplex& M) {
    const std::size_t n = M.alphabet->size();
    IntMatrix rel(n, M.two_cells.size());
    for (std::size_t t = 0; t < M.two_cells.size(); ++t) {
        auto e = M.two_cells[t].attach.exponent_sums();
        for (std::size_t a = 0; a < n; ++a) rel(a, t) = e[a];
    }
    return quotient(n, rel);
}

// Hom(H_1 M, Z_o1 x ... x Z_os)
AbelianGroup hom_group(const AbelianGroup& h1, const IntVector& orders) {
    IntVector f;
    for (const auto& o : orders) {
        for (std::size_t i = 0; i < h1.free_rank(); ++i) f.push_back(o);
        for (const auto& t : h1.torsion()) f.push_back(gcd(t, o));
    }
    IntVector keep;
    for (const auto& x : f)
        if (x != 1) keep.push_back(x);
    return AbelianGroup::from_orders(keep);
}

oj header(const RunConfig& c, const std::string& mode) {
    return oj{{"source", c.source}, {"target", c.target}, {"mode", mode}};
}

Outcome classify_2d(const RunConfig& c, const CWComplex& M, const ModuleXMod& X) {
    SectorClassification C = c.free ? classify_free(M, X) : classify_based(M, X);
    oj doc = header(c, c.free ? "free" : "based");
    oj body = to_json(M, C);
    doc["sectors"] = body["sectors"];
    return {ok, emit(doc, c.format), {}};
}

Outcome classify_s2_route(const RunConfig& c, const CWComplex& M) {
    auto P = presets::find(M);
    if (!P) throw UnsupportedError("maps into sphere2 from a 3-complex need cylinder data; available for s1_x_s2, torus3");
    oj doc = header(c, c.free ? "free" : "based");
    doc["sweep"] = c.sweep;
    oj sectors = oj::array();
    for (const S2Sector& s : classify_s2(M, c.sweep)) {
        oj o = oj::object();
        oj phi2 = oj::object();
        for (std::size_t t = 0; t < M.two_cells.size(); ++t) phi2[M.two_cells[t].name] = to_ll(s.phi2[t]);
        o["phi2"] = phi2;
        o["group"] = group_json(s.group);
        if (s.group.is_finite()) {
            oj reps = oj::array();
            for (const auto& r : s.representatives) reps.push_back(ints_json(r));
            o["representatives"] = reps;
        } else {
            o["representatives"] = oj::array({ints_json(IntVector(M.three_cells.size()))});
            o["free_directions"] = oj::array({ints_json(int_vector({1}))});
        }
        sectors.push_back(o);
    }
    doc["sectors"] = sectors;
    // pi_1 S^2 is trivial, so free and based classes coincide
    if (c.free) doc["note"] = "the target is simply connected; free and based classes coincide";
    return {ok, emit(doc, c.format), {}};
}

Outcome classify_special(const RunConfig& c, const CWComplex& M, const SpecialTarget& X) {
    auto res = special_case_classify(M, X);
    oj doc = header(c, c.free ? "free" : "based");
    oj sectors = oj::array();
    bool uniform = true, trivial_action = true;
    for (const auto& s : res) {
        oj o = oj::object();
        o["phi1"] = phi1_json(M, s.phi1);
        o["group"] = group_json(s.group);
        oj reps = oj::array();
        for (const auto& r : s.quotient.representatives()) reps.push_back(ints_json(s.quotient.display(r)));
        o["representatives"] = reps;
        if (!s.quotient.free_directions().empty()) {
            oj dirs = oj::array();
            for (const auto& d : s.quotient.free_directions()) dirs.push_back(ints_json(s.quotient.display(d)));
            o["free_directions"] = dirs;
        }
        if (c.free) {
            oj orbs = oj::array(), bounds = oj::array();
            for (const auto& f : s.free.families) {
                orbs.push_back(f.members);
                bounds.push_back(f.reflection ? oj(to_ll(ceil_div(*f.reflection, 2))) : oj(nullptr));
                if (f.reflection || f.members.size() > 1) trivial_action = false;
            }
            for (const auto& orb : s.free.orbits) {
                orbs.push_back(orb);
                if (orb.size() > 1) trivial_action = false;
            }
            o["free_orbits"] = orbs;
            if (!s.free.families.empty()) o["family_lower_bounds"] = bounds;
            if (!s.free.resolved) o["note"] = s.free.note;
        }
        uniform = uniform && s.group == res.front().group;
        sectors.push_back(o);
    }
    doc["sectors"] = sectors;
    // every sector carries the same group and pi_1 acts trivially: the classes form a product
    if (!res.empty() && uniform && (!c.free || trivial_action))
        doc["total"] = group_json(hom_group(first_homology(M), X.pi3.orders) * res.front().group);
    return {ok, emit(doc, c.format), {}};
}

Outcome cmd_classify(const RunConfig& c) {
    CWComplex M = resolve_source(c.source);
    Target T = resolve_target(c.target);
    if (auto* X = std::get_if<ModuleXMod>(&T)) {
        if (M.dimension() <= 2) return classify_2d(c, M, *X);
        if (c.target == "sphere2") return classify_s2_route(c, M);
        throw UnsupportedError("3-dimensional sources are supported for sphere2 and targets without pi_2");
    }
    return classify_special(c, M, std::get<SpecialTarget>(T));
}

oj check_line(const std::string& label, const AbelianGroup& a, const AbelianGroup& b) {
    return oj{{"sector", label}, {"classify", group_json(a)}, {"oracle", group_json(b)}, {"match", a == b}};
}

Outcome finish_check(oj doc, const oj& checks, const RunConfig& c) {
    bool all = std::all_of(checks.begin(), checks.end(), [](const oj& x) { return x["match"].get<bool>(); });
    doc["checks"] = checks;
    doc["match"] = all;
    return {all ? ok : mismatch, emit(doc, c.format), all ? "" : "cross-check mismatch"};
}

Outcome cmd_crosscheck(const RunConfig& c) {
    CWComplex M = resolve_source(c.source);
    Target T = resolve_target(c.target);
    oj checks = oj::array();
    if (auto* X = std::get_if<ModuleXMod>(&T)) {
        if (M.dimension() <= 2) {
            oj doc = header(c, "twisted cohomology");
            SectorClassification C = classify_based(M, *X);
            CoefficientModule coeffs = pi2_coefficients(*X);
            for (const auto& s : C.sectors)
                checks.push_back(check_line(phi1_json(M, s.phi1).dump(), s.based_group,
                                            twisted_second_cohomology(M, s.phi1, coeffs)));
            return finish_check(doc, checks, c);
        }
        if (c.target != "sphere2") throw UnsupportedError("no second route for this pair");
        auto P = presets::find(M);
        if (!P) throw UnsupportedError("no cylinder data for this source");
        CupData cup = c.cup.empty() ? *presets::find_cup(M) : load_cup_file(c.cup);
        oj doc = header(c, "cup product count");
        doc["sweep"] = c.sweep;
        for (const S2Sector& s : classify_s2(M, c.sweep)) {
            if (s.phi2.size() != cup.h2.size()) throw ValidationError("cup table does not match the source");
            checks.push_back(check_line(to_string(s.phi2), s.group, pontrjagin_classify(cup, s.phi2)));
        }
        return finish_check(doc, checks, c);
    }
    const SpecialTarget& X = std::get<SpecialTarget>(T);
    oj doc = header(c, "third cohomology");
    for (const auto& s : special_case_classify(M, X))
        checks.push_back(check_line(phi1_json(M, s.phi1).dump(), s.group, twisted_third_cohomology(M, s.phi1, X.pi3)));
    return finish_check(doc, checks, c);
}

Outcome cmd_validate(const RunConfig& c) {
    if (c.path.empty()) throw ValidationError("validate needs a file");
    std::string text = read_file(c.path);
    nlohmann::json j = detail::parse_json(text);
    oj doc = oj::object();
    doc["file"] = c.path;
    std::vector<std::string> problems;
    if (j.is_object() && j.contains("generators")) {
        doc["kind"] = "complex";
        CWComplex M = load_text(text, c.path);
        for (const auto& x : M.three_cells) {
            TriadCheck t = validate_triad(M, x.attach);
            if (!t.ok) problems.push_back("3-cell " + x.name + ": " + t.message);
        }
    } else if (j.is_object() && j.contains("G")) {
        doc["kind"] = "target";
        problems = validate(load_xmod_text(text, c.path));
    } else if (j.is_object() && j.contains("h1_rank")) {
        doc["kind"] = "cup table";
        load_cup_text(text);
    } else {
        throw ParseError("unrecognized file: expected a complex, a target or a cup table");
    }
    doc["valid"] = problems.empty();
    if (!problems.empty()) doc["problems"] = problems;
    Outcome o{problems.empty() ? ok : input_error, emit(doc, c.format), {}};
    if (!problems.empty()) o.error = problems.front();
    return o;
}

IntMatrix parse_matrix(const std::string& spec) {
    nlohmann::json j = detail::parse_json(is_file(spec) ? read_file(spec) : spec);
    if (!j.is_array()) throw ParseError("matrix: expected an array of rows");
    std::size_t cols = j.empty() ? 0 : j[0].size();
    IntMatrix A(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw ParseError("matrix: rows must be arrays of equal length");
        for (std::size_t k = 0; k < cols; ++k) {
            const auto& x = j[i][k];
            if (x.is_number_integer())
                A(i, k) = Integer(x.get<long long>());
            else if (x.is_string())
                A(i, k) = Integer(x.get<std::string>());
            else
                throw ParseError("matrix: entries must be integers");
        }
    }
    return A;
}

oj matrix_json(const IntMatrix& A) {
    oj rows = oj::array();
    for (std::size_t i = 0; i < A.rows(); ++i) rows.push_back(ints_json(A.row(i)));
    return rows;
}

Outcome cmd_snf(const RunConfig& c) {
    if (c.matrix.empty()) throw ValidationError("snf needs --matrix");
    IntMatrix A = parse_matrix(c.matrix);
    SmithDecomposition D = smith_normal_form(A);
    oj doc = oj::object();
    doc["diagonal"] = ints_json(D.diagonal());
    doc["rank"] = D.rank;
    doc["S"] = matrix_json(D.S);
    doc["U"] = matrix_json(D.U);
    doc["V"] = matrix_json(D.V);
    if (c.format == "json") return {ok, doc.dump(2) + "\n", {}};
    std::ostringstream os;
    os << "diagonal: " << to_string(D.diagonal()) << "\nrank: " << D.rank << "\nS =\n"
       << D.S.to_string() << "\nU =\n"
       << D.U.to_string() << "\nV =\n"
       << D.V.to_string() << "\n";
    return {ok, os.str(), {}};
}

FiniteGroup named_group(const std::string& name) {
    auto g = group_by_name(name);
    if (!g) throw ValidationError("unknown group '" + name + "' (use C1..C8, C2xC2, S3, C4xC2, C2xC2xC2, D4, Q8)");
    return *g;
}

FiniteCrossedModule resolve_xmod(const std::string& spec) {
    if (spec.empty()) throw ValidationError("hoang needs a crossed module");
    if (is_file(spec)) {
        nlohmann::json j = detail::parse_json(read_file(spec));
        detail::only_keys(j, {"name", "H", "G", "boundary", "action"}, "crossed module");
        FiniteCrossedModule X;
        X.name = j.value("name", spec);
        X.H = named_group(detail::need_string(detail::need(j, "H", "crossed module"), "H"));
        X.G = named_group(detail::need_string(detail::need(j, "G", "crossed module"), "G"));
        try {
            X.boundary = detail::need(j, "boundary", "crossed module").get<std::vector<std::size_t>>();
            X.action = detail::need(j, "action", "crossed module").get<std::vector<std::vector<std::size_t>>>();
        } catch (const nlohmann::json::exception&) {
            throw ParseError("boundary and action must be arrays of element indices");
        }
        if (X.boundary.size() != X.H.order() || X.action.size() != X.G.order())
            throw ValidationError("boundary needs one entry per element of H and action one row per element of G");
        for (const auto& row : X.action)
            if (row.size() != X.H.order()) throw ValidationError("each action row needs one entry per element of H");
        return X;
    }
    std::string name = spec.substr(0, spec.find(':'));
    std::string rest = spec.find(':') == std::string::npos ? "" : spec.substr(spec.find(':') + 1);
    if (name == "identity") return finite_xmods::identity(named_group(rest));
    if (name == "automorphism") return finite_xmods::automorphism(named_group(rest));
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw ValidationError("unknown crossed module '" + spec + "'");
    std::string a = rest.substr(0, comma), b = rest.substr(comma + 1);
    if (name == "zero") return finite_xmods::trivial(named_group(a), named_group(b));
    if (name == "reduction") {
        try {
            return finite_xmods::reduction(std::stoul(a), std::stoul(b));
        } catch (const std::logic_error&) {
            throw ValidationError("invalid reduction parameters '" + rest + "'");
        }
    }
    throw ValidationError("unknown crossed module '" + spec + "'");
}

Outcome cmd_hoang(const RunConfig& c) {
    FiniteCrossedModule X = resolve_xmod(c.xmod);
    if (auto v = validate(X); !v.empty()) throw ValidationError("not a crossed module: " + v.front());
    HoangData D = hoang_data(X);
    oj doc = oj::object();
    doc["crossed_module"] = X.name;
    doc["pi1_order"] = D.n();
    doc["pi2"] = group_json(D.pi2);
    doc["lifts"] = D.lift;
    doc["alpha"] = D.alpha;
    doc["cocycle_defects"] = cocycle_defects(D);
    if (homomorphic_section(X, D)) {
        doc["split"] = true;
        doc["beta_class"] = "trivial";
    } else {
        doc["split"] = false;
        bool budget = false;
        auto w = coboundary_witness(D, 50'000'000, &budget);
        doc["beta_class"] = w ? "trivial" : budget ? "undecided" : "nontrivial";
    }
    return {ok, emit(doc, c.format), {}};
}

Outcome cmd_report(const RunConfig& c) {
    CWComplex M = resolve_source(c.source);
    oj doc = oj::object();
    doc["source"] = c.source;
    oj r = crossed_square_report(M);
    for (auto& [k, v] : r.items()) doc[k] = v;
    return {ok, emit(doc, c.format), {}};
}

}  // namespace

Outcome run(const RunConfig& c) {
    try {
        if (c.format != "text" && c.format != "json") throw ValidationError("--format must be text or json");
        if (c.command == "classify") return cmd_classify(c);
        if (c.command == "crosscheck") return cmd_crosscheck(c);
        if (c.command == "validate") return cmd_validate(c);
        if (c.command == "snf") return cmd_snf(c);
        if (c.command == "hoang") return cmd_hoang(c);
        if (c.command == "report") return cmd_report(c);
        throw ValidationError("unknown command '" + c.command + "'");
    } catch (const UnsupportedError& e) {
        return {unsupported, {}, e.what()};
    } catch (const Error& e) {
        return {input_error, {}, e.what()};
    } catch (const nlohmann::json::exception& e) {
        return {input_error, {}, e.what()};
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Homotopy classes of maps between CW complexes, computed with crossed modules", "hsec"};
    app.require_subcommand(1);
    RunConfig c;

    auto common = [&](CLI::App* s) {
        s->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        s->add_option("--out", c.out, "write the report to a file");
    };
    auto pair = [&](CLI::App* s) {
        s->add_option("--source", c.source, "catalog space (e.g. torus_knot:2,3) or complex file")->required();
        s->add_option("--target", c.target, "rp2, sphere2, lens:p,q, so3, s3, trivial:r,k or target file")->required();
        s->add_option("--sweep", c.sweep, "bound on |phi2| for 3-dimensional sources")->check(CLI::NonNegativeNumber);
    };

    auto* classify = app.add_subcommand("classify", "classify maps from --source to --target");
    pair(classify);
    auto* based = classify->add_flag("--based", "based classes (default)");
    classify->add_flag("--free", c.free, "free classes")->excludes(based);
    common(classify);

    auto* cross = app.add_subcommand("crosscheck", "compare the classification with an independent route");
    pair(cross);
    cross->add_option("--cup", c.cup, "cup table file for the cup product route");
    common(cross);

    auto* val = app.add_subcommand("validate", "check a complex, target or cup table file");
    val->add_option("path", c.path, "file to check")->required();
    common(val);

    auto* snf = app.add_subcommand("snf", "Smith normal form of an integer matrix");
    snf->add_option("--matrix", c.matrix, "JSON rows, e.g. [[2,4],[6,8]], or a file")->required();
    common(snf);

    auto* hoang = app.add_subcommand("hoang", "invariants of a finite crossed module");
    hoang->add_option("xmod", c.xmod, "reduction:n,m, identity:G, automorphism:H, zero:H,G or a file")->required();
    common(hoang);

    auto* report = app.add_subcommand("report", "structure of the free crossed square of a complex");
    report->add_option("--source", c.source, "catalog space or complex file")->required();
    common(report);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }
    c.command = app.get_subcommands().front()->get_name();

    Outcome o = run(c);
    if (!o.error.empty()) err << "error: " << o.error << "\n";
    if (!o.output.empty()) {
        if (c.out.empty()) {
            out << o.output;
        } else {
            std::ofstream f(c.out);
            if (!f) {
                err << "error: cannot write '" << c.out << "'\n";
                return input_error;
            }
            f << o.output;
        }
    }
    return o.code;
}

}  // namespace hsec::cli
