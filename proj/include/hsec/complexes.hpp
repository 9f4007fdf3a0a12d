#pragma once

#include "hsec/words.hpp"
#include "hsec/zlinalg.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hsec {

// Generator (f, t)^sign of the free pre-crossed module on F x Sigma_2.
struct HLetter {
    Word f;
    std::size_t cell = 0;
    int sign = 1;
    bool operator==(const HLetter&) const = default;
};
using HWord = std::vector<HLetter>;

// h (f, t)^sign h^-1, an element of H written through a conjugating H element.
struct TriadLetter {
    Word f;
    HWord h;
    std::size_t cell = 0;
    int sign = 1;
    bool operator==(const TriadLetter&) const = default;
};
using TriadWord = std::vector<TriadLetter>;

struct TwoCell {
    std::string name;
    Word attach;
    bool operator==(const TwoCell&) const = default;
};

struct ThreeCell {
    std::string name;
    TriadWord attach;
    bool operator==(const ThreeCell&) const = default;
};

// Reduced CW complex: one 0-cell, 1-cells = alphabet, 2- and 3-cells with attaching data.
struct CWComplex {
    std::string name;
    AlphabetPtr alphabet = make_alphabet({});
    std::vector<TwoCell> two_cells;
    std::vector<ThreeCell> three_cells;

    int dimension() const {
        if (!three_cells.empty()) return 3;
        if (!two_cells.empty()) return 2;
        return alphabet->size() ? 1 : 0;
    }

    Word word(std::string_view text) const { return Word::parse(alphabet, text); }
    Word identity() const { return Word(alphabet); }

    std::optional<std::size_t> find_two_cell(std::string_view n) const {
        for (std::size_t i = 0; i < two_cells.size(); ++i)
            if (two_cells[i].name == n) return i;
        return std::nullopt;
    }

    std::size_t two_cell(std::string_view n) const {
        auto i = find_two_cell(n);
        if (!i) throw ValidationError("unknown 2-cell '" + std::string(n) + "'");
        return *i;
    }

    std::optional<std::size_t> find_three_cell(std::string_view n) const {
        for (std::size_t i = 0; i < three_cells.size(); ++i)
            if (three_cells[i].name == n) return i;
        return std::nullopt;
    }

    // structural equality; the display name is not part of the structure
    bool operator==(const CWComplex& o) const {
        return *alphabet == *o.alphabet && two_cells == o.two_cells && three_cells == o.three_cells;
    }
};

inline Word free_pre_crossed_boundary(const CWComplex& M, const HWord& w) {
    Word out = M.identity();
    for (const HLetter& l : w) {
        if (l.cell >= M.two_cells.size()) throw ValidationError("unknown 2-cell index " + std::to_string(l.cell));
        Word piece = conj(l.f, M.two_cells[l.cell].attach);
        out = out * (l.sign > 0 ? piece : inv(piece));
    }
    return out;
}

inline Word boundary(const CWComplex& M, const TriadLetter& l) {
    Word dh = free_pre_crossed_boundary(M, l.h);
    return conj(dh, free_pre_crossed_boundary(M, {HLetter{l.f, l.cell, l.sign}}));
}

inline Word boundary(const CWComplex& M, const TriadWord& w) {
    Word out = M.identity();
    for (const TriadLetter& l : w) out = out * boundary(M, l);
    return out;
}

struct TriadCheck {
    bool ok = true;
    std::optional<std::size_t> offending_letter;
    Word f_component;  // boundary word; must be trivial for membership in the second copy of H
    std::string message;
};

// Every letter lies in H; membership in H-bar holds exactly when the boundary word is trivial.
inline TriadCheck validate_triad(const CWComplex& M, const TriadWord& w) {
    TriadCheck r;
    for (std::size_t i = 0; i < w.size(); ++i) {
        auto bad_cell = [&](std::size_t c) { return c >= M.two_cells.size(); };
        bool bad = bad_cell(w[i].cell) || (w[i].sign != 1 && w[i].sign != -1);
        for (const HLetter& h : w[i].h) bad = bad || bad_cell(h.cell) || (h.sign != 1 && h.sign != -1);
        if (bad) {
            r.ok = false;
            r.offending_letter = i;
            r.message = "letter " + std::to_string(i) + " references an unknown 2-cell or has an invalid sign";
            return r;
        }
    }
    Word acc = M.identity();
    std::size_t last_closed = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc = acc * boundary(M, w[i]);
        if (acc.empty()) last_closed = i + 1;
    }
    r.f_component = acc;
    if (!acc.empty()) {
        r.ok = false;
        r.offending_letter = std::min(last_closed, w.size() - 1);
        r.message = "boundary " + acc.to_string() + " is not trivial; first unbalanced letter " +
                    std::to_string(*r.offending_letter);
    }
    return r;
}

// Exponent-sum labels of words modulo the relator lattice: H_1 of the complex.
class AbelianLabeling {
public:
    explicit AbelianLabeling(const CWComplex& M) : alphabet_(M.alphabet) {
        std::vector<IntVector> rels;
        std::vector<std::size_t> cols(alphabet_->size());
        std::iota(cols.begin(), cols.end(), 0);
        for (const auto& c : M.two_cells) {
            IntVector v;
            for (long long e : c.attach.exponent_sums()) v.emplace_back(e);
            if (std::any_of(v.begin(), v.end(), [](const Integer& x) { return x != 0; })) rels.push_back(v);
        }
        reducer_ = echelon(rels, cols);
    }

    IntVector label(const Word& w) const {
        IntVector v;
        for (long long e : w.exponent_sums()) v.emplace_back(e);
        v.resize(alphabet_->size());
        return reducer_.reduce(v);
    }

    Word canonical(const Word& w) const {
        IntVector v = label(w);
        std::vector<Letter> raw;
        for (std::size_t i = 0; i < v.size(); ++i) raw.push_back({i, to_ll(v[i])});
        return Word::reduce(alphabet_, raw);
    }

private:
    AlphabetPtr alphabet_;
    EchelonBasis reducer_;
};

namespace detail {

inline HWord parse_hword(const CWComplex& M, const std::vector<std::tuple<std::string, std::string, int>>& spec) {
    HWord h;
    for (const auto& [f, cell, sign] : spec) h.push_back({M.word(f), M.two_cell(cell), sign});
    return h;
}

}  // namespace detail

// Triad letter from (f, h, cell, sign) with h given as (f, cell, sign) triples.
inline TriadLetter triad_letter(const CWComplex& M, std::string_view f, std::string_view cell, int sign,
                                const std::vector<std::tuple<std::string, std::string, int>>& h = {}) {
    return TriadLetter{M.word(f), detail::parse_hword(M, h), M.two_cell(cell), sign};
}

inline CWComplex make_complex(std::string name, std::vector<std::string> gens,
                              const std::vector<std::pair<std::string, std::string>>& cells) {
    CWComplex M;
    M.name = std::move(name);
    M.alphabet = make_alphabet(std::move(gens));
    for (const auto& [n, w] : cells) {
        if (M.find_two_cell(n)) throw ValidationError("duplicate 2-cell '" + n + "'");
        M.two_cells.push_back({n, M.word(w)});
    }
    return M;
}

namespace catalog {

inline CWComplex circle_wedge(int n) {
    if (n < 0) throw ValidationError("circle_wedge needs n >= 0");
    std::vector<std::string> g;
    for (int i = 1; i <= n; ++i) g.push_back("a" + std::to_string(i));
    return make_complex("circle_wedge:" + std::to_string(n), g, {});
}

inline CWComplex sphere2() { return make_complex("sphere2", {}, {{"t", ""}}); }
inline CWComplex torus2() { return make_complex("torus2", {"a", "b"}, {{"t", "a b a^-1 b^-1"}}); }
inline CWComplex rp2() { return make_complex("rp2", {"a"}, {{"t", "a^2"}}); }

inline CWComplex genus_surface(int g) {
    if (g < 1) throw ValidationError("genus_surface needs g >= 1");
    std::vector<std::string> gens;
    std::string rel;
    for (int i = 1; i <= g; ++i) {
        std::string a = "a" + std::to_string(i), b = "b" + std::to_string(i);
        gens.push_back(a);
        gens.push_back(b);
        rel += a + " " + b + " " + a + "^-1 " + b + "^-1 ";
    }
    return make_complex("genus_surface:" + std::to_string(g), gens, {{"t", rel}});
}

inline CWComplex torus_knot(int p, int q) {
    if (p < 1 || q < 1) throw ValidationError("torus_knot needs p, q >= 1");
    return make_complex("torus_knot:" + std::to_string(p) + "," + std::to_string(q), {"a", "b"},
                        {{"t", "a^" + std::to_string(p) + " b^-" + std::to_string(q)}});
}

inline CWComplex klein_bottle() {
    CWComplex M = torus_knot(2, 2);
    M.name = "klein_bottle";
    return M;
}

inline CWComplex s1_wedge_s2() { return make_complex("s1_wedge_s2", {"a"}, {{"t", ""}}); }

inline CWComplex torus3() {
    CWComplex M = make_complex("torus3", {"a", "b", "c"},
                               {{"t", "b c b^-1 c^-1"}, {"u", "c a c^-1 a^-1"}, {"v", "a b a^-1 b^-1"}});
    M.three_cells.push_back({"x",
                             {triad_letter(M, "", "t", 1), triad_letter(M, "c", "v", -1), triad_letter(M, "", "u", 1),
                              triad_letter(M, "a", "t", -1), triad_letter(M, "", "v", 1),
                              triad_letter(M, "b", "u", -1)}});
    return M;
}

inline CWComplex s1_x_s2() {
    CWComplex M = make_complex("s1_x_s2", {"a"}, {{"t", ""}});
    M.three_cells.push_back({"x", {triad_letter(M, "", "t", 1), triad_letter(M, "a", "t", -1)}});
    return M;
}

inline std::vector<std::string> names() {
    return {"circle_wedge:n", "sphere2",     "torus2", "rp2",     "genus_surface:g", "torus_knot:p,q",
            "klein_bottle",   "s1_wedge_s2", "torus3", "s1_x_s2"};
}

// "name" or "name:p1,p2"
inline CWComplex get(std::string_view spec) {
    std::string name(spec.substr(0, spec.find(':')));
    std::vector<int> params;
    if (auto colon = spec.find(':'); colon != std::string_view::npos) {
        std::string rest(spec.substr(colon + 1));
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                params.push_back(std::stoi(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw ValidationError("invalid parameter '" + item + "' in '" + std::string(spec) + "'");
            }
        }
    }
    auto want = [&](std::size_t n) {
        if (params.size() != n)
            throw ValidationError("'" + name + "' takes " + std::to_string(n) + " parameter(s)");
    };
    if (name == "circle_wedge") return want(1), circle_wedge(params[0]);
    if (name == "genus_surface") return want(1), genus_surface(params[0]);
    if (name == "torus_knot") return want(2), torus_knot(params[0], params[1]);
    want(0);
    if (name == "sphere2") return sphere2();
    if (name == "torus2") return torus2();
    if (name == "rp2") return rp2();
    if (name == "klein_bottle") return klein_bottle();
    if (name == "s1_wedge_s2") return s1_wedge_s2();
    if (name == "torus3") return torus3();
    if (name == "s1_x_s2") return s1_x_s2();
    throw ValidationError("unknown space '" + name + "'");
}

}  // namespace catalog

namespace detail {

using nlohmann::json;

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [l, c] = line_column(text, e.byte ? e.byte - 1 : 0);
        std::string msg = e.what();
        if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
        throw ParseError(msg, l, c);
    }
}

inline void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw ParseError(where + ": unknown key '" + it.key() + "'");
    }
}

inline const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
    return j.at(key);
}

inline std::string need_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + ": expected a string");
    return j.get<std::string>();
}

inline int need_sign(const json& j, const std::string& where) {
    if (!j.is_number_integer() || (j.get<int>() != 1 && j.get<int>() != -1))
        throw ParseError(where + ": sign must be 1 or -1");
    return j.get<int>();
}

inline Word word_field(const CWComplex& M, const json& j, const std::string& where) {
    std::string s = need_string(j, where);
    try {
        return M.word(s);
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    } catch (const AlphabetError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

inline std::size_t cell_field(const CWComplex& M, const json& j, const std::string& where) {
    std::string s = need_string(j, where);
    auto c = M.find_two_cell(s);
    if (!c) throw ValidationError(where + ": unknown 2-cell '" + s + "'");
    return *c;
}

inline json hword_json(const CWComplex& M, const HWord& h) {
    json arr = json::array();
    for (const HLetter& l : h) {
        json o = json::object();
        o["f"] = l.f.to_string();
        o["cell"] = M.two_cells.at(l.cell).name;
        o["sign"] = l.sign;
        arr.push_back(o);
    }
    return arr;
}

inline HWord hword_from_json(const CWComplex& M, const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array");
    HWord h;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string w = where + "[" + std::to_string(i) + "]";
        only_keys(j[i], {"f", "cell", "sign"}, w);
        h.push_back({word_field(M, need(j[i], "f", w), w + ".f"), cell_field(M, need(j[i], "cell", w), w + ".cell"),
                     need_sign(need(j[i], "sign", w), w + ".sign")});
    }
    return h;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const CWComplex& M) {
    using oj = nlohmann::ordered_json;
    oj out = oj::object();
    out["generators"] = M.alphabet->names();
    oj two = oj::array();
    for (const auto& c : M.two_cells) two.push_back(oj{{"name", c.name}, {"attach", c.attach.to_string()}});
    out["two_cells"] = two;
    oj three = oj::array();
    for (const auto& c : M.three_cells) {
        oj letters = oj::array();
        for (const auto& l : c.attach) {
            oj h = oj::array();
            for (const auto& hl : l.h)
                h.push_back(oj{{"f", hl.f.to_string()}, {"cell", M.two_cells.at(hl.cell).name}, {"sign", hl.sign}});
            letters.push_back(oj{{"f", l.f.to_string()}, {"h", h}, {"cell", M.two_cells.at(l.cell).name}, {"sign", l.sign}});
        }
        three.push_back(oj{{"name", c.name}, {"attach", letters}});
    }
    out["three_cells"] = three;
    return out;
}

inline std::string save(const CWComplex& M) { return to_json(M).dump(2) + "\n"; }

inline CWComplex load_text(std::string_view text, std::string name = "file") {
    using detail::json;
    json j = detail::parse_json(text);
    detail::only_keys(j, {"generators", "two_cells", "three_cells"}, "complex");
    const json& gens = detail::need(j, "generators", "complex");
    if (!gens.is_array()) throw ParseError("generators: expected an array");
    std::vector<std::string> names;
    for (const auto& g : gens) names.push_back(detail::need_string(g, "generators"));
    CWComplex M;
    M.name = std::move(name);
    try {
        M.alphabet = make_alphabet(names);
    } catch (const AlphabetError& e) {
        throw ValidationError(std::string("generators: ") + e.what());
    }
    const json& two = detail::need(j, "two_cells", "complex");
    if (!two.is_array()) throw ParseError("two_cells: expected an array");
    for (std::size_t i = 0; i < two.size(); ++i) {
        std::string w = "two_cells[" + std::to_string(i) + "]";
        detail::only_keys(two[i], {"name", "attach"}, w);
        std::string n = detail::need_string(detail::need(two[i], "name", w), w + ".name");
        if (n.empty()) throw ValidationError(w + ": empty cell name");
        if (M.find_two_cell(n)) throw ValidationError(w + ": duplicate 2-cell '" + n + "'");
        Word attach = detail::word_field(M, detail::need(two[i], "attach", w), w + ".attach");
        M.two_cells.push_back({n, attach});
    }
    if (j.contains("three_cells")) {
        const json& three = j.at("three_cells");
        if (!three.is_array()) throw ParseError("three_cells: expected an array");
        for (std::size_t i = 0; i < three.size(); ++i) {
            std::string w = "three_cells[" + std::to_string(i) + "]";
            detail::only_keys(three[i], {"name", "attach"}, w);
            std::string n = detail::need_string(detail::need(three[i], "name", w), w + ".name");
            if (n.empty()) throw ValidationError(w + ": empty cell name");
            if (M.find_three_cell(n)) throw ValidationError(w + ": duplicate 3-cell '" + n + "'");
            const json& letters = detail::need(three[i], "attach", w);
            if (!letters.is_array()) throw ParseError(w + ".attach: expected an array");
            TriadWord tw;
            for (std::size_t k = 0; k < letters.size(); ++k) {
                std::string lw = w + ".attach[" + std::to_string(k) + "]";
                detail::only_keys(letters[k], {"f", "h", "cell", "sign"}, lw);
                TriadLetter l;
                l.f = letters[k].contains("f") ? detail::word_field(M, letters[k].at("f"), lw + ".f") : M.identity();
                l.h = letters[k].contains("h") ? detail::hword_from_json(M, letters[k].at("h"), lw + ".h") : HWord{};
                l.cell = detail::cell_field(M, detail::need(letters[k], "cell", lw), lw + ".cell");
                l.sign = detail::need_sign(detail::need(letters[k], "sign", lw), lw + ".sign");
                tw.push_back(l);
            }
            TriadCheck chk = validate_triad(M, tw);
            if (!chk.ok) throw ValidationError(w + " (" + n + "): " + chk.message);
            M.three_cells.push_back({n, tw});
        }
    }
    return M;
}

inline CWComplex load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_text(ss.str(), path);
}

}  // namespace hsec
