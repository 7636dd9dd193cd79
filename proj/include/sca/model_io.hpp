#pragma once

// Plain-text formats for shifts, observables, and maps, shared by the CLI
// and the tests. A file is a sequence of [section] blocks holding
// "key = value" lines and, inside [map] and [observable], table rows written
// as "word -> output". '#' starts a comment, blank lines separate at will.
//
// A model file either describes a one-dimensional map,
//
//   [model]              [alphabet]          [map]
//   name = xor01         symbols = 0 1       left = 0
//                                            right = 1
//   [domain]             [codomain]          00 -> 0
//   forbidden =          forbidden =         01 -> 1
//                                            10 -> 1
//                                            11 -> 0
//
// or names one of the built-in torus models with "[lattice2d] type = ...".
// Words over multi-character alphabets are written with commas, "00,01".
// Rule rows must cover exactly the domain words of the window length;
// observable rows likewise cover the words of its range, with rational
// values like 1 or -3/2. Both sides of a map share one alphabet.

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sca/errors.hpp"
#include "sca/models.hpp"
#include "sca/observable.hpp"
#include "sca/rational.hpp"
#include "sca/sft.hpp"
#include "sca/sliding_map.hpp"
#include "sca/word.hpp"

namespace sca {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

struct DocSection {
    std::vector<std::pair<std::string, std::string>> keys;
    std::vector<std::pair<std::string, std::string>> rows;
};

struct Document {
    std::vector<std::pair<std::string, DocSection>> sections;

    const DocSection* find(const std::string& name) const {
        for (const auto& [n, sec] : sections)
            if (n == name) return &sec;
        return nullptr;
    }

    const std::string* key(const std::string& section, const std::string& name) const {
        if (const DocSection* sec = find(section))
            for (const auto& [k, v] : sec->keys)
                if (k == name) return &v;
        return nullptr;
    }
};

// Sections and their permitted keys; rows are only legal where a table makes
// sense. Anything unrecognized is an error, so typos never pass silently.
inline Document parse_document(const std::string& text) {
    static const std::map<std::string, std::vector<std::string>> kSections = {
        {"model", {"name"}},
        {"alphabet", {"symbols"}},
        {"domain", {"forbidden"}},
        {"codomain", {"forbidden"}},
        {"sft", {"forbidden"}},
        {"map", {"left", "right"}},
        {"observable", {"range", "value"}},
        {"lattice2d", {"type"}},
    };
    Document doc;
    DocSection* current = nullptr;
    std::string current_name;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw parse_error(where + "unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (kSections.find(name) == kSections.end())
                throw parse_error(where + "unknown section [" + name + "]");
            if (doc.find(name)) throw parse_error(where + "duplicate section [" + name + "]");
            doc.sections.emplace_back(name, DocSection{});
            current = &doc.sections.back().second;
            current_name = name;
            continue;
        }
        if (!current) throw parse_error(where + "content before any section header");
        const std::size_t arrow = line.find("->");
        if (arrow != std::string::npos) {
            if (current_name != "map" && current_name != "observable")
                throw parse_error(where + "table rows are only allowed in [map] and [observable]");
            const std::string lhs = trim(line.substr(0, arrow));
            const std::string rhs = trim(line.substr(arrow + 2));
            if (lhs.empty() || rhs.empty())
                throw parse_error(where + "table row needs a word and an output");
            for (const auto& [k, v] : current->rows)
                if (k == lhs) throw parse_error(where + "duplicate row for '" + lhs + "'");
            current->rows.emplace_back(lhs, rhs);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error(where + "expected 'key = value' or 'word -> output'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& allowed = kSections.at(current_name);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw parse_error(where + "unknown key '" + key + "' in [" + current_name + "]");
        for (const auto& [k, v] : current->keys)
            if (k == key) throw parse_error(where + "duplicate key '" + key + "'");
        current->keys.emplace_back(key, value);
    }
    return doc;
}

inline const std::string& require_key(const Document& doc, const std::string& section,
                                      const std::string& name) {
    const std::string* v = doc.key(section, name);
    if (!v) throw parse_error("missing '" + name + " = ...' in [" + section + "]");
    return *v;
}

inline alphabet_ptr parse_alphabet_section(const Document& doc) {
    if (!doc.find("alphabet")) throw parse_error("missing [alphabet] section");
    return make_alphabet(split_ws(require_key(doc, "alphabet", "symbols")));
}

inline std::vector<Word> parse_forbidden(const Document& doc, const std::string& section,
                                         const alphabet_ptr& alph) {
    std::vector<Word> words;
    if (const std::string* v = doc.key(section, "forbidden"))
        for (const std::string& text : split_ws(*v)) words.push_back(parse_word(alph, text));
    return words;
}

inline int parse_int(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(text, &used);
    } catch (const std::exception&) {
        throw parse_error(what + " must be an integer, got '" + text + "'");
    }
    if (used != text.size())
        throw parse_error(what + " must be an integer, got '" + text + "'");
    return value;
}

inline void reject_sections(const Document& doc, const std::vector<std::string>& banned,
                            const std::string& context) {
    for (const std::string& name : banned)
        if (doc.find(name))
            throw parse_error("[" + name + "] does not belong in " + context);
}

}  // namespace detail

inline Sft1D parse_sft(const std::string& text) {
    const detail::Document doc = detail::parse_document(text);
    detail::reject_sections(doc, {"model", "map", "observable", "lattice2d", "domain", "codomain"},
                            "a shift file");
    const alphabet_ptr alph = detail::parse_alphabet_section(doc);
    return Sft1D(alph, detail::parse_forbidden(doc, "sft", alph));
}

inline std::string serialize_sft(const Sft1D& x) {
    std::ostringstream out;
    out << "[alphabet]\nsymbols =";
    for (int a = 0; a < x.alphabet_size(); ++a) out << ' ' << x.alphabet()->symbol(a);
    out << "\n\n[sft]\nforbidden =";
    for (const Word& w : x.forbidden_input()) out << ' ' << display_word(w);
    out << '\n';
    return out.str();
}

inline LocalObservable parse_observable(const std::string& text) {
    const detail::Document doc = detail::parse_document(text);
    detail::reject_sections(doc, {"model", "map", "lattice2d", "domain", "codomain"},
                            "an observable file");
    const alphabet_ptr alph = detail::parse_alphabet_section(doc);
    Sft1D x(alph, detail::parse_forbidden(doc, "sft", alph));
    if (!doc.find("observable")) throw parse_error("missing [observable] section");
    const int range = detail::parse_int(detail::require_key(doc, "observable", "range"), "range");
    if (range < 0) throw parse_error("range must be nonnegative");
    if (range == 0) {
        // Constants carry no words; their single value is a plain key.
        if (!doc.find("observable")->rows.empty())
            throw parse_error("a range-0 observable takes 'value = ...', not rows");
        return LocalObservable::constant(
            x, parse_rational(detail::require_key(doc, "observable", "value")));
    }
    if (doc.key("observable", "value"))
        throw parse_error("'value' is only for range-0 observables; use rows");

    std::map<cells_t, rational> values;
    for (const auto& [lhs, rhs] : doc.find("observable")->rows) {
        const cells_t w = parse_cells(*alph, lhs);
        if (static_cast<int>(w.size()) != range || !x.is_in_language(w))
            throw parse_error("row for '" + lhs + "' is not a word of the stated range");
        values[w] = parse_rational(rhs);
    }
    return LocalObservable(x, range, [&](const cells_t& w) {
        const auto it = values.find(w);
        if (it == values.end())
            throw parse_error("missing row for word '" + display_cells(*alph, w) + "'");
        return it->second;
    });
}

inline std::string serialize_observable(const LocalObservable& f) {
    const Sft1D& x = f.sft();
    std::ostringstream out;
    out << serialize_sft(x);
    out << "\n[observable]\nrange = " << f.range() << '\n';
    if (f.range() == 0) {
        out << "value = " << rational_to_string(f.value(cells_t{})) << '\n';
        return out.str();
    }
    for (const cells_t& w : x.language(f.range(), kLanguageCap))
        out << display_cells(*x.alphabet(), w) << " -> " << rational_to_string(f.value(w)) << '\n';
    return out.str();
}

inline Model parse_model(const std::string& text) {
    const detail::Document doc = detail::parse_document(text);
    detail::reject_sections(doc, {"sft", "observable"}, "a model file");
    Model m;
    if (const std::string* name = doc.key("model", "name")) m.name = *name;

    if (doc.find("lattice2d")) {
        detail::reject_sections(doc, {"alphabet", "domain", "codomain", "map"},
                                "a torus model file");
        const std::string& type = detail::require_key(doc, "lattice2d", "type");
        if (type != "q2r" && type != "ising-contour")
            throw parse_error("unknown torus model type '" + type + "'");
        m.lattice2d = type;
        if (m.name.empty()) m.name = type;
        return m;
    }

    const alphabet_ptr alph = detail::parse_alphabet_section(doc);
    if (!doc.find("map")) throw parse_error("missing [map] section");
    const int left = detail::parse_int(detail::require_key(doc, "map", "left"), "left");
    const int right = detail::parse_int(detail::require_key(doc, "map", "right"), "right");
    Sft1D domain(alph, detail::parse_forbidden(doc, "domain", alph));
    Sft1D codomain(alph, detail::parse_forbidden(doc, "codomain", alph));

    const int window = right - left + 1;
    std::map<cells_t, int> rows;
    for (const auto& [lhs, rhs] : doc.find("map")->rows) {
        const cells_t w = parse_cells(*alph, lhs);
        if (static_cast<int>(w.size()) != window || !domain.is_in_language(w))
            throw parse_error("rule row for '" + lhs + "' is not a domain word of the window length");
        const int out = alph->index_of(rhs);
        if (out < 0) throw parse_error("rule output '" + rhs + "' is not an alphabet symbol");
        rows[w] = out;
    }
    m.map = SlidingBlockMap1D(std::move(domain), std::move(codomain), left, right,
                              [&](const cells_t& w) {
                                  const auto it = rows.find(w);
                                  if (it == rows.end())
                                      throw parse_error("missing rule row for word '" +
                                                        display_cells(*alph, w) + "'");
                                  return it->second;
                              });
    return m;
}

inline std::string serialize_model(const Model& m) {
    std::ostringstream out;
    if (!m.name.empty()) out << "[model]\nname = " << m.name << "\n\n";
    if (!m.lattice2d.empty()) {
        out << "[lattice2d]\ntype = " << m.lattice2d << '\n';
        return out.str();
    }
    if (!m.map) throw domain_violation("model holds neither a map nor a torus type");
    const SlidingBlockMap1D& phi = *m.map;
    const alphabet_ptr& alph = phi.domain().alphabet();
    out << "[alphabet]\nsymbols =";
    for (int a = 0; a < phi.domain().alphabet_size(); ++a) out << ' ' << alph->symbol(a);
    out << "\n\n[domain]\nforbidden =";
    for (const Word& w : phi.domain().forbidden_input()) out << ' ' << display_word(w);
    out << "\n\n[codomain]\nforbidden =";
    for (const Word& w : phi.codomain().forbidden_input()) out << ' ' << display_word(w);
    out << "\n\n[map]\nleft = " << phi.left() << "\nright = " << phi.right() << '\n';
    for (const auto& [w, target] : phi.rule_rows())
        out << display_cells(*alph, w) << " -> " << alph->symbol(target) << '\n';
    return out.str();
}

// Equality for round-trips: same torus tag, or maps acting identically.
// Descriptions are cosmetic and never serialized.
inline bool models_equal(const Model& a, const Model& b) {
    if (a.name != b.name || a.lattice2d != b.lattice2d) return false;
    if (a.map.has_value() != b.map.has_value()) return false;
    return !a.map || *a.map == *b.map;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Model load_model(const std::string& path) {
    try {
        return parse_model(read_text_file(path));
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

inline Sft1D load_sft(const std::string& path) {
    try {
        return parse_sft(read_text_file(path));
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

inline LocalObservable load_observable(const std::string& path) {
    try {
        return parse_observable(read_text_file(path));
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

}  // namespace sca
