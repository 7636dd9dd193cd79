// Alphabets and finite words.
//
// Symbols are strings externally and dense indices internally. Words are
// index vectors tagged with their alphabet. Fixed-length words are often
// packed into a single integer (big-endian base-|S|), so that numeric
// order coincides with lexicographic order by symbol index; all the graph
// algorithms rely on that for deterministic tie-breaking.

#pragma once

#include <cctype>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "sca/errors.hpp"

namespace sca {

class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols))
    {
        if (symbols_.size() < 2)
            throw invalid_construction("alphabet needs at least two symbols");
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            const std::string& s = symbols_[i];
            if (s.empty())
                throw invalid_construction("empty alphabet symbol");
            for (char c : s) {
                if (c == ',' || c == '#' || std::isspace(static_cast<unsigned char>(c)))
                    throw invalid_construction("symbol '" + s + "' contains a separator character");
            }
            if (s == "->")
                throw invalid_construction("'->' cannot be an alphabet symbol");
            if (!index_.emplace(s, static_cast<int>(i)).second)
                throw invalid_construction("duplicate alphabet symbol '" + s + "'");
        }
        single_char_ = true;
        for (const std::string& s : symbols_)
            if (s.size() != 1)
                single_char_ = false;
    }

    int size() const { return static_cast<int>(symbols_.size()); }
    const std::string& symbol(int i) const { return symbols_.at(static_cast<std::size_t>(i)); }

    // -1 when the symbol is unknown.
    int index_of(const std::string& s) const
    {
        auto it = index_.find(s);
        return it == index_.end() ? -1 : it->second;
    }

    bool single_char() const { return single_char_; }

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }
    bool operator!=(const Alphabet& other) const { return !(*this == other); }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, int> index_;
    bool single_char_ = false;
};

using alphabet_ptr = std::shared_ptr<const Alphabet>;

inline alphabet_ptr make_alphabet(std::vector<std::string> symbols)
{
    return std::make_shared<const Alphabet>(std::move(symbols));
}

inline alphabet_ptr binary_alphabet()
{
    return make_alphabet({"0", "1"});
}

// Symbol-index sequence; the working representation inside algorithms.
using cells_t = std::vector<int>;

struct Word {
    alphabet_ptr alphabet;
    cells_t cells;

    std::size_t size() const { return cells.size(); }

    bool operator==(const Word& other) const
    {
        return *alphabet == *other.alphabet && cells == other.cells;
    }
};

// Single-char alphabets render words as plain strings ("0110");
// otherwise symbols are joined with commas ("00,01,10").
inline std::string display_cells(const Alphabet& alph, const cells_t& w)
{
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!alph.single_char() && i > 0)
            out += ',';
        out += alph.symbol(w[i]);
    }
    return out;
}

inline std::string display_word(const Word& w)
{
    return display_cells(*w.alphabet, w.cells);
}

// Inverse of display_cells. Accepts the comma form for any alphabet and
// the plain-string form only when every symbol is a single character.
inline cells_t parse_cells(const Alphabet& alph, const std::string& text)
{
    cells_t out;
    if (text.empty())
        return out;
    if (text.find(',') != std::string::npos) {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t next = text.find(',', pos);
            if (next == std::string::npos)
                next = text.size();
            const std::string sym = text.substr(pos, next - pos);
            const int idx = alph.index_of(sym);
            if (idx < 0)
                throw parse_error("unknown symbol '" + sym + "' in word '" + text + "'");
            out.push_back(idx);
            pos = next + 1;
        }
        return out;
    }
    if (alph.single_char()) {
        for (char c : text) {
            const int idx = alph.index_of(std::string(1, c));
            if (idx < 0)
                throw parse_error("unknown symbol '" + std::string(1, c) + "' in word '" + text + "'");
            out.push_back(idx);
        }
        return out;
    }
    const int idx = alph.index_of(text);
    if (idx < 0)
        throw parse_error("cannot parse word '" + text + "': unknown symbol");
    out.push_back(idx);
    return out;
}

inline Word parse_word(const alphabet_ptr& alph, const std::string& text)
{
    return Word{alph, parse_cells(*alph, text)};
}

// s^n with an overflow guard; word-packing helper.
inline std::uint64_t pow_u64(std::uint64_t s, int n)
{
    std::uint64_t r = 1;
    for (int i = 0; i < n; ++i) {
        if (r > std::numeric_limits<std::uint64_t>::max() / s)
            throw resource_limit("word length too large to pack");
        r *= s;
    }
    return r;
}

inline std::uint64_t pack_cells(const cells_t& w, int alphabet_size)
{
    std::uint64_t code = 0;
    for (int c : w)
        code = code * static_cast<std::uint64_t>(alphabet_size) + static_cast<std::uint64_t>(c);
    return code;
}

inline cells_t unpack_code(std::uint64_t code, int length, int alphabet_size)
{
    cells_t w(static_cast<std::size_t>(length));
    for (int i = length - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::uint64_t>(alphabet_size));
        code /= static_cast<std::uint64_t>(alphabet_size);
    }
    return w;
}

} // namespace sca
