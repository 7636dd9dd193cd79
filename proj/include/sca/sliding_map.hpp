// Sliding block maps between one-dimensional subshifts.
//
// A map is given by a contiguous neighborhood [left..right] containing 0
// and a local rule on domain words of length window = right - left + 1.
// Construction is eager and checked: the rule must be defined on every
// language word of that length, must emit codomain symbols, and the image
// of every sufficiently long domain word must avoid the codomain's
// forbidden windows, so that the map really lands in the codomain.
//
// The local rule is stored as a dense table indexed by packed window
// words, with -1 marking windows outside the domain language.

#pragma once

#include <functional>
#include <utility>

#include "sca/sft.hpp"

namespace sca {

class SlidingBlockMap1D {
    struct impl {
        Sft1D domain;
        Sft1D codomain;
        int left = 0;
        int right = 0;
        int window = 1;
        std::vector<int> table; // size s_dom^window

        impl(Sft1D d, Sft1D c) : domain(std::move(d)), codomain(std::move(c)) {}
    };

    std::shared_ptr<const impl> p_;

    explicit SlidingBlockMap1D(std::shared_ptr<const impl> p) : p_(std::move(p)) {}

public:
    SlidingBlockMap1D(Sft1D domain, Sft1D codomain, int left, int right,
                      const std::function<int(const cells_t&)>& local_rule)
    {
        if (left > 0 || right < 0)
            throw invalid_construction("neighborhood [left..right] must contain 0");
        auto im = std::make_shared<impl>(std::move(domain), std::move(codomain));
        im->left = left;
        im->right = right;
        im->window = right - left + 1;

        const int s_dom = im->domain.alphabet_size();
        const int s_cod = im->codomain.alphabet_size();
        const std::uint64_t table_size = pow_u64(static_cast<std::uint64_t>(s_dom), im->window);
        if (table_size > kStateCap)
            throw resource_limit("local-rule window too large for table-based representation");
        im->table.assign(table_size, -1);

        for (const cells_t& w : im->domain.language(im->window, kStateCap)) {
            const int out = local_rule(w);
            if (out < 0 || out >= s_cod)
                throw invalid_construction("local rule emits a symbol outside the codomain alphabet on word '" +
                                           display_cells(*im->domain.alphabet(), w) + "'");
            im->table[pack_cells(w, s_dom)] = out;
        }

        // The image of every domain point must be a codomain point, i.e.
        // every image window of the codomain's forbidden-word length must
        // be an allowed codomain word. Checking all domain words that
        // produce one such window is necessary and sufficient.
        if (!im->codomain.is_full_shift()) {
            const int f_cod = im->codomain.memory() + 1;
            for (const cells_t& w : im->domain.language(f_cod + im->window - 1, kLanguageCap)) {
                cells_t img(static_cast<std::size_t>(f_cod));
                for (int i = 0; i < f_cod; ++i) {
                    const std::uint64_t code = pack_cells(
                        cells_t(w.begin() + i, w.begin() + i + im->window), s_dom);
                    img[static_cast<std::size_t>(i)] = im->table[code];
                }
                if (!im->codomain.is_in_language(img))
                    throw invalid_construction("local rule maps the domain outside the codomain: image word '" +
                                               display_cells(*im->codomain.alphabet(), img) +
                                               "' is not allowed");
            }
        }
        p_ = std::move(im);
    }

    const Sft1D& domain() const { return p_->domain; }
    const Sft1D& codomain() const { return p_->codomain; }
    int left() const { return p_->left; }
    int right() const { return p_->right; }
    int window() const { return p_->window; }

    // Raw table lookup by packed window word; -1 outside the language.
    int local_packed(std::uint64_t code) const { return p_->table[code]; }

    int local(const cells_t& w) const
    {
        if (static_cast<int>(w.size()) != p_->window)
            throw domain_violation("local rule expects a word of the neighborhood width");
        const int out = p_->table[pack_cells(w, p_->domain.alphabet_size())];
        if (out < 0)
            throw domain_violation("local rule applied to a word outside the domain language");
        return out;
    }

    // Finite-word image: output cell i reads input cells [i .. i+window-1],
    // so the result is shorter by window - 1.
    cells_t apply_to_word(const cells_t& w) const
    {
        const int m = p_->window;
        if (static_cast<int>(w.size()) < m)
            throw domain_violation("word shorter than the local-rule window");
        if (!p_->domain.is_in_language(w))
            throw domain_violation("word is not in the domain language");
        const int s_dom = p_->domain.alphabet_size();
        cells_t out(w.size() - static_cast<std::size_t>(m) + 1);
        // Maintain the packed window incrementally while sliding.
        const std::uint64_t keep = pow_u64(static_cast<std::uint64_t>(s_dom), m - 1);
        std::uint64_t code = pack_cells(cells_t(w.begin(), w.begin() + m - 1), s_dom);
        for (std::size_t i = 0; i + static_cast<std::size_t>(m) <= w.size(); ++i) {
            code = (code % keep) * static_cast<std::uint64_t>(s_dom) +
                   static_cast<std::uint64_t>(w[i + static_cast<std::size_t>(m) - 1]);
            out[i] = p_->table[code];
        }
        return out;
    }

    Word apply_to_word(const Word& w) const
    {
        if (*w.alphabet != *p_->domain.alphabet())
            throw domain_violation("word uses a different alphabet than the map domain");
        return Word{p_->codomain.alphabet(), apply_to_word(w.cells)};
    }

    // Image of the periodic point with period |w|; output cell i reads the
    // cyclic window at positions i+left .. i+right, so the result is again
    // one period, aligned with the input.
    cells_t apply_periodic(const cells_t& w) const
    {
        if (w.empty())
            throw domain_violation("periodic word must be nonempty");
        const int p = static_cast<int>(w.size());
        for (int c : w)
            if (c < 0 || c >= p_->domain.alphabet_size())
                throw domain_violation("word has an out-of-range symbol");
        if (!p_->domain.is_full_shift()) {
            // The periodic point is in the domain iff none of its cyclic
            // windows of the forbidden-word length is forbidden.
            const int f = p_->domain.memory() + 1;
            cells_t win(static_cast<std::size_t>(f));
            for (int i = 0; i < p; ++i) {
                for (int j = 0; j < f; ++j)
                    win[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>((i + j) % p)];
                if (!p_->domain.is_in_language(win))
                    throw domain_violation("periodic word is not a valid domain configuration");
            }
        }
        cells_t out(static_cast<std::size_t>(p));
        cells_t win(static_cast<std::size_t>(p_->window));
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p_->window; ++j) {
                const int idx = ((i + p_->left + j) % p + p) % p;
                win[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(idx)];
            }
            out[static_cast<std::size_t>(i)] = p_->table[pack_cells(win, p_->domain.alphabet_size())];
        }
        return out;
    }

    Word apply_periodic(const Word& w) const
    {
        if (*w.alphabet != *p_->domain.alphabet())
            throw domain_violation("word uses a different alphabet than the map domain");
        return Word{p_->codomain.alphabet(), apply_periodic(w.cells)};
    }

    // Language words of the rule window with their outputs, in
    // lexicographic order; the canonical printable form of the rule.
    std::vector<std::pair<cells_t, int>> rule_rows() const
    {
        std::vector<std::pair<cells_t, int>> rows;
        for (const cells_t& w : p_->domain.language(p_->window, kLanguageCap))
            rows.emplace_back(w, p_->table[pack_cells(w, p_->domain.alphabet_size())]);
        return rows;
    }

    // Maps are equal when they have the same domain and codomain and act
    // identically; neighborhoods are aligned to a common span first, so
    // padding with dummy neighbors does not break equality.
    bool operator==(const SlidingBlockMap1D& other) const
    {
        if (p_->domain != other.p_->domain || p_->codomain != other.p_->codomain)
            return false;
        const int l = std::min(p_->left, other.p_->left);
        const int r = std::max(p_->right, other.p_->right);
        const int m = r - l + 1;
        const int s_dom = p_->domain.alphabet_size();
        for (const cells_t& w : p_->domain.language(m, kLanguageCap)) {
            const auto sub = [&](int ll, int rr) {
                return pack_cells(cells_t(w.begin() + (ll - l), w.begin() + (rr - l) + 1), s_dom);
            };
            if (p_->table[sub(p_->left, p_->right)] !=
                other.p_->table[sub(other.p_->left, other.p_->right)])
                return false;
        }
        return true;
    }
    bool operator!=(const SlidingBlockMap1D& other) const { return !(*this == other); }
};

// Composition outer(inner(.)): neighborhoods add up (Minkowski sum) and
// the local rule first develops the inner image of the combined window.
inline SlidingBlockMap1D compose(const SlidingBlockMap1D& outer, const SlidingBlockMap1D& inner)
{
    if (inner.codomain() != outer.domain())
        throw invalid_construction("composition requires the inner codomain to equal the outer domain");
    const int m_inner = inner.window();
    const int m_outer = outer.window();
    auto rule = [&inner, &outer, m_inner, m_outer](const cells_t& w) {
        cells_t mid(static_cast<std::size_t>(m_outer));
        for (int j = 0; j < m_outer; ++j)
            mid[static_cast<std::size_t>(j)] =
                inner.local(cells_t(w.begin() + j, w.begin() + j + m_inner));
        return outer.local(mid);
    };
    return SlidingBlockMap1D(inner.domain(), outer.codomain(),
                             inner.left() + outer.left(), inner.right() + outer.right(), rule);
}

// Higher-block presentation: symbols of the new subshift are the length-D
// language words of x, with adjacency inherited from overlap in x. The
// recoder sends a point to its sequence of D-windows; the decoder reads
// the first base symbol back off and inverts it.
struct BlockPresentation {
    Sft1D block_sft;
    SlidingBlockMap1D recode; // x -> block_sft, neighborhood [0..D-1]
    SlidingBlockMap1D decode; // block_sft -> x, neighborhood [0..0]
};

inline std::string make_block_symbol(const Alphabet& base, const cells_t& w)
{
    std::string sym;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!base.single_char() && i > 0)
            sym += '.';
        sym += base.symbol(w[i]);
    }
    return sym;
}

inline BlockPresentation block_presentation(const Sft1D& x, int block_length)
{
    if (block_length < 1)
        throw domain_violation("block length must be at least 1");
    const int D = block_length;
    const int s = x.alphabet_size();
    const std::vector<cells_t> words = x.language(D, kLanguageCap);

    std::vector<std::string> symbols;
    symbols.reserve(words.size());
    for (const cells_t& w : words)
        symbols.push_back(make_block_symbol(*x.alphabet(), w));
    const alphabet_ptr block_alph = make_alphabet(symbols);

    // Rank lookup for the recoder.
    std::vector<std::uint64_t> codes;
    codes.reserve(words.size());
    for (const cells_t& w : words)
        codes.push_back(pack_cells(w, s));

    // Allowed successions are exactly the (D+1)-words of x.
    std::vector<std::uint64_t> merged;
    for (const cells_t& w : x.language(D + 1, kLanguageCap))
        merged.push_back(pack_cells(w, s));
    std::vector<Word> forbidden_pairs;
    for (std::size_t ai = 0; ai < words.size(); ++ai) {
        for (std::size_t bi = 0; bi < words.size(); ++bi) {
            const cells_t& A = words[ai];
            const cells_t& B = words[bi];
            bool follows = std::equal(A.begin() + 1, A.end(), B.begin());
            if (follows) {
                cells_t join = A;
                join.push_back(B.back());
                follows = std::binary_search(merged.begin(), merged.end(), pack_cells(join, s));
            }
            if (!follows)
                forbidden_pairs.push_back(Word{block_alph, {static_cast<int>(ai), static_cast<int>(bi)}});
        }
    }
    Sft1D block(block_alph, forbidden_pairs);

    SlidingBlockMap1D recode(x, block, 0, D - 1, [&](const cells_t& w) {
        const auto it = std::lower_bound(codes.begin(), codes.end(), pack_cells(w, s));
        return static_cast<int>(it - codes.begin());
    });
    SlidingBlockMap1D decode(block, x, 0, 0, [&](const cells_t& w) {
        return words[static_cast<std::size_t>(w[0])][0];
    });
    return BlockPresentation{std::move(block), std::move(recode), std::move(decode)};
}

} // namespace sca
