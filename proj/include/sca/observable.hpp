// Local observables: exact-rational functions of a fixed-length window.
//
// An observable of range k on a subshift reads the window x[0..k-1] and
// returns a rational; range 0 is a constant. Larger windows never hurt:
// expand() widens the range by ignoring the extra cells on the right,
// which leaves all per-site sums unchanged. Arithmetic aligns operands to
// a common range, so f - g is well defined across ranges.
//
// Composition with a sliding block map materializes f after the map as a
// plain observable of range k + window - 1, by developing the local rule
// across the combined window starting at its leftmost cell. For maps with
// a left-anchored neighborhood (left = 0) this is literally x -> f(Φx at
// position 0); in general it is that function up to a shift, which leaves
// every orbit sum and conservation question unchanged.

#pragma once

#include "sca/rational.hpp"
#include "sca/sliding_map.hpp"

namespace sca {

class LocalObservable {
    struct impl {
        Sft1D sft;
        int range = 0;
        std::vector<rational> table; // indexed by packed k-word; 0 off-language

        explicit impl(Sft1D x) : sft(std::move(x)) {}
    };

    std::shared_ptr<const impl> p_;

public:
    LocalObservable(Sft1D sft, int range, const std::function<rational(const cells_t&)>& value)
    {
        if (range < 0)
            throw invalid_construction("observable range must be nonnegative");
        auto im = std::make_shared<impl>(std::move(sft));
        im->range = range;
        const std::uint64_t size =
            pow_u64(static_cast<std::uint64_t>(im->sft.alphabet_size()), range);
        if (size > kStateCap)
            throw resource_limit("observable range too large for table-based representation");
        im->table.assign(size, rational(0));
        for (const cells_t& w : im->sft.language(range, kLanguageCap))
            im->table[pack_cells(w, im->sft.alphabet_size())] = value(w);
        p_ = std::move(im);
    }

    static LocalObservable constant(Sft1D sft, const rational& c)
    {
        return LocalObservable(std::move(sft), 0, [&c](const cells_t&) { return c; });
    }

    // Indicator of the cylinder fixed by w at positions 0..|w|-1.
    static LocalObservable indicator(Sft1D sft, const Word& w)
    {
        if (*w.alphabet != *sft.alphabet())
            throw invalid_construction("indicator word uses a different alphabet");
        if (!sft.is_in_language(w.cells))
            throw invalid_construction("indicator word is not in the language");
        const cells_t target = w.cells;
        return LocalObservable(std::move(sft), static_cast<int>(target.size()),
                               [target](const cells_t& v) { return rational(v == target ? 1 : 0); });
    }

    const Sft1D& sft() const { return p_->sft; }
    int range() const { return p_->range; }

    const rational& value_packed(std::uint64_t code) const { return p_->table[code]; }

    const rational& value(const cells_t& w) const
    {
        if (static_cast<int>(w.size()) != p_->range)
            throw domain_violation("observable expects a window of its range");
        if (!p_->sft.is_in_language(w))
            throw domain_violation("observable evaluated outside the language");
        return p_->table[pack_cells(w, p_->sft.alphabet_size())];
    }

    // Sum of f over all complete windows of a finite word.
    rational sum_over_word(const cells_t& w) const
    {
        if (static_cast<int>(w.size()) < p_->range)
            throw domain_violation("word shorter than the observable range");
        if (!p_->sft.is_in_language(w))
            throw domain_violation("word is not in the language");
        rational total = 0;
        const int k = p_->range;
        for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= w.size(); ++i)
            total += p_->table[pack_cells(cells_t(w.begin() + static_cast<std::ptrdiff_t>(i),
                                                  w.begin() + static_cast<std::ptrdiff_t>(i) + k),
                                          p_->sft.alphabet_size())];
        return total;
    }

    // Sum of f over one period of the periodic configuration ...www... .
    rational sum_over_periodic(const cells_t& w) const
    {
        if (w.empty())
            throw domain_violation("periodic word must be nonempty");
        const int p = static_cast<int>(w.size());
        const int k = p_->range;
        rational total = 0;
        cells_t win(static_cast<std::size_t>(k));
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < k; ++j)
                win[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>((i + j) % p)];
            if (!p_->sft.is_in_language(win))
                throw domain_violation("periodic word is not a valid configuration");
            total += p_->table[pack_cells(win, p_->sft.alphabet_size())];
        }
        return total;
    }

    // Same observable seen at a larger range; extra cells are ignored.
    LocalObservable expand(int new_range) const
    {
        if (new_range < p_->range)
            throw domain_violation("can only expand to a larger range");
        if (new_range == p_->range)
            return *this;
        const LocalObservable& self = *this;
        const int k = p_->range;
        return LocalObservable(p_->sft, new_range, [&self, k](const cells_t& w) {
            return self.value_packed(pack_cells(cells_t(w.begin(), w.begin() + k),
                                                self.sft().alphabet_size()));
        });
    }

    friend LocalObservable operator+(const LocalObservable& f, const LocalObservable& g)
    {
        if (f.sft() != g.sft())
            throw domain_violation("observables live on different subshifts");
        const int k = std::max(f.range(), g.range());
        const LocalObservable fe = f.expand(k);
        const LocalObservable ge = g.expand(k);
        return LocalObservable(f.sft(), k, [&](const cells_t& w) {
            const std::uint64_t code = pack_cells(w, f.sft().alphabet_size());
            return fe.value_packed(code) + ge.value_packed(code);
        });
    }

    friend LocalObservable operator-(const LocalObservable& f, const LocalObservable& g)
    {
        return f + (rational(-1) * g);
    }

    friend LocalObservable operator*(const rational& c, const LocalObservable& f)
    {
        return LocalObservable(f.sft(), f.range(), [&](const cells_t& w) {
            return c * f.value_packed(pack_cells(w, f.sft().alphabet_size()));
        });
    }

    // Equality as functions: identical values on every language window of
    // the common range.
    friend bool operator==(const LocalObservable& f, const LocalObservable& g)
    {
        if (f.sft() != g.sft())
            return false;
        const int k = std::max(f.range(), g.range());
        const LocalObservable fe = f.expand(k);
        const LocalObservable ge = g.expand(k);
        for (const cells_t& w : f.sft().language(k, kLanguageCap)) {
            const std::uint64_t code = pack_cells(w, f.sft().alphabet_size());
            if (fe.value_packed(code) != ge.value_packed(code))
                return false;
        }
        return true;
    }
    friend bool operator!=(const LocalObservable& f, const LocalObservable& g) { return !(f == g); }
};

// f after the map, as a plain observable on the map's domain. The window
// of length range + window - 1 is developed through the local rule into a
// range-sized window of the codomain, which f then reads.
inline LocalObservable compose_with_map(const LocalObservable& f, const SlidingBlockMap1D& phi)
{
    if (f.sft() != phi.codomain())
        throw domain_violation("observable does not live on the map codomain");
    if (f.range() == 0)
        return LocalObservable::constant(phi.domain(), f.value_packed(0));
    const int combined = f.range() + phi.window() - 1;
    return LocalObservable(phi.domain(), combined, [&](const cells_t& w) {
        return f.value(phi.apply_to_word(w));
    });
}

// Hamiltonian difference between two finite perturbations of a common
// periodic background: patch w2 minus patch w1, both written at the same
// position over ...bbb... . Only windows meeting the patch contribute, so
// the sum is finite; the background's own contribution cancels.
inline rational delta_f(const LocalObservable& f, const Word& background, const Word& w1,
                        const Word& w2, long long position)
{
    const Sft1D& x = f.sft();
    if (*background.alphabet != *x.alphabet() || *w1.alphabet != *x.alphabet() ||
        *w2.alphabet != *x.alphabet())
        throw domain_violation("delta_f arguments use a different alphabet");
    if (background.cells.empty())
        throw domain_violation("background must be nonempty");
    if (w1.size() != w2.size())
        throw domain_violation("patches must have equal length");
    const long long p = static_cast<long long>(background.size());
    const long long len = static_cast<long long>(w1.size());

    const auto at = [&](const cells_t& patch, long long j) {
        if (j >= position && j < position + len)
            return patch[static_cast<std::size_t>(j - position)];
        return background.cells[static_cast<std::size_t>(((j % p) + p) % p)];
    };

    // Validity of both patched configurations: every window of the
    // forbidden-word length that meets the patch must be allowed. The
    // background itself is validated as a periodic point.
    const int fw = x.is_full_shift() ? 1 : x.memory() + 1;
    for (long long i = -fw + 1; i < p; ++i) {
        cells_t win(static_cast<std::size_t>(fw));
        for (int j = 0; j < fw; ++j)
            win[static_cast<std::size_t>(j)] =
                background.cells[static_cast<std::size_t>((((i + j) % p) + p) % p)];
        if (!x.is_in_language(win))
            throw domain_violation("background is not a valid periodic configuration");
    }
    for (const cells_t* patch : {&w1.cells, &w2.cells}) {
        for (long long i = position - fw + 1; i < position + len; ++i) {
            cells_t win(static_cast<std::size_t>(fw));
            for (int j = 0; j < fw; ++j)
                win[static_cast<std::size_t>(j)] = at(*patch, i + j);
            if (!x.is_in_language(win))
                throw domain_violation("patch creates a forbidden word");
        }
    }

    const int k = f.range();
    rational total = 0;
    cells_t win1(static_cast<std::size_t>(k)), win2(static_cast<std::size_t>(k));
    for (long long i = position - k + 1; i < position + len; ++i) {
        for (int j = 0; j < k; ++j) {
            win1[static_cast<std::size_t>(j)] = at(w1.cells, i + j);
            win2[static_cast<std::size_t>(j)] = at(w2.cells, i + j);
        }
        const int s = x.alphabet_size();
        total += f.value_packed(pack_cells(win2, s)) - f.value_packed(pack_cells(win1, s));
    }
    return total;
}

} // namespace sca
