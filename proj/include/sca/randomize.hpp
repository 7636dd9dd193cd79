#pragma once

// Approach to equilibrium under iterated maps, studied two ways.
//
// For binary maps whose rule is a XOR of window cells, the orbit of a
// Bernoulli measure has closed-form marginals: the output cells are XOR
// masks over independent input bits, so every character sum factorizes.
// exact_marginal evaluates those sums and recovers the n-cell distribution
// by a Walsh-Hadamard transform, exact up to floating rounding.
//
// Everything else goes through sample_orbit, an honest Monte-Carlo run on
// a finite window wide enough that no observed cell ever sees the boundary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "sca/errors.hpp"
#include "sca/markov.hpp"
#include "sca/rng.hpp"
#include "sca/sliding_map.hpp"
#include "sca/word.hpp"

namespace sca {

// True when the rule table is linear over GF(2): binary full shifts on both
// sides, the all-0 window maps to 0, and the rule respects cellwise XOR.
inline bool is_additive(const SlidingBlockMap1D& map) {
    if (map.domain().alphabet_size() != 2 || !map.domain().is_full_shift()) return false;
    if (map.codomain().alphabet_size() != 2 || !map.codomain().is_full_shift()) return false;
    if (map.local_packed(0) != 0) return false;
    const std::uint64_t size = pow_u64(2, map.window());
    for (std::uint64_t c = 1; c < size; ++c) {
        const std::uint64_t rest = c & (c - 1);
        const std::uint64_t lowest = c & ~rest;
        if (map.local_packed(c) != (map.local_packed(rest) ^ map.local_packed(lowest)))
            return false;
    }
    return true;
}

// The set of input cells whose XOR gives output cell 0 after `time` steps.
// Bit i of `support` stands for the input cell at coordinate offset + i.
struct ParityRow {
    long long time = 0;
    long long offset = 0;
    boost::dynamic_bitset<> support;
};

namespace detail {

inline std::vector<int> xor_taps(const SlidingBlockMap1D& map) {
    if (!is_additive(map))
        throw unsupported_input("exact marginals need a rule that is a XOR of window cells");
    // Window positions whose impulse flips the output; big-endian packing
    // puts window cell k at table index bit (window - 1 - k).
    std::vector<int> taps;
    for (int k = 0; k < map.window(); ++k)
        if (map.local_packed(std::uint64_t(1) << (map.window() - 1 - k)))
            taps.push_back(k);
    return taps;
}

}  // namespace detail

inline ParityRow advance_parity_row(const SlidingBlockMap1D& map, const ParityRow& row) {
    const std::vector<int> taps = detail::xor_taps(map);
    const int spread = map.right() - map.left();
    ParityRow next;
    next.time = row.time + 1;
    next.offset = row.offset + map.left();
    next.support.resize(row.support.size() + static_cast<std::size_t>(spread));
    boost::dynamic_bitset<> wide = row.support;
    wide.resize(next.support.size());
    // One composition step: the new row is the XOR of the old row shifted to
    // each tap. Tap k sits at coordinate left + k, and shifting the bitset
    // left by k adds k to every coordinate once the offset absorbs `left`.
    for (int k : taps) next.support ^= (wide << static_cast<std::size_t>(k));
    return next;
}

inline ParityRow parity_row(const SlidingBlockMap1D& map, long long time) {
    if (time < 0) throw domain_violation("parity row time must be nonnegative");
    detail::xor_taps(map);  // reject non-additive rules even for time 0
    ParityRow row;
    row.support.resize(1);
    row.support.set(0);
    for (long long t = 0; t < time; ++t) row = advance_parity_row(map, row);
    return row;
}

// Joint distribution of `cells` consecutive output cells, indexed by the
// big-endian packed word.
struct MarginalDistribution {
    int cells = 0;
    int base = 2;
    std::vector<double> prob;
};

inline double tv_to_uniform(const MarginalDistribution& dist) {
    const double flat = 1.0 / static_cast<double>(dist.prob.size());
    double tv = 0;
    for (double q : dist.prob) tv += std::abs(q - flat);
    return tv / 2;
}

inline double total_variation(const MarginalDistribution& a, const MarginalDistribution& b) {
    if (a.prob.size() != b.prob.size())
        throw domain_violation("marginals must cover the same cells");
    double tv = 0;
    for (std::size_t i = 0; i < a.prob.size(); ++i) tv += std::abs(a.prob[i] - b.prob[i]);
    return tv / 2;
}

// Closed-form n-cell marginal of the time-t image of Bernoulli(p), given the
// parity row at time t. For a character a (a subset of the n observed cells),
// the XOR of the selected cells equals the XOR of the input bits in the union
// mask M_a, so its expectation is (1-2p)^|M_a|. A Gray-code walk updates M_a
// by one shifted row per step, and the inverse character sum is a
// Walsh-Hadamard transform.
inline MarginalDistribution exact_marginal(const ParityRow& row, double p, int cells) {
    if (cells < 1 || cells > 24)
        throw domain_violation("marginal width must be between 1 and 24");
    if (p < 0.0 || p > 1.0) throw domain_violation("bias must lie in [0, 1]");
    const std::size_t size = std::size_t(1) << cells;
    const std::size_t width = row.support.size() + static_cast<std::size_t>(cells);

    // Output cell j reads the support shifted by j; index bit b is cell
    // cells-1-b under big-endian packing.
    std::vector<boost::dynamic_bitset<>> shifted(static_cast<std::size_t>(cells));
    boost::dynamic_bitset<> wide = row.support;
    wide.resize(width);
    for (int b = 0; b < cells; ++b)
        shifted[static_cast<std::size_t>(b)] = wide << static_cast<std::size_t>(cells - 1 - b);

    std::vector<double> powq(width + 1);
    powq[0] = 1.0;
    const double q = 1.0 - 2.0 * p;
    for (std::size_t w = 1; w <= width; ++w) powq[w] = powq[w - 1] * q;

    std::vector<double> chi(size);
    chi[0] = 1.0;
    boost::dynamic_bitset<> acc(width);
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < size; ++k) {
        const int flipped = __builtin_ctzll(k);
        gray ^= std::uint64_t(1) << flipped;
        acc ^= shifted[static_cast<std::size_t>(flipped)];
        chi[gray] = powq[acc.count()];
    }

    // In-place Walsh-Hadamard transform; dividing by 2^n inverts the
    // character expansion.
    for (std::size_t len = 1; len < size; len <<= 1)
        for (std::size_t block = 0; block < size; block += 2 * len)
            for (std::size_t i = block; i < block + len; ++i) {
                const double u = chi[i], v = chi[i + len];
                chi[i] = u + v;
                chi[i + len] = u - v;
            }
    const double scale = 1.0 / static_cast<double>(size);
    for (double& x : chi) x *= scale;

    MarginalDistribution dist;
    dist.cells = cells;
    dist.prob = std::move(chi);
    return dist;
}

inline MarginalDistribution exact_marginal(const SlidingBlockMap1D& map, long long time,
                                           double p, int cells) {
    return exact_marginal(parity_row(map, time), p, cells);
}

// Arithmetic mean of the exact marginals at times 0 .. T-1.
inline MarginalDistribution cesaro_marginal(const SlidingBlockMap1D& map, long long T,
                                            double p, int cells) {
    if (T < 1) throw domain_violation("averaging horizon must be positive");
    ParityRow row = parity_row(map, 0);
    MarginalDistribution mean = exact_marginal(row, p, cells);
    for (long long t = 1; t < T; ++t) {
        row = advance_parity_row(map, row);
        const MarginalDistribution step = exact_marginal(row, p, cells);
        for (std::size_t i = 0; i < mean.prob.size(); ++i) mean.prob[i] += step.prob[i];
    }
    const double scale = 1.0 / static_cast<double>(T);
    for (double& x : mean.prob) x *= scale;
    return mean;
}

// Fraction of the series at or below eps: an empirical stand-in for
// convergence along a set of full density. No limit is claimed.
inline double density_one_diagnostic(const std::vector<double>& series, double eps) {
    if (series.empty()) throw domain_violation("diagnostic needs a nonempty series");
    std::size_t hits = 0;
    for (double v : series)
        if (v <= eps) ++hits;
    return static_cast<double>(hits) / static_cast<double>(series.size());
}

struct OrbitSample {
    MarginalDistribution marginal;   // centred window of the final word, one per replica
    std::vector<double> density;     // fraction of symbol 1 at times 0 .. t
    long long observed_cells = 0;    // cells behind the final density entry
};

namespace detail {

inline cells_t sample_markov_word(const MarkovMeasure& mu, int length, counter_rng& rng) {
    const auto& ctx = mu.contexts();
    const int r = mu.order();
    cells_t w;
    w.reserve(static_cast<std::size_t>(length));
    int ui = 0;
    if (r > 0) {
        double u = rng.next_double();
        ui = static_cast<int>(ctx.size()) - 1;
        for (std::size_t i = 0; i < ctx.size(); ++i) {
            u -= mu.stationary(static_cast<int>(i));
            if (u <= 0) { ui = static_cast<int>(i); break; }
        }
        w = ctx[static_cast<std::size_t>(ui)];
        if (static_cast<int>(w.size()) > length) w.resize(static_cast<std::size_t>(length));
    }
    const int s = mu.sft().alphabet_size();
    while (static_cast<int>(w.size()) < length) {
        double u = rng.next_double();
        int pick = -1;
        for (int a = 0; a < s; ++a) {
            const double q = mu.transition(ui, a);
            u -= q;
            if (u <= 0 && q > 0) { pick = a; break; }
        }
        if (pick < 0) {
            for (int a = s - 1; a >= 0; --a)
                if (mu.transition(ui, a) > 0) { pick = a; break; }
        }
        w.push_back(pick);
        if (r > 0) {
            const cells_t next(w.end() - r, w.end());
            const auto it = std::lower_bound(ctx.begin(), ctx.end(), next);
            ui = static_cast<int>(it - ctx.begin());
        }
    }
    return w;
}

}  // namespace detail

// Monte-Carlo orbit study for any endomorphism: run `samples` independent
// words of the given width through `time` steps, tracking the density of
// symbol 1 and the empirical distribution of a centred window of the final
// word. The width must leave the window clear of both boundary light cones.
inline OrbitSample sample_orbit(const SlidingBlockMap1D& map, const MarkovMeasure& init,
                                long long time, int width, long long samples,
                                std::uint64_t seed, int cells) {
    if (!(map.domain() == map.codomain()))
        throw unsupported_input("orbit sampling needs matching domain and codomain");
    if (!(init.sft() == map.domain()))
        throw domain_violation("initial measure does not live on the map's domain");
    if (time < 0 || samples < 1) throw domain_violation("need nonnegative time and at least one sample");
    const int spread = map.right() - map.left();
    const long long final_len = static_cast<long long>(width) - time * spread;
    if (cells < 1 || final_len < cells)
        throw domain_violation("width too small for the horizon: need width >= cells + time * spread");

    const int s = map.domain().alphabet_size();
    const std::uint64_t n_words = pow_u64(static_cast<std::uint64_t>(s), cells);
    if (n_words > kLanguageCap) throw resource_limit("observed window is too wide");

    OrbitSample out;
    out.marginal.cells = cells;
    out.marginal.base = s;
    out.marginal.prob.assign(n_words, 0.0);
    out.density.assign(static_cast<std::size_t>(time) + 1, 0.0);

    for (long long rep = 0; rep < samples; ++rep) {
        counter_rng rng = counter_rng::derived(seed, static_cast<std::uint64_t>(rep));
        cells_t w = detail::sample_markov_word(init, width, rng);
        for (long long t = 0; ; ++t) {
            long long ones = 0;
            for (int c : w)
                if (c == 1) ++ones;
            out.density[static_cast<std::size_t>(t)] +=
                static_cast<double>(ones) / static_cast<double>(w.size());
            if (t == time) break;
            w = map.apply_to_word(w);
        }
        const std::size_t start = (w.size() - static_cast<std::size_t>(cells)) / 2;
        const std::uint64_t code =
            pack_cells(cells_t(w.begin() + start, w.begin() + start + cells), s);
        out.marginal.prob[code] += 1.0;
    }
    for (double& d : out.density) d /= static_cast<double>(samples);
    for (double& q : out.marginal.prob) q /= static_cast<double>(samples);
    out.observed_cells = samples * final_len;
    return out;
}

}  // namespace sca
