// Decision procedures for cellular automata on full shifts: surjectivity
// with an explicit orphan witness, pre-injectivity, injectivity, and a
// brute-force balance check.
//
// Surjectivity runs a subset construction over the de Bruijn graph of
// input windows: a state is the set of windows reachable while producing
// a given output word, and an output word is an orphan exactly when the
// empty state is reached. Injectivity questions run on the pair graph
// tracking two inputs that produce equal outputs. The two procedures are
// deliberately independent of each other, which lets tests exercise the
// surjective-iff-preinjective equivalence rather than assume it.

#pragma once

#include <map>
#include <optional>

#include "sca/sliding_map.hpp"

namespace sca {

namespace detail {

inline void require_full_shift_endo(const SlidingBlockMap1D& phi, const char* op)
{
    if (!phi.domain().is_full_shift() || !phi.codomain().is_full_shift())
        throw unsupported_input(std::string(op) + " is only implemented for maps between full shifts");
}

} // namespace detail

// Shortest output word with no preimage, lexicographically least among
// the shortest ones; nullopt when the map is surjective.
inline std::optional<Word> garden_of_eden_witness(const SlidingBlockMap1D& phi)
{
    detail::require_full_shift_endo(phi, "garden-of-eden search");
    const int s_in = phi.domain().alphabet_size();
    const int s_out = phi.codomain().alphabet_size();
    const int m = phi.window();
    const int q = m - 1; // tracked window length
    const std::uint64_t n_nodes = pow_u64(static_cast<std::uint64_t>(s_in), q);
    if (n_nodes > (1u << 16))
        throw resource_limit("rule window too large for the subset construction");

    // succ[u][y]: windows reachable from window u while emitting y.
    std::vector<std::vector<std::vector<int>>> succ(
        n_nodes, std::vector<std::vector<int>>(static_cast<std::size_t>(s_out)));
    for (std::uint64_t u = 0; u < n_nodes; ++u) {
        for (int a = 0; a < s_in; ++a) {
            const std::uint64_t w = u * static_cast<std::uint64_t>(s_in) + static_cast<std::uint64_t>(a);
            const int y = phi.local_packed(w);
            succ[u][static_cast<std::size_t>(y)].push_back(static_cast<int>(w % n_nodes));
        }
    }

    const std::size_t blocks = (n_nodes + 63) / 64;
    using state_t = std::vector<std::uint64_t>;
    state_t start(blocks, 0);
    for (std::uint64_t u = 0; u < n_nodes; ++u)
        start[u / 64] |= std::uint64_t{1} << (u % 64);

    std::map<state_t, int> seen;
    std::vector<state_t> states;
    std::vector<std::pair<int, int>> parent; // (state id, emitted symbol)
    seen.emplace(start, 0);
    states.push_back(start);
    parent.emplace_back(-1, -1);

    // Breadth-first in output-symbol order: the first empty state found
    // closes the shortest orphan, lexicographically least among those.
    for (std::size_t head = 0; head < states.size(); ++head) {
        const state_t cur = states[head];
        for (int y = 0; y < s_out; ++y) {
            state_t next(blocks, 0);
            bool empty = true;
            for (std::uint64_t u = 0; u < n_nodes; ++u) {
                if (!(cur[u / 64] >> (u % 64) & 1))
                    continue;
                for (int v : succ[u][static_cast<std::size_t>(y)]) {
                    next[static_cast<std::size_t>(v) / 64] |=
                        std::uint64_t{1} << (static_cast<std::size_t>(v) % 64);
                    empty = false;
                }
            }
            if (empty) {
                cells_t orphan{y};
                for (int at = static_cast<int>(head); parent[static_cast<std::size_t>(at)].first >= 0;
                     at = parent[static_cast<std::size_t>(at)].first)
                    orphan.push_back(parent[static_cast<std::size_t>(at)].second);
                std::reverse(orphan.begin(), orphan.end());
                return Word{phi.codomain().alphabet(), std::move(orphan)};
            }
            if (seen.emplace(next, static_cast<int>(states.size())).second) {
                states.push_back(std::move(next));
                parent.emplace_back(static_cast<int>(head), y);
                if (states.size() > (1u << 20))
                    throw resource_limit("subset construction exceeded the state cap");
            }
        }
    }
    return std::nullopt;
}

inline bool is_surjective(const SlidingBlockMap1D& phi)
{
    return !garden_of_eden_witness(phi).has_value();
}

namespace detail {

// Pair graph of a map on a full shift: nodes are pairs of input windows of
// length q = max(m-1, 1); an edge appends one symbol to each component and
// requires the local rule to agree on the leading windows. Finite paths
// from the diagonal to the diagonal spell pairs of words with equal image
// and equal margins; bi-infinite paths spell pairs of configurations with
// equal image.
struct PairGraph {
    int q = 0;
    std::uint64_t side = 0; // number of single windows
    std::vector<std::vector<int>> out, in;
    std::vector<char> diagonal;
};

inline PairGraph build_pair_graph(const SlidingBlockMap1D& phi)
{
    const int s = phi.domain().alphabet_size();
    const int m = phi.window();
    PairGraph g;
    g.q = std::max(m - 1, 1);
    g.side = pow_u64(static_cast<std::uint64_t>(s), g.q);
    const std::uint64_t n_pairs = g.side * g.side;
    if (n_pairs > (1u << 22))
        throw resource_limit("rule window too large for the pair construction");
    g.out.assign(n_pairs, {});
    g.in.assign(n_pairs, {});
    g.diagonal.assign(n_pairs, 0);

    // The output cell pinned by appending symbol a to window u is the
    // rule applied to the first m symbols of u.a.
    const std::uint64_t drop = g.side / static_cast<std::uint64_t>(s); // s^(q-1)
    const std::uint64_t tail = pow_u64(static_cast<std::uint64_t>(s), g.q + 1 - m);
    auto emitted = [&](std::uint64_t u, int a) {
        const std::uint64_t extended = u * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(a);
        return phi.local_packed(extended / tail);
    };
    for (std::uint64_t u = 0; u < g.side; ++u) {
        g.diagonal[u * g.side + u] = 1;
        for (std::uint64_t v = 0; v < g.side; ++v) {
            const std::uint64_t p = u * g.side + v;
            for (int a = 0; a < s; ++a) {
                const int ya = emitted(u, a);
                const std::uint64_t nu = (u % drop) * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(a);
                for (int b = 0; b < s; ++b) {
                    if (emitted(v, b) != ya)
                        continue;
                    const std::uint64_t nv =
                        (v % drop) * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(b);
                    const std::uint64_t np = nu * g.side + nv;
                    g.out[p].push_back(static_cast<int>(np));
                    g.in[np].push_back(static_cast<int>(p));
                }
            }
        }
    }
    return g;
}

inline std::vector<char> reach_from_diagonal(const PairGraph& g, const std::vector<std::vector<int>>& adj)
{
    std::vector<char> seen(g.diagonal.size(), 0);
    std::vector<int> queue;
    for (std::size_t p = 0; p < g.diagonal.size(); ++p)
        if (g.diagonal[p]) {
            seen[p] = 1;
            queue.push_back(static_cast<int>(p));
        }
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (int np : adj[static_cast<std::size_t>(queue[head])])
            if (!seen[static_cast<std::size_t>(np)]) {
                seen[static_cast<std::size_t>(np)] = 1;
                queue.push_back(np);
            }
    return seen;
}

// A diamond is an off-diagonal pair node on a path from the diagonal back
// to the diagonal: two distinct words with equal margins and equal image.
inline bool has_diamond(const PairGraph& g)
{
    const std::vector<char> fwd = reach_from_diagonal(g, g.out);
    const std::vector<char> bwd = reach_from_diagonal(g, g.in);
    for (std::size_t p = 0; p < g.diagonal.size(); ++p)
        if (!g.diagonal[p] && fwd[p] && bwd[p])
            return true;
    return false;
}

} // namespace detail

// No two distinct configurations that agree outside a finite region share
// an image.
inline bool is_preinjective(const SlidingBlockMap1D& phi)
{
    detail::require_full_shift_endo(phi, "pre-injectivity");
    return !detail::has_diamond(detail::build_pair_graph(phi));
}

// Global injectivity: besides the absence of diamonds, no off-diagonal
// pair node may sit inside a cycle of the pair graph, since such a cycle
// carries a bi-infinite pair of distinct configurations with equal image.
inline bool is_injective(const SlidingBlockMap1D& phi)
{
    detail::require_full_shift_endo(phi, "injectivity");
    const detail::PairGraph g = detail::build_pair_graph(phi);
    if (detail::has_diamond(g))
        return false;
    const detail::SccResult scc = detail::strongly_connected_components(g.out);
    std::vector<int> scc_size(static_cast<std::size_t>(scc.count), 0);
    for (int id : scc.id)
        ++scc_size[static_cast<std::size_t>(id)];
    for (std::size_t p = 0; p < g.diagonal.size(); ++p) {
        if (g.diagonal[p])
            continue;
        const int id = scc.id[p];
        bool cyclic = scc_size[static_cast<std::size_t>(id)] > 1;
        if (!cyclic)
            for (int np : g.out[p])
                if (static_cast<std::size_t>(np) == p)
                    cyclic = true;
        if (cyclic)
            return false;
    }
    return true;
}

// Exhaustive balance check at output length n: every output word of
// length n must have the same number of preimage words of length
// n + window - 1. On a shared alphabet that count is |S|^(window-1).
inline bool balance_check(const SlidingBlockMap1D& phi, int n)
{
    detail::require_full_shift_endo(phi, "balance check");
    if (n < 1)
        throw domain_violation("balance check needs a positive word length");
    const int s_in = phi.domain().alphabet_size();
    const int s_out = phi.codomain().alphabet_size();
    const int m = phi.window();
    const std::uint64_t inputs = pow_u64(static_cast<std::uint64_t>(s_in), n + m - 1);
    if (inputs > kLanguageCap)
        throw resource_limit("balance check input enumeration exceeds the cap");
    const std::uint64_t outputs = pow_u64(static_cast<std::uint64_t>(s_out), n);
    if (inputs % outputs != 0)
        return false;
    const std::uint64_t expected = inputs / outputs;

    std::vector<std::uint64_t> count(outputs, 0);
    const std::uint64_t win_mod = pow_u64(static_cast<std::uint64_t>(s_in), m);
    for (std::uint64_t x = 0; x < inputs; ++x) {
        // Slide over the packed input, most significant window first.
        std::uint64_t y = 0;
        std::uint64_t shift = inputs / win_mod; // s_in^(n-1)
        for (int i = 0; i < n; ++i) {
            const std::uint64_t window_code = x / shift % win_mod;
            y = y * static_cast<std::uint64_t>(s_out) +
                static_cast<std::uint64_t>(phi.local_packed(window_code));
            shift /= static_cast<std::uint64_t>(s_in);
        }
        ++count[y];
    }
    for (std::uint64_t c : count)
        if (c != expected)
            return false;
    return true;
}

struct AnalysisReport {
    bool surjective = false;
    bool preinjective = false;
    bool injective = false;
    std::optional<Word> orphan;
};

inline AnalysisReport analyze_map(const SlidingBlockMap1D& phi)
{
    AnalysisReport rep;
    rep.orphan = garden_of_eden_witness(phi);
    rep.surjective = !rep.orphan.has_value();
    rep.preinjective = is_preinjective(phi);
    rep.injective = is_injective(phi);
    return rep;
}

} // namespace sca
