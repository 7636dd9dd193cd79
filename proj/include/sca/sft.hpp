// One-dimensional subshifts of finite type.
//
// An Sft1D is defined over an alphabet by a finite list of forbidden words.
// At construction the list is normalized to a common length F by extending
// every shorter word on the right with all possible symbols; the subshift
// then has memory F-1, and its points are exactly the bi-infinite sequences
// whose length-F windows all avoid the normalized list.
//
// The constructor also builds the essential de Bruijn graph of order F-1:
// nodes are the (F-1)-words that survive iterated removal of nodes with no
// outgoing or no incoming allowed edge. A word of length >= F-1 belongs to
// the language iff its F-windows are allowed and its end windows are
// essential nodes; that is the workhorse for everything else here.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <set>
#include <vector>

#include "sca/errors.hpp"
#include "sca/graph.hpp"
#include "sca/word.hpp"

namespace sca {

// Hard ceilings that keep table-driven algorithms in memory. Desk-scale
// inputs (alphabets up to ~6 symbols, windows up to ~8) stay far below.
inline constexpr std::uint64_t kStateCap = 1u << 24;
inline constexpr std::uint64_t kLanguageCap = 1u << 22;

class Sft1D {
    struct impl {
        alphabet_ptr alph;
        int s = 0;                          // alphabet size
        int window = 0;                     // F; 0 for a full shift
        int memory = 0;                     // max(F-1, 0)
        std::vector<Word> forbidden_input;  // as given, deduplicated
        std::vector<std::uint64_t> forbidden; // sorted packed F-words
        std::uint64_t node_space = 1;       // s^memory
        std::vector<char> essential;        // bitmap over node_space
        std::vector<std::uint64_t> essential_codes; // sorted survivors

        bool is_forbidden(std::uint64_t window_code) const
        {
            return std::binary_search(forbidden.begin(), forbidden.end(), window_code);
        }
    };

    std::shared_ptr<const impl> p_;

public:
    Sft1D(alphabet_ptr alph, const std::vector<Word>& forbidden)
    {
        auto im = std::make_shared<impl>();
        im->alph = std::move(alph);
        im->s = im->alph->size();

        std::set<cells_t> seen;
        int F = 0;
        for (const Word& w : forbidden) {
            if (*w.alphabet != *im->alph)
                throw invalid_construction("forbidden word uses a different alphabet");
            if (w.cells.empty())
                throw invalid_construction("the empty word cannot be forbidden (it occurs everywhere)");
            for (int c : w.cells)
                if (c < 0 || c >= im->s)
                    throw invalid_construction("forbidden word has an out-of-range symbol");
            if (seen.insert(w.cells).second)
                im->forbidden_input.push_back(w);
            F = std::max(F, static_cast<int>(w.cells.size()));
        }

        if (im->forbidden_input.empty()) {
            // Full shift: one empty-word node carrying s self-loops.
            im->window = 0;
            im->memory = 0;
            im->node_space = 1;
            im->essential = {1};
            im->essential_codes = {0};
            p_ = std::move(im);
            return;
        }

        im->window = F;
        im->memory = F - 1;
        const std::uint64_t s64 = static_cast<std::uint64_t>(im->s);
        const std::uint64_t window_space = pow_u64(s64, F);
        if (window_space > kStateCap)
            throw resource_limit("forbidden-word length too large for table-based representation");
        im->node_space = window_space / s64;

        // Right-extension normalization: a forbidden word of length k < F
        // forbids the contiguous code range of all its F-extensions.
        for (const Word& w : im->forbidden_input) {
            const int k = static_cast<int>(w.cells.size());
            const std::uint64_t base = pack_cells(w.cells, im->s) * pow_u64(s64, F - k);
            const std::uint64_t count = pow_u64(s64, F - k);
            for (std::uint64_t t = 0; t < count; ++t)
                im->forbidden.push_back(base + t);
        }
        std::sort(im->forbidden.begin(), im->forbidden.end());
        im->forbidden.erase(std::unique(im->forbidden.begin(), im->forbidden.end()),
                            im->forbidden.end());

        // Prune the order-(F-1) de Bruijn graph down to its essential part:
        // repeatedly remove nodes with no outgoing or no incoming edge.
        const std::uint64_t n_nodes = im->node_space;
        std::vector<char> alive(n_nodes, 1);
        std::vector<int> outdeg(n_nodes, 0), indeg(n_nodes, 0);
        for (std::uint64_t u = 0; u < n_nodes; ++u) {
            for (int a = 0; a < im->s; ++a) {
                const std::uint64_t w = u * s64 + static_cast<std::uint64_t>(a);
                if (im->is_forbidden(w))
                    continue;
                ++outdeg[u];
                ++indeg[w % n_nodes];
            }
        }
        std::deque<std::uint64_t> dead;
        for (std::uint64_t u = 0; u < n_nodes; ++u)
            if (outdeg[u] == 0 || indeg[u] == 0) {
                alive[u] = 0;
                dead.push_back(u);
            }
        while (!dead.empty()) {
            const std::uint64_t u = dead.front();
            dead.pop_front();
            for (int a = 0; a < im->s; ++a) {
                const std::uint64_t w = u * s64 + static_cast<std::uint64_t>(a);
                if (im->is_forbidden(w))
                    continue;
                const std::uint64_t v = w % n_nodes;
                if (alive[v] && --indeg[v] == 0) {
                    alive[v] = 0;
                    dead.push_back(v);
                }
            }
            // Predecessors of u are the nodes b.u[0..F-3] for each symbol b.
            for (int b = 0; b < im->s; ++b) {
                const std::uint64_t pred =
                    static_cast<std::uint64_t>(b) * (n_nodes / s64) + u / s64;
                const std::uint64_t w = pred * s64 + u % s64;
                if (im->is_forbidden(w))
                    continue;
                if (alive[pred] && --outdeg[pred] == 0) {
                    alive[pred] = 0;
                    dead.push_back(pred);
                }
            }
        }
        for (std::uint64_t u = 0; u < n_nodes; ++u)
            if (alive[u])
                im->essential_codes.push_back(u);
        im->essential = std::move(alive);
        if (im->essential_codes.empty())
            throw invalid_construction("the subshift is empty: every bi-infinite sequence hits a forbidden word");

        p_ = std::move(im);
    }

    const alphabet_ptr& alphabet() const { return p_->alph; }
    int alphabet_size() const { return p_->s; }
    int memory() const { return p_->memory; }
    bool is_full_shift() const { return p_->forbidden_input.empty(); }
    const std::vector<Word>& forbidden_input() const { return p_->forbidden_input; }

    // Low-level graph view used by the analysis and measure modules.
    // Nodes are packed memory-words; node_space() == s^memory.
    std::uint64_t node_space() const { return p_->node_space; }
    const std::vector<std::uint64_t>& essential_codes() const { return p_->essential_codes; }
    bool is_essential(std::uint64_t node_code) const
    {
        return p_->essential[node_code] != 0;
    }
    // Whether appending symbol a to essential node u yields an allowed
    // window leading to another essential node.
    bool edge_allowed(std::uint64_t u, int a) const
    {
        if (is_full_shift())
            return true;
        const std::uint64_t w = u * static_cast<std::uint64_t>(p_->s) + static_cast<std::uint64_t>(a);
        return !p_->is_forbidden(w) && p_->essential[w % p_->node_space];
    }
    std::uint64_t step(std::uint64_t u, int a) const
    {
        return (u * static_cast<std::uint64_t>(p_->s) + static_cast<std::uint64_t>(a)) % p_->node_space;
    }

    bool is_in_language(const cells_t& w) const
    {
        for (int c : w)
            if (c < 0 || c >= p_->s)
                throw domain_violation("word has an out-of-range symbol");
        if (is_full_shift() || w.empty())
            return true;
        const int n = static_cast<int>(w.size());
        const int mem = p_->memory;
        if (n < mem) {
            // Short words: factors of essential node words.
            for (std::uint64_t code : p_->essential_codes) {
                const cells_t node = unpack_code(code, mem, p_->s);
                if (std::search(node.begin(), node.end(), w.begin(), w.end()) != node.end())
                    return true;
            }
            return false;
        }
        std::uint64_t u = pack_cells(cells_t(w.begin(), w.begin() + mem), p_->s);
        if (!p_->essential[u])
            return false;
        for (int i = mem; i < n; ++i) {
            if (!edge_allowed(u, w[i]))
                return false;
            u = step(u, w[i]);
        }
        return true;
    }

    bool is_in_language(const Word& w) const
    {
        if (*w.alphabet != *p_->alph)
            throw domain_violation("word uses a different alphabet");
        return is_in_language(w.cells);
    }

    // All length-n words of the language, lexicographically sorted by
    // symbol index. Throws resource_limit past the cap.
    std::vector<cells_t> language(int n, std::uint64_t cap = kLanguageCap) const
    {
        if (n < 0)
            throw domain_violation("word length must be nonnegative");
        std::vector<cells_t> out;
        if (n == 0) {
            out.push_back({});
            return out;
        }
        const std::uint64_t s64 = static_cast<std::uint64_t>(p_->s);
        if (is_full_shift()) {
            const std::uint64_t total = pow_u64(s64, n);
            if (total > cap)
                throw resource_limit("language enumeration exceeds the configured cap");
            out.reserve(total);
            for (std::uint64_t code = 0; code < total; ++code)
                out.push_back(unpack_code(code, n, p_->s));
            return out;
        }
        const int mem = p_->memory;
        if (n < mem) {
            std::set<cells_t> factors;
            for (std::uint64_t code : p_->essential_codes) {
                const cells_t node = unpack_code(code, mem, p_->s);
                for (int i = 0; i + n <= mem; ++i)
                    factors.insert(cells_t(node.begin() + i, node.begin() + i + n));
            }
            return {factors.begin(), factors.end()};
        }
        cells_t cur;
        auto extend = [&](auto&& self, std::uint64_t u, int remaining) -> void {
            if (remaining == 0) {
                if (out.size() >= cap)
                    throw resource_limit("language enumeration exceeds the configured cap");
                out.push_back(cur);
                return;
            }
            for (int a = 0; a < p_->s; ++a) {
                if (!edge_allowed(u, a))
                    continue;
                cur.push_back(a);
                self(self, step(u, a), remaining - 1);
                cur.pop_back();
            }
        };
        for (std::uint64_t code : p_->essential_codes) {
            cur = unpack_code(code, mem, p_->s);
            extend(extend, code, n - mem);
        }
        return out;
    }

    // Equal languages over equal alphabets. Two subshifts of finite type
    // coincide iff their languages agree at any level past both memories.
    bool operator==(const Sft1D& other) const
    {
        if (*p_->alph != *other.p_->alph)
            return false;
        const int n = std::max(p_->memory, other.p_->memory) + 1;
        return language(n) == other.language(n);
    }
    bool operator!=(const Sft1D& other) const { return !(*this == other); }
};

inline Sft1D full_shift(alphabet_ptr alph)
{
    return Sft1D(std::move(alph), {});
}

// De Bruijn graph of a given order n >= memory: nodes are the language
// words of length n, and u -> v with label a whenever v = (drop the first
// symbol of u, append a) and the merged (n+1)-word is in the language.
// Strongly connected components are computed at construction; scc_id is
// assigned in Tarjan completion order, so every edge goes from a component
// of larger or equal id to one of smaller or equal id.
struct DeBruijnGraph {
    Sft1D sft;
    int order = 0;
    std::vector<std::uint64_t> node_codes = {}; // sorted
    std::vector<int> edge_from = {}, edge_to = {}, edge_symbol = {}; // sorted by (from, symbol)
    std::vector<std::vector<int>> out_edges = {}, in_edges = {}; // edge ids per node
    std::vector<int> scc_id = {};
    int scc_count = 0;
    std::vector<char> scc_cyclic = {}; // component contains at least one edge

    int node_count() const { return static_cast<int>(node_codes.size()); }
    int edge_count() const { return static_cast<int>(edge_from.size()); }

    int node_index_of(std::uint64_t code) const
    {
        auto it = std::lower_bound(node_codes.begin(), node_codes.end(), code);
        if (it == node_codes.end() || *it != code)
            return -1;
        return static_cast<int>(it - node_codes.begin());
    }

    cells_t node_word(int v) const
    {
        return unpack_code(node_codes[static_cast<std::size_t>(v)], order, sft.alphabet_size());
    }

    cells_t edge_word(int e) const
    {
        cells_t w = node_word(edge_from[static_cast<std::size_t>(e)]);
        w.push_back(edge_symbol[static_cast<std::size_t>(e)]);
        return w;
    }
};

inline DeBruijnGraph build_de_bruijn(const Sft1D& x, int order)
{
    if (order < x.memory())
        throw domain_violation("de Bruijn order must be at least the subshift memory");
    DeBruijnGraph g{.sft = x, .order = order};
    const int s = x.alphabet_size();
    const std::uint64_t space = pow_u64(static_cast<std::uint64_t>(s), order);
    if (space > kStateCap)
        throw resource_limit("de Bruijn order too large for table-based representation");

    for (const cells_t& w : x.language(order, kStateCap))
        g.node_codes.push_back(pack_cells(w, s));
    // language() emits in lexicographic order already.
    const int n_nodes = g.node_count();
    g.out_edges.assign(static_cast<std::size_t>(n_nodes), {});
    g.in_edges.assign(static_cast<std::size_t>(n_nodes), {});

    // For order >= memory, u.a is in the language iff its final F-window is
    // allowed and the shifted n-suffix is again a node; interior windows
    // live inside u. The node-memory suffix of u feeds edge_allowed.
    const std::uint64_t mem_space = x.node_space();
    for (int ui = 0; ui < n_nodes; ++ui) {
        const std::uint64_t u = g.node_codes[static_cast<std::size_t>(ui)];
        const std::uint64_t u_mem = u % mem_space;
        for (int a = 0; a < s; ++a) {
            if (!x.edge_allowed(u_mem, a))
                continue;
            const std::uint64_t v =
                (u * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(a)) % space;
            const int vi = g.node_index_of(v);
            if (vi < 0)
                continue;
            const int e = g.edge_count();
            g.edge_from.push_back(ui);
            g.edge_to.push_back(vi);
            g.edge_symbol.push_back(a);
            g.out_edges[static_cast<std::size_t>(ui)].push_back(e);
            g.in_edges[static_cast<std::size_t>(vi)].push_back(e);
        }
    }

    std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n_nodes));
    for (int e = 0; e < g.edge_count(); ++e)
        adjacency[static_cast<std::size_t>(g.edge_from[static_cast<std::size_t>(e)])]
            .push_back(g.edge_to[static_cast<std::size_t>(e)]);
    detail::SccResult scc = detail::strongly_connected_components(adjacency);
    g.scc_id = std::move(scc.id);
    g.scc_count = scc.count;
    g.scc_cyclic.assign(static_cast<std::size_t>(g.scc_count), 0);
    std::vector<int> scc_size(static_cast<std::size_t>(g.scc_count), 0);
    for (int v = 0; v < n_nodes; ++v)
        ++scc_size[static_cast<std::size_t>(g.scc_id[static_cast<std::size_t>(v)])];
    for (int e = 0; e < g.edge_count(); ++e) {
        const int cu = g.scc_id[static_cast<std::size_t>(g.edge_from[static_cast<std::size_t>(e)])];
        const int cv = g.scc_id[static_cast<std::size_t>(g.edge_to[static_cast<std::size_t>(e)])];
        if (cu == cv && (scc_size[static_cast<std::size_t>(cu)] > 1 ||
                         g.edge_from[static_cast<std::size_t>(e)] == g.edge_to[static_cast<std::size_t>(e)]))
            g.scc_cyclic[static_cast<std::size_t>(cu)] = 1;
    }
    return g;
}

// Mixing test: the essential graph at order memory() must be strongly
// connected and aperiodic. Aperiodicity of a strongly connected graph via
// the classic gcd of (depth(u) + 1 - depth(v)) over all edges u -> v,
// with depths from any breadth-first search tree.
inline bool is_mixing(const Sft1D& x)
{
    const DeBruijnGraph g = build_de_bruijn(x, x.memory());
    if (g.scc_count != 1)
        return false;
    const int n = g.node_count();
    std::vector<int> depth(static_cast<std::size_t>(n), -1);
    std::deque<int> queue;
    depth[0] = 0;
    queue.push_back(0);
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int e : g.out_edges[static_cast<std::size_t>(u)]) {
            const int v = g.edge_to[static_cast<std::size_t>(e)];
            if (depth[static_cast<std::size_t>(v)] == -1) {
                depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    long long period = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const long long d = depth[static_cast<std::size_t>(g.edge_from[static_cast<std::size_t>(e)])] + 1 -
                            depth[static_cast<std::size_t>(g.edge_to[static_cast<std::size_t>(e)])];
        period = std::gcd(period, d);
    }
    return period == 1;
}

} // namespace sca
