// Conservation laws of sliding block maps, decided exactly.
//
// The central reduction: an observable f is conserved by Φ iff the
// difference g = f∘Φ - f has every cycle mean equal to zero on the de
// Bruijn graph whose edges are windows of g's range. Triviality (physical
// equivalence to a constant) is the same computation with an unknown
// constant: all cycle means must agree. Both are decided by assigning
// potentials along a breadth-first spanning tree and verifying the
// remaining edges, in exact rational arithmetic throughout.
//
// Flux synthesis reuses the potential as a local observable h, yielding
// the discrete continuity identity g = h∘shift - h exactly. Discovery
// solves for all conserved tables of a given range at once: the cycle
// condition becomes linear once auxiliary potential unknowns are added,
// and the resulting nullspace is quotiented by the always-conserved
// subspace of constants plus coboundaries.

#pragma once

#include "sca/observable.hpp"
#include "sca/rational_linalg.hpp"

namespace sca {

struct TrivialityResult {
    bool trivial = false;
    rational constant = 0; // meaningful only when trivial
};

namespace detail {

// Edge weight of the order-q de Bruijn graph under an observable of range
// k <= q+1: the observable reads the leading k cells of the edge word.
inline rational edge_weight(const LocalObservable& f, const DeBruijnGraph& g, int e)
{
    cells_t w = g.edge_word(e);
    w.resize(static_cast<std::size_t>(f.range()));
    return f.value_packed(pack_cells(w, f.sft().alphabet_size()));
}

} // namespace detail

// Whether f is physically equivalent to a constant: every cycle of the
// window de Bruijn graph has the same mean weight c. Potentials on a
// spanning tree carry an affine dependence on the unknown c; every
// off-tree edge then either checks out identically or pins c, and on a
// mixing subshift at least one edge always pins it.
inline TrivialityResult is_trivial(const LocalObservable& f)
{
    const Sft1D& x = f.sft();
    if (!is_mixing(x))
        throw unsupported_input("triviality test needs a mixing subshift: cycle means may differ per component");
    const int q = std::max(f.range() - 1, x.memory());
    const DeBruijnGraph g = build_de_bruijn(x, q);
    const int n = g.node_count();

    // pot[v] = alpha[v] + beta[v] * c along breadth-first tree edges
    // u -> v: pot[v] = pot[u] + w(e) - c.
    std::vector<rational> alpha(static_cast<std::size_t>(n), rational(0));
    std::vector<rational> beta(static_cast<std::size_t>(n), rational(0));
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[static_cast<std::size_t>(head)];
        for (int e : g.out_edges[static_cast<std::size_t>(u)]) {
            const int v = g.edge_to[static_cast<std::size_t>(e)];
            if (seen[static_cast<std::size_t>(v)])
                continue;
            seen[static_cast<std::size_t>(v)] = 1;
            alpha[static_cast<std::size_t>(v)] =
                alpha[static_cast<std::size_t>(u)] + detail::edge_weight(f, g, e);
            beta[static_cast<std::size_t>(v)] = beta[static_cast<std::size_t>(u)] - 1;
            queue.push_back(v);
        }
    }

    bool pinned = false;
    rational c = 0;
    for (int pass = 0; pass < 2; ++pass) {
        for (int e = 0; e < g.edge_count(); ++e) {
            const int u = g.edge_from[static_cast<std::size_t>(e)];
            const int v = g.edge_to[static_cast<std::size_t>(e)];
            // (beta_u - 1 - beta_v) c = alpha_v - alpha_u - w(e)
            const rational coeff = beta[static_cast<std::size_t>(u)] - 1 - beta[static_cast<std::size_t>(v)];
            const rational rhs = alpha[static_cast<std::size_t>(v)] - alpha[static_cast<std::size_t>(u)] -
                                 detail::edge_weight(f, g, e);
            if (coeff == 0) {
                if (pass == 1 && rhs != 0)
                    return {false, 0};
            } else if (pass == 0) {
                const rational candidate = rhs / coeff;
                if (pinned && candidate != c)
                    return {false, 0};
                pinned = true;
                c = candidate;
            } else if (coeff * c != rhs) {
                return {false, 0};
            }
        }
    }
    if (!pinned)
        throw contract_violation("mixing graph produced no cycle constraint");
    return {true, c};
}

inline bool physically_equivalent(const LocalObservable& f, const LocalObservable& g)
{
    if (f.sft() != g.sft())
        throw domain_violation("observables live on different subshifts");
    return is_trivial(f - g).trivial;
}

namespace detail {

inline void require_endomorphism(const SlidingBlockMap1D& phi, const LocalObservable& f)
{
    if (phi.domain() != phi.codomain())
        throw unsupported_input("conservation is defined for maps of a subshift to itself");
    if (f.sft() != phi.domain())
        throw domain_violation("observable does not live on the map's subshift");
}

} // namespace detail

// f is conserved by Φ when f∘Φ - f is physically equivalent to the
// constant zero, i.e. all orbit sums of f are preserved.
inline bool is_conserved(const SlidingBlockMap1D& phi, const LocalObservable& f)
{
    detail::require_endomorphism(phi, f);
    const TrivialityResult t = is_trivial(compose_with_map(f, phi) - f);
    return t.trivial && t.constant == 0;
}

// Certificate for a conservation law: difference = f∘Φ - f (materialized)
// and a flux h with difference = h∘shift - h, exactly. The identity can
// be replayed on any periodic configuration.
struct FluxObservable {
    LocalObservable flux;       // h
    LocalObservable difference; // f∘Φ - f at range k + window - 1

    // Exact site-wise check of the continuity identity over one period.
    bool certifies_periodic(const cells_t& w) const
    {
        const int p = static_cast<int>(w.size());
        const int kd = difference.range();
        const int kh = flux.range();
        const int s = difference.sft().alphabet_size();
        cells_t wd(static_cast<std::size_t>(kd)), h0(static_cast<std::size_t>(kh)),
            h1(static_cast<std::size_t>(kh));
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < kd; ++j)
                wd[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>((i + j) % p)];
            for (int j = 0; j < kh; ++j) {
                h0[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>((i + j) % p)];
                h1[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>((i + 1 + j) % p)];
            }
            if (difference.value_packed(pack_cells(wd, s)) !=
                flux.value_packed(pack_cells(h1, s)) - flux.value_packed(pack_cells(h0, s)))
                return false;
        }
        return true;
    }
};

// Builds the flux certifying that Φ conserves f: potentials of the
// difference observable on the de Bruijn graph, rooted at the
// lexicographically least node, which gets flux value zero.
inline FluxObservable synthesize_flux(const SlidingBlockMap1D& phi, const LocalObservable& f)
{
    detail::require_endomorphism(phi, f);
    const LocalObservable diff = compose_with_map(f, phi) - f;
    {
        const TrivialityResult t = is_trivial(diff);
        if (!t.trivial || t.constant != 0)
            throw contract_violation("flux requested for an observable the map does not conserve");
    }
    const Sft1D& x = phi.domain();
    const int q = std::max(diff.range() - 1, x.memory());
    const DeBruijnGraph g = build_de_bruijn(x, q);
    const int n = g.node_count();

    std::vector<rational> pot(static_cast<std::size_t>(n), rational(0));
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[static_cast<std::size_t>(head)];
        for (int e : g.out_edges[static_cast<std::size_t>(u)]) {
            const int v = g.edge_to[static_cast<std::size_t>(e)];
            if (seen[static_cast<std::size_t>(v)])
                continue;
            seen[static_cast<std::size_t>(v)] = 1;
            pot[static_cast<std::size_t>(v)] =
                pot[static_cast<std::size_t>(u)] + detail::edge_weight(diff, g, e);
            queue.push_back(v);
        }
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        const int u = g.edge_from[static_cast<std::size_t>(e)];
        const int v = g.edge_to[static_cast<std::size_t>(e)];
        if (pot[static_cast<std::size_t>(v)] - pot[static_cast<std::size_t>(u)] !=
            detail::edge_weight(diff, g, e))
            throw contract_violation("potential assignment failed on a verified conservation law");
    }

    LocalObservable h(x, q, [&](const cells_t& w) {
        return pot[static_cast<std::size_t>(g.node_index_of(pack_cells(w, x.alphabet_size())))];
    });
    return FluxObservable{std::move(h), diff};
}

struct ConservedBasis {
    std::vector<LocalObservable> representatives; // nontrivial, integer-normalized
    int quotient_dim = 0;
    std::vector<LocalObservable> trivial_basis; // constants + coboundaries
};

// All range-k observables conserved by Φ on a full shift, presented modulo
// the trivially conserved subspace. Conservation of f is equivalent to the
// existence of a potential p on (k+m-2)-windows with
//   f(Φ-window) - f(leading window) = p(suffix) - p(prefix)
// for every (k+m-1)-word; with p as auxiliary unknowns this is one linear
// system, solved exactly and projected onto the f coordinates.
inline ConservedBasis discover_conserved(const SlidingBlockMap1D& phi, int k)
{
    if (!phi.domain().is_full_shift() || phi.domain() != phi.codomain())
        throw unsupported_input("conservation discovery runs on full-shift cellular automata");
    if (k < 1)
        throw domain_violation("discovery range must be at least 1");
    const int s = phi.domain().alphabet_size();
    const int m = phi.window();
    const int cap_k = k + m - 1;
    const std::uint64_t n_words = pow_u64(static_cast<std::uint64_t>(s), cap_k);
    const std::uint64_t n_f = pow_u64(static_cast<std::uint64_t>(s), k);
    const std::uint64_t n_p = pow_u64(static_cast<std::uint64_t>(s), cap_k - 1);
    const std::uint64_t n_cols = n_f + n_p;
    if (n_words > (1u << 16) || n_cols > (1u << 12))
        throw resource_limit("discovery range exceeds the exact-solver cap");

    std::vector<detail::rat_vec> rows;
    rows.reserve(n_words);
    cells_t w(static_cast<std::size_t>(cap_k));
    for (std::uint64_t code = 0; code < n_words; ++code) {
        w = unpack_code(code, cap_k, s);
        cells_t img(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            img[static_cast<std::size_t>(i)] = phi.local_packed(
                pack_cells(cells_t(w.begin() + i, w.begin() + i + m), s));
        detail::rat_vec row(n_cols, rational(0));
        row[pack_cells(img, s)] += 1;
        row[pack_cells(cells_t(w.begin(), w.begin() + k), s)] -= 1;
        // + p(prefix) - p(suffix)
        row[n_f + code / static_cast<std::uint64_t>(s)] += 1;
        row[n_f + code % n_p] -= 1;
        rows.push_back(std::move(row));
    }

    const std::vector<detail::rat_vec> null_basis = detail::nullspace_basis(std::move(rows), n_cols);

    detail::RationalSpan conserved(n_f);
    std::vector<detail::rat_vec> projected;
    for (const detail::rat_vec& v : null_basis) {
        detail::rat_vec fv(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n_f));
        if (conserved.add(fv))
            projected.push_back(std::move(fv));
    }

    // Trivially conserved subspace: the constant observable plus the
    // coboundaries of (k-1)-window potentials.
    ConservedBasis out;
    detail::RationalSpan trivial(n_f);
    detail::RationalSpan extended(n_f);
    auto admit_trivial = [&](const detail::rat_vec& v, const std::function<rational(const cells_t&)>& fn) {
        if (trivial.add(v)) {
            extended.add(v);
            out.trivial_basis.emplace_back(phi.domain(), k, fn);
        }
    };
    admit_trivial(detail::rat_vec(n_f, rational(1)), [](const cells_t&) { return rational(1); });
    const std::uint64_t n_half = pow_u64(static_cast<std::uint64_t>(s), k - 1);
    for (std::uint64_t u = 0; u < n_half; ++u) {
        detail::rat_vec v(n_f, rational(0));
        for (std::uint64_t code = 0; code < n_f; ++code) {
            if (code % n_half == u)
                v[code] += 1; // suffix window equals u
            if (code / static_cast<std::uint64_t>(s) == u)
                v[code] -= 1; // prefix window equals u
        }
        const cells_t uw = unpack_code(u, k - 1, s);
        admit_trivial(v, [uw, s](const cells_t& x) {
            const bool suf = std::equal(uw.begin(), uw.end(), x.begin() + 1);
            const bool pre = std::equal(uw.begin(), uw.end(), x.begin());
            return rational((suf ? 1 : 0) - (pre ? 1 : 0));
        });
    }

    for (const detail::rat_vec& v : projected) {
        if (!extended.add(v))
            continue;
        // New conserved direction beyond the trivial subspace: normalize
        // to coprime integers with positive leading entry.
        detail::rat_vec rep = v;
        bigint denom_lcm = 1;
        for (const rational& x : rep)
            denom_lcm = boost::multiprecision::lcm(denom_lcm, boost::multiprecision::denominator(x));
        bigint num_gcd = 0;
        for (rational& x : rep) {
            x *= denom_lcm;
            num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::numerator(x));
        }
        for (rational& x : rep)
            x /= num_gcd; // num_gcd is nonzero: v is independent of 0
        for (const rational& x : rep) {
            if (x == 0)
                continue;
            if (x < 0)
                for (rational& y : rep)
                    y = -y;
            break;
        }
        out.representatives.emplace_back(phi.domain(), k, [&rep, s](const cells_t& x) {
            return rep[pack_cells(x, s)];
        });
        ++out.quotient_dim;
    }
    return out;
}

} // namespace sca
