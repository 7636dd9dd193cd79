// Markov measures on mixing subshifts, Gibbs construction via transfer
// matrices, and exact cylinder pushforward under sliding block maps.
//
// A MarkovMeasure is an order-r chain: states are the allowed r-words
// ("contexts"), and P[u][a] is the probability of appending symbol a.
// gibbs_from_observable builds the unique shift-invariant Gibbs measure
// of a range-k observable f: contexts of length r = max(k-1, memory),
// directed edges (u, a) weighted exp(-f(last k cells of u.a)), Perron
// data by power iteration, and the standard stochasticization
// P[u][a] = w(u,a) r(v) / (lambda r(u)).
//
// Image measures under sliding block maps are represented as plain
// cylinder tables: the image of a Markov measure need not be Markov, but
// its cylinder probabilities are finite sums of preimage cylinders, which
// we accumulate exactly (up to rounding) along one lexicographic walk of
// the preimage language.

#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "sca/observable.hpp"

namespace sca {

inline constexpr double kEigenResidual = 1e-12;
inline constexpr double kStationaryResidual = 1e-14;
inline constexpr int kPowerIterationCap = 100000;

struct CylinderTable {
    Sft1D sft;
    int max_length = 0;
    // levels[n-1]: probabilities of the allowed words of length n.
    std::vector<std::map<cells_t, double>> levels;

    double prob(const cells_t& w) const
    {
        const std::size_t n = w.size();
        if (n == 0 || n > levels.size())
            throw domain_violation("cylinder table does not cover this word length");
        const auto it = levels[n - 1].find(w);
        return it == levels[n - 1].end() ? 0.0 : it->second;
    }

    double level_sum(int n) const
    {
        double s = 0;
        for (const auto& [w, p] : levels[static_cast<std::size_t>(n - 1)])
            s += p;
        return s;
    }
};

class MarkovMeasure {
    struct impl {
        Sft1D sft;
        int order = 0;
        std::uint64_t context_space = 1; // s^order
        std::vector<std::uint64_t> context_codes; // sorted
        std::vector<cells_t> contexts;
        std::vector<std::vector<double>> trans; // [context index][symbol]
        std::vector<double> rho;

        explicit impl(Sft1D x) : sft(std::move(x)) {}

        int context_index(std::uint64_t code) const
        {
            const auto it = std::lower_bound(context_codes.begin(), context_codes.end(), code);
            if (it == context_codes.end() || *it != code)
                return -1;
            return static_cast<int>(it - context_codes.begin());
        }
    };

    std::shared_ptr<const impl> p_;

public:
    // transitions[u][a] for context index u (contexts are the allowed
    // order-words in lexicographic order) and appended symbol a. Entries
    // must be positive exactly on the allowed continuations; rows are
    // normalized here. The stationary distribution is computed by power
    // iteration, which converges for mixing supports.
    MarkovMeasure(Sft1D sft, int order, const std::vector<std::vector<double>>& transitions)
    {
        if (order < 0)
            throw invalid_construction("Markov order must be nonnegative");
        if (order < sft.memory())
            throw invalid_construction("Markov order must be at least the subshift memory");
        auto im = std::make_shared<impl>(std::move(sft));
        im->order = order;
        const int s = im->sft.alphabet_size();
        im->context_space = pow_u64(static_cast<std::uint64_t>(s), order);
        for (const cells_t& w : im->sft.language(order, kStateCap)) {
            im->context_codes.push_back(pack_cells(w, s));
            im->contexts.push_back(w);
        }
        const std::size_t n = im->contexts.size();
        if (transitions.size() != n)
            throw invalid_construction("transition table size does not match the context count");

        im->trans.assign(n, std::vector<double>(static_cast<std::size_t>(s), 0.0));
        for (std::size_t u = 0; u < n; ++u) {
            if (transitions[u].size() != static_cast<std::size_t>(s))
                throw invalid_construction("transition row size does not match the alphabet");
            double row_sum = 0;
            for (int a = 0; a < s; ++a) {
                cells_t ext = im->contexts[u];
                ext.push_back(a);
                const bool allowed = im->sft.is_in_language(ext);
                const double p = transitions[u][static_cast<std::size_t>(a)];
                if (allowed && !(p > 0))
                    throw invalid_construction("transition probability must be positive on allowed continuations");
                if (!allowed && p != 0)
                    throw invalid_construction("transition probability must vanish on forbidden continuations");
                row_sum += p;
            }
            for (int a = 0; a < s; ++a)
                im->trans[u][static_cast<std::size_t>(a)] =
                    transitions[u][static_cast<std::size_t>(a)] / row_sum;
        }

        // Stationary distribution rho P = rho by power iteration.
        std::vector<double> rho(n, 1.0 / static_cast<double>(n));
        std::vector<double> next(n, 0.0);
        bool converged = false;
        for (int it = 0; it < kPowerIterationCap && !converged; ++it) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t u = 0; u < n; ++u) {
                for (int a = 0; a < s; ++a) {
                    const double p = im->trans[u][static_cast<std::size_t>(a)];
                    if (p == 0)
                        continue;
                    const std::uint64_t vc =
                        (im->context_codes[u] * static_cast<std::uint64_t>(s) +
                         static_cast<std::uint64_t>(a)) % im->context_space;
                    next[static_cast<std::size_t>(im->context_index(vc))] += rho[u] * p;
                }
            }
            double total = 0;
            for (double x : next)
                total += x;
            double residual = 0;
            for (std::size_t u = 0; u < n; ++u) {
                next[u] /= total;
                residual = std::max(residual, std::abs(next[u] - rho[u]));
            }
            rho.swap(next);
            converged = residual <= kStationaryResidual;
        }
        if (!converged)
            throw convergence_failure("stationary distribution power iteration did not converge");
        im->rho = std::move(rho);
        p_ = std::move(im);
    }

    const Sft1D& sft() const { return p_->sft; }
    int order() const { return p_->order; }
    const std::vector<cells_t>& contexts() const { return p_->contexts; }
    double transition(int context_index, int symbol) const
    {
        return p_->trans[static_cast<std::size_t>(context_index)][static_cast<std::size_t>(symbol)];
    }
    double stationary(int context_index) const
    {
        return p_->rho[static_cast<std::size_t>(context_index)];
    }

    double cylinder_prob(const cells_t& w) const
    {
        if (!p_->sft.is_in_language(w))
            return 0.0;
        const int r = p_->order;
        const int s = p_->sft.alphabet_size();
        const int n = static_cast<int>(w.size());
        if (n == 0)
            return 1.0;
        if (n < r) {
            // Marginal of rho over contexts extending w: a contiguous
            // code range, since packing is lexicographic.
            const std::uint64_t span = pow_u64(static_cast<std::uint64_t>(s), r - n);
            const std::uint64_t lo = pack_cells(w, s) * span;
            const auto begin = std::lower_bound(p_->context_codes.begin(), p_->context_codes.end(), lo);
            const auto end = std::lower_bound(p_->context_codes.begin(), p_->context_codes.end(), lo + span);
            double total = 0;
            for (auto it = begin; it != end; ++it)
                total += p_->rho[static_cast<std::size_t>(it - p_->context_codes.begin())];
            return total;
        }
        std::uint64_t ctx = pack_cells(cells_t(w.begin(), w.begin() + r), s);
        double prob = p_->rho[static_cast<std::size_t>(p_->context_index(ctx))];
        for (int i = r; i < n; ++i) {
            prob *= p_->trans[static_cast<std::size_t>(p_->context_index(ctx))]
                            [static_cast<std::size_t>(w[static_cast<std::size_t>(i)])];
            ctx = (ctx * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(w[static_cast<std::size_t>(i)])) %
                  p_->context_space;
        }
        return prob;
    }

    double cylinder_prob(const Word& w) const
    {
        if (*w.alphabet != *p_->sft.alphabet())
            throw domain_violation("word uses a different alphabet");
        return cylinder_prob(w.cells);
    }

    CylinderTable cylinder_table(int max_length) const
    {
        if (max_length < 1)
            throw domain_violation("cylinder table needs length at least 1");
        CylinderTable table{p_->sft, max_length, {}};
        table.levels.resize(static_cast<std::size_t>(max_length));
        for (const cells_t& w : p_->sft.language(max_length, kLanguageCap))
            table.levels[static_cast<std::size_t>(max_length - 1)][w] = cylinder_prob(w);
        for (int n = max_length - 1; n >= 1; --n) {
            auto& level = table.levels[static_cast<std::size_t>(n - 1)];
            for (const auto& [w, p] : table.levels[static_cast<std::size_t>(n)]) {
                const cells_t prefix(w.begin(), w.end() - 1);
                level[prefix] += p;
            }
        }
        return table;
    }
};

namespace detail {

// Per-edge transfer weights over order-r contexts, plus Perron data.
struct TransferMatrix {
    Sft1D sft;
    int order = 0;
    std::uint64_t context_space = 1;
    std::vector<std::uint64_t> context_codes = {};
    std::vector<cells_t> contexts = {};
    std::vector<std::vector<double>> weight = {}; // [context][symbol]; 0 when not allowed
    double lambda = 0;
    std::vector<double> right = {}, left = {};

    int context_index(std::uint64_t code) const
    {
        const auto it = std::lower_bound(context_codes.begin(), context_codes.end(), code);
        return static_cast<int>(it - context_codes.begin());
    }
};

inline TransferMatrix build_transfer(const Sft1D& x, const LocalObservable& f)
{
    if (f.sft() != x)
        throw domain_violation("observable does not live on this subshift");
    if (!is_mixing(x))
        throw unsupported_input("Gibbs construction needs a mixing subshift");
    TransferMatrix t{.sft = x};
    const int s = x.alphabet_size();
    const int k = f.range();
    t.order = std::max(k - 1, x.memory());
    t.context_space = pow_u64(static_cast<std::uint64_t>(s), t.order);
    for (const cells_t& w : x.language(t.order, kStateCap)) {
        t.context_codes.push_back(pack_cells(w, s));
        t.contexts.push_back(w);
    }
    const std::size_t n = t.contexts.size();
    t.weight.assign(n, std::vector<double>(static_cast<std::size_t>(s), 0.0));
    for (std::size_t u = 0; u < n; ++u) {
        for (int a = 0; a < s; ++a) {
            cells_t ext = t.contexts[u];
            ext.push_back(a);
            if (!x.is_in_language(ext))
                continue;
            // f reads the k-word that the appended symbol completes.
            const cells_t win(ext.end() - k, ext.end());
            t.weight[u][static_cast<std::size_t>(a)] =
                std::exp(-to_double(f.value_packed(pack_cells(win, s))));
        }
    }

    // Right and left Perron vectors by power iteration; the transfer
    // graph of a mixing subshift is primitive, so both converge.
    const auto iterate = [&](bool transpose) {
        std::vector<double> v(n, 1.0 / static_cast<double>(n));
        std::vector<double> next(n, 0.0);
        double lam = 0;
        for (int it = 0; it < kPowerIterationCap; ++it) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t u = 0; u < n; ++u) {
                for (int a = 0; a < s; ++a) {
                    const double w = t.weight[u][static_cast<std::size_t>(a)];
                    if (w == 0)
                        continue;
                    const std::uint64_t vc =
                        (t.context_codes[u] * static_cast<std::uint64_t>(s) +
                         static_cast<std::uint64_t>(a)) % t.context_space;
                    const std::size_t vi = static_cast<std::size_t>(t.context_index(vc));
                    if (transpose)
                        next[vi] += w * v[u];
                    else
                        next[u] += w * v[vi];
                }
            }
            lam = 0;
            for (double value : next)
                lam += value;
            double residual = 0;
            for (std::size_t u = 0; u < n; ++u)
                residual += std::abs(next[u] - lam * v[u]);
            for (std::size_t u = 0; u < n; ++u)
                next[u] /= lam;
            v.swap(next);
            if (residual / lam <= kEigenResidual)
                return std::make_pair(lam, v);
        }
        throw convergence_failure("transfer-matrix power iteration did not converge");
    };
    auto [lam_r, right] = iterate(false);
    auto [lam_l, left] = iterate(true);
    t.lambda = lam_r;
    t.right = std::move(right);
    t.left = std::move(left);
    (void)lam_l;
    return t;
}

} // namespace detail

// The unique shift-invariant Gibbs measure of a finite-range observable
// on a mixing subshift, as an order-max(k-1, memory) Markov chain.
inline MarkovMeasure gibbs_from_observable(const Sft1D& x, const LocalObservable& f)
{
    const detail::TransferMatrix t = detail::build_transfer(x, f);
    const int s = x.alphabet_size();
    const std::size_t n = t.contexts.size();
    std::vector<std::vector<double>> trans(n, std::vector<double>(static_cast<std::size_t>(s), 0.0));
    for (std::size_t u = 0; u < n; ++u) {
        double row = 0;
        for (int a = 0; a < s; ++a) {
            const double w = t.weight[u][static_cast<std::size_t>(a)];
            if (w == 0)
                continue;
            const std::uint64_t vc = (t.context_codes[u] * static_cast<std::uint64_t>(s) +
                                      static_cast<std::uint64_t>(a)) % t.context_space;
            const double p = w * t.right[static_cast<std::size_t>(t.context_index(vc))] /
                             (t.lambda * t.right[u]);
            trans[u][static_cast<std::size_t>(a)] = p;
            row += p;
        }
        for (int a = 0; a < s; ++a)
            trans[u][static_cast<std::size_t>(a)] /= row;
    }
    return MarkovMeasure(x, t.order, trans);
}

// log of the Perron eigenvalue; with f = 0 this is the topological entropy.
inline double pressure(const Sft1D& x, const LocalObservable& f)
{
    return std::log(detail::build_transfer(x, f).lambda);
}

// Entropy per site of the chain, in nats.
inline double entropy(const MarkovMeasure& mu)
{
    const int s = mu.sft().alphabet_size();
    double h = 0;
    for (std::size_t u = 0; u < mu.contexts().size(); ++u) {
        double inner = 0;
        for (int a = 0; a < s; ++a) {
            const double p = mu.transition(static_cast<int>(u), a);
            if (p > 0)
                inner += p * std::log(p);
        }
        h -= mu.stationary(static_cast<int>(u)) * inner;
    }
    return h;
}

inline double expected_value(const MarkovMeasure& mu, const LocalObservable& f)
{
    if (f.sft() != mu.sft())
        throw domain_violation("observable does not live on the measure's subshift");
    double total = 0;
    for (const cells_t& w : mu.sft().language(f.range(), kLanguageCap))
        total += mu.cylinder_prob(w) * to_double(f.value_packed(pack_cells(w, mu.sft().alphabet_size())));
    return total;
}

namespace detail {

// Derives the lower levels of a cylinder table from its top level by
// marginalizing over the final symbol.
inline void fill_lower_levels(CylinderTable& table)
{
    for (int n = table.max_length - 1; n >= 1; --n) {
        auto& level = table.levels[static_cast<std::size_t>(n - 1)];
        for (const auto& [w, p] : table.levels[static_cast<std::size_t>(n)])
            level[cells_t(w.begin(), w.end() - 1)] += p;
    }
}

} // namespace detail

// Exact image of mu under the map, tabulated for all cylinder lengths up
// to max_length: the probability of an image word is the sum of the
// measures of its preimage words of length max_length + window - 1,
// accumulated during a single lexicographic walk of the domain language.
inline CylinderTable pushforward(const SlidingBlockMap1D& phi, const MarkovMeasure& mu, int max_length)
{
    if (mu.sft() != phi.domain())
        throw domain_violation("measure does not live on the map domain");
    if (max_length < 1)
        throw domain_violation("pushforward needs length at least 1");
    const int needed = max_length + phi.window() - 1;
    CylinderTable table{phi.codomain(), max_length, {}};
    table.levels.resize(static_cast<std::size_t>(max_length));
    auto& top = table.levels[static_cast<std::size_t>(max_length - 1)];
    for (const cells_t& w : phi.domain().language(needed, kLanguageCap))
        top[phi.apply_to_word(w)] += mu.cylinder_prob(w);
    detail::fill_lower_levels(table);
    return table;
}

// Same image computation driven by a tabulated measure instead of a
// Markov one; lets callers iterate maps or push mixtures forward.
inline CylinderTable pushforward_table(const SlidingBlockMap1D& phi, const CylinderTable& mu,
                                       int max_length)
{
    if (mu.sft != phi.domain())
        throw domain_violation("table does not live on the map domain");
    const int needed = max_length + phi.window() - 1;
    if (max_length < 1)
        throw domain_violation("pushforward needs length at least 1");
    if (needed > mu.max_length)
        throw domain_violation("input table too short for the requested pushforward length");
    CylinderTable table{phi.codomain(), max_length, {}};
    table.levels.resize(static_cast<std::size_t>(max_length));
    auto& top = table.levels[static_cast<std::size_t>(max_length - 1)];
    for (const auto& [w, p] : mu.levels[static_cast<std::size_t>(needed - 1)])
        top[phi.apply_to_word(w)] += p;
    detail::fill_lower_levels(table);
    return table;
}

struct InvarianceReport {
    bool equal_up_to_length = false;
    int checked_length = 0;
    double tolerance = 0;
    std::optional<Word> first_mismatch; // earliest (length, word) violation
    double measure_prob = 0;
    double image_prob = 0;
    // Equality up to a finite length never certifies invariance; the
    // report is a semi-decision by design.
    std::string note = "equality checked up to the reported cylinder length only";
};

// Compares the pushforward of mu under the map against mu itself on all
// cylinders up to the given length.
inline InvarianceReport check_invariance(const SlidingBlockMap1D& phi, const MarkovMeasure& mu,
                                         int max_length, double tolerance = 1e-9)
{
    if (phi.domain() != phi.codomain())
        throw unsupported_input("invariance asks for a map of a subshift to itself");
    InvarianceReport rep;
    rep.checked_length = max_length;
    rep.tolerance = tolerance;
    const CylinderTable image = pushforward(phi, mu, max_length);
    for (int n = 1; n <= max_length; ++n) {
        for (const auto& [w, p] : image.levels[static_cast<std::size_t>(n - 1)]) {
            const double q = mu.cylinder_prob(w);
            if (std::abs(p - q) > tolerance) {
                rep.equal_up_to_length = false;
                rep.first_mismatch = Word{mu.sft().alphabet(), w};
                rep.measure_prob = q;
                rep.image_prob = p;
                return rep;
            }
        }
    }
    rep.equal_up_to_length = true;
    return rep;
}

struct EntropyProfileRow {
    int length = 0;   // n
    double rate = 0;  // H_n / n
    double increment = 0; // H_{n+1} - H_n
};

// Shannon block entropies of a cylinder table: both the per-site rate and
// the conditional increment are upper bounds on the entropy of the
// underlying measure, and the increments are non-increasing in n.
inline std::vector<EntropyProfileRow> block_entropy_profile(const CylinderTable& table)
{
    std::vector<double> h(static_cast<std::size_t>(table.max_length) + 1, 0.0);
    for (int n = 1; n <= table.max_length; ++n) {
        double total = 0;
        for (const auto& [w, p] : table.levels[static_cast<std::size_t>(n - 1)])
            if (p > 0)
                total -= p * std::log(p);
        h[static_cast<std::size_t>(n)] = total;
    }
    std::vector<EntropyProfileRow> rows;
    for (int n = 1; n + 1 <= table.max_length; ++n)
        rows.push_back({n, h[static_cast<std::size_t>(n)] / n,
                        h[static_cast<std::size_t>(n) + 1] - h[static_cast<std::size_t>(n)]});
    return rows;
}

} // namespace sca
