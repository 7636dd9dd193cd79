// Acceptance gate: ten end-to-end criteria run against the installed
// library, each with fixed seeds and tolerances pinned in this file.
// One PASS/FAIL line prints per criterion; a failing criterion lists the
// measured values behind it.  The process exit code is the number of
// failed criteria, so the gate doubles as a ctest entry.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "sca/analysis.hpp"
#include "sca/conservation.hpp"
#include "sca/lattice2d.hpp"
#include "sca/markov.hpp"
#include "sca/models.hpp"
#include "sca/randomize.hpp"
#include "sca/rng.hpp"

using namespace sca;

namespace {

constexpr std::uint64_t kGateSeed = 20260815;

struct Gate {
    std::vector<std::string> failures;

    void check(bool ok, const std::string& what)
    {
        if (!ok)
            failures.push_back(what);
    }
};

std::string num(double x, int digits = 6)
{
    std::ostringstream out;
    out << std::setprecision(digits) << x;
    return out.str();
}

LocalObservable symbol_counter(const Sft1D& x, int symbol)
{
    return LocalObservable(x, 1, [symbol](const cells_t& w) { return rational(w[0] == symbol); });
}

Sft1D ternary_full()
{
    return full_shift(make_alphabet({"0", "1", "2"}));
}

// ---------------------------------------------------------------- 1 ----
// Equilibrium transition matrices for the three symbol counters on the
// image shift of the ternary collapse map, and for the same counters
// pulled back through the map, against the reference table (three
// decimals, so agreement is required to 1e-3).  The table we transcribed
// shows (1, 1, 0) for the bottom row of the third image matrix; that row
// cannot be right -- transition rows are stochastic and context 2 forbids
// both continuations 1 and 2 -- so the comparison pins the corrected row
// (1, 0, 0).
void criterion_1(Gate& g)
{
    const double tol = 1e-3;
    const SlidingBlockMap1D phi = *builtin_model("ternary-collapse").map;
    const Sft1D x = phi.domain();
    const Sft1D y = phi.codomain();

    const std::vector<std::vector<std::vector<double>>> image_rows = {
        {{0.230, 0.626, 0.144}, {0.230, 0.626, 0.144}, {1.0, 0.0, 0.0}},
        {{0.528, 0.194, 0.278}, {0.528, 0.194, 0.278}, {1.0, 0.0, 0.0}},
        {{0.461, 0.461, 0.078}, {0.461, 0.461, 0.078}, {1.0, 0.0, 0.0}},
    };
    const std::vector<std::vector<std::vector<double>>> domain_rows = {
        {{0.230, 0.385, 0.385}, {0.374, 0.0, 0.626}, {0.374, 0.626, 0.0}},
        {{0.528, 0.163, 0.310}, {0.630, 0.0, 0.370}, {0.898, 0.102, 0.0}},
        {{0.461, 0.316, 0.224}, {0.673, 0.0, 0.327}, {0.350, 0.650, 0.0}},
    };

    const auto compare = [&](const MarkovMeasure& mu, const std::vector<std::vector<double>>& rows,
                             const std::string& label) {
        if (mu.contexts().size() != rows.size()) {
            g.check(false, label + ": expected " + std::to_string(rows.size()) + " contexts, got " +
                               std::to_string(mu.contexts().size()));
            return;
        }
        for (std::size_t u = 0; u < rows.size(); ++u)
            for (std::size_t a = 0; a < rows[u].size(); ++a) {
                const double got = mu.transition(static_cast<int>(u), static_cast<int>(a));
                g.check(std::abs(got - rows[u][a]) <= tol,
                        label + " entry (" + std::to_string(u) + "," + std::to_string(a) +
                            "): got " + num(got, 9) + ", reference " + num(rows[u][a], 3));
            }
    };

    for (int i = 0; i < 3; ++i) {
        compare(gibbs_from_observable(y, symbol_counter(y, i)), image_rows[static_cast<std::size_t>(i)],
                "image matrix " + std::to_string(i));
        compare(gibbs_from_observable(x, compose_with_map(symbol_counter(y, i), phi)),
                domain_rows[static_cast<std::size_t>(i)], "domain matrix " + std::to_string(i));
    }
}

// ---------------------------------------------------------------- 2 ----
// The collapse map sends each domain-side equilibrium measure onto the
// image-side equilibrium for the same counter: all cylinder
// probabilities up to length 6 agree to 1e-9.
void criterion_2(Gate& g)
{
    const double tol = 1e-9;
    const int max_len = 6;
    const SlidingBlockMap1D phi = *builtin_model("ternary-collapse").map;
    const Sft1D x = phi.domain();
    const Sft1D y = phi.codomain();

    for (int i = 0; i < 3; ++i) {
        const MarkovMeasure pi = gibbs_from_observable(x, compose_with_map(symbol_counter(y, i), phi));
        const MarkovMeasure nu = gibbs_from_observable(y, symbol_counter(y, i));
        const CylinderTable push = pushforward(phi, pi, max_len);

        double worst = 0;
        for (int n = 1; n <= max_len; ++n) {
            g.check(std::abs(push.level_sum(n) - 1.0) <= tol,
                    "counter " + std::to_string(i) + ": pushforward level " + std::to_string(n) +
                        " sums to " + num(push.level_sum(n), 12));
            for (const cells_t& w : y.language(n))
                worst = std::max(worst, std::abs(push.prob(w) - nu.cylinder_prob(w)));
        }
        g.check(worst <= tol, "counter " + std::to_string(i) +
                                  ": max cylinder deviation " + num(worst, 6) + " exceeds 1e-9");
    }
}

// ---------------------------------------------------------------- 3 ----
// 500 random cellular automata on full shifts (alphabet size 2..3,
// window 1..3): the surjectivity and pre-injectivity procedures must
// return the same verdict, and direct preimage counting must agree.  A
// surjective rule has exactly s^(w-1) preimages for every word up to
// length 6; a non-surjective rule must show an unbalanced count at some
// length up to 6, or failing that its orphan witness must be confirmed
// to have zero preimages by enumeration.
void criterion_3(Gate& g)
{
    counter_rng rng(kGateSeed);
    const Sft1D full2 = full_shift(binary_alphabet());
    const Sft1D full3 = ternary_full();

    for (int trial = 0; trial < 500; ++trial) {
        const int s = 2 + static_cast<int>(rng.next_below(2));
        const int w = 1 + static_cast<int>(rng.next_below(3));
        std::vector<int> table(pow_u64(static_cast<std::uint64_t>(s), w));
        std::string digits;
        for (auto& v : table) {
            v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(s)));
            digits += static_cast<char>('0' + v);
        }
        const Sft1D& full = s == 2 ? full2 : full3;
        const SlidingBlockMap1D phi(full, full, 0, w - 1, [&](const cells_t& win) {
            return table[pack_cells(win, s)];
        });
        const std::string tag = "rule " + std::to_string(trial) + " (s=" + std::to_string(s) +
                                ", w=" + std::to_string(w) + ", table=" + digits + ")";

        const bool surjective = is_surjective(phi);
        const bool preinjective = is_preinjective(phi);
        g.check(surjective == preinjective,
                tag + ": surjective=" + std::to_string(surjective) +
                    " but preinjective=" + std::to_string(preinjective));

        const std::uint64_t balanced_count = pow_u64(static_cast<std::uint64_t>(s), w - 1);
        bool all_balanced = true;
        for (int n = 1; n <= 6 && all_balanced; ++n) {
            const int in_len = n + w - 1;
            std::vector<std::uint64_t> counts(pow_u64(static_cast<std::uint64_t>(s), n), 0);
            const std::uint64_t span = pow_u64(static_cast<std::uint64_t>(s), in_len);
            for (std::uint64_t code = 0; code < span; ++code)
                ++counts[pack_cells(phi.apply_to_word(unpack_code(code, in_len, s)), s)];
            for (const std::uint64_t c : counts)
                if (c != balanced_count)
                    all_balanced = false;
        }

        if (surjective) {
            g.check(all_balanced, tag + ": surjective but unbalanced preimage counts");
        } else if (all_balanced) {
            // Counts alone were inconclusive; fall back to the explicit
            // orphan witness and count its preimages directly.
            const std::optional<Word> orphan = garden_of_eden_witness(phi);
            if (!orphan) {
                g.check(false, tag + ": non-surjective but no orphan witness");
                continue;
            }
            const int n = static_cast<int>(orphan->cells.size());
            const int in_len = n + w - 1;
            if (in_len > 17) {
                g.check(false, tag + ": orphan witness of length " + std::to_string(n) +
                                   " too long to confirm by enumeration");
                continue;
            }
            const std::uint64_t target = pack_cells(orphan->cells, s);
            const std::uint64_t span = pow_u64(static_cast<std::uint64_t>(s), in_len);
            std::uint64_t hits = 0;
            for (std::uint64_t code = 0; code < span; ++code)
                if (pack_cells(phi.apply_to_word(unpack_code(code, in_len, s)), s) == target)
                    ++hits;
            g.check(hits == 0, tag + ": orphan witness has " + std::to_string(hits) + " preimages");
        }
    }
}

// ---------------------------------------------------------------- 4 ----
// The walls automaton conserves the wall indicator; its synthesized flux
// satisfies the continuity identity exactly (rational arithmetic) on
// every periodic word of length 1..8 and on 10^4 random longer ones.
// Discovery over the xor rule at range 3 and the bipermutive ternary
// rule at range 2 finds nothing beyond the trivial subspace.
void criterion_4(Gate& g)
{
    const SlidingBlockMap1D walls = *builtin_model("xor-with-walls").map;
    const Sft1D full3 = walls.domain();
    const LocalObservable wall(full3, 1, [](const cells_t& w) { return rational(w[0] == 2); });

    g.check(is_conserved(walls, wall), "wall indicator reported as not conserved");
    const FluxObservable flux = synthesize_flux(walls, wall);

    std::uint64_t violations = 0;
    for (int len = 1; len <= 8; ++len) {
        const std::uint64_t span = pow_u64(3, len);
        for (std::uint64_t code = 0; code < span; ++code)
            if (!flux.certifies_periodic(unpack_code(code, len, 3)))
                ++violations;
    }
    g.check(violations == 0,
            "continuity identity fails on " + std::to_string(violations) + " short periodic words");

    counter_rng rng(kGateSeed);
    violations = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        const int len = 9 + static_cast<int>(rng.next_below(32));
        cells_t w(static_cast<std::size_t>(len));
        for (auto& c : w)
            c = static_cast<int>(rng.next_below(3));
        if (!flux.certifies_periodic(w))
            ++violations;
    }
    g.check(violations == 0,
            "continuity identity fails on " + std::to_string(violations) + " random periodic words");

    const int xor_dim = discover_conserved(*builtin_model("xor01").map, 3).quotient_dim;
    g.check(xor_dim == 0, "xor01 range-3 quotient dimension " + std::to_string(xor_dim) + ", expected 0");
    const int bp_dim = discover_conserved(*builtin_model("bipermutive-ternary").map, 2).quotient_dim;
    g.check(bp_dim == 0,
            "bipermutive-ternary range-2 quotient dimension " + std::to_string(bp_dim) + ", expected 0");
}

// ---------------------------------------------------------------- 5 ----
// Block-entropy increments of the image of Bernoulli(0.3).  Under the
// xor rule (pre-injective) the increment at n = 12 stays within 0.02 of
// the source entropy H(0.3) = 0.610864; the exact increment there is
// 0.626852, a gap of 0.0160, so the 0.02 window is attainable and tight.
// Under majority (not pre-injective) entropy is lost: the same increment
// drops at least 0.05 below H(0.3) (exact gap 0.2099).
void criterion_5(Gate& g)
{
    const double h_source = -(0.3 * std::log(0.3) + 0.7 * std::log(0.7));
    const Sft1D full2 = full_shift(binary_alphabet());
    const MarkovMeasure bern(full2, 0, {{0.7, 0.3}});

    const auto profile_of = [&](const char* name) {
        return block_entropy_profile(pushforward(*builtin_model(name).map, bern, 13));
    };

    const std::vector<EntropyProfileRow> xr = profile_of("xor01");
    g.check(xr.size() == 12 && xr.back().length == 12,
            "xor01 profile has " + std::to_string(xr.size()) + " rows, expected 12");
    for (std::size_t i = 1; i < xr.size(); ++i)
        g.check(xr[i].increment <= xr[i - 1].increment + 1e-12,
                "xor01 increment rises at n=" + std::to_string(xr[i].length) + ": " +
                    num(xr[i - 1].increment, 9) + " -> " + num(xr[i].increment, 9));
    const double xor_inc = xr.back().increment;
    g.check(std::abs(xor_inc - h_source) <= 0.02,
            "xor01 increment at n=12 is " + num(xor_inc, 9) + ", source entropy " + num(h_source, 9));

    const std::vector<EntropyProfileRow> mj = profile_of("majority3");
    const double maj_inc = mj.back().increment;
    g.check(h_source - maj_inc >= 0.05,
            "majority3 increment at n=12 is " + num(maj_inc, 9) + ", expected at least 0.05 below " +
                num(h_source, 9));
}

// ---------------------------------------------------------------- 6 ----
// Variational principle: 200 random Markov measures (100 per potential)
// stay below the pressure, the equilibrium measure achieves it to 1e-6,
// and the golden-mean pressure at zero potential is the log of the
// golden ratio.
void criterion_6(Gate& g)
{
    counter_rng rng(kGateSeed);
    const Sft1D gm(binary_alphabet(), {parse_word(binary_alphabet(), "11")});
    const Sft1D full3 = ternary_full();

    const std::vector<std::pair<Sft1D, LocalObservable>> problems = {
        {gm, symbol_counter(gm, 1)},
        {full3, LocalObservable(full3, 2,
                                [](const cells_t& w) { return rational(2 * w[0] - w[1], 3); })},
    };

    for (std::size_t pi = 0; pi < problems.size(); ++pi) {
        const Sft1D& x = problems[pi].first;
        const LocalObservable& f = problems[pi].second;
        const double p_f = pressure(x, f);
        const int s = x.alphabet_size();

        const MarkovMeasure eq = gibbs_from_observable(x, f);
        const double eq_gap = std::abs(entropy(eq) - expected_value(eq, f) - p_f);
        g.check(eq_gap <= 1e-6, "potential " + std::to_string(pi) +
                                    ": equilibrium misses the pressure by " + num(eq_gap, 6));

        for (int rep = 0; rep < 100; ++rep) {
            const int order = x.memory() + static_cast<int>(rng.next_below(2));
            std::vector<std::vector<double>> rows;
            for (const cells_t& u : x.language(order)) {
                std::vector<double> row(static_cast<std::size_t>(s), 0.0);
                for (int a = 0; a < s; ++a) {
                    cells_t ext = u;
                    ext.push_back(a);
                    if (x.is_in_language(ext))
                        row[static_cast<std::size_t>(a)] = 0.05 + rng.next_double();
                }
                rows.push_back(std::move(row));
            }
            const MarkovMeasure mu(x, order, rows);
            const double value = entropy(mu) - expected_value(mu, f);
            g.check(value <= p_f + 1e-9,
                    "potential " + std::to_string(pi) + ", measure " + std::to_string(rep) +
                        ": h - <f> = " + num(value, 12) + " exceeds pressure " + num(p_f, 12));
        }
    }

    const double p0 = pressure(gm, LocalObservable::constant(gm, rational(0)));
    const double golden = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    g.check(std::abs(p0 - golden) <= 1e-6,
            "golden-mean zero-potential pressure " + num(p0, 12) + " vs " + num(golden, 12));
}

// ---------------------------------------------------------------- 7 ----
// Q2R on a 200x200 torus from Bernoulli(0.1) spins: the Ising energy is
// exactly constant at every one of 2*10^4 steps, one forward step is
// undone exactly by one inverse step, the full orbit reverses back to
// the initial configuration, and the empirical 2x2-block distributions
// at t = 10^4 and t = 2*10^4 differ by total variation below 0.01.
void criterion_7(Gate& g)
{
    SpinGrid grid = SpinGrid::bernoulli(200, 200, 0.1, kGateSeed);
    const SpinGrid initial = grid;
    const long long e0 = ising_energy(grid);

    long long bad_step = -1;
    for (long long t = 1; t <= 20000; ++t) {
        q2r_advance(grid, 1);
        if (ising_energy(grid) != e0) {
            bad_step = t;
            break;
        }
        if (t == 10000) {
            const SpinGrid snap = grid;
            g.check(q2r_inverse_step(q2r_step(snap)) == snap,
                    "inverse step fails to undo a forward step at t=10^4");
        }
    }
    g.check(bad_step < 0, "energy drifts from " + std::to_string(e0) + " at step " +
                              std::to_string(bad_step));

    if (bad_step < 0) {
        SpinGrid halfway = initial;
        q2r_advance(halfway, 10000);
        const auto d1 = block_distribution(halfway, 2);
        const auto d2 = block_distribution(grid, 2);
        const double tv = total_variation(d1, d2);
        g.check(tv < 0.01, "2x2 block TV between t=10^4 and t=2*10^4 is " + num(tv, 6));

        SpinGrid rewound = grid;
        q2r_advance(rewound, -20000);
        g.check(rewound == initial, "rewinding 2*10^4 steps does not recover the start");
    }
}

// ---------------------------------------------------------------- 8 ----
// The spin-to-contour factor map is exactly two-to-one on the 4x4 torus
// (all 2^16 configurations), and flipping spins changes twice the Ising
// energy by exactly twice the contour-length change on 10^3 random
// perturbation pairs.
void criterion_8(Gate& g)
{
    std::unordered_map<std::uint64_t, int> preimages;
    preimages.reserve(1u << 16);
    for (std::uint32_t code = 0; code < (1u << 16); ++code) {
        SpinGrid grid(4, 4);
        for (int idx = 0; idx < 16; ++idx)
            if ((code >> idx) & 1u)
                grid.set_minus(idx / 4, idx % 4, true);
        const ContourGrid contour = contour_map(grid);
        std::uint64_t key = 0;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                key = (key << 4) | contour.at(r, c);
        ++preimages[key];
    }
    g.check(preimages.size() == 32768,
            std::to_string(preimages.size()) + " distinct contour images, expected 32768");
    std::size_t off = 0;
    for (const auto& [key, count] : preimages)
        if (count != 2)
            ++off;
    g.check(off == 0, std::to_string(off) + " contour images without exactly 2 preimages");

    counter_rng rng(kGateSeed);
    for (int rep = 0; rep < 1000; ++rep) {
        const int w = 4 + static_cast<int>(rng.next_below(6));
        const int h = 4 + static_cast<int>(rng.next_below(6));
        const SpinGrid x = SpinGrid::bernoulli(w, h, 0.4, kGateSeed + 1 + static_cast<std::uint64_t>(rep));
        SpinGrid y = x;
        const int flips = 1 + static_cast<int>(rng.next_below(3));
        for (int i = 0; i < flips; ++i)
            y.flip(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(h))),
                   static_cast<int>(rng.next_below(static_cast<std::uint64_t>(w))));
        const auto [de, dl] = delta_ratio_check(x, y);
        g.check(de == 2 * dl, "pair " + std::to_string(rep) + ": energy step " + std::to_string(de) +
                                  " != 2 * length step " + std::to_string(dl));
    }
}

// ---------------------------------------------------------------- 9 ----
// Randomization of the xor rule from Bernoulli(0.1), tracked through the
// exact 8-cell marginal oracle, plus one sampled orbit.
//
// Spike shape at t = 2^k: the parity row there has exactly two taps, so
// the marginal re-concentrates and its distance to uniform jumps above
// the neighbouring times, while between powers of two the taps spread
// out and the distance collapses.  Pinned form: each t = 2^k (k = 5..9)
// is a strict local maximum of the distance series, and the ratio of the
// spike to the median distance over the surrounding dyadic window
// (2^(k-1), 2^(k+1)) grows strictly with k, clearing 10x at k = 9.  (At
// t = 2^k - 1 the taps are contiguous, which keeps neighbouring cells of
// the joint marginal correlated and its distance high; the window median
// is what isolates the spike, not the immediately adjacent times.)
//
// The sampled clause reproduces a recorded single-realization run:
// one-density 0.104 at t = 0 and 0.504 at t = 300 over 10^6 observed
// cells.  300 has four set bits, so each output cell is the xor of
// 2^4 = 16 independent inputs and the ensemble mean of the t = 300
// density is (1 - (1 - 2p)^16)/2 = 0.48802.  The recorded value sits
// 0.016 above that mean, outside the 0.01 window for typical seeds; the
// check is kept as stated and reports the measured density next to the
// ensemble mean.
void criterion_9(Gate& g)
{
    const SlidingBlockMap1D xr = *builtin_model("xor01").map;
    const double bias = 0.1;
    const int cells = 8;

    const double tv500 = tv_to_uniform(exact_marginal(xr, 500, bias, cells));
    g.check(tv500 < 0.02, "distance to uniform at t=500 is " + num(tv500, 6));

    std::vector<double> cesaro;
    for (long long horizon = 16; horizon <= 4096; horizon *= 2)
        cesaro.push_back(tv_to_uniform(cesaro_marginal(xr, horizon, bias, cells)));
    for (std::size_t i = 1; i < cesaro.size(); ++i)
        g.check(cesaro[i] < cesaro[i - 1],
                "Cesaro distance not decreasing at horizon 2^" + std::to_string(i + 4) + ": " +
                    num(cesaro[i - 1], 6) + " -> " + num(cesaro[i], 6));

    std::map<long long, double> tv;
    for (long long t = 17; t <= 1023; ++t)
        tv[t] = tv_to_uniform(exact_marginal(xr, t, bias, cells));

    const auto window_median = [&](long long lo, long long hi, long long skip) {
        std::vector<double> v;
        for (long long t = lo + 1; t < hi; ++t)
            if (t != skip)
                v.push_back(tv.at(t));
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };

    double previous_ratio = 0;
    for (int k = 5; k <= 9; ++k) {
        const long long t0 = 1LL << k;
        g.check(tv.at(t0) > tv.at(t0 - 1) && tv.at(t0) > tv.at(t0 + 1),
                "t=2^" + std::to_string(k) + " is not a strict local maximum: " +
                    num(tv.at(t0 - 1), 6) + ", " + num(tv.at(t0), 6) + ", " + num(tv.at(t0 + 1), 6));
        const double ratio = tv.at(t0) / window_median(t0 / 2, 2 * t0, t0);
        g.check(ratio > previous_ratio,
                "spike ratio stops growing at k=" + std::to_string(k) + ": " +
                    num(previous_ratio, 6) + " -> " + num(ratio, 6));
        if (k == 9)
            g.check(ratio > 10.0, "spike ratio at k=9 is " + num(ratio, 6) + ", expected above 10");
        previous_ratio = ratio;
    }

    const double p_sample = 0.104;
    const Sft1D full2 = full_shift(binary_alphabet());
    const MarkovMeasure init(full2, 0, {{1.0 - p_sample, p_sample}});
    const OrbitSample orbit = sample_orbit(xr, init, 300, 100300, 10, kGateSeed, 1);
    g.check(orbit.observed_cells == 1000000,
            "expected 10^6 observed cells, got " + std::to_string(orbit.observed_cells));
    g.check(std::abs(orbit.density[0] - 0.104) <= 0.01,
            "initial one-density " + num(orbit.density[0], 6) + " vs recorded 0.104 +/- 0.01");
    const double ensemble = (1.0 - std::pow(1.0 - 2.0 * p_sample, 16)) / 2.0;
    g.check(std::abs(orbit.density[300] - 0.504) <= 0.01,
            "one-density at t=300 is " + num(orbit.density[300], 6) + " vs recorded 0.504 +/- 0.01 "
            "(ensemble mean at this bias is " + num(ensemble, 6) +
            "; the recorded target is a single-realization value 0.016 above the mean, "
            "so a fresh seed lands outside its window)");
}

// --------------------------------------------------------------- 10 ----
// The xor rule is surjective, so it preserves the uniform Bernoulli
// measure: cylinders up to length 12 agree to 1e-12.  A biased Bernoulli
// measure is moved, and the semi-decision reports a mismatch.
void criterion_10(Gate& g)
{
    const SlidingBlockMap1D xr = *builtin_model("xor01").map;
    const Sft1D full2 = full_shift(binary_alphabet());

    const MarkovMeasure uniform(full2, 0, {{1.0, 1.0}});
    const InvarianceReport kept = check_invariance(xr, uniform, 12, 1e-12);
    g.check(kept.equal_up_to_length,
            "uniform measure reported as moved; first mismatch at " +
                (kept.first_mismatch ? display_word(*kept.first_mismatch) : std::string("<none>")));

    const MarkovMeasure biased(full2, 0, {{0.7, 0.3}});
    const InvarianceReport moved = check_invariance(xr, biased, 4, 1e-9);
    g.check(!moved.equal_up_to_length && moved.first_mismatch.has_value(),
            "Bernoulli(0.3) reported as invariant up to length 4");
}

struct Criterion {
    int number;
    const char* label;
    double budget_seconds;
    void (*run)(Gate&);
};

}  // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "equilibrium transition matrices match the reference table", 1, criterion_1},
        {2, "factor map intertwines the equilibrium measures", 5, criterion_2},
        {3, "surjectivity, pre-injectivity, and preimage counts agree", 60, criterion_3},
        {4, "conservation: flux continuity and empty discovery", 120, criterion_4},
        {5, "image entropy: preserved by xor, lost by majority", 30, criterion_5},
        {6, "variational principle and golden-mean pressure", 10, criterion_6},
        {7, "Q2R conserves energy, reverses, and equilibrates", 60, criterion_7},
        {8, "contour factor is two-to-one with doubled energy steps", 30, criterion_8},
        {9, "randomization: exact oracle and sampled orbit", 120, criterion_9},
        {10, "uniform measure invariance semi-decision", 5, criterion_10},
    };

    std::cout << "sca acceptance gate: " << criteria.size()
              << " criteria, fixed seed " << kGateSeed << "\n\n";

    int failed = 0;
    for (const Criterion& c : criteria) {
        Gate gate;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(gate);
        } catch (const std::exception& e) {
            gate.check(false, std::string("unexpected exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        gate.check(seconds <= c.budget_seconds,
                   "runtime " + num(seconds, 3) + " s exceeds the " + num(c.budget_seconds, 3) +
                       " s budget");

        const bool ok = gate.failures.empty();
        failed += ok ? 0 : 1;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << std::setw(2) << c.number << "  " << c.label
                  << "  (" << std::fixed << std::setprecision(2) << seconds << " s)\n"
                  << std::defaultfloat;
        for (const std::string& what : gate.failures)
            std::cout << "          - " << what << "\n";
    }

    std::cout << "\n" << (criteria.size() - static_cast<std::size_t>(failed)) << "/"
              << criteria.size() << " criteria passed\n";
    return failed;
}
