#pragma once

// Finite-torus spin dynamics and the spin -> contour factor map.
//
// Spins live on a W x H torus with two states, '+' and '-'. Rows are packed
// into 64-bit words (bit c of a row = 1 when the spin at column c is '-'),
// so one update step touches W*H/64 words instead of W*H cells.
//
// The reversible dynamics updates the two chessboard sublattices in turn:
// a spin flips exactly when its four torus neighbours split two against two.
// Because every neighbour of an updated site lies on the sublattice that is
// frozen during that stage, each stage is an involution, and running the two
// stages in the opposite order inverts the step exactly.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sca/errors.hpp"
#include "sca/rng.hpp"

namespace sca {

class SpinGrid {
public:
    SpinGrid(int width, int height)
        : width_(width), height_(height) {
        if (width < 2 || height < 2)
            throw invalid_construction("spin grid needs width and height at least 2");
        words_ = (width_ + 63) / 64;
        tail_mask_ = (width_ % 64 == 0) ? ~std::uint64_t(0)
                                        : ((std::uint64_t(1) << (width_ % 64)) - 1);
        bits_.assign(static_cast<std::size_t>(height_) * words_, 0);
    }

    static SpinGrid bernoulli(int width, int height, double p_minus, std::uint64_t seed) {
        if (p_minus < 0.0 || p_minus > 1.0)
            throw domain_violation("spin probability must lie in [0, 1]");
        SpinGrid g(width, height);
        counter_rng rng(seed);
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c)
                if (rng.next_double() < p_minus) g.set_minus(r, c, true);
        return g;
    }

    // Rows of '+' and '-' characters, all of equal length.
    static SpinGrid from_rows(const std::vector<std::string>& rows) {
        if (rows.size() < 2)
            throw parse_error("spin grid text needs at least 2 rows");
        int w = static_cast<int>(rows[0].size());
        SpinGrid g(w, static_cast<int>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(rows[r].size()) != w)
                throw parse_error("spin grid rows must all have the same length");
            for (int c = 0; c < w; ++c) {
                char ch = rows[r][c];
                if (ch != '+' && ch != '-')
                    throw parse_error("spin grid cells must be '+' or '-'");
                if (ch == '-') g.set_minus(static_cast<int>(r), c, true);
            }
        }
        return g;
    }

    int width() const { return width_; }
    int height() const { return height_; }

    bool minus_at(int r, int c) const {
        return (word(r, c / 64) >> (c % 64)) & 1u;
    }

    void set_minus(int r, int c, bool v) {
        std::uint64_t& w = bits_[static_cast<std::size_t>(r) * words_ + c / 64];
        std::uint64_t bit = std::uint64_t(1) << (c % 64);
        if (v) w |= bit; else w &= ~bit;
    }

    void flip(int r, int c) {
        bits_[static_cast<std::size_t>(r) * words_ + c / 64] ^= std::uint64_t(1) << (c % 64);
    }

    bool operator==(const SpinGrid& o) const {
        return width_ == o.width_ && height_ == o.height_ && bits_ == o.bits_;
    }
    bool operator!=(const SpinGrid& o) const { return !(*this == o); }

    std::vector<std::string> to_rows() const {
        std::vector<std::string> rows(height_);
        for (int r = 0; r < height_; ++r) {
            rows[r].resize(width_);
            for (int c = 0; c < width_; ++c) rows[r][c] = minus_at(r, c) ? '-' : '+';
        }
        return rows;
    }

    long long count_minus() const {
        long long n = 0;
        for (std::uint64_t w : bits_) n += __builtin_popcountll(w);
        return n;
    }

    // One synchronous sublattice update. Stage parity 0 updates sites with
    // (row + column) even. Safe in place: the flip decision for a stage-p site
    // reads only sites of the opposite parity, which this stage never writes.
    void q2r_stage(int parity) {
        if (width_ % 2 != 0 || height_ % 2 != 0)
            throw domain_violation("reversible stepping needs even torus dimensions");
        std::vector<std::uint64_t> east(words_), west(words_);
        const std::uint64_t even_cols = 0x5555555555555555ull;
        for (int r = 0; r < height_; ++r) {
            const std::uint64_t* up = row_ptr((r + height_ - 1) % height_);
            const std::uint64_t* down = row_ptr((r + 1) % height_);
            std::uint64_t* cur = row_ptr(r);
            rotate_east(cur, east.data());
            rotate_west(cur, west.data());
            std::uint64_t cols = ((r + parity) % 2 == 0) ? even_cols : ~even_cols;
            for (int i = 0; i < words_; ++i) {
                // Carry-save sum of the four neighbour bitplanes: the count at
                // a bit position is low + 2*(p+q+rr), so it equals 2 exactly
                // when low is clear and exactly one of p, q, rr is set.
                std::uint64_t s = up[i] ^ down[i], p = up[i] & down[i];
                std::uint64_t t = east[i] ^ west[i], q = east[i] & west[i];
                std::uint64_t low = s ^ t, rr = s & t;
                std::uint64_t one = (p ^ q ^ rr) & ~((p & q) | (q & rr) | (p & rr));
                std::uint64_t flip = ~low & one & cols;
                if (i == words_ - 1) flip &= tail_mask_;
                cur[i] ^= flip;
            }
        }
    }

private:
    const std::uint64_t* row_ptr(int r) const { return &bits_[static_cast<std::size_t>(r) * words_]; }
    std::uint64_t* row_ptr(int r) { return &bits_[static_cast<std::size_t>(r) * words_]; }
    std::uint64_t word(int r, int i) const { return bits_[static_cast<std::size_t>(r) * words_ + i]; }

    // out bit c = row bit (c+1) mod W: each cell sees its eastern neighbour.
    void rotate_east(const std::uint64_t* v, std::uint64_t* out) const {
        std::uint64_t low0 = v[0] & 1u;
        for (int i = 0; i < words_; ++i) {
            std::uint64_t carry = (i + 1 < words_) ? (v[i + 1] & 1u) : 0;
            out[i] = (v[i] >> 1) | (carry << 63);
        }
        int top = width_ - 1;
        out[top / 64] |= low0 << (top % 64);
        out[words_ - 1] &= tail_mask_;
    }

    // out bit c = row bit (c-1) mod W: each cell sees its western neighbour.
    void rotate_west(const std::uint64_t* v, std::uint64_t* out) const {
        int top = width_ - 1;
        std::uint64_t hi = (v[top / 64] >> (top % 64)) & 1u;
        for (int i = words_ - 1; i >= 0; --i) {
            std::uint64_t carry = (i > 0) ? (v[i - 1] >> 63) : 0;
            out[i] = (v[i] << 1) | carry;
        }
        out[0] |= hi;
        out[words_ - 1] &= tail_mask_;
    }

    friend long long ising_energy(const SpinGrid&);
    friend class ContourGrid;

    int width_, height_, words_;
    std::uint64_t tail_mask_;
    std::vector<std::uint64_t> bits_;
};

inline SpinGrid q2r_step(SpinGrid c) {
    c.q2r_stage(0);
    c.q2r_stage(1);
    return c;
}

inline SpinGrid q2r_inverse_step(SpinGrid c) {
    c.q2r_stage(1);
    c.q2r_stage(0);
    return c;
}

inline void q2r_advance(SpinGrid& c, long long steps) {
    for (long long i = 0; i < steps; ++i) { c.q2r_stage(0); c.q2r_stage(1); }
    for (long long i = 0; i > steps; --i) { c.q2r_stage(1); c.q2r_stage(0); }
}

// Number of anti-aligned adjacent pairs, each torus bond counted once
// (W*H horizontal plus W*H vertical bonds in total).
inline long long ising_energy(const SpinGrid& g) {
    long long e = 0;
    std::vector<std::uint64_t> east(g.words_);
    for (int r = 0; r < g.height_; ++r) {
        const std::uint64_t* cur = g.row_ptr(r);
        const std::uint64_t* down = g.row_ptr((r + 1) % g.height_);
        g.rotate_east(cur, east.data());
        for (int i = 0; i < g.words_; ++i) {
            e += __builtin_popcountll(cur[i] ^ east[i]);
            e += __builtin_popcountll(cur[i] ^ down[i]);
        }
    }
    return e;
}

inline long long magnetization(const SpinGrid& g) {
    return static_cast<long long>(g.width()) * g.height() - 2 * g.count_minus();
}

// Contour cells are 4-bit port masks. A port is open when the corresponding
// bond of the underlying 2x2 spin block is anti-aligned, so contours trace the
// boundaries between '+' regions and '-' regions.
enum : std::uint8_t {
    kPortN = 1,   // bond between the two top spins of the block
    kPortE = 2,   // bond between the two right spins
    kPortS = 4,   // bond between the two bottom spins
    kPortW = 8,   // bond between the two left spins
};

// The eight legal cells: blank, four corners, two straight segments, crossing.
inline const char* contour_glyph_name(std::uint8_t mask) {
    switch (mask) {
        case 0:                         return "empty";
        case kPortN | kPortE:           return "ru";
        case kPortN | kPortS:           return "v";
        case kPortE | kPortS:           return "rd";
        case kPortN | kPortW:           return "lu";
        case kPortE | kPortW:           return "h";
        case kPortS | kPortW:           return "ld";
        case kPortN | kPortE | kPortS | kPortW: return "x";
        default: throw domain_violation("not a legal contour cell");
    }
}

inline bool contour_mask_legal(std::uint8_t mask) {
    switch (mask) {
        case 0: case 3: case 5: case 6: case 9: case 10: case 12: case 15: return true;
        default: return false;
    }
}

inline std::uint8_t contour_mask_from_name(const std::string& name) {
    for (std::uint8_t m = 0; m < 16; ++m)
        if (contour_mask_legal(m) && name == contour_glyph_name(m)) return m;
    throw parse_error("unknown contour cell name '" + name + "'");
}

class ContourGrid {
public:
    ContourGrid(int width, int height)
        : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw invalid_construction("contour grid needs positive dimensions");
        mask_.assign(static_cast<std::size_t>(width_) * height_, 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::uint8_t at(int r, int c) const { return mask_[static_cast<std::size_t>(r) * width_ + c]; }
    void set(int r, int c, std::uint8_t m) { mask_[static_cast<std::size_t>(r) * width_ + c] = m; }

    bool operator==(const ContourGrid& o) const {
        return width_ == o.width_ && height_ == o.height_ && mask_ == o.mask_;
    }

private:
    int width_, height_;
    std::vector<std::uint8_t> mask_;
};

// The 2x2-block factor map from spins to contour cells. The cell at (r, c)
// describes the block {(r,c), (r,c+1), (r+1,c), (r+1,c+1)} (torus-wrapped); a
// port opens for every anti-aligned bond on the block's perimeter that touches
// the block's centre. A configuration and its global spin flip give the same
// image, and those are the only two preimages of any reachable contour grid.
inline ContourGrid contour_map(const SpinGrid& g) {
    ContourGrid out(g.width(), g.height());
    int W = g.width(), H = g.height();
    for (int r = 0; r < H; ++r) {
        int rd = (r + 1) % H;
        for (int c = 0; c < W; ++c) {
            int ce = (c + 1) % W;
            bool a = g.minus_at(r, c), b = g.minus_at(r, ce);
            bool u = g.minus_at(rd, c), d = g.minus_at(rd, ce);
            std::uint8_t m = 0;
            if (a != b) m |= kPortN;
            if (b != d) m |= kPortE;
            if (u != d) m |= kPortS;
            if (a != u) m |= kPortW;
            out.set(r, c, m);
        }
    }
    return out;
}

// Every cell must be one of the eight legal masks, and ports must agree across
// every shared edge: east port of a cell equals the west port of its eastern
// neighbour, and south equals the north port of the cell below (torus-wrapped).
inline bool is_valid_contour(const ContourGrid& y) {
    int W = y.width(), H = y.height();
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c) {
            std::uint8_t m = y.at(r, c);
            if (!contour_mask_legal(m)) return false;
            std::uint8_t e = y.at(r, (c + 1) % W);
            std::uint8_t s = y.at((r + 1) % H, c);
            if (((m & kPortE) != 0) != ((e & kPortW) != 0)) return false;
            if (((m & kPortS) != 0) != ((s & kPortN) != 0)) return false;
        }
    return true;
}

// Total contour length: 0 per blank cell, 1 per corner or straight segment,
// 2 per crossing. Equivalently half the number of open ports.
inline long long contour_length(const ContourGrid& y) {
    long long total = 0;
    for (int r = 0; r < y.height(); ++r)
        for (int c = 0; c < y.width(); ++c)
            total += __builtin_popcount(y.at(r, c)) / 2;
    return total;
}

// Energy difference between two spin grids in the site-centred convention
// (each bond contributes +1 when anti-aligned, -1 when aligned), paired with
// the contour length difference of their images. The first component always
// equals twice the second: every anti-aligned bond is crossed by exactly one
// unit of contour.
inline std::pair<long long, long long> delta_ratio_check(const SpinGrid& x, const SpinGrid& y) {
    if (x.width() != y.width() || x.height() != y.height())
        throw domain_violation("spin grids must have matching dimensions");
    long long de = 2 * (ising_energy(y) - ising_energy(x));
    long long dg = contour_length(contour_map(y)) - contour_length(contour_map(x));
    return {de, dg};
}

// Empirical distribution of n x n spin patterns over all W*H torus positions.
// Pattern bit (i*n + j) is the spin at row offset i, column offset j.
inline std::map<std::uint64_t, double> block_distribution(const SpinGrid& g, int n) {
    if (n < 1 || n > 8)
        throw domain_violation("block side must be between 1 and 8");
    std::map<std::uint64_t, double> freq;
    int W = g.width(), H = g.height();
    double unit = 1.0 / (static_cast<double>(W) * H);
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c) {
            std::uint64_t pat = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (g.minus_at((r + i) % H, (c + j) % W))
                        pat |= std::uint64_t(1) << (i * n + j);
            freq[pat] += unit;
        }
    return freq;
}

inline double total_variation(const std::map<std::uint64_t, double>& p,
                              const std::map<std::uint64_t, double>& q) {
    double tv = 0;
    auto it = p.begin();
    auto jt = q.begin();
    while (it != p.end() || jt != q.end()) {
        if (jt == q.end() || (it != p.end() && it->first < jt->first)) {
            tv += it->second; ++it;
        } else if (it == p.end() || jt->first < it->first) {
            tv += jt->second; ++jt;
        } else {
            tv += std::abs(it->second - jt->second); ++it; ++jt;
        }
    }
    return tv / 2;
}

}  // namespace sca
