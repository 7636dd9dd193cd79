// Dense exact-rational linear algebra: incremental row spans (rank and
// membership) and nullspace bases via Gauss-Jordan elimination. Sized for
// the small systems produced by conservation-law discovery, where
// exactness matters and dimensions stay in the hundreds.

#pragma once

#include <vector>

#include "sca/errors.hpp"
#include "sca/rational.hpp"

namespace sca::detail {

using rat_vec = std::vector<rational>;

// Row space maintained in echelon form; supports adding vectors and
// testing membership. Rows are kept with a leading 1 in their pivot
// column and zeros above and below it.
class RationalSpan {
public:
    explicit RationalSpan(std::size_t n_cols) : n_cols_(n_cols) {}

    std::size_t dimension() const { return rows_.size(); }

    // Reduces v against the span; returns the residual (empty-span zero
    // vector convention: all zeros means contained).
    rat_vec reduce(rat_vec v) const
    {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const rational& coeff = v[static_cast<std::size_t>(pivots_[r])];
            if (coeff != 0) {
                const rational c = coeff;
                for (std::size_t j = 0; j < n_cols_; ++j)
                    v[j] -= c * rows_[r][j];
            }
        }
        return v;
    }

    bool contains(const rat_vec& v) const
    {
        const rat_vec res = reduce(v);
        for (const rational& x : res)
            if (x != 0)
                return false;
        return true;
    }

    // Adds v to the span if independent; returns whether the dimension grew.
    bool add(const rat_vec& v)
    {
        rat_vec res = reduce(v);
        std::size_t pivot = n_cols_;
        for (std::size_t j = 0; j < n_cols_; ++j)
            if (res[j] != 0) {
                pivot = j;
                break;
            }
        if (pivot == n_cols_)
            return false;
        const rational inv = res[pivot];
        for (std::size_t j = 0; j < n_cols_; ++j)
            res[j] /= inv;
        // Clear the new pivot column in existing rows to keep reduced form.
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const rational c = rows_[r][pivot];
            if (c != 0)
                for (std::size_t j = 0; j < n_cols_; ++j)
                    rows_[r][j] -= c * res[j];
        }
        rows_.push_back(std::move(res));
        pivots_.push_back(static_cast<int>(pivot));
        return true;
    }

private:
    std::size_t n_cols_;
    std::vector<rat_vec> rows_;
    std::vector<int> pivots_;
};

// Basis of {x : Ax = 0}. Standard reduced-row-echelon computation; free
// variables get unit value, pivot variables are back-substituted.
inline std::vector<rat_vec> nullspace_basis(std::vector<rat_vec> a, std::size_t n_cols)
{
    std::vector<int> pivot_col_of_row;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n_cols && row < a.size(); ++col) {
        std::size_t sel = a.size();
        for (std::size_t r = row; r < a.size(); ++r)
            if (a[r][col] != 0) {
                sel = r;
                break;
            }
        if (sel == a.size())
            continue;
        std::swap(a[row], a[sel]);
        const rational inv = a[row][col];
        for (std::size_t j = col; j < n_cols; ++j)
            a[row][j] /= inv;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row)
                continue;
            const rational c = a[r][col];
            if (c != 0)
                for (std::size_t j = col; j < n_cols; ++j)
                    a[r][j] -= c * a[row][j];
        }
        pivot_col_of_row.push_back(static_cast<int>(col));
        ++row;
    }

    std::vector<char> is_pivot(n_cols, 0);
    for (int c : pivot_col_of_row)
        is_pivot[static_cast<std::size_t>(c)] = 1;
    std::vector<rat_vec> basis;
    for (std::size_t free_col = 0; free_col < n_cols; ++free_col) {
        if (is_pivot[free_col])
            continue;
        rat_vec v(n_cols, rational(0));
        v[free_col] = 1;
        for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r)
            v[static_cast<std::size_t>(pivot_col_of_row[r])] = -a[r][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace sca::detail
