#include "crystalforms/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace crystalforms {

std::size_t rref_in_place(RatMat& m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        std::size_t sel = rows;
        for (std::size_t r = pivot_row; r < rows; ++r) {
            if (m[r][col] != 0) {
                sel = r;
                break;
            }
        }
        if (sel == rows) continue;
        std::swap(m[pivot_row], m[sel]);
        Rat inv = 1 / m[pivot_row][col];
        for (std::size_t c = col; c < cols; ++c) m[pivot_row][c] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pivot_row || m[r][col] == 0) continue;
            Rat factor = m[r][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[pivot_row][c];
        }
        ++pivot_row;
    }
    return pivot_row;
}

std::size_t rank_of(RatMat m) { return rref_in_place(m); }

RatMat nullspace(const RatMat& m, std::size_t ncols) {
    RatMat a = m;
    for (auto& row : a)
        if (row.size() != ncols) throw InternalError("nullspace: ragged matrix");
    std::size_t rank = rref_in_place(a);
    std::vector<std::size_t> pivot_col_of_row(rank);
    std::vector<bool> is_pivot(ncols, false);
    for (std::size_t r = 0; r < rank; ++r) {
        std::size_t c = 0;
        while (c < ncols && a[r][c] == 0) ++c;
        pivot_col_of_row[r] = c;
        is_pivot[c] = true;
    }
    RatMat basis;
    for (std::size_t free_col = 0; free_col < ncols; ++free_col) {
        if (is_pivot[free_col]) continue;
        RatVec v(ncols, Rat(0));
        v[free_col] = 1;
        for (std::size_t r = 0; r < rank; ++r) v[pivot_col_of_row[r]] = -a[r][free_col];
        basis.push_back(std::move(v));
    }
    rref_in_place(basis);
    return basis;
}

std::optional<RatVec> solve_linear(const RatMat& a, const RatVec& b) {
    if (a.size() != b.size()) throw InternalError("solve_linear: size mismatch");
    if (a.empty()) return RatVec{};
    const std::size_t cols = a[0].size();
    RatMat aug = a;
    for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r]);
    std::size_t rank = rref_in_place(aug);
    for (std::size_t r = 0; r < rank; ++r) {
        std::size_t c = 0;
        while (c <= cols && aug[r][c] == 0) ++c;
        if (c == cols) return std::nullopt;  // row 0 ... 0 | nonzero
    }
    RatVec x(cols, Rat(0));
    for (std::size_t r = 0; r < rank; ++r) {
        std::size_t c = 0;
        while (c < cols && aug[r][c] == 0) ++c;
        if (c < cols) x[c] = aug[r][cols];
    }
    return x;
}

namespace {

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

}  // namespace

std::vector<std::int64_t> smith_diagonal(std::vector<std::vector<std::int64_t>> m) {
    if (m.empty() || m[0].empty()) return {};
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    std::size_t t = 0;
    std::vector<std::int64_t> diag;
    while (t < rows && t < cols) {
        // Find a nonzero pivot in the remaining block.
        std::size_t pr = rows, pc = cols;
        for (std::size_t r = t; r < rows && pr == rows; ++r)
            for (std::size_t c = t; c < cols; ++c)
                if (m[r][c] != 0) {
                    pr = r;
                    pc = c;
                    break;
                }
        if (pr == rows) break;
        std::swap(m[t], m[pr]);
        for (std::size_t r = 0; r < rows; ++r) std::swap(m[r][t], m[r][pc]);
        // Clear row and column t by repeated Euclidean steps.
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (std::size_t r = t + 1; r < rows; ++r) {
                while (m[r][t] != 0) {
                    std::int64_t q = m[r][t] / m[t][t];
                    for (std::size_t c = t; c < cols; ++c) m[r][c] -= q * m[t][c];
                    if (m[r][t] != 0) {
                        std::swap(m[r], m[t]);
                        dirty = true;
                    }
                }
            }
            for (std::size_t c = t + 1; c < cols; ++c) {
                while (m[t][c] != 0) {
                    std::int64_t q = m[t][c] / m[t][t];
                    for (std::size_t r = t; r < rows; ++r) m[r][c] -= q * m[r][t];
                    if (m[t][c] != 0) {
                        for (std::size_t r = t; r < rows; ++r) std::swap(m[r][c], m[r][t]);
                        dirty = true;
                    }
                }
            }
        }
        diag.push_back(abs64(m[t][t]));
        ++t;
    }
    // Enforce the divisibility chain d_i | d_{i+1}.
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
        for (std::size_t j = i + 1; j < diag.size(); ++j) {
            if (diag[i] == 0 || diag[j] % diag[i] == 0) continue;
            std::int64_t a = diag[i], b = diag[j];
            std::int64_t g = a, h = b;
            while (h != 0) {
                std::int64_t r = g % h;
                g = h;
                h = r;
            }
            std::int64_t lcm = a / g * b;
            diag[i] = g;
            diag[j] = lcm;
        }
    }
    std::sort(diag.begin(), diag.end(), [](std::int64_t a, std::int64_t b) {
        if (a == 0) return false;
        if (b == 0) return true;
        return a < b;
    });
    return diag;
}

bool generates_full_lattice(const std::vector<std::vector<std::int64_t>>& rows, std::size_t d) {
    if (d == 0) return true;
    if (rows.empty()) return false;
    auto diag = smith_diagonal(rows);
    std::size_t ones = 0;
    for (auto v : diag)
        if (v == 1) ++ones;
    return ones >= d;
}

}  // namespace crystalforms
