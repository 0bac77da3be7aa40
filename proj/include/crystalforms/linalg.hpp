#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "crystalforms/rational.hpp"

namespace crystalforms {

// Dense exact matrix, row major. Small enough for desk-scale problems;
// everything here is deterministic (no pivoting heuristics beyond
// first-nonzero).
using RatMat = std::vector<RatVec>;

// Reduces m to reduced row echelon form in place and returns its rank.
// Pivots are the first nonzero entry of each row, scaled to 1.
std::size_t rref_in_place(RatMat& m);

std::size_t rank_of(RatMat m);

// Basis of {x : m x = 0} with x of length ncols. The basis rows are
// themselves in reduced row echelon form, so the output is canonical for
// a given column order.
RatMat nullspace(const RatMat& m, std::size_t ncols);

// Solves a x = b. Returns the solution with all free variables set to
// zero, or nullopt when the system is inconsistent.
std::optional<RatVec> solve_linear(const RatMat& a, const RatVec& b);

// Diagonal of the Smith normal form of an integer matrix (nonnegative
// entries, divisibility chain). Used to certify that a set of integer
// vectors generates the full lattice Z^d.
std::vector<std::int64_t> smith_diagonal(std::vector<std::vector<std::int64_t>> m);

// True iff the rows of m generate Z^d (d = number of columns).
bool generates_full_lattice(const std::vector<std::vector<std::int64_t>>& rows, std::size_t d);

}  // namespace crystalforms
