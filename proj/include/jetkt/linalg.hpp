#ifndef JETKT_LINALG_HPP
#define JETKT_LINALG_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "jetkt/expr.hpp"

namespace jetkt {

// Sparse vector with strictly increasing indices and nonzero entries.
using SparseVec = std::vector<std::pair<int, Rational>>;
using IntVec = std::vector<std::pair<int, Integer>>;

SparseVec make_sparse(std::map<int, Rational> entries);

// Row echelon form built incrementally with fraction-free elimination. The
// pivot of a row is its smallest index, so callers control pivoting through
// the numbering of coordinates.
class EchelonBasis {
public:
    // Adds v if it is independent of the rows so far; returns whether it was.
    bool insert(const SparseVec& v);
    bool contains(const SparseVec& v) const;
    int rank() const { return static_cast<int>(rows_.size()); }

    // Rows in order of increasing pivot, scaled to primitive integer vectors.
    std::vector<SparseVec> rows() const;
    // Fully reduced echelon form with unit pivots.
    std::vector<SparseVec> reduced_rows() const;

private:
    IntVec reduce(IntVec v) const;
    std::map<int, IntVec> rows_; // keyed by pivot
};

// Basis of {a : sum_k a_k columns[k] = 0}, indexed by column number, in
// reduced echelon form.
std::vector<SparseVec> kernel(const std::vector<SparseVec>& columns);

// Some x with sum_k x_k columns[k] = rhs, or nullopt.
std::optional<SparseVec> solve(const std::vector<SparseVec>& columns, const SparseVec& rhs);

int rank(const std::vector<SparseVec>& vectors);

} // namespace jetkt

#endif
