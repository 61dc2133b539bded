#ifndef JETKT_CDIFF_HPP
#define JETKT_CDIFF_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "jetkt/jet.hpp"

namespace jetkt {

// sum_sigma a_sigma D_sigma with coefficients to the left of the derivatives.
using OpEntry = std::map<MultiIndex, DiffPoly>;

// Matrix C-differential operator from a module of rank cols() to one of rank
// rows(). Entries are kept in normal order with no zero coefficients, so
// equality of operators is equality of representations.
class CDiffOp {
public:
    CDiffOp() = default;
    CDiffOp(int rows, int cols);

    static CDiffOp identity(int rank);
    static CDiffOp multiplication(const DiffPoly& a);
    static CDiffOp derivative(const MultiIndex& sigma, const DiffPoly& coefficient = DiffPoly(1L));

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const OpEntry& entry(int r, int c) const { return entries_[index(r, c)]; }
    void add(int r, int c, const MultiIndex& sigma, const DiffPoly& coefficient);
    void add(int r, int c, const OpEntry& e);

    bool is_zero() const;
    // Highest |sigma| present; -1 for the zero operator.
    int order() const;

    CDiffOp& operator+=(const CDiffOp& other);
    CDiffOp& operator-=(const CDiffOp& other);
    friend CDiffOp operator+(CDiffOp a, const CDiffOp& b) { return a += b; }
    friend CDiffOp operator-(CDiffOp a, const CDiffOp& b) { return a -= b; }
    friend CDiffOp operator*(const Rational& c, CDiffOp a);
    CDiffOp operator-() const;
    friend bool operator==(const CDiffOp&, const CDiffOp&) = default;

    // Applies f to every coefficient (e.g. on-shell reduction); zero results are dropped.
    CDiffOp map_coefficients(const std::function<DiffPoly(const DiffPoly&)>& f) const;

    std::string render(const JetContext& ctx) const;

private:
    std::size_t index(int r, int c) const;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<OpEntry> entries_;
};

Section cdiff_apply(const CDiffOp& op, const Section& p);
CDiffOp cdiff_compose(const CDiffOp& outer, const CDiffOp& inner);
// (a D_sigma)^* = (-D)_sigma o a, transposed.
CDiffOp cdiff_adjoint(const CDiffOp& op);

// l_f with columns indexed by the given fiber coordinates:
// entry (r, k) = sum_sigma d^L f_r / d v^k_sigma D_sigma.
CDiffOp linearize(const Section& f, const std::vector<JetSymbol>& columns);
CDiffOp linearize(const Section& f, const JetContext& ctx, bool extended = false);

} // namespace jetkt

#endif
