#ifndef JETKT_EQUATION_HPP
#define JETKT_EQUATION_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "jetkt/cdiff.hpp"

namespace jetkt {

// leading = rhs, i.e. F_a = leading - rhs.
struct SolvedEquation {
    JetSymbol leading;
    DiffPoly rhs;
};

// A system in autoreduced solved form. A jet symbol is principal when it is a
// derivative D_tau(leading_a) of some leading symbol; principal symbols are
// the coordinates transversal to the equation and the remaining ones
// coordinatize its infinite prolongation.
class EquationSystem {
public:
    // Validates solved form and checks cross-derivative confluence at the lcm
    // of every pair of leadings and up to confluence_order further derivatives.
    EquationSystem(JetContext context, std::vector<SolvedEquation> equations, int confluence_order = 1);

    const JetContext& context() const { return context_; }
    const std::vector<SolvedEquation>& equations() const { return equations_; }
    int size() const { return static_cast<int>(equations_.size()); }

    DiffPoly F(int a) const;
    Section F() const;

    bool is_principal(JetSymbol s) const;
    // First equation (in declaration order) whose leading divides s, with the
    // complementary multi-index.
    std::optional<std::pair<int, MultiIndex>> eliminating_equation(JetSymbol s) const;

    // Normal form modulo the equation ideal: no principal symbols remain.
    DiffPoly reduce(const DiffPoly& f) const;
    Section reduce(const Section& s) const;
    CDiffOp reduce(const CDiffOp& op) const;

    // f = Lambda(F) + r with r = reduce(f); Lambda has one row and size() columns
    // and records the left-to-right elimination trace.
    std::pair<CDiffOp, DiffPoly> decompose(const DiffPoly& f) const;

private:
    DiffPoly reduce_symbol(JetSymbol s, int depth) const;
    DiffPoly reduce_impl(const DiffPoly& f, int depth) const;
    void check_confluence(int order) const;

    JetContext context_;
    std::vector<SolvedEquation> equations_;

    struct Cache {
        std::mutex mutex;
        std::map<JetSymbol, DiffPoly> normal_forms;
    };
    // Shared between copies; normal forms depend only on the equations.
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

} // namespace jetkt

#endif
