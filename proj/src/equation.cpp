#include "jetkt/equation.hpp"

#include <sstream>

namespace jetkt {

namespace {

constexpr int kMaxReductionDepth = 256;
constexpr long kMaxEliminationSteps = 2'000'000;

MultiIndex lcm(const MultiIndex& a, const MultiIndex& b)
{
    std::vector<int> counts(kMaxIndependents);
    for (int i = 0; i < kMaxIndependents; ++i) {
        counts[static_cast<std::size_t>(i)] = std::max(a.count(i), b.count(i));
    }
    return MultiIndex::from_counts(counts);
}

} // namespace

EquationSystem::EquationSystem(JetContext context, std::vector<SolvedEquation> equations, int confluence_order)
    : context_(std::move(context)), equations_(std::move(equations))
{
    if (equations_.empty()) {
        throw Error(ErrorCode::ValidationFailed, "equation system is empty");
    }
    for (std::size_t a = 0; a < equations_.size(); ++a) {
        const JetSymbol lead = equations_[a].leading;
        if (!lead.is_dependent() || lead.index() >= context_.m()) {
            throw Error(ErrorCode::ValidationFailed, "leading term must be a declared dependent jet symbol");
        }
        if (equations_[a].rhs.contains([](JetSymbol s) { return s.is_antifield(); })) {
            throw Error(ErrorCode::ValidationFailed, "equation right-hand side contains antifields");
        }
        for (std::size_t b = 0; b < equations_.size(); ++b) {
            if (a == b) {
                continue;
            }
            const JetSymbol other = equations_[b].leading;
            if (other.index() == lead.index() && other.sigma().divides(lead.sigma())) {
                std::ostringstream os;
                os << "leading of equation " << (a + 1) << " is a derivative of the leading of equation " << (b + 1);
                throw Error(ErrorCode::ValidationFailed, os.str());
            }
        }
        equations_[a].rhs.tag(context_.id());
    }
    for (std::size_t a = 0; a < equations_.size(); ++a) {
        if (equations_[a].rhs.contains([this](JetSymbol s) { return is_principal(s); })) {
            std::ostringstream os;
            os << "right-hand side of equation " << (a + 1) << " is not reduced (contains a principal derivative)";
            throw Error(ErrorCode::ValidationFailed, os.str());
        }
    }
    check_confluence(confluence_order);
}

DiffPoly EquationSystem::F(int a) const
{
    const auto& eq = equations_.at(static_cast<std::size_t>(a));
    return DiffPoly(eq.leading).tag(context_.id()) - eq.rhs;
}

Section EquationSystem::F() const
{
    Section s(equations_.size());
    for (int a = 0; a < size(); ++a) {
        s[static_cast<std::size_t>(a)] = F(a);
    }
    return s;
}

std::optional<std::pair<int, MultiIndex>> EquationSystem::eliminating_equation(JetSymbol s) const
{
    if (!s.is_dependent()) {
        return std::nullopt;
    }
    const MultiIndex sigma = s.sigma();
    for (int a = 0; a < size(); ++a) {
        const JetSymbol lead = equations_[static_cast<std::size_t>(a)].leading;
        if (lead.index() == s.index() && lead.sigma().divides(sigma)) {
            return std::make_pair(a, lead.sigma().complement_in(sigma));
        }
    }
    return std::nullopt;
}

bool EquationSystem::is_principal(JetSymbol s) const
{
    return eliminating_equation(s).has_value();
}

DiffPoly EquationSystem::reduce_symbol(JetSymbol s, int depth) const
{
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->normal_forms.find(s);
        if (it != cache_->normal_forms.end()) {
            return it->second;
        }
    }
    if (depth > kMaxReductionDepth) {
        throw Error(ErrorCode::NotConfluent, "reduction modulo the equation does not terminate");
    }
    const auto [a, tau] = *eliminating_equation(s);
    DiffPoly nf = reduce_impl(total_derivative(equations_[static_cast<std::size_t>(a)].rhs, tau), depth + 1);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->normal_forms.emplace(s, nf);
    return nf;
}

DiffPoly EquationSystem::reduce_impl(const DiffPoly& f, int depth) const
{
    SubstitutionRule rule;
    for (JetSymbol s : f.symbols()) {
        if (is_principal(s)) {
            rule.emplace(s, reduce_symbol(s, depth));
        }
    }
    return substitute(f, rule);
}

DiffPoly EquationSystem::reduce(const DiffPoly& f) const
{
    return reduce_impl(f, 0);
}

Section EquationSystem::reduce(const Section& s) const
{
    Section out = s;
    for (auto& c : out.components) {
        c = reduce(c);
    }
    return out;
}

CDiffOp EquationSystem::reduce(const CDiffOp& op) const
{
    return op.map_coefficients([this](const DiffPoly& p) { return reduce(p); });
}

std::pair<CDiffOp, DiffPoly> EquationSystem::decompose(const DiffPoly& f) const
{
    CDiffOp lambda(1, size());
    DiffPoly g = f;
    for (long step = 0;; ++step) {
        if (step > kMaxEliminationSteps) {
            throw Error(ErrorCode::NotConfluent, "elimination of principal derivatives does not terminate");
        }
        const Monomial* target = nullptr;
        Rational coeff;
        JetSymbol principal;
        for (const auto& [m, c] : g.terms()) {
            for (const auto& fac : m.factors()) {
                if (is_principal(fac.symbol)) {
                    target = &m;
                    coeff = c;
                    principal = fac.symbol;
                    break;
                }
            }
            if (target != nullptr) {
                break;
            }
        }
        if (target == nullptr) {
            break;
        }
        const auto [a, tau] = *eliminating_equation(principal);
        // Dependent symbols are even, so m = principal * rest exactly.
        auto [mult, rest] = target->left_derivative(principal);
        (void)mult;
        const DiffPoly multiplier = DiffPoly(rest, coeff).tag(context_.id());
        lambda.add(0, a, tau, multiplier);
        g -= multiplier * total_derivative(F(a), tau);
    }
    return {lambda, g};
}

void EquationSystem::check_confluence(int order) const
{
    for (int a = 0; a < size(); ++a) {
        for (int b = a + 1; b < size(); ++b) {
            const JetSymbol la = equations_[static_cast<std::size_t>(a)].leading;
            const JetSymbol lb = equations_[static_cast<std::size_t>(b)].leading;
            if (la.index() != lb.index()) {
                continue;
            }
            const MultiIndex common = lcm(la.sigma(), lb.sigma());
            for (const auto& extra : context_.multi_indices(order)) {
                const MultiIndex target = common + extra;
                const DiffPoly via_a = reduce(total_derivative(equations_[static_cast<std::size_t>(a)].rhs,
                                                               la.sigma().complement_in(target)));
                const DiffPoly via_b = reduce(total_derivative(equations_[static_cast<std::size_t>(b)].rhs,
                                                               lb.sigma().complement_in(target)));
                if (via_a != via_b) {
                    std::ostringstream os;
                    os << "cross-derivatives of equations " << (a + 1) << " and " << (b + 1)
                       << " disagree at " << context_.render(JetSymbol::dependent(la.index(), target));
                    throw Error(ErrorCode::NotConfluent, os.str());
                }
            }
        }
    }
}

} // namespace jetkt
