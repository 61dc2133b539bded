#include "jetkt/jet.hpp"

#include <algorithm>
#include <sstream>

namespace jetkt {

DiffPoly total_derivative(const DiffPoly& f, int var)
{
    DiffPoly r;
    r.tag(f.context_id());
    for (const auto& [m, c] : f.terms()) {
        for (const auto& fac : m.factors()) {
            const JetSymbol s = fac.symbol;
            if (s.is_base()) {
                if (s.index() != var) {
                    continue;
                }
                auto [mult, rest] = m.left_derivative(s);
                r.add_term(rest, c * Rational(mult));
                continue;
            }
            // s_{+var} * d^L m / ds; D is even so no sign beyond the left derivative.
            auto [mult, rest] = m.left_derivative(s);
            auto [sign, prod] = Monomial::multiply(Monomial(s.prolonged(var)), rest);
            if (sign != 0) {
                r.add_term(prod, c * Rational(mult * sign));
            }
        }
    }
    return r;
}

DiffPoly total_derivative(const DiffPoly& f, const MultiIndex& sigma)
{
    DiffPoly r = f;
    for (int var : sigma.expand()) {
        r = total_derivative(r, var);
    }
    return r;
}

DiffPoly adjoint_total_derivative(const DiffPoly& f, const MultiIndex& sigma)
{
    DiffPoly r = total_derivative(f, sigma);
    if (sigma.order() % 2 == 1) {
        r = -r;
    }
    return r;
}

// ---------------------------------------------------------------------------

bool Section::is_zero() const
{
    return std::all_of(components.begin(), components.end(), [](const DiffPoly& p) { return p.is_zero(); });
}

Section& Section::operator+=(const Section& other)
{
    if (other.size() != size()) {
        throw Error(ErrorCode::SignatureMismatch, "section ranks differ");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        components[i] += other.components[i];
    }
    return *this;
}

Section& Section::operator-=(const Section& other)
{
    if (other.size() != size()) {
        throw Error(ErrorCode::SignatureMismatch, "section ranks differ");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        components[i] -= other.components[i];
    }
    return *this;
}

Section operator*(const Rational& c, Section a)
{
    for (auto& p : a.components) {
        p *= c;
    }
    return a;
}

std::string Section::render(const JetContext& ctx) const
{
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < size(); ++i) {
        os << (i ? ", " : "") << components[i].render(ctx);
    }
    os << ")";
    return os.str();
}

DiffPoly pairing(const Section& a, const Section& b)
{
    if (a.size() != b.size()) {
        throw Error(ErrorCode::SignatureMismatch, "pairing of sections with different ranks");
    }
    DiffPoly r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        r += a[i] * b[i];
    }
    return r;
}

// ---------------------------------------------------------------------------

DiffPoly evolutionary_apply(const EvolutionaryGenerator& phi, const DiffPoly& f)
{
    return apply_derivation(f, [&](JetSymbol s) -> DiffPoly {
        if (s.is_base()) {
            return DiffPoly{};
        }
        auto it = phi.find(s.root());
        if (it == phi.end()) {
            return DiffPoly{};
        }
        return total_derivative(it->second, s.sigma());
    });
}

EvolutionaryGenerator generator_on_dependents(const Section& phi)
{
    EvolutionaryGenerator g;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        g.emplace(JetSymbol::dependent(static_cast<int>(j)), phi[j]);
    }
    return g;
}

Section euler(const DiffPoly& density, const std::vector<JetSymbol>& targets)
{
    Section out(targets.size());
    const auto symbols = density.symbols();
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const JetSymbol root = targets[k];
        DiffPoly acc;
        for (JetSymbol s : symbols) {
            if (s.is_base() || s.root() != root) {
                continue;
            }
            acc += adjoint_total_derivative(partial_derivative(density, s), s.sigma());
        }
        out[k] = acc;
    }
    return out;
}

std::vector<JetSymbol> dependent_targets(const JetContext& ctx)
{
    std::vector<JetSymbol> out;
    for (int j = 0; j < ctx.m(); ++j) {
        out.push_back(JetSymbol::dependent(j));
    }
    return out;
}

std::vector<JetSymbol> antifield_targets(const JetContext& ctx)
{
    std::vector<JetSymbol> out;
    for (int t = 1; t <= ctx.tier_count(); ++t) {
        for (int b = 0; b < ctx.tier_rank(t); ++b) {
            out.push_back(JetSymbol::antifield(t, b));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

HorizontalForm HorizontalForm::from_current(const std::vector<DiffPoly>& flux)
{
    const int n = static_cast<int>(flux.size());
    HorizontalForm w(n, n - 1);
    for (int i = 0; i < n; ++i) {
        std::vector<int> idx;
        for (int k = 0; k < n; ++k) {
            if (k != i) {
                idx.push_back(k);
            }
        }
        w.set(idx, (i % 2 == 0) ? flux[static_cast<std::size_t>(i)] : -flux[static_cast<std::size_t>(i)]);
    }
    return w;
}

HorizontalForm HorizontalForm::function(int n, const DiffPoly& f)
{
    HorizontalForm w(n, 0);
    w.set({}, f);
    return w;
}

const DiffPoly& HorizontalForm::component(const std::vector<int>& indices) const
{
    static const DiffPoly zero;
    auto it = components_.find(indices);
    return it == components_.end() ? zero : it->second;
}

void HorizontalForm::set(std::vector<int> indices, DiffPoly value)
{
    if (static_cast<int>(indices.size()) != degree_ || !std::is_sorted(indices.begin(), indices.end()) ||
        std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
        throw Error(ErrorCode::InvalidArgument, "form index tuple must be strictly increasing of length q");
    }
    if (value.is_zero()) {
        components_.erase(indices);
    } else {
        components_[std::move(indices)] = std::move(value);
    }
}

void HorizontalForm::add(std::vector<int> indices, const DiffPoly& value)
{
    DiffPoly sum = component(indices) + value;
    set(std::move(indices), std::move(sum));
}

DiffPoly HorizontalForm::top_coefficient() const
{
    if (degree_ != n_) {
        throw Error(ErrorCode::InvalidArgument, "top coefficient requires a form of degree n");
    }
    std::vector<int> all(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        all[static_cast<std::size_t>(i)] = i;
    }
    return component(all);
}

std::vector<DiffPoly> HorizontalForm::current() const
{
    if (degree_ != n_ - 1) {
        throw Error(ErrorCode::InvalidArgument, "current requires a form of degree n-1");
    }
    std::vector<DiffPoly> flux(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        std::vector<int> idx;
        for (int k = 0; k < n_; ++k) {
            if (k != i) {
                idx.push_back(k);
            }
        }
        const DiffPoly& c = component(idx);
        flux[static_cast<std::size_t>(i)] = (i % 2 == 0) ? c : -c;
    }
    return flux;
}

std::string HorizontalForm::render(const JetContext& ctx) const
{
    if (components_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : components_) {
        os << (first ? "" : " + ") << "(" << c.render(ctx) << ")";
        first = false;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            os << (k ? "^" : " ") << "d" << ctx.independents()[static_cast<std::size_t>(idx[k])];
        }
    }
    return os.str();
}

HorizontalForm horizontal_d(const HorizontalForm& omega)
{
    HorizontalForm out(omega.n(), omega.degree() + 1);
    if (omega.degree() >= omega.n()) {
        return out;
    }
    for (const auto& [idx, coeff] : omega.components()) {
        for (int i = 0; i < omega.n(); ++i) {
            if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
                continue;
            }
            // dx_i moves right past the indices smaller than i.
            const auto before = std::count_if(idx.begin(), idx.end(), [i](int k) { return k < i; });
            std::vector<int> target = idx;
            target.insert(target.begin() + before, i);
            DiffPoly d = total_derivative(coeff, i);
            if (before % 2 == 1) {
                d = -d;
            }
            out.add(target, d);
        }
    }
    return out;
}

} // namespace jetkt
