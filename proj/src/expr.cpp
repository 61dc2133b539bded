#include "jetkt/expr.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

#include "jetkt/context.hpp"

namespace jetkt {

namespace {

constexpr int kCountBits = 6;
constexpr std::uint64_t kCountMask = (1ULL << kCountBits) - 1;
constexpr int kCountsWidth = kCountBits * kMaxIndependents; // 42

void require(bool cond, const std::string& msg)
{
    if (!cond) {
        throw Error(ErrorCode::InvalidArgument, msg);
    }
}

} // namespace

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex MultiIndex::single(int var)
{
    return MultiIndex{}.with_added(var);
}

MultiIndex MultiIndex::from_counts(const std::vector<int>& counts)
{
    require(counts.size() <= kMaxIndependents, "too many independent variables");
    MultiIndex m;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        require(counts[i] >= 0 && counts[i] <= kMaxCount, "multi-index count out of range");
        m.counts_[i] = static_cast<std::uint8_t>(counts[i]);
    }
    return m;
}

int MultiIndex::order() const
{
    return std::accumulate(counts_.begin(), counts_.end(), 0);
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const
{
    MultiIndex r;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        const int c = counts_[i] + other.counts_[i];
        require(c <= kMaxCount, "multi-index count overflow");
        r.counts_[i] = static_cast<std::uint8_t>(c);
    }
    return r;
}

MultiIndex MultiIndex::with_added(int var, int times) const
{
    require(var >= 0 && var < kMaxIndependents, "independent variable index out of range");
    MultiIndex r = *this;
    const int c = r.counts_[static_cast<std::size_t>(var)] + times;
    require(c >= 0 && c <= kMaxCount, "multi-index count out of range");
    r.counts_[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(c);
    return r;
}

bool MultiIndex::divides(const MultiIndex& other) const
{
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] > other.counts_[i]) {
            return false;
        }
    }
    return true;
}

MultiIndex MultiIndex::complement_in(const MultiIndex& other) const
{
    require(divides(other), "multi-index does not divide");
    MultiIndex r;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        r.counts_[i] = static_cast<std::uint8_t>(other.counts_[i] - counts_[i]);
    }
    return r;
}

std::vector<int> MultiIndex::expand() const
{
    std::vector<int> out;
    for (int i = 0; i < kMaxIndependents; ++i) {
        out.insert(out.end(), counts_[static_cast<std::size_t>(i)], i);
    }
    return out;
}

std::uint64_t MultiIndex::packed() const
{
    std::uint64_t bits = 0;
    for (int i = 0; i < kMaxIndependents; ++i) {
        bits |= static_cast<std::uint64_t>(counts_[static_cast<std::size_t>(i)]) << (kCountBits * i);
    }
    return bits;
}

MultiIndex MultiIndex::unpack(std::uint64_t bits)
{
    MultiIndex m;
    for (int i = 0; i < kMaxIndependents; ++i) {
        m.counts_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((bits >> (kCountBits * i)) & kCountMask);
    }
    return m;
}

std::uint64_t MultiIndex::packed_order_key() const
{
    return (static_cast<std::uint64_t>(order()) << kCountsWidth) | packed();
}

// ---------------------------------------------------------------------------
// JetSymbol

JetSymbol JetSymbol::make(SymbolKind kind, int index, int component, const MultiIndex& sigma)
{
    require(index >= 0 && index < 64, "symbol index out of range");
    require(component >= 0 && component < 64, "symbol component out of range");
    const int order = sigma.order();
    require(order < 256, "jet order out of range");
    std::uint64_t bits = static_cast<std::uint64_t>(kind) << 62;
    bits |= static_cast<std::uint64_t>(index) << 56;
    bits |= static_cast<std::uint64_t>(component) << 50;
    bits |= static_cast<std::uint64_t>(order) << kCountsWidth;
    bits |= sigma.packed();
    return JetSymbol(bits);
}

JetSymbol JetSymbol::base(int i)
{
    return make(SymbolKind::Base, i, 0, {});
}

JetSymbol JetSymbol::dependent(int j, const MultiIndex& sigma)
{
    return make(SymbolKind::Dependent, j, 0, sigma);
}

JetSymbol JetSymbol::antifield(int tier, int component, const MultiIndex& sigma)
{
    require(tier >= 1, "antifield tiers start at 1");
    return make(SymbolKind::Antifield, tier, component, sigma);
}

MultiIndex JetSymbol::sigma() const
{
    return MultiIndex::unpack(bits_ & ((1ULL << kCountsWidth) - 1));
}

JetSymbol JetSymbol::prolonged(int var, int times) const
{
    require(!is_base(), "base coordinates have no prolongation");
    return make(kind(), index(), component(), sigma().with_added(var, times));
}

JetSymbol JetSymbol::prolonged(const MultiIndex& tau) const
{
    require(!is_base(), "base coordinates have no prolongation");
    return make(kind(), index(), component(), sigma() + tau);
}

JetSymbol JetSymbol::root() const
{
    return make(kind(), index(), component(), {});
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(JetSymbol s, std::uint32_t exponent)
{
    if (exponent == 0) {
        return;
    }
    require(!(s.odd() && exponent > 1), "odd symbol raised to a power > 1");
    factors_.push_back({s, exponent});
}

int Monomial::parity() const
{
    int p = 0;
    for (const auto& f : factors_) {
        p += f.symbol.parity() * static_cast<int>(f.exponent);
    }
    return p & 1;
}

int Monomial::antighost() const
{
    int a = 0;
    for (const auto& f : factors_) {
        a += f.symbol.antighost() * static_cast<int>(f.exponent);
    }
    return a;
}

int Monomial::degree() const
{
    int d = 0;
    for (const auto& f : factors_) {
        d += static_cast<int>(f.exponent);
    }
    return d;
}

int Monomial::degree_of(SymbolKind kind) const
{
    int d = 0;
    for (const auto& f : factors_) {
        if (f.symbol.kind() == kind) {
            d += static_cast<int>(f.exponent);
        }
    }
    return d;
}

int Monomial::max_order() const
{
    int o = 0;
    for (const auto& f : factors_) {
        o = std::max(o, f.symbol.order());
    }
    return o;
}

std::uint32_t Monomial::exponent_of(JetSymbol s) const
{
    auto it = std::lower_bound(factors_.begin(), factors_.end(), s,
                               [](const Factor& f, JetSymbol sym) { return f.symbol < sym; });
    return (it != factors_.end() && it->symbol == s) ? it->exponent : 0;
}

std::pair<int, Monomial> Monomial::multiply(const Monomial& a, const Monomial& b)
{
    Monomial out;
    out.factors_.reserve(a.factors_.size() + b.factors_.size());
    int odd_left_in_a = 0;
    for (const auto& f : a.factors_) {
        odd_left_in_a += f.symbol.odd() ? 1 : 0;
    }
    int sign = 1;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.factors_.size() || j < b.factors_.size()) {
        if (j == b.factors_.size() || (i < a.factors_.size() && a.factors_[i].symbol < b.factors_[j].symbol)) {
            odd_left_in_a -= a.factors_[i].symbol.odd() ? 1 : 0;
            out.factors_.push_back(a.factors_[i++]);
        } else if (i == a.factors_.size() || b.factors_[j].symbol < a.factors_[i].symbol) {
            // b's factor moves left past the odd factors of a still to come.
            if (b.factors_[j].symbol.odd() && (odd_left_in_a & 1)) {
                sign = -sign;
            }
            out.factors_.push_back(b.factors_[j++]);
        } else {
            if (a.factors_[i].symbol.odd()) {
                return {0, Monomial{}};
            }
            out.factors_.push_back({a.factors_[i].symbol, a.factors_[i].exponent + b.factors_[j].exponent});
            ++i;
            ++j;
        }
    }
    return {sign, std::move(out)};
}

std::pair<long, Monomial> Monomial::left_derivative(JetSymbol s) const
{
    int odd_before = 0;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        const auto& f = factors_[k];
        if (f.symbol == s) {
            Monomial rest = *this;
            if (f.exponent == 1) {
                rest.factors_.erase(rest.factors_.begin() + static_cast<std::ptrdiff_t>(k));
            } else {
                rest.factors_[k].exponent -= 1;
            }
            long mult = static_cast<long>(f.exponent);
            if (s.odd() && (odd_before & 1)) {
                mult = -mult;
            }
            return {mult, std::move(rest)};
        }
        if (f.symbol > s) {
            break;
        }
        odd_before += f.symbol.odd() ? 1 : 0;
    }
    return {0, Monomial{}};
}

// ---------------------------------------------------------------------------
// DiffPoly

DiffPoly::DiffPoly(long constant)
{
    if (constant != 0) {
        terms_.emplace(Monomial{}, Rational(constant));
    }
}

DiffPoly::DiffPoly(const Rational& constant)
{
    if (constant != 0) {
        terms_.emplace(Monomial{}, constant).first->second.canonicalize();
    }
}

DiffPoly::DiffPoly(JetSymbol s)
{
    terms_.emplace(Monomial(s), Rational(1));
}

DiffPoly::DiffPoly(const Monomial& m, const Rational& c)
{
    if (c != 0) {
        terms_.emplace(m, c).first->second.canonicalize();
    }
}

DiffPoly& DiffPoly::tag(std::uint32_t context_id)
{
    context_ = context_id;
    return *this;
}

void DiffPoly::check_context(const DiffPoly& other)
{
    if (other.context_ == 0) {
        return;
    }
    if (context_ == 0) {
        context_ = other.context_;
    } else if (context_ != other.context_) {
        throw Error(ErrorCode::ContextMismatch, "operands belong to different jet contexts");
    }
}

bool DiffPoly::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational DiffPoly::constant_term() const
{
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

int DiffPoly::parity() const
{
    int p = -2;
    for (const auto& [m, c] : terms_) {
        const int q = m.parity();
        if (p == -2) {
            p = q;
        } else if (p != q) {
            return -1;
        }
    }
    return p == -2 ? 0 : p;
}

int DiffPoly::antighost() const
{
    int a = -2;
    for (const auto& [m, c] : terms_) {
        const int q = m.antighost();
        if (a == -2) {
            a = q;
        } else if (a != q) {
            return -1;
        }
    }
    return a == -2 ? 0 : a;
}

int DiffPoly::max_order() const
{
    int o = 0;
    for (const auto& [m, c] : terms_) {
        o = std::max(o, m.max_order());
    }
    return o;
}

int DiffPoly::degree() const
{
    int d = 0;
    for (const auto& [m, c] : terms_) {
        d = std::max(d, m.degree());
    }
    return d;
}

DiffPoly DiffPoly::operator-() const
{
    DiffPoly r = *this;
    for (auto& [m, c] : r.terms_) {
        c = -c;
    }
    return r;
}

void DiffPoly::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (inserted) {
        it->second.canonicalize();
    } else {
        it->second += c;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& other)
{
    check_context(other);
    for (const auto& [m, c] : other.terms_) {
        add_term(m, c);
    }
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& other)
{
    check_context(other);
    for (const auto& [m, c] : other.terms_) {
        add_term(m, -c);
    }
    return *this;
}

DiffPoly& DiffPoly::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) {
        v *= c;
        v.canonicalize();
    }
    return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b)
{
    DiffPoly r;
    r.check_context(a);
    r.check_context(b);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            auto [sign, m] = Monomial::multiply(ma, mb);
            if (sign == 0) {
                continue;
            }
            Rational c = ca * cb;
            if (sign < 0) {
                c = -c;
            }
            r.add_term(m, c);
        }
    }
    return r;
}

std::vector<JetSymbol> DiffPoly::symbols() const
{
    std::vector<JetSymbol> out;
    for (const auto& [m, c] : terms_) {
        for (const auto& f : m.factors()) {
            out.push_back(f.symbol);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool DiffPoly::contains(const std::function<bool(JetSymbol)>& pred) const
{
    for (const auto& [m, c] : terms_) {
        for (const auto& f : m.factors()) {
            if (pred(f.symbol)) {
                return true;
            }
        }
    }
    return false;
}

DiffPoly DiffPoly::filter(const std::function<bool(const Monomial&)>& pred) const
{
    DiffPoly r;
    r.context_ = context_;
    for (const auto& [m, c] : terms_) {
        if (pred(m)) {
            r.terms_.emplace_hint(r.terms_.end(), m, c);
        }
    }
    return r;
}

std::string render_rational(const Rational& q)
{
    Rational c = q;
    c.canonicalize();
    if (c.get_den() == 1) {
        return c.get_num().get_str();
    }
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string DiffPoly::render(const JetContext& ctx) const
{
    return render([&ctx](JetSymbol s) { return ctx.render(s); });
}

std::string DiffPoly::render(const std::function<std::string(JetSymbol)>& name) const
{
    if (terms_.empty()) {
        return "0";
    }
    std::vector<const TermMap::value_type*> order;
    order.reserve(terms_.size());
    for (const auto& t : terms_) {
        order.push_back(&t);
    }
    std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
        return std::make_tuple(a->first.antighost(), a->first.degree()) <
               std::make_tuple(b->first.antighost(), b->first.degree());
    });
    std::ostringstream os;
    bool first = true;
    for (const auto* t : order) {
        const Monomial& m = t->first;
        Rational c = t->second;
        const bool negative = c < 0;
        if (negative) {
            c = -c;
        }
        if (first) {
            os << (negative ? "-" : "");
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        bool need_star = false;
        if (m.is_one() || c != 1) {
            os << render_rational(c);
            need_star = true;
        }
        for (const auto& f : m.factors()) {
            if (need_star) {
                os << "*";
            }
            os << name(f.symbol);
            if (f.exponent > 1) {
                os << "^" << f.exponent;
            }
            need_star = true;
        }
    }
    return os.str();
}

DiffPoly pow(const DiffPoly& base, unsigned exponent)
{
    DiffPoly r(1L);
    r.tag(base.context_id());
    for (unsigned i = 0; i < exponent; ++i) {
        r = r * base;
    }
    return r;
}

DiffPoly partial_derivative(const DiffPoly& f, JetSymbol s)
{
    DiffPoly r;
    r.tag(f.context_id());
    for (const auto& [m, c] : f.terms()) {
        auto [mult, rest] = m.left_derivative(s);
        if (mult != 0) {
            r.add_term(rest, c * Rational(mult));
        }
    }
    return r;
}

DiffPoly apply_derivation(const DiffPoly& f, const std::function<DiffPoly(JetSymbol)>& image)
{
    std::map<JetSymbol, DiffPoly> cache;
    DiffPoly r;
    r.tag(f.context_id());
    for (const auto& [m, c] : f.terms()) {
        for (const auto& fac : m.factors()) {
            auto it = cache.find(fac.symbol);
            if (it == cache.end()) {
                it = cache.emplace(fac.symbol, image(fac.symbol)).first;
            }
            if (it->second.is_zero()) {
                continue;
            }
            auto [mult, rest] = m.left_derivative(fac.symbol);
            r += it->second * DiffPoly(rest, c * Rational(mult));
        }
    }
    return r;
}

DiffPoly substitute(const DiffPoly& f, const SubstitutionRule& rule)
{
    for (const auto& [s, img] : rule) {
        const int p = img.parity();
        if (!img.is_zero() && p != s.parity()) {
            throw Error(ErrorCode::ParityMismatch, "substitution changes the parity of a symbol");
        }
    }
    if (rule.empty()) {
        return f;
    }
    DiffPoly r;
    r.tag(f.context_id());
    for (const auto& [m, c] : f.terms()) {
        DiffPoly prod(c);
        for (const auto& fac : m.factors()) {
            auto it = rule.find(fac.symbol);
            if (it == rule.end()) {
                prod = prod * DiffPoly(Monomial(fac.symbol, fac.exponent), Rational(1));
            } else {
                prod = prod * pow(it->second, fac.exponent);
            }
            if (prod.is_zero()) {
                break;
            }
        }
        r += prod;
    }
    return r;
}

} // namespace jetkt
