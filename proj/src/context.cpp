#include "jetkt/context.hpp"

#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace jetkt {

namespace {

std::uint32_t intern_signature(const std::string& signature)
{
    static std::mutex mutex;
    static std::map<std::string, std::uint32_t> table;
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = table.try_emplace(signature, static_cast<std::uint32_t>(table.size() + 1));
    return it->second;
}

} // namespace

JetContext::JetContext(std::vector<std::string> independents, std::vector<std::string> dependents,
                       std::vector<int> tier_ranks)
    : independents_(std::move(independents)), dependents_(std::move(dependents)), tier_ranks_(std::move(tier_ranks))
{
    if (independents_.empty() || independents_.size() > kMaxIndependents) {
        throw Error(ErrorCode::InvalidArgument, "need between 1 and 7 independent variables");
    }
    if (dependents_.empty() || dependents_.size() > 63) {
        throw Error(ErrorCode::InvalidArgument, "need between 1 and 63 dependent variables");
    }
    std::set<std::string> names;
    for (const auto& v : independents_) {
        names.insert(v);
    }
    for (const auto& v : dependents_) {
        names.insert(v);
    }
    if (names.size() != independents_.size() + dependents_.size()) {
        throw Error(ErrorCode::InvalidArgument, "duplicate variable name");
    }
    for (int r : tier_ranks_) {
        if (r < 0 || r > 63) {
            throw Error(ErrorCode::InvalidArgument, "antifield rank out of range");
        }
    }
    std::ostringstream sig;
    for (const auto& v : independents_) {
        sig << v << ',';
    }
    sig << ';';
    for (const auto& v : dependents_) {
        sig << v << ',';
    }
    id_ = intern_signature(sig.str());
}

int JetContext::tier_rank(int tier) const
{
    if (tier < 1 || tier > tier_count()) {
        return 0;
    }
    return tier_ranks_[static_cast<std::size_t>(tier - 1)];
}

JetContext JetContext::with_tiers(std::vector<int> tier_ranks) const
{
    return JetContext(independents_, dependents_, std::move(tier_ranks));
}

int JetContext::independent_index(const std::string& name) const
{
    for (int i = 0; i < n(); ++i) {
        if (independents_[static_cast<std::size_t>(i)] == name) {
            return i;
        }
    }
    return -1;
}

int JetContext::dependent_index(const std::string& name) const
{
    for (int j = 0; j < m(); ++j) {
        if (dependents_[static_cast<std::size_t>(j)] == name) {
            return j;
        }
    }
    return -1;
}

DiffPoly JetContext::x(int i) const
{
    return DiffPoly(JetSymbol::base(i)).tag(id_);
}

DiffPoly JetContext::u(int j, const MultiIndex& sigma) const
{
    return DiffPoly(JetSymbol::dependent(j, sigma)).tag(id_);
}

DiffPoly JetContext::c(int tier, int component, const MultiIndex& sigma) const
{
    return DiffPoly(JetSymbol::antifield(tier, component, sigma)).tag(id_);
}

DiffPoly JetContext::constant(const Rational& q) const
{
    return DiffPoly(q).tag(id_);
}

std::string JetContext::render(const MultiIndex& sigma) const
{
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < n(); ++i) {
        const int k = sigma.count(i);
        if (k == 0) {
            continue;
        }
        if (!first) {
            os << ' ';
        }
        first = false;
        os << independents_[static_cast<std::size_t>(i)];
        if (k > 1) {
            os << '^' << k;
        }
    }
    return os.str();
}

std::string JetContext::render(JetSymbol s) const
{
    std::ostringstream os;
    switch (s.kind()) {
    case SymbolKind::Base:
        if (s.index() < n()) {
            return independents_[static_cast<std::size_t>(s.index())];
        }
        os << "x" << (s.index() + 1);
        return os.str();
    case SymbolKind::Dependent:
        os << "u[" << (s.index() + 1) << "]";
        break;
    case SymbolKind::Antifield:
        os << "c" << s.tier() << "[" << (s.component() + 1) << "]";
        break;
    }
    if (s.order() > 0) {
        os << "_{" << render(s.sigma()) << "}";
    }
    return os.str();
}

std::vector<MultiIndex> JetContext::multi_indices(int max_order) const
{
    std::vector<MultiIndex> out{MultiIndex{}};
    std::vector<MultiIndex> frontier{MultiIndex{}};
    for (int o = 1; o <= max_order; ++o) {
        std::set<MultiIndex> next;
        for (const auto& s : frontier) {
            for (int i = 0; i < n(); ++i) {
                next.insert(s.with_added(i));
            }
        }
        frontier.assign(next.begin(), next.end());
        out.insert(out.end(), frontier.begin(), frontier.end());
    }
    return out;
}

std::vector<JetSymbol> JetContext::dependent_symbols(int max_order) const
{
    std::vector<JetSymbol> out;
    const auto sigmas = multi_indices(max_order);
    for (int j = 0; j < m(); ++j) {
        for (const auto& s : sigmas) {
            out.push_back(JetSymbol::dependent(j, s));
        }
    }
    return out;
}

std::vector<JetSymbol> JetContext::antifield_symbols(int tier, int max_order) const
{
    std::vector<JetSymbol> out;
    const auto sigmas = multi_indices(max_order);
    for (int b = 0; b < tier_rank(tier); ++b) {
        for (const auto& s : sigmas) {
            out.push_back(JetSymbol::antifield(tier, b, s));
        }
    }
    return out;
}

} // namespace jetkt
