#include "jetkt/cdiff.hpp"

#include <sstream>

namespace jetkt {

namespace {

// All rho with rho <= sigma componentwise.
std::vector<MultiIndex> sub_indices(const MultiIndex& sigma)
{
    std::vector<MultiIndex> out{MultiIndex{}};
    for (int var = 0; var < kMaxIndependents; ++var) {
        const int k = sigma.count(var);
        if (k == 0) {
            continue;
        }
        std::vector<MultiIndex> next;
        for (const auto& r : out) {
            for (int t = 0; t <= k; ++t) {
                next.push_back(r.with_added(var, t));
            }
        }
        out = std::move(next);
    }
    return out;
}

Integer multinomial_binomial(const MultiIndex& sigma, const MultiIndex& rho)
{
    Integer r = 1;
    for (int var = 0; var < kMaxIndependents; ++var) {
        Integer b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(sigma.count(var)),
                     static_cast<unsigned long>(rho.count(var)));
        r *= b;
    }
    return r;
}

void accumulate(OpEntry& e, const MultiIndex& sigma, const DiffPoly& coefficient)
{
    if (coefficient.is_zero()) {
        return;
    }
    auto [it, inserted] = e.try_emplace(sigma, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second.is_zero()) {
            e.erase(it);
        }
    }
}

} // namespace

CDiffOp::CDiffOp(int rows, int cols) : rows_(rows), cols_(cols)
{
    if (rows < 0 || cols < 0) {
        throw Error(ErrorCode::InvalidArgument, "negative operator shape");
    }
    entries_.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
}

CDiffOp CDiffOp::identity(int rank)
{
    CDiffOp op(rank, rank);
    for (int i = 0; i < rank; ++i) {
        op.add(i, i, {}, DiffPoly(1L));
    }
    return op;
}

CDiffOp CDiffOp::multiplication(const DiffPoly& a)
{
    CDiffOp op(1, 1);
    op.add(0, 0, {}, a);
    return op;
}

CDiffOp CDiffOp::derivative(const MultiIndex& sigma, const DiffPoly& coefficient)
{
    CDiffOp op(1, 1);
    op.add(0, 0, sigma, coefficient);
    return op;
}

std::size_t CDiffOp::index(int r, int c) const
{
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
        throw Error(ErrorCode::InvalidArgument, "operator entry out of range");
    }
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
}

void CDiffOp::add(int r, int c, const MultiIndex& sigma, const DiffPoly& coefficient)
{
    accumulate(entries_[index(r, c)], sigma, coefficient);
}

void CDiffOp::add(int r, int c, const OpEntry& e)
{
    for (const auto& [sigma, a] : e) {
        add(r, c, sigma, a);
    }
}

bool CDiffOp::is_zero() const
{
    for (const auto& e : entries_) {
        if (!e.empty()) {
            return false;
        }
    }
    return true;
}

int CDiffOp::order() const
{
    int o = -1;
    for (const auto& e : entries_) {
        for (const auto& [sigma, a] : e) {
            o = std::max(o, sigma.order());
        }
    }
    return o;
}

CDiffOp& CDiffOp::operator+=(const CDiffOp& other)
{
    if (other.rows_ != rows_ || other.cols_ != cols_) {
        throw Error(ErrorCode::SignatureMismatch, "operator shapes differ");
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        for (const auto& [sigma, a] : other.entries_[k]) {
            accumulate(entries_[k], sigma, a);
        }
    }
    return *this;
}

CDiffOp& CDiffOp::operator-=(const CDiffOp& other)
{
    return *this += -other;
}

CDiffOp operator*(const Rational& c, CDiffOp a)
{
    return a.map_coefficients([&](const DiffPoly& p) { return c * p; });
}

CDiffOp CDiffOp::operator-() const
{
    return map_coefficients([](const DiffPoly& p) { return -p; });
}

CDiffOp CDiffOp::map_coefficients(const std::function<DiffPoly(const DiffPoly&)>& f) const
{
    CDiffOp out(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        for (const auto& [sigma, a] : entries_[k]) {
            accumulate(out.entries_[k], sigma, f(a));
        }
    }
    return out;
}

std::string CDiffOp::render(const JetContext& ctx) const
{
    std::ostringstream os;
    os << "[";
    for (int r = 0; r < rows_; ++r) {
        os << (r ? ", " : "") << "[";
        for (int c = 0; c < cols_; ++c) {
            os << (c ? ", " : "");
            const OpEntry& e = entry(r, c);
            if (e.empty()) {
                os << "0";
                continue;
            }
            bool first = true;
            for (const auto& [sigma, a] : e) {
                os << (first ? "" : " + ");
                first = false;
                if (sigma.empty()) {
                    os << "(" << a.render(ctx) << ")";
                } else {
                    os << "(" << a.render(ctx) << ")*D_{" << ctx.render(sigma) << "}";
                }
            }
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

Section cdiff_apply(const CDiffOp& op, const Section& p)
{
    if (static_cast<int>(p.size()) != op.cols()) {
        throw Error(ErrorCode::SignatureMismatch, "operator column count does not match the section rank");
    }
    Section out(static_cast<std::size_t>(op.rows()));
    for (int r = 0; r < op.rows(); ++r) {
        for (int c = 0; c < op.cols(); ++c) {
            const DiffPoly& pc = p[static_cast<std::size_t>(c)];
            if (pc.is_zero()) {
                continue;
            }
            for (const auto& [sigma, a] : op.entry(r, c)) {
                out[static_cast<std::size_t>(r)] += a * total_derivative(pc, sigma);
            }
        }
    }
    return out;
}

CDiffOp cdiff_compose(const CDiffOp& outer, const CDiffOp& inner)
{
    if (outer.cols() != inner.rows()) {
        throw Error(ErrorCode::SignatureMismatch, "composition of operators with mismatched modules");
    }
    CDiffOp out(outer.rows(), inner.cols());
    for (int r = 0; r < outer.rows(); ++r) {
        for (int k = 0; k < outer.cols(); ++k) {
            const OpEntry& left = outer.entry(r, k);
            if (left.empty()) {
                continue;
            }
            for (int c = 0; c < inner.cols(); ++c) {
                for (const auto& [sigma, a] : left) {
                    for (const auto& [tau, b] : inner.entry(k, c)) {
                        // a D_sigma o b D_tau = sum_rho C(sigma, rho) a D_rho(b) D_{sigma - rho + tau}
                        for (const auto& rho : sub_indices(sigma)) {
                            const Rational binom(multinomial_binomial(sigma, rho));
                            out.add(r, c, rho.complement_in(sigma) + tau, binom * (a * total_derivative(b, rho)));
                        }
                    }
                }
            }
        }
    }
    return out;
}

CDiffOp cdiff_adjoint(const CDiffOp& op)
{
    CDiffOp out(op.cols(), op.rows());
    for (int r = 0; r < op.rows(); ++r) {
        for (int c = 0; c < op.cols(); ++c) {
            for (const auto& [sigma, a] : op.entry(r, c)) {
                // (-1)^{|sigma|} D_sigma o a = sum_rho (-1)^{|sigma|} C(sigma, rho) D_{sigma - rho}(a) D_rho
                const int sign = (sigma.order() % 2 == 0) ? 1 : -1;
                for (const auto& rho : sub_indices(sigma)) {
                    const Rational coeff(multinomial_binomial(sigma, rho) * sign);
                    out.add(c, r, rho, coeff * total_derivative(a, rho.complement_in(sigma)));
                }
            }
        }
    }
    return out;
}

CDiffOp linearize(const Section& f, const std::vector<JetSymbol>& columns)
{
    CDiffOp out(static_cast<int>(f.size()), static_cast<int>(columns.size()));
    for (std::size_t r = 0; r < f.size(); ++r) {
        for (JetSymbol s : f[r].symbols()) {
            if (s.is_base()) {
                continue;
            }
            for (std::size_t k = 0; k < columns.size(); ++k) {
                if (s.root() == columns[k]) {
                    out.add(static_cast<int>(r), static_cast<int>(k), s.sigma(), partial_derivative(f[r], s));
                }
            }
        }
    }
    return out;
}

CDiffOp linearize(const Section& f, const JetContext& ctx, bool extended)
{
    std::vector<JetSymbol> columns = dependent_targets(ctx);
    if (extended) {
        const auto anti = antifield_targets(ctx);
        columns.insert(columns.end(), anti.begin(), anti.end());
    }
    return linearize(f, columns);
}

} // namespace jetkt
