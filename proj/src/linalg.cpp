#include "jetkt/linalg.hpp"

#include <algorithm>
#include <limits>

namespace jetkt {

namespace {

IntVec to_primitive_integers(const SparseVec& v)
{
    Integer lcm_den = 1;
    for (const auto& [i, q] : v) {
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den_mpz_t());
    }
    IntVec out;
    out.reserve(v.size());
    for (const auto& [i, q] : v) {
        Integer num = q.get_num() * (lcm_den / q.get_den());
        out.emplace_back(i, std::move(num));
    }
    return out;
}

void make_primitive(IntVec& v)
{
    if (v.empty()) {
        return;
    }
    Integer g = 0;
    for (const auto& [i, z] : v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
        if (g == 1) {
            break;
        }
    }
    if (v.front().second < 0) {
        g = -g;
    }
    if (g != 1) {
        for (auto& [i, z] : v) {
            mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), g.get_mpz_t());
        }
    }
}

// a * x - b * y
IntVec combine(const Integer& a, const IntVec& x, const Integer& b, const IntVec& y)
{
    IntVec out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            out.emplace_back(x[i].first, a * x[i].second);
            ++i;
        } else if (i == x.size() || y[j].first < x[i].first) {
            out.emplace_back(y[j].first, -b * y[j].second);
            ++j;
        } else {
            Integer z = a * x[i].second - b * y[j].second;
            if (z != 0) {
                out.emplace_back(x[i].first, std::move(z));
            }
            ++i;
            ++j;
        }
    }
    return out;
}

SparseVec to_rational(const IntVec& v)
{
    SparseVec out;
    out.reserve(v.size());
    for (const auto& [i, z] : v) {
        out.emplace_back(i, Rational(z));
    }
    return out;
}

} // namespace

SparseVec make_sparse(std::map<int, Rational> entries)
{
    SparseVec out;
    for (auto& [i, q] : entries) {
        if (q != 0) {
            out.emplace_back(i, std::move(q));
        }
    }
    return out;
}

IntVec EchelonBasis::reduce(IntVec v) const
{
    // Leading-term reduction suffices for an echelon form.
    while (!v.empty()) {
        auto it = rows_.find(v.front().first);
        if (it == rows_.end()) {
            break;
        }
        const IntVec& row = it->second;
        Integer g;
        mpz_gcd(g.get_mpz_t(), row.front().second.get_mpz_t(), v.front().second.get_mpz_t());
        const Integer a = row.front().second / g;
        const Integer b = v.front().second / g;
        v = combine(a, v, b, row);
        make_primitive(v);
    }
    return v;
}

bool EchelonBasis::insert(const SparseVec& v)
{
    IntVec r = reduce(to_primitive_integers(v));
    if (r.empty()) {
        return false;
    }
    make_primitive(r);
    const int pivot = r.front().first;
    rows_.emplace(pivot, std::move(r));
    return true;
}

bool EchelonBasis::contains(const SparseVec& v) const
{
    return reduce(to_primitive_integers(v)).empty();
}

std::vector<SparseVec> EchelonBasis::rows() const
{
    std::vector<SparseVec> out;
    for (const auto& [pivot, row] : rows_) {
        out.push_back(to_rational(row));
    }
    return out;
}

std::vector<SparseVec> EchelonBasis::reduced_rows() const
{
    std::map<int, IntVec> rows = rows_;
    // Back substitution from the largest pivot down.
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        const int pivot = it->first;
        const IntVec& prow = it->second;
        for (auto& [other_pivot, row] : rows) {
            if (other_pivot >= pivot) {
                break;
            }
            auto pos = std::lower_bound(row.begin(), row.end(), pivot,
                                        [](const auto& e, int idx) { return e.first < idx; });
            if (pos == row.end() || pos->first != pivot) {
                continue;
            }
            Integer g;
            mpz_gcd(g.get_mpz_t(), prow.front().second.get_mpz_t(), pos->second.get_mpz_t());
            const Integer a = prow.front().second / g;
            const Integer b = pos->second / g;
            row = combine(a, row, b, prow);
            make_primitive(row);
        }
    }
    std::vector<SparseVec> out;
    for (const auto& [pivot, row] : rows) {
        SparseVec v = to_rational(row);
        const Rational lead = v.front().second;
        for (auto& [i, q] : v) {
            q /= lead;
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<SparseVec> kernel(const std::vector<SparseVec>& columns)
{
    int offset = 0;
    for (const auto& c : columns) {
        if (!c.empty()) {
            offset = std::max(offset, c.back().first + 1);
        }
    }
    // Augment every column with a tag coordinate placed after all equation
    // coordinates; rows whose pivot is a tag encode kernel elements.
    EchelonBasis basis;
    for (std::size_t k = 0; k < columns.size(); ++k) {
        SparseVec v = columns[k];
        v.emplace_back(offset + static_cast<int>(k), Rational(1));
        basis.insert(v);
    }
    EchelonBasis kernel_basis;
    for (const auto& row : basis.rows()) {
        if (row.front().first < offset) {
            continue;
        }
        SparseVec tag;
        for (const auto& [i, q] : row) {
            tag.emplace_back(i - offset, q);
        }
        kernel_basis.insert(tag);
    }
    return kernel_basis.reduced_rows();
}

std::optional<SparseVec> solve(const std::vector<SparseVec>& columns, const SparseVec& rhs)
{
    if (rhs.empty()) {
        return SparseVec{};
    }
    std::vector<SparseVec> augmented = columns;
    augmented.push_back(rhs);
    const int b_index = static_cast<int>(columns.size());
    for (const auto& k : kernel(augmented)) {
        // Reduced rows have increasing pivots; the rhs tag is the last index, so
        // a usable element has it as its only or trailing entry.
        auto it = std::find_if(k.begin(), k.end(), [&](const auto& e) { return e.first == b_index; });
        if (it == k.end()) {
            continue;
        }
        const Rational scale = -it->second;
        SparseVec x;
        for (const auto& [i, q] : k) {
            if (i != b_index) {
                x.emplace_back(i, q / scale);
            }
        }
        return x;
    }
    return std::nullopt;
}

int rank(const std::vector<SparseVec>& vectors)
{
    EchelonBasis basis;
    for (const auto& v : vectors) {
        basis.insert(v);
    }
    return basis.rank();
}

} // namespace jetkt
