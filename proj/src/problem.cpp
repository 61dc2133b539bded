#include "jetkt/problem.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace jetkt {

namespace {

constexpr int kMaxSubscript = 16;
constexpr int kMaxExponent = 32;
constexpr int kMaxOperatorOrder = 16;
constexpr std::size_t kMaxTerms = 20000;
constexpr int kMaxNesting = 200;
constexpr std::size_t kMaxNumberDigits = 200;

const std::set<std::string> kKeywords{"independent", "dependent", "antifield", "equation", "compat",
                                      "density",     "cosymmetry", "tier"};

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int column = 1;
};

[[noreturn]] void fail(const std::string& code, int line, int column, const std::string& message)
{
    throw ParseError(Diagnostic{code, line, column, message});
}

[[noreturn]] void fail(const std::string& code, const Token& at, const std::string& message)
{
    fail(code, at.line, at.column, message);
}

std::vector<Token> lex(std::string_view text)
{
    std::vector<Token> out;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    const auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        const unsigned char ch = static_cast<unsigned char>(text[i]);
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            advance(1);
            continue;
        }
        if (ch == '#') {
            while (i < text.size() && text[i] != '\n') {
                advance(1);
            }
            continue;
        }
        Token t;
        t.line = line;
        t.column = column;
        std::size_t j = i;
        if (std::isalpha(ch) || (ch == '_' && !out.empty() && out.back().text == "]")) {
            t.kind = Tok::Ident;
            ++j;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
                ++j;
            }
        } else if (std::isdigit(ch)) {
            t.kind = Tok::Int;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                ++j;
            }
            if (j - i > kMaxNumberDigits) {
                fail("E_LIMIT", line, column, "integer literal too long");
            }
        } else if (std::string_view(";,:=+-*/^()[]").find(static_cast<char>(ch)) != std::string_view::npos) {
            t.kind = Tok::Punct;
            j = i + 1;
        } else {
            std::ostringstream os;
            if (std::isprint(ch)) {
                os << "unexpected character '" << static_cast<char>(ch) << "'";
            } else {
                os << "unexpected byte 0x" << std::hex << static_cast<int>(ch);
            }
            fail("E_LEX", line, column, os.str());
        }
        t.text = std::string(text.substr(i, j - i));
        advance(j - i);
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = column;
    out.push_back(end);
    return out;
}

// Value of a parsed expression: a function, or a scalar operator once D_* occurs.
struct Value {
    bool is_op = false;
    DiffPoly f;
    CDiffOp op;

    static Value function(DiffPoly p) { return Value{false, std::move(p), {}}; }
    CDiffOp as_op() const { return is_op ? op : CDiffOp::multiplication(f); }
};

std::size_t value_size(const Value& v)
{
    if (!v.is_op) {
        return v.f.size();
    }
    std::size_t n = 0;
    for (const auto& [sigma, a] : v.op.entry(0, 0)) {
        n += a.size();
    }
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(lex(text)) {}

    ProblemFile run()
    {
        while (peek().kind != Tok::End) {
            statement();
        }
        finish();
        return std::move(problem_);
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    bool at_punct(char c) const { return peek().kind == Tok::Punct && peek().text[0] == c; }

    void expect_punct(char c)
    {
        if (!at_punct(c)) {
            unexpected(std::string("'") + c + "'");
        }
        next();
    }

    [[noreturn]] void unexpected(const std::string& wanted) const
    {
        const Token& t = peek();
        fail("E_SYNTAX", t, "expected " + wanted + ", found " + (t.kind == Tok::End ? "end of input" : "'" + t.text + "'"));
    }

    Token expect_ident(const std::string& what)
    {
        if (peek().kind != Tok::Ident) {
            unexpected(what);
        }
        return next();
    }

    int expect_small_int(const std::string& what, int lo, int hi)
    {
        if (peek().kind != Tok::Int) {
            unexpected(what);
        }
        const Token t = next();
        if (t.text.size() > 4 || std::stoi(t.text) < lo || std::stoi(t.text) > hi) {
            fail("E_LIMIT", t, what + " must be between " + std::to_string(lo) + " and " + std::to_string(hi));
        }
        return std::stoi(t.text);
    }

    void statement()
    {
        const Token kw = expect_ident("a statement keyword");
        if (kw.text == "independent" || kw.text == "dependent") {
            declaration(kw);
        } else if (kw.text == "antifield") {
            antifield(kw);
        } else if (kw.text == "equation") {
            equation(kw);
        } else if (kw.text == "compat") {
            compat(kw);
        } else if (kw.text == "density") {
            density(kw);
        } else if (kw.text == "cosymmetry") {
            cosymmetry(kw);
        } else {
            fail("E_SYNTAX", kw, "unknown statement '" + kw.text + "'");
        }
        expect_punct(';');
    }

    void check_new_name(const Token& t)
    {
        if (t.text.find('_') != std::string::npos) {
            fail("E_DECLARATION", t, "names cannot contain '_'");
        }
        if (kKeywords.count(t.text) || t.text == "D") {
            fail("E_DECLARATION", t, "'" + t.text + "' is reserved");
        }
        if (names_.count(t.text)) {
            fail("E_DECLARATION", t, "'" + t.text + "' is already declared");
        }
        names_.insert(t.text);
    }

    void declaration(const Token& kw)
    {
        if (frozen_) {
            fail("E_DECLARATION", kw, "variables must be declared before equations and other statements");
        }
        const bool independent = kw.text == "independent";
        do {
            const Token t = expect_ident("a variable name");
            check_new_name(t);
            if (independent) {
                if (t.text.size() != 1) {
                    fail("E_DECLARATION", t, "independent variables are single letters");
                }
                if (problem_.independents.size() >= static_cast<std::size_t>(kMaxIndependents)) {
                    fail("E_LIMIT", t, "at most 7 independent variables");
                }
                problem_.independents.push_back(t.text);
            } else {
                if (problem_.dependents.size() >= 63) {
                    fail("E_LIMIT", t, "at most 63 dependent variables");
                }
                problem_.dependents.push_back(t.text);
            }
        } while (at_punct(',') && (next(), true));
    }

    void freeze(const Token& kw)
    {
        if (frozen_) {
            return;
        }
        if (problem_.independents.empty() || problem_.dependents.empty()) {
            fail("E_DECLARATION", kw, "declare independent and dependent variables first");
        }
        frozen_ = true;
    }

    void antifield(const Token& kw)
    {
        freeze(kw);
        const Token t = expect_ident("an antifield name");
        check_new_name(t);
        expect_punct(':');
        AntifieldDecl d;
        d.name = t.text;
        d.rank = expect_small_int("antifield rank", 1, 63);
        const Token tier_kw = expect_ident("'tier'");
        if (tier_kw.text != "tier") {
            fail("E_SYNTAX", tier_kw, "expected 'tier', found '" + tier_kw.text + "'");
        }
        d.tier = expect_small_int("tier", 1, 63);
        for (const auto& other : problem_.antifields) {
            if (other.tier == d.tier) {
                fail("E_DECLARATION", t, "tier " + std::to_string(d.tier) + " already has an antifield name");
            }
        }
        problem_.antifields.push_back(d);
        antifield_sites_.push_back(t);
    }

    void equation(const Token& kw)
    {
        freeze(kw);
        const Token at = peek();
        const Value lhs = expression();
        const JetSymbol lead = leading_symbol(lhs, at);
        expect_punct('=');
        const Token rhs_at = peek();
        const Value rhs = expression();
        const DiffPoly f = require_function(rhs, rhs_at, "an equation right-hand side");
        problem_.equations.push_back({lead, f});
        equation_sites_.push_back(at);
        rhs_sites_.push_back(rhs_at);
    }

    JetSymbol leading_symbol(const Value& lhs, const Token& at) const
    {
        if (!lhs.is_op && lhs.f.size() == 1) {
            const auto& [m, c] = *lhs.f.terms().begin();
            if (c == 1 && m.factors().size() == 1 && m.factors()[0].exponent == 1) {
                const JetSymbol s = m.factors()[0].symbol;
                if (s.is_dependent() && s.order() > 0) {
                    return s;
                }
            }
        }
        fail("E_SOLVED_FORM", at, "left-hand side must be a single derivative symbol such as u_t");
    }

    void compat(const Token& kw)
    {
        freeze(kw);
        const Token name = expect_ident("an operator name");
        auto it = std::find_if(problem_.compat.begin(), problem_.compat.end(),
                               [&](const NamedOperator& o) { return o.name == name.text; });
        if (it == problem_.compat.end()) {
            check_new_name(name);
        } else if (&*it != &problem_.compat.back()) {
            fail("E_DECLARATION", name, "rows of '" + name.text + "' must be consecutive");
        }
        expect_punct('=');
        expect_punct('[');
        std::vector<CDiffOp> entries;
        std::vector<Token> sites;
        do {
            sites.push_back(peek());
            const Value v = expression();
            const CDiffOp e = v.as_op();
            for (const auto& [sigma, a] : e.entry(0, 0)) {
                if (a.contains([](JetSymbol s) { return s.is_antifield(); })) {
                    fail("E_PARITY", sites.back(), "operator entries must have even coefficients without antifields");
                }
            }
            entries.push_back(e);
        } while (at_punct(',') && (next(), true));
        expect_punct(']');
        const int cols = static_cast<int>(entries.size());
        if (it != problem_.compat.end() && it->op.cols() != cols) {
            fail("E_SHAPE", name, "row has " + std::to_string(cols) + " entries, previous rows have " +
                                      std::to_string(it->op.cols()));
        }
        const int old_rows = it == problem_.compat.end() ? 0 : it->op.rows();
        CDiffOp op(old_rows + 1, cols);
        if (it != problem_.compat.end()) {
            for (int r = 0; r < old_rows; ++r) {
                for (int c = 0; c < cols; ++c) {
                    op.add(r, c, it->op.entry(r, c));
                }
            }
        }
        for (int c = 0; c < cols; ++c) {
            op.add(old_rows, c, entries[static_cast<std::size_t>(c)].entry(0, 0));
        }
        if (it == problem_.compat.end()) {
            problem_.compat.push_back({name.text, op});
            compat_sites_.push_back(name);
        } else {
            it->op = op;
        }
    }

    void density(const Token& kw)
    {
        freeze(kw);
        const Token name = expect_ident("a density name");
        check_new_name(name);
        expect_punct('=');
        const Token at = peek();
        const Value v = expression();
        DiffPoly f = require_function(v, at, "a density");
        problem_.densities.push_back({name.text, std::move(f)});
    }

    void cosymmetry(const Token& kw)
    {
        freeze(kw);
        const Token name = expect_ident("a cosymmetry name");
        check_new_name(name);
        expect_punct('=');
        const bool bracket = at_punct('[');
        if (bracket) {
            next();
        }
        Section s;
        do {
            const Token at = peek();
            const Value v = expression();
            s.components.push_back(require_function(v, at, "a cosymmetry component"));
        } while (at_punct(',') && (next(), true));
        if (bracket) {
            expect_punct(']');
        }
        problem_.cosymmetries.push_back({name.text, std::move(s)});
        cosymmetry_sites_.push_back(name);
    }

    DiffPoly require_function(const Value& v, const Token& at, const std::string& what) const
    {
        if (v.is_op) {
            fail("E_OPERATOR", at, what + " cannot contain total derivatives D_*");
        }
        if (v.f.contains([](JetSymbol s) { return s.is_antifield(); })) {
            fail("E_PARITY", at, what + " cannot contain antifields");
        }
        return v.f;
    }

    // expr := ['+'|'-'] term (('+'|'-') term)*
    Value expression()
    {
        Depth guard(*this);
        bool negate = false;
        if (at_punct('+') || at_punct('-')) {
            negate = next().text == "-";
        }
        Value acc = term();
        if (negate) {
            acc = scale(acc, Rational(-1));
        }
        while (at_punct('+') || at_punct('-')) {
            const Token op = next();
            Value rhs = term();
            acc = add(acc, op.text == "-" ? scale(rhs, Rational(-1)) : rhs, op);
        }
        return acc;
    }

    // term := power (('*'|'/') power)*
    Value term()
    {
        Value acc = power();
        while (at_punct('*') || at_punct('/')) {
            const Token op = next();
            const Value rhs = power();
            if (op.text == "*") {
                acc = multiply(acc, rhs, op);
            } else {
                if (rhs.is_op || !rhs.f.is_constant()) {
                    fail("E_SYNTAX", op, "only division by a nonzero number is supported");
                }
                const Rational q = rhs.f.constant_term();
                if (q == 0) {
                    fail("E_SYNTAX", op, "division by zero");
                }
                acc = scale(acc, Rational(1) / q);
            }
        }
        return acc;
    }

    // power := unary ('^' INT)?
    Value power()
    {
        Value base = unary();
        if (at_punct('^')) {
            const Token caret = next();
            const int k = expect_small_int("exponent", 0, kMaxExponent);
            Value r = Value::function(DiffPoly(1L));
            for (int i = 0; i < k; ++i) {
                r = multiply(r, base, caret);
            }
            return r;
        }
        return base;
    }

    Value unary()
    {
        if (at_punct('-')) {
            next();
            Depth guard(*this);
            return scale(unary(), Rational(-1));
        }
        return atom();
    }

    Value atom()
    {
        const Token t = peek();
        if (t.kind == Tok::Int) {
            next();
            return Value::function(DiffPoly(Rational(mpz_class(t.text, 10))));
        }
        if (at_punct('(')) {
            next();
            Value v = expression();
            expect_punct(')');
            return v;
        }
        if (t.kind == Tok::Ident) {
            next();
            return symbol(t);
        }
        unexpected("a number, symbol or '('");
    }

    MultiIndex subscript(const std::string& sub, const Token& at) const
    {
        if (sub.empty()) {
            fail("E_SUBSCRIPT", at, "empty subscript");
        }
        if (static_cast<int>(sub.size()) > kMaxSubscript) {
            fail("E_LIMIT", at, "subscript longer than " + std::to_string(kMaxSubscript));
        }
        MultiIndex sigma;
        for (char ch : sub) {
            const auto it = std::find(problem_.independents.begin(), problem_.independents.end(), std::string(1, ch));
            if (it == problem_.independents.end()) {
                fail("E_SUBSCRIPT", at, std::string("subscript letter '") + ch + "' is not an independent variable");
            }
            sigma = sigma.with_added(static_cast<int>(it - problem_.independents.begin()));
        }
        return sigma;
    }

    Value symbol(const Token& t)
    {
        const auto us = t.text.find('_');
        const std::string head = t.text.substr(0, us);
        const bool has_sub = us != std::string::npos;
        const std::string sub = has_sub ? t.text.substr(us + 1) : std::string{};

        const auto ind = std::find(problem_.independents.begin(), problem_.independents.end(), head);
        if (ind != problem_.independents.end()) {
            if (has_sub) {
                fail("E_SUBSCRIPT", t, "independent variables take no subscript");
            }
            return Value::function(DiffPoly(JetSymbol::base(static_cast<int>(ind - problem_.independents.begin()))));
        }
        const auto dep = std::find(problem_.dependents.begin(), problem_.dependents.end(), head);
        if (dep != problem_.dependents.end()) {
            const MultiIndex sigma = has_sub ? subscript(sub, t) : MultiIndex{};
            return Value::function(
                DiffPoly(JetSymbol::dependent(static_cast<int>(dep - problem_.dependents.begin()), sigma)));
        }
        for (const auto& a : problem_.antifields) {
            if (a.name != head) {
                continue;
            }
            int component = 0;
            if (at_punct('[')) {
                next();
                component = expect_small_int("antifield component", 1, a.rank) - 1;
                expect_punct(']');
            } else if (a.rank > 1) {
                fail("E_SYNTAX", t, "antifield '" + a.name + "' needs a component index like " + a.name + "[1]");
            }
            MultiIndex sigma;
            if (has_sub) {
                sigma = subscript(sub, t);
            }
            if (peek().kind == Tok::Ident && peek().text.front() == '_') {
                if (has_sub) {
                    unexpected("operator or ';'");
                }
                const Token s = next();
                sigma = subscript(s.text.substr(1), s);
            }
            return Value::function(DiffPoly(JetSymbol::antifield(a.tier, component, sigma)));
        }
        if (head == "D" && has_sub) {
            const MultiIndex sigma = subscript(sub, t);
            if (sigma.order() > kMaxOperatorOrder) {
                fail("E_LIMIT", t, "operator order too large");
            }
            Value v;
            v.is_op = true;
            v.op = CDiffOp::derivative(sigma);
            return v;
        }
        if (kKeywords.count(head)) {
            fail("E_SYNTAX", t, "unexpected keyword '" + head + "'");
        }
        fail("E_UNKNOWN_SYMBOL", t, "unknown symbol '" + head + "'");
    }

    Value scale(Value v, const Rational& q) const
    {
        if (v.is_op) {
            v.op = q * v.op;
        } else {
            v.f *= q;
        }
        return v;
    }

    Value add(const Value& a, const Value& b, const Token& at) const
    {
        Value r;
        if (!a.is_op && !b.is_op) {
            r = Value::function(a.f + b.f);
        } else {
            r.is_op = true;
            r.op = a.as_op() + b.as_op();
        }
        check_size(r, at);
        return r;
    }

    Value multiply(const Value& a, const Value& b, const Token& at) const
    {
        if (value_size(a) * value_size(b) > kMaxTerms) {
            fail("E_LIMIT", at, "expression too large");
        }
        Value r;
        if (!a.is_op && !b.is_op) {
            r = Value::function(a.f * b.f);
        } else {
            const CDiffOp ao = a.as_op();
            const CDiffOp bo = b.as_op();
            if (ao.order() + bo.order() > kMaxOperatorOrder) {
                fail("E_LIMIT", at, "operator order too large");
            }
            r.is_op = true;
            r.op = cdiff_compose(ao, bo);
        }
        check_size(r, at);
        return r;
    }

    void check_size(const Value& v, const Token& at) const
    {
        if (value_size(v) > kMaxTerms) {
            fail("E_LIMIT", at, "expression too large");
        }
    }

    void finish()
    {
        if (problem_.equations.empty()) {
            fail("E_EMPTY", peek(), "no equations");
        }
        const auto& eqs = problem_.equations;
        for (std::size_t a = 0; a < eqs.size(); ++a) {
            for (std::size_t b = 0; b < eqs.size(); ++b) {
                if (a == b) {
                    continue;
                }
                const JetSymbol la = eqs[a].leading;
                const JetSymbol lb = eqs[b].leading;
                if (la == lb && b < a) {
                    fail("E_DUPLICATE_LEADING", equation_sites_[a], "leading symbol repeats equation " + std::to_string(b + 1));
                }
                if (la != lb && la.index() == lb.index() && lb.sigma().divides(la.sigma())) {
                    fail("E_LEADING_OVERLAP", equation_sites_[a],
                         "leading symbol is a derivative of the leading symbol of equation " + std::to_string(b + 1));
                }
            }
        }
        for (std::size_t a = 0; a < eqs.size(); ++a) {
            const bool principal = eqs[a].rhs.contains([&](JetSymbol s) {
                return s.is_dependent() && std::any_of(eqs.begin(), eqs.end(), [&](const SolvedEquation& e) {
                           return e.leading.index() == s.index() && e.leading.sigma().divides(s.sigma());
                       });
            });
            if (principal) {
                fail("E_SOLVED_FORM", rhs_sites_[a], "right-hand side contains a leading symbol or one of its derivatives");
            }
        }
        int rank = static_cast<int>(eqs.size());
        for (std::size_t i = 0; i < problem_.compat.size(); ++i) {
            const CDiffOp& op = problem_.compat[i].op;
            if (op.cols() != rank) {
                fail("E_SHAPE", compat_sites_[i],
                     "operator has " + std::to_string(op.cols()) + " columns, expected " + std::to_string(rank));
            }
            rank = op.rows();
        }
        const auto ranks = problem_.tier_ranks();
        for (std::size_t i = 0; i < problem_.antifields.size(); ++i) {
            const auto& d = problem_.antifields[i];
            if (d.tier > static_cast<int>(ranks.size())) {
                fail("E_ANTIFIELD", antifield_sites_[i],
                     "the system has " + std::to_string(ranks.size()) + " antifield tiers");
            }
            if (ranks[static_cast<std::size_t>(d.tier - 1)] != d.rank) {
                fail("E_ANTIFIELD", antifield_sites_[i],
                     "tier " + std::to_string(d.tier) + " has rank " +
                         std::to_string(ranks[static_cast<std::size_t>(d.tier - 1)]));
            }
        }
        for (std::size_t i = 0; i < problem_.cosymmetries.size(); ++i) {
            if (problem_.cosymmetries[i].value.size() != eqs.size()) {
                fail("E_SHAPE", cosymmetry_sites_[i],
                     "cosymmetry needs " + std::to_string(eqs.size()) + " components");
            }
        }
    }

    struct Depth {
        explicit Depth(Parser& p) : parser(p)
        {
            if (++parser.depth_ > kMaxNesting) {
                fail("E_LIMIT", parser.peek(), "expression nested too deeply");
            }
        }
        ~Depth() { --parser.depth_; }
        Parser& parser;
    };

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    bool frozen_ = false;
    std::set<std::string> names_;
    ProblemFile problem_;
    std::vector<Token> equation_sites_;
    std::vector<Token> rhs_sites_;
    std::vector<Token> compat_sites_;
    std::vector<Token> cosymmetry_sites_;
    std::vector<Token> antifield_sites_;
};

} // namespace

std::string Diagnostic::format(const std::string& file) const
{
    std::ostringstream os;
    if (!file.empty()) {
        os << file << ":";
    }
    os << line << ":" << column << ": " << code << ": " << message;
    return os.str();
}

std::vector<int> ProblemFile::tier_ranks() const
{
    std::vector<int> ranks{static_cast<int>(equations.size())};
    for (const auto& c : compat) {
        ranks.push_back(c.op.rows());
    }
    return ranks;
}

JetContext ProblemFile::context() const
{
    return JetContext(independents, dependents, tier_ranks());
}

EquationSystem ProblemFile::system() const
{
    return EquationSystem(JetContext(independents, dependents), equations);
}

std::string ProblemFile::name(JetSymbol s) const
{
    std::string sub;
    if (!s.is_base()) {
        for (int v : s.sigma().expand()) {
            sub += independents[static_cast<std::size_t>(v)];
        }
    }
    const std::string tail = sub.empty() ? "" : "_" + sub;
    if (s.is_base()) {
        return independents[static_cast<std::size_t>(s.index())];
    }
    if (s.is_dependent()) {
        return dependents[static_cast<std::size_t>(s.index())] + tail;
    }
    std::string base = "c" + std::to_string(s.tier());
    int rank = 0;
    const auto ranks = tier_ranks();
    if (s.tier() >= 1 && s.tier() <= static_cast<int>(ranks.size())) {
        rank = ranks[static_cast<std::size_t>(s.tier() - 1)];
    }
    for (const auto& a : antifields) {
        if (a.tier == s.tier()) {
            base = a.name;
        }
    }
    if (rank != 1) {
        base += "[" + std::to_string(s.component() + 1) + "]";
    }
    return base + tail;
}

std::string ProblemFile::render(const DiffPoly& p) const
{
    return p.render([this](JetSymbol s) { return name(s); });
}

std::string ProblemFile::render_entry(const CDiffOp& op, int row, int col) const
{
    std::ostringstream os;
    bool first = true;
    for (const auto& [sigma, a] : op.entry(row, col)) {
        std::string d;
        if (!sigma.empty()) {
            d = "D_";
            for (int v : sigma.expand()) {
                d += independents[static_cast<std::size_t>(v)];
            }
        }
        std::string body;
        bool negative = false;
        if (d.empty()) {
            body = render(a);
        } else if (a == DiffPoly(1L)) {
            body = d;
        } else if (a == DiffPoly(-1L)) {
            body = d;
            negative = true;
        } else if (a.size() == 1) {
            body = render(a) + "*" + d;
        } else {
            body = "(" + render(a) + ")*" + d;
        }
        if (!negative && body.front() == '-' && a.size() == 1) {
            negative = true;
            body = body.substr(1);
        }
        if (first) {
            os << (negative ? "-" : "") << body;
        } else {
            os << (negative ? " - " : " + ") << body;
        }
        first = false;
    }
    return first ? "0" : os.str();
}

std::string ProblemFile::render_row(const CDiffOp& op, int row) const
{
    std::string out = "[";
    for (int c = 0; c < op.cols(); ++c) {
        out += (c ? ", " : "") + render_entry(op, row, c);
    }
    return out + "]";
}

std::string ProblemFile::render(const CDiffOp& op) const
{
    std::string out = "[";
    for (int r = 0; r < op.rows(); ++r) {
        out += (r ? ", " : "") + render_row(op, r);
    }
    return out + "]";
}

std::string ProblemFile::render_equation(std::size_t a) const
{
    return name(equations[a].leading) + " = " + render(equations[a].rhs);
}

ProblemFile parse_problem(std::string_view text)
{
    try {
        return Parser(text).run();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail("E_LIMIT", 1, 1, e.what());
    }
}

std::string render_problem(const ProblemFile& problem)
{
    std::ostringstream os;
    const auto list = [&os](const char* kw, const std::vector<std::string>& names) {
        os << kw << " ";
        for (std::size_t i = 0; i < names.size(); ++i) {
            os << (i ? ", " : "") << names[i];
        }
        os << ";\n";
    };
    list("independent", problem.independents);
    list("dependent", problem.dependents);
    for (std::size_t a = 0; a < problem.equations.size(); ++a) {
        os << "equation " << problem.render_equation(a) << ";\n";
    }
    for (const auto& c : problem.compat) {
        for (int r = 0; r < c.op.rows(); ++r) {
            os << "compat " << c.name << " = " << problem.render_row(c.op, r) << ";\n";
        }
    }
    for (const auto& a : problem.antifields) {
        os << "antifield " << a.name << " : " << a.rank << " tier " << a.tier << ";\n";
    }
    for (const auto& d : problem.densities) {
        os << "density " << d.name << " = " << problem.render(d.value) << ";\n";
    }
    for (const auto& c : problem.cosymmetries) {
        os << "cosymmetry " << c.name << " = [";
        for (std::size_t k = 0; k < c.value.size(); ++k) {
            os << (k ? ", " : "") << problem.render(c.value[k]);
        }
        os << "];\n";
    }
    return os.str();
}

} // namespace jetkt
