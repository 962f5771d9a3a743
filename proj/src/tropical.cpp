#include "tropell/tropical.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tropell {

TropicalPolynomial tropicalize(const LaurentPolynomial& f) {
    TropicalPolynomial F;
    F.vars = f.vars;
    for (const auto& [e, c] : f.terms) {
        ExtRat v = c.valuation();  // throws IndeterminateValuation
        if (v.is_infinite()) continue;  // exact zero coefficient; not a term
        F.terms.emplace(e, v.finite());
    }
    return F;
}

Rational evaluate(const TropicalPolynomial& F, const std::vector<Rational>& point) {
    if (F.terms.empty()) throw std::invalid_argument("evaluate: tropical polynomial has no terms");
    bool first = true;
    Rational best(0);
    for (const auto& [e, c] : F.terms) {
        if (e.size() != point.size()) throw std::invalid_argument("evaluate: arity mismatch");
        Rational val = c;
        for (std::size_t k = 0; k < e.size(); ++k) val += Rational(e[k]) * point[k];
        if (first || val < best) {
            best = val;
            first = false;
        }
    }
    return best;
}

std::set<ExpVec> argmin_terms(const TropicalPolynomial& F, const std::vector<Rational>& point) {
    const Rational best = evaluate(F, point);
    std::set<ExpVec> out;
    for (const auto& [e, c] : F.terms) {
        Rational val = c;
        for (std::size_t k = 0; k < e.size(); ++k) val += Rational(e[k]) * point[k];
        if (val == best) out.insert(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing and printing

namespace {

struct LCursor {
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++i;
            return true;
        }
        return false;
    }

    Integer integer() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) throw ParseError("expected digits", i);
        return Integer(s.substr(start, i - start));
    }

    Rational rational_no_sign() {
        Integer num = integer();
        Integer den(1);
        if (i < s.size() && s[i] == '/') {
            ++i;
            den = integer();
            if (den == 0) throw ParseError("zero denominator", i);
        }
        Rational q(num, den);
        q.canonicalize();
        return q;
    }

    // optionally parenthesized, optionally signed
    Rational exponent(bool allow_fraction) {
        if (accept('(')) {
            bool neg = false;
            if (peek() == '-' || peek() == '+') neg = s[i++] == '-';
            Rational e = allow_fraction ? rational_no_sign() : Rational(integer());
            if (!accept(')')) throw ParseError("expected ')' after exponent", i);
            return neg ? Rational(-e) : e;
        }
        bool neg = false;
        if (peek() == '-' || peek() == '+') neg = s[i++] == '-';
        Rational e(integer());
        return neg ? Rational(-e) : e;
    }

    std::string identifier() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        return s.substr(start, i - start);
    }
};

}  // namespace

LaurentPolynomial parse_laurent(const std::string& text) {
    LCursor c{text};
    // terms keyed by (variable name -> exponent)
    std::map<std::map<std::string, long>, PuiseuxSeries> raw;
    std::set<std::string> seen_vars;

    bool first = true;
    while (true) {
        int sign = 1;
        c.skip_ws();
        if (first) {
            if (c.i >= text.size()) throw ParseError("empty polynomial literal", c.i);
            if (c.peek() == '-' || c.peek() == '+') sign = text[c.i++] == '-' ? -1 : 1;
        } else {
            if (c.i >= text.size()) break;
            if (c.accept('+'))
                sign = 1;
            else if (c.accept('-'))
                sign = -1;
            else
                throw ParseError("expected '+' or '-' between terms", c.i);
            c.skip_ws();
            if (c.i >= text.size()) throw ParseError("dangling sign", c.i);
        }
        first = false;

        PuiseuxSeries coeff = PuiseuxSeries::constant(sign);
        std::map<std::string, long> monomial;
        while (true) {
            char p = c.peek();
            if (std::isdigit(static_cast<unsigned char>(p))) {
                coeff = coeff * c.rational_no_sign();
            } else if (p == 't' &&
                       !(c.i + 1 < text.size() &&
                         (std::isalnum(static_cast<unsigned char>(text[c.i + 1])) || text[c.i + 1] == '_'))) {
                ++c.i;
                Rational e(1);
                if (c.accept('^')) e = c.exponent(true);
                coeff = coeff * PuiseuxSeries::t(e);
            } else if (std::isalpha(static_cast<unsigned char>(p)) || p == '_') {
                std::string name = c.identifier();
                if (name == "O") throw ParseError("O(...) is not allowed in polynomial literals", c.i);
                long e = 1;
                if (c.accept('^')) e = to_long_checked(numerator(c.exponent(false)));
                monomial[name] += e;
                seen_vars.insert(name);
            } else {
                throw ParseError("expected a coefficient, t, or a variable", c.i);
            }
            if (!c.accept('*')) break;
        }
        if (monomial.empty() && seen_vars.empty() && coeff.is_exact_zero()) continue;
        // stash under the raw monomial; exponent vector built after all
        // variables are known
        auto key = monomial;
        auto [it, fresh] = raw.emplace(std::move(key), coeff);
        if (!fresh) it->second += coeff;
    }

    LaurentPolynomial out;
    out.vars.assign(seen_vars.begin(), seen_vars.end());  // set iterates sorted
    for (auto& [mono, coeff] : raw) {
        if (coeff.is_exact_zero()) continue;
        ExpVec e(out.vars.size(), 0);
        for (const auto& [name, k] : mono) {
            auto pos = std::lower_bound(out.vars.begin(), out.vars.end(), name);
            e[static_cast<std::size_t>(pos - out.vars.begin())] = k;
        }
        auto [it, fresh] = out.terms.emplace(std::move(e), coeff);
        if (!fresh) it->second += coeff;
    }
    for (auto it = out.terms.begin(); it != out.terms.end();)
        it = it->second.is_exact_zero() ? out.terms.erase(it) : std::next(it);
    return out;
}

std::string LaurentPolynomial::str() const {
    if (terms.empty()) return "0";
    std::ostringstream o;
    bool first = true;
    for (const auto& [e, c] : terms) {
        PuiseuxSeries coeff = c;
        bool neg = false;
        if (!coeff.terms().empty() && coeff.leading_coefficient() < 0) {
            neg = true;
            coeff = -coeff;
        }
        if (first)
            o << (neg ? "-" : "");
        else
            o << (neg ? " - " : " + ");
        first = false;

        std::string mono;
        for (std::size_t k = 0; k < vars.size(); ++k) {
            if (e[k] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars[k];
            if (e[k] != 1) mono += "^" + std::to_string(e[k]);
        }
        const bool trivial_coeff = coeff.terms().size() == 1 && coeff.precision().is_infinite() &&
                                   coeff.leading_coefficient() == 1 && coeff.finite_valuation() == 0;
        if (mono.empty()) {
            o << coeff.str();
        } else if (trivial_coeff) {
            o << mono;
        } else {
            const bool needs_parens = coeff.terms().size() > 1 || !coeff.precision().is_infinite();
            o << (needs_parens ? "(" + coeff.str() + ")" : coeff.str()) << "*" << mono;
        }
    }
    return o.str();
}

nlohmann::ordered_json to_json(const TropicalPolynomial& F) {
    nlohmann::ordered_json j;
    j["vars"] = F.vars;
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& [e, c] : F.terms) terms.push_back({e, to_string(c)});
    j["terms"] = std::move(terms);
    return j;
}

}  // namespace tropell
