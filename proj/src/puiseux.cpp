#include "tropell/puiseux.hpp"

#include <cctype>
#include <sstream>

namespace tropell {

namespace {

thread_local Rational g_default_precision = Rational(24);

// c * t^e as an exact series, used for shifting.
PuiseuxSeries shift_scale(const PuiseuxSeries& s, const Rational& c, const Rational& e) {
    return PuiseuxSeries::monomial(c, e) * s;
}

}  // namespace

Rational default_precision() { return g_default_precision; }

void set_default_precision(const Rational& p) {
    if (p <= 0) throw std::invalid_argument("default precision must be positive");
    g_default_precision = p;
}

void PuiseuxSeries::normalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0 || !(ExtRat(it->first) < prec_))
            it = terms_.erase(it);
        else
            ++it;
    }
    Integer r(1);
    for (const auto& [e, c] : terms_) r = lcm(r, denominator(e));
    ram_ = to_long_checked(r);
}

PuiseuxSeries PuiseuxSeries::constant(const Rational& c) { return monomial(c, 0); }

PuiseuxSeries PuiseuxSeries::monomial(const Rational& c, const Rational& e) {
    PuiseuxSeries s;
    if (c != 0) s.terms_[e] = c;
    s.prec_ = ExtRat::infinity();
    s.normalize();
    return s;
}

PuiseuxSeries PuiseuxSeries::from_terms(TermMap terms, const ExtRat& precision) {
    PuiseuxSeries s;
    s.terms_ = std::move(terms);
    s.prec_ = precision;
    s.normalize();
    return s;
}

ExtRat PuiseuxSeries::valuation() const {
    if (!terms_.empty()) return ExtRat(terms_.begin()->first);
    if (prec_.is_infinite()) return ExtRat::infinity();
    throw IndeterminateValuation("no term below O(t^" + prec_.str() + ")");
}

const Rational& PuiseuxSeries::finite_valuation() const {
    if (terms_.empty()) {
        valuation();  // throws for truncated zero
        throw std::logic_error("finite_valuation of the exact zero series");
    }
    return terms_.begin()->first;
}

const Rational& PuiseuxSeries::leading_coefficient() const {
    if (terms_.empty()) {
        valuation();
        throw std::logic_error("leading_coefficient of the exact zero series");
    }
    return terms_.begin()->second;
}

ExtRat PuiseuxSeries::valuation_lower_bound() const {
    if (!terms_.empty()) return ExtRat(terms_.begin()->first);
    return prec_;
}

Rational PuiseuxSeries::coefficient(const Rational& e) const {
    if (!(ExtRat(e) < prec_))
        throw IndeterminateValuation("coefficient of t^" + to_string(e) + " is beyond O(t^" + prec_.str() + ")");
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

PuiseuxSeries PuiseuxSeries::truncated(const ExtRat& new_precision) const {
    return from_terms(terms_, new_precision);
}

PuiseuxSeries PuiseuxSeries::operator-() const {
    PuiseuxSeries s = *this;
    for (auto& [e, c] : s.terms_) c = -c;
    return s;
}

PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    PuiseuxSeries::TermMap t = a.terms_;
    for (const auto& [e, c] : b.terms_) {
        auto [it, fresh] = t.emplace(e, c);
        if (!fresh) it->second += c;
    }
    return PuiseuxSeries::from_terms(std::move(t), min(a.prec_, b.prec_));
}

PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + (-b); }

PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    // v(ab) = v(a) + v(b); the product is provable below
    // min(v(a) + prec(b), v(b) + prec(a)).
    const ExtRat prec = min(a.valuation_lower_bound() + b.prec_, b.valuation_lower_bound() + a.prec_);
    PuiseuxSeries::TermMap t;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Rational e = ea + eb;
            if (!(ExtRat(e) < prec)) continue;
            auto [it, fresh] = t.emplace(std::move(e), ca * cb);
            if (!fresh) it->second += ca * cb;
        }
    return PuiseuxSeries::from_terms(std::move(t), prec);
}

PuiseuxSeries operator*(const Rational& c, const PuiseuxSeries& s) {
    if (c == 0) return PuiseuxSeries::zero();
    PuiseuxSeries r = s;
    for (auto& [e, coeff] : r.terms_) coeff *= c;
    return r;
}

PuiseuxSeries PuiseuxSeries::pow(long n) const {
    if (n < 0) return invert(pow(-n));
    PuiseuxSeries acc = constant(1);
    PuiseuxSeries base = *this;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

int PuiseuxSeries::compare(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    if (a.ram_ != b.ram_) return a.ram_ < b.ram_ ? -1 : 1;
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    }
    if (ia != a.terms_.end()) return 1;
    if (ib != b.terms_.end()) return -1;
    if (a.prec_ == b.prec_) return 0;
    return a.prec_ < b.prec_ ? -1 : 1;
}

PuiseuxSeries invert(const PuiseuxSeries& s, std::optional<ExtRat> target) {
    if (s.is_exact_zero()) throw DivisionByZero();
    if (s.is_truncated_zero()) throw IndeterminateValuation("cannot invert O(t^" + s.precision().str() + ")");

    const Rational m = s.finite_valuation();
    const Rational c = s.leading_coefficient();
    if (s.terms().size() == 1 && s.precision().is_infinite()) {
        PuiseuxSeries r = PuiseuxSeries::monomial(Rational(1) / c, -m);
        return target ? r.with_precision_at_most(*target) : r;
    }

    const ExtRat limit = s.precision() - m - m;  // error propagation: d(1/s) = -ds / s^2
    ExtRat goal = target ? *target : ExtRat(default_precision() - m);
    if (goal.is_infinite()) goal = ExtRat(default_precision() - m);
    const ExtRat abs_prec = min(limit, goal);
    const Rational rel = abs_prec.finite() + m;

    // s = c t^m (1 - r) with v(r) > 0; 1/(1-r) = sum r^i.
    PuiseuxSeries r = PuiseuxSeries::constant(1) - shift_scale(s, Rational(1) / c, -m);
    PuiseuxSeries acc = PuiseuxSeries::constant(1);
    PuiseuxSeries pw = r;
    while (pw.valuation_lower_bound() < ExtRat(rel)) {
        acc += pw;
        pw = (pw * r).with_precision_at_most(ExtRat(rel));
    }
    return shift_scale(acc, Rational(1) / c, -m).with_precision_at_most(abs_prec);
}

PuiseuxSeries sqrt(const PuiseuxSeries& s, std::optional<ExtRat> target) {
    if (s.is_exact_zero()) return s;
    if (s.is_truncated_zero())
        throw IndeterminateValuation("cannot take sqrt of O(t^" + s.precision().str() + ")");

    const Rational m = s.finite_valuation();
    const Rational c = s.leading_coefficient();
    auto root = rational_sqrt(c);
    if (!root)
        throw NonSquareLeadingCoefficient("leading coefficient " + to_string(c) +
                                          " is not the square of a rational");
    const Rational half_m = m / 2;
    if (s.terms().size() == 1 && s.precision().is_infinite()) {
        PuiseuxSeries r = PuiseuxSeries::monomial(*root, half_m);
        return target ? r.with_precision_at_most(*target) : r;
    }

    const ExtRat limit = s.precision() - half_m;  // d(sqrt s) = ds / (2 sqrt s)
    ExtRat goal = target ? *target : ExtRat(default_precision() + half_m);
    if (goal.is_infinite()) goal = ExtRat(default_precision() + half_m);
    const ExtRat abs_prec = min(limit, goal);
    const Rational rel = abs_prec.finite() - half_m;

    // s = c t^m (1 + r); (1+r)^(1/2) by the binomial series.
    PuiseuxSeries r = shift_scale(s, Rational(1) / c, -m) - Rational(1);
    PuiseuxSeries acc = PuiseuxSeries::constant(1);
    PuiseuxSeries pw = r;
    Rational binom(1);
    long i = 1;
    while (pw.valuation_lower_bound() < ExtRat(rel)) {
        binom *= (Rational(1, 2) - Rational(i - 1)) / Rational(i);
        acc += binom * pw;
        pw = (pw * r).with_precision_at_most(ExtRat(rel));
        ++i;
    }
    return shift_scale(acc, *root, half_m).with_precision_at_most(abs_prec);
}

Rational residue(const PuiseuxSeries& s) {
    if (!s.terms().empty() && s.terms().begin()->first < 0)
        throw NegativeValuation("residue of a series with valuation " + to_string(s.terms().begin()->first));
    if (s.is_exact_zero()) return 0;
    return s.coefficient(0);  // throws if the t^0 coefficient is beyond precision
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::string exponent_str(const Rational& e) {
    if (denominator(e) == 1) return to_string(e);
    return "(" + to_string(e) + ")";
}

std::string term_str(const Rational& e, const Rational& abs_coeff) {
    if (e == 0) return to_string(abs_coeff);
    std::string tpart = e == 1 ? "t" : "t^" + exponent_str(e);
    if (abs_coeff == 1) return tpart;
    return to_string(abs_coeff) + "*" + tpart;
}

struct Cursor {
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool at_end() {
        skip_ws();
        return i >= s.size();
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
    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "' " + what, i);
    }

    Integer integer() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) throw ParseError("expected digits", i);
        return Integer(s.substr(start, i - start));
    }

    // ['-'] digits ['/' digits]
    Rational rational(bool allow_sign) {
        skip_ws();
        bool neg = false;
        if (allow_sign && (peek() == '-' || peek() == '+')) neg = s[i++] == '-';
        Integer num = integer();
        Integer den(1);
        if (i < s.size() && s[i] == '/') {
            ++i;
            den = integer();
            if (den == 0) throw ParseError("zero denominator", i);
        }
        Rational q(num, den);
        q.canonicalize();
        return neg ? Rational(-q) : q;
    }

    // after 't': optional '^' exponent; parenthesized exponents may be
    // fractional and signed, bare ones are (signed) integers.
    Rational t_exponent() {
        if (!accept('^')) return Rational(1);
        if (accept('(')) {
            Rational e = rational(true);
            expect(')', "after exponent");
            return e;
        }
        skip_ws();
        bool neg = false;
        if (peek() == '-' || peek() == '+') neg = s[i++] == '-';
        Rational e(integer());
        return neg ? Rational(-e) : e;
    }
};

}  // namespace

std::string PuiseuxSeries::str() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        out << term_str(e, abs(c));
    }
    if (!prec_.is_infinite()) {
        if (!first) out << " + ";
        out << "O(t^" << exponent_str(prec_.finite()) << ")";
    } else if (first) {
        out << "0";
    }
    return out.str();
}

PuiseuxSeries parse_puiseux(const std::string& text) {
    Cursor c{text};
    PuiseuxSeries::TermMap terms;
    ExtRat prec = ExtRat::infinity();
    bool first = true;
    while (true) {
        int sign = 1;
        if (first) {
            if (c.at_end()) throw ParseError("empty series literal", c.i);
            if (c.peek() == '-' || c.peek() == '+') sign = c.s[c.i++] == '-' ? -1 : 1;
        } else {
            if (c.at_end()) break;
            if (c.accept('+'))
                sign = 1;
            else if (c.accept('-'))
                sign = -1;
            else
                throw ParseError("expected '+' or '-' between terms", c.i);
        }
        first = false;

        if (c.peek() == 'O') {
            ++c.i;
            c.expect('(', "after O");
            if (c.peek() != 't') throw ParseError("expected t inside O(...)", c.i);
            ++c.i;
            Rational e = c.t_exponent();
            c.expect(')', "after O(t^...)");
            if (sign < 0) throw ParseError("O(...) term cannot be subtracted", c.i);
            prec = min(prec, ExtRat(e));
            continue;
        }

        Rational coeff(sign);
        Rational expo(0);
        bool saw_factor = false;
        while (true) {
            char p = c.peek();
            if (std::isdigit(static_cast<unsigned char>(p))) {
                coeff *= c.rational(false);
            } else if (p == 't') {
                ++c.i;
                expo += c.t_exponent();
            } else {
                throw ParseError("expected a coefficient or t", c.i);
            }
            saw_factor = true;
            if (!c.accept('*')) break;
        }
        if (!saw_factor) throw ParseError("empty term", c.i);
        if (coeff != 0) {
            auto [it, fresh] = terms.emplace(expo, coeff);
            if (!fresh) it->second += coeff;
        }
    }
    return PuiseuxSeries::from_terms(std::move(terms), prec);
}

}  // namespace tropell
