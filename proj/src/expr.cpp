#include "umbra/expr.hpp"

#include <cctype>
#include <vector>

#include "umbra/error.hpp"

namespace umbra {

namespace {

constexpr std::uint64_t kMaxExponent = 1u << 24;

class Parser {
public:
    Parser(std::string_view text, const Field& field) : s_(text), f_(field) {}

    RatFn parse() {
        RatFn r = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(Errc::SyntaxError, msg + " at position " + std::to_string(pos_), pos_);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    RatFn expr() {
        RatFn acc = term();
        for (;;) {
            if (accept('+')) {
                acc = acc + term();
            } else if (accept('-')) {
                acc = acc - term();
            } else {
                return acc;
            }
        }
    }

    RatFn term() {
        RatFn acc = factor();
        for (;;) {
            if (accept('*')) {
                acc = acc * factor();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                RatFn d = factor();
                if (d.is_zero())
                    throw Error(Errc::DivisionByZero, "division by zero at position " + std::to_string(at), at);
                acc = acc / d;
            } else {
                return acc;
            }
        }
    }

    RatFn factor() {
        if (accept('-')) return -factor();
        RatFn base = atom();
        if (accept('^')) {
            skip_ws();
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("exponent must be a non-negative integer literal");
            std::uint64_t e = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                e = e * 10 + static_cast<std::uint64_t>(s_[pos_] - '0');
                if (e > kMaxExponent) fail("exponent too large");
                ++pos_;
            }
            return base.pow(static_cast<std::int64_t>(e));
        }
        return base;
    }

    std::int64_t integer_mod_p() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected integer");
        std::int64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = (v * 10 + (s_[pos_] - '0')) % f_.p();
            ++pos_;
        }
        return v;
    }

    RatFn atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            RatFn r = expr();
            expect(')');
            return r;
        }
        if (c == '[') {
            ++pos_;
            std::vector<std::int64_t> coords;
            coords.push_back(integer_mod_p());
            while (accept(',')) coords.push_back(integer_mod_p());
            expect(']');
            if (coords.size() > f_.nu()) fail("too many coordinates for F_" + std::to_string(f_.q()));
            return RatFn(Poly::constant(f_, f_.from_coords(coords)));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return RatFn::from_int(f_, integer_mod_p());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string_view name = s_.substr(start, pos_ - start);
            if (name == "x") return RatFn::x(f_);
            throw Error(Errc::UnknownSymbol,
                        "unknown symbol '" + std::string(name) + "' at position " + std::to_string(start), start);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    const Field& f_;
    std::size_t pos_ = 0;
};

bool needs_parens(const Poly& p) { return p.nonzero_terms() > 1; }

}  // namespace

RatFn parse_ratfn(std::string_view text, const Field& field) { return Parser(text, field).parse(); }

Poly parse_poly(std::string_view text, const Field& field) {
    RatFn r = parse_ratfn(text, field);
    if (!r.is_polynomial()) throw Error(Errc::NotPolynomial, "expression is not a polynomial");
    return r.num();
}

std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    const Field& f = p.field();
    const auto c = p.coeffs();
    std::string out;
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        if (!out.empty()) out += '+';
        if (i == 0) {
            out += f.format(c[i]);
            continue;
        }
        if (c[i] != 1) {
            out += f.format(c[i]);
            out += '*';
        }
        out += 'x';
        if (i > 1) {
            out += '^';
            out += std::to_string(i);
        }
    }
    return out;
}

std::string to_string(const RatFn& r) {
    if (r.is_polynomial()) return to_string(r.num());
    std::string n = to_string(r.num());
    std::string d = to_string(r.den());
    if (needs_parens(r.num())) n = "(" + n + ")";
    if (needs_parens(r.den())) d = "(" + d + ")";
    return n + "/" + d;
}

}  // namespace umbra
