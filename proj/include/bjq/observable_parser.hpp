#pragma once

#include "bjq/classical_poly.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace bjq {

// Parse failure with a 1-based column into the source text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t column)
        : std::runtime_error(what + " (column " + std::to_string(column) + ")"), column_(column) {}
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

// Recursive-descent parser for classical observables:
//
//   expr     := term (('+' | '-') term)*
//   term     := factor ('*' factor)*
//   factor   := var ['^' uint] | rational | '(' expr ')'
//   rational := int ['/' uint]
//
// Variables: x, y, z, px, py, pz or x1..x3, p1..p3. No implicit
// multiplication, and '^' applies to variables only (powers of
// parenthesized groups are rejected). Whitespace is insignificant.
class ObservableParser {
public:
    static ClassicalPoly parse(std::string_view text) {
        ObservableParser p(text);
        ClassicalPoly result = p.parse_expr();
        p.skip_ws();
        if (p.pos_ < p.text_.size()) p.fail("unexpected trailing input");
        return result.with_dims(result.max_used_dim());
    }

private:
    explicit ObservableParser(std::string_view text) : text_(text) {}

    static constexpr std::size_t kDims = 3;  // parse wide, then shrink to used dims

    ClassicalPoly parse_expr() {
        ClassicalPoly acc = parse_term();
        for (;;) {
            skip_ws();
            if (match('+'))
                acc += parse_term();
            else if (match('-'))
                acc -= parse_term();
            else
                return acc;
        }
    }

    ClassicalPoly parse_term() {
        ClassicalPoly acc = parse_factor();
        for (;;) {
            skip_ws();
            if (!match('*')) return acc;
            acc *= parse_factor();
        }
    }

    ClassicalPoly parse_factor() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected a factor");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ClassicalPoly inner = parse_expr();
            skip_ws();
            if (!match(')')) fail("expected ')'");
            return inner;
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return parse_rational();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_variable();
        fail(std::string("unexpected character '") + c + "'");
    }

    ClassicalPoly parse_rational() {
        const std::size_t start = pos_;
        bool negative = match('-');
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail_at("expected a number", start);
        BigInt num(read_digits());
        if (negative) num = -num;
        BigInt den = 1;
        if (match('/')) {
            const std::size_t denStart = pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("expected a denominator");
            den = BigInt(read_digits());
            if (den == 0) fail_at("zero denominator", denStart);
        }
        return ClassicalPoly::constant(kDims, Rational(num, den));
    }

    ClassicalPoly parse_variable() {
        const std::size_t start = pos_;
        std::string name;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])))) {
            name += text_[pos_];
            ++pos_;
        }
        bool isMomentum = false;
        std::size_t dim = 0;
        if (!lookup(name, isMomentum, dim)) fail_at("unknown variable '" + name + "'", start);
        unsigned power = 1;
        skip_ws();
        if (match('^')) {
            skip_ws();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("expected an exponent");
            unsigned long e = std::stoul(read_digits());
            power = static_cast<unsigned>(e);
        }
        return isMomentum ? ClassicalPoly::momentum(kDims, dim, power)
                          : ClassicalPoly::position(kDims, dim, power);
    }

    static bool lookup(const std::string& name, bool& isMomentum, std::size_t& dim) {
        auto axis = [](char c, std::size_t& d) {
            if (c == 'x' || c == '1') d = 0;
            else if (c == 'y' || c == '2') d = 1;
            else if (c == 'z' || c == '3') d = 2;
            else return false;
            return true;
        };
        if (name.size() == 1) {
            if (name[0] == 'p') {  // bare p is the n = 1 momentum
                isMomentum = true;
                dim = 0;
                return true;
            }
            isMomentum = false;
            return axis(name[0], dim) && name[0] >= 'x';
        }
        if (name.size() == 2) {
            if (name[0] == 'p') {
                isMomentum = true;
                return axis(name[1], dim);
            }
            if (name[0] == 'x' && name[1] >= '1' && name[1] <= '3') {
                isMomentum = false;
                dim = static_cast<std::size_t>(name[1] - '1');
                return true;
            }
        }
        return false;
    }

    std::string read_digits() {
        std::string out;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            out += text_[pos_];
            ++pos_;
        }
        return out;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool match(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const { fail_at(what, pos_); }
    [[noreturn]] static void fail_at(const std::string& what, std::size_t pos) {
        throw ParseError(what, pos + 1);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline ClassicalPoly parse_observable(std::string_view text) { return ObservableParser::parse(text); }

}  // namespace bjq
