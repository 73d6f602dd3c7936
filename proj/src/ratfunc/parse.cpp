#include <cctype>
#include <string>

#include "gklo/error.hpp"
#include "gklo/ratfunc.hpp"

namespace gklo {
namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    RatFunc parse() {
        RatFunc r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::Parse, "column " + std::to_string(pos_ + 1) + ": " + msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RatFunc expr() {
        std::vector<RatFunc> parts{term()};
        for (;;) {
            if (eat('+'))
                parts.push_back(term());
            else if (eat('-'))
                parts.push_back(-term());
            else
                break;
        }
        return RatFunc::sum(parts);
    }

    RatFunc term() {
        RatFunc r = unary();
        for (;;) {
            if (eat('*'))
                r *= unary();
            else if (eat('/')) {
                RatFunc d = unary();
                if (d.is_zero()) fail("division by zero");
                r /= d;
            } else
                break;
        }
        return r;
    }

    RatFunc unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    RatFunc power() {
        RatFunc b = primary();
        if (eat('^')) {
            bool neg = eat('-');
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected integer exponent");
            int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
            if (neg && b.is_zero()) fail("zero to a negative power");
            b = b.pow(neg ? -e : e);
        }
        return b;
    }

    RatFunc primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            RatFunc r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return RatFunc(Rational(mpz_class(std::string(s_.substr(start, pos_ - start)))));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size()) {
                char d = s_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
                    ++pos_;
                } else if (d == '{' && s_[pos_ - 1] == '_') {
                    std::size_t close = s_.find('}', pos_);
                    if (close == std::string_view::npos) fail("unterminated '{'");
                    pos_ = close + 1;
                } else {
                    break;
                }
            }
            return RatFunc::variable(s_.substr(start, pos_ - start));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text) { return Parser(text).parse(); }

}  // namespace gklo
