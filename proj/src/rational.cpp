#include "biquant/rational.hpp"

#include <cctype>

namespace bq {

std::string to_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_str();
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string_view num = s;
    std::string_view den = "1";
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    if (!all_digits(num) || !all_digits(den))
        throw NumericError("not a rational number: '" + std::string(text) + "'");
    Integer p(std::string(num), 10);
    Integer q(std::string(den), 10);
    if (q == 0) throw NumericError("zero denominator: '" + std::string(text) + "'");
    Rational r(p, q);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

double to_double(const Rational& r) { return r.get_d(); }

}  // namespace bq
