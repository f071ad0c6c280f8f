#include "canmet/polyroots.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace canmet {

namespace {

struct Term {
    double coef = 1.0;
    int power = 0;
};

Term parse_term(const std::string& t) {
    if (t.empty()) throw std::invalid_argument("empty polynomial term");
    Term out;
    size_t i = 0;
    bool have_coef = false;
    if (t[i] != 'x') {
        size_t j = i;
        while (j < t.size() && t[j] != 'x' && t[j] != '*') ++j;
        const std::string num = t.substr(i, j - i);
        const size_t slash = num.find('/');
        try {
            if (slash == std::string::npos) {
                out.coef = std::stod(num);
            } else {
                out.coef = std::stod(num.substr(0, slash)) / std::stod(num.substr(slash + 1));
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("bad coefficient '" + num + "'");
        }
        have_coef = true;
        i = j;
        if (i < t.size() && t[i] == '*') ++i;
    }
    if (i == t.size()) {
        if (!have_coef) throw std::invalid_argument("bad term '" + t + "'");
        return out;
    }
    if (t[i] != 'x') throw std::invalid_argument("bad term '" + t + "'");
    ++i;
    out.power = 1;
    if (i < t.size()) {
        if (t[i] != '^') throw std::invalid_argument("bad term '" + t + "'");
        ++i;
        try {
            size_t used = 0;
            out.power = std::stoi(t.substr(i), &used);
            if (used != t.size() - i) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("bad exponent in '" + t + "'");
        }
        if (out.power < 0) throw std::invalid_argument("negative exponent in '" + t + "'");
    }
    return out;
}

} // namespace

std::vector<double> parse_monic_poly(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty polynomial");

    std::vector<Term> terms;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || ((s[i] == '+' || s[i] == '-') && i > start &&
                              s[i - 1] != '^' && s[i - 1] != '/' && s[i - 1] != '*' &&
                              s[i - 1] != '+' && s[i - 1] != '-')) {
            terms.push_back(parse_term(s.substr(start, i - start)));
            start = i;
        }
    }
    if (terms.empty()) throw std::invalid_argument("no terms in polynomial");

    int degree = 0;
    for (const Term& t : terms) degree = std::max(degree, t.power);
    std::vector<double> coeffs(degree + 1, 0.0);
    for (const Term& t : terms) coeffs[t.power] += t.coef;
    if (coeffs.back() != 1.0)
        throw std::invalid_argument("polynomial must be monic (leading coefficient 1)");
    return coeffs;
}

std::vector<cplx> poly_roots(const std::vector<double>& coeffs) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 1) throw std::invalid_argument("polynomial must have positive degree");
    if (coeffs.back() == 0.0) throw std::invalid_argument("leading coefficient is zero");

    auto eval = [&](cplx z) {
        cplx p(0, 0), dp(0, 0);
        for (int k = n; k >= 0; --k) {
            dp = dp * z + p;
            p = p * z + coeffs[k];
        }
        return std::pair<cplx, cplx>(p, dp);
    };

    double bound = 0;
    for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(coeffs[k] / coeffs[n]));
    bound += 1.0;

    std::vector<cplx> z(n);
    const cplx gen(0.4, 0.9);
    cplx zz = gen;
    for (int i = 0; i < n; ++i) {
        z[i] = bound * zz;
        zz *= gen;
    }
    for (int it = 0; it < 500; ++it) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            cplx denom(coeffs[n], 0);
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            const cplx step = eval(z[i]).first / denom;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14 * bound) break;
    }
    for (int i = 0; i < n; ++i) {
        for (int it = 0; it < 8; ++it) {
            const auto [p, dp] = eval(z[i]);
            if (std::abs(dp) == 0.0) break;
            const cplx step = p / dp;
            z[i] -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(z[i]))) break;
        }
    }
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return z;
}

} // namespace canmet
