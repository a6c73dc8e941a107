#include "ambicon/rational.hpp"

#include <cctype>

namespace ambicon {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto to_mpz = [](std::string tok) {  // mpz_class rejects a leading '+'
    if (!tok.empty() && tok[0] == '+') tok = tok.substr(1);
    return mpz_class(tok);
  };
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
      throw std::invalid_argument("malformed fraction: " + s);
    mpz_class denz = to_mpz(den);
    if (denz == 0) throw std::invalid_argument("zero denominator: " + s);
    Rational q{to_mpz(num), denz};
    q.canonicalize();
    return q;
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = false;
    if (!ip.empty() && (ip[0] == '+' || ip[0] == '-')) {
      neg = ip[0] == '-';
      ip = ip.substr(1);
    }
    if (ip.empty() && fp.empty())
      throw std::invalid_argument("malformed decimal: " + s);
    for (char c : ip + fp)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("malformed decimal: " + s);
    mpz_class digits(ip.empty() && fp.empty() ? "0" : ip + fp,
                     10);  // integer and fractional digits concatenated
    mpz_class den = 1;
    for (size_t k = 0; k < fp.size(); ++k) den *= 10;
    Rational q(digits, den);
    q.canonicalize();
    return neg ? Rational(-q) : q;
  }
  if (!is_integer_token(s)) throw std::invalid_argument("malformed rational: " + s);
  return Rational(to_mpz(s));
}

std::string rational_to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string decimal_approx(const Rational& q, int sig) {
  if (q == 0) return "0";
  bool neg = q < 0;
  Rational a = neg ? Rational(-q) : q;
  // Find e = floor(log10(a)) by exact scaling.
  int e = 0;
  Rational t = a;
  while (t >= 10) {
    t /= 10;
    ++e;
  }
  while (t < 1) {
    t *= 10;
    --e;
  }
  // Round a * 10^(sig-1-e) to the nearest integer (half away from zero).
  int shift = sig - 1 - e;
  mpz_class num = a.get_num(), den = a.get_den();
  if (shift >= 0)
    for (int k = 0; k < shift; ++k) num *= 10;
  else
    for (int k = 0; k < -shift; ++k) den *= 10;
  mpz_class quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (rem * 2 >= den) quot += 1;
  std::string d = quot.get_str();
  if (static_cast<int>(d.size()) > sig) {  // rounding carried into a new digit
    d.pop_back();
    ++e;
  }
  std::string out;
  if (e >= -4 && e < sig + 3) {
    if (e >= 0) {
      std::string ip = d.substr(0, e + 1);
      while (static_cast<int>(ip.size()) < e + 1) ip += '0';
      std::string fp = static_cast<int>(d.size()) > e + 1 ? d.substr(e + 1) : "";
      while (!fp.empty() && fp.back() == '0') fp.pop_back();
      out = fp.empty() ? ip : ip + "." + fp;
    } else {
      std::string fp(-e - 1, '0');
      fp += d;
      while (!fp.empty() && fp.back() == '0') fp.pop_back();
      out = "0." + fp;
    }
  } else {
    std::string fp = d.substr(1);
    while (!fp.empty() && fp.back() == '0') fp.pop_back();
    out = d.substr(0, 1);
    if (!fp.empty()) out += "." + fp;
    out += "e" + std::to_string(e);
  }
  return neg ? "-" + out : out;
}

mpz_class rational_floor(const Rational& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

Rational rational_pow(const Rational& q, unsigned long k) {
  Rational r = 1;
  Rational base = q;
  while (k) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

}  // namespace ambicon
