#include "specseq/integer.hpp"

#include <sstream>

#include <boost/multiprecision/miller_rabin.hpp>

namespace specseq {

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer mm = m < 0 ? Integer(-m) : m;
  Integer r = a % mm;
  if (r < 0) r += mm;
  return r;
}

Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

Integer inverse_mod(const Integer& a, const Integer& m) {
  // extended Euclid on (a mod m, m)
  Integer old_r = mod_floor(a, m), r = m;
  Integer old_s = 1, s = 0;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1 && m != 1) throw std::invalid_argument("inverse_mod: not a unit");
  return mod_floor(old_s, m);
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  if (n < 1000000) {
    for (Integer d = 3; d * d <= n; d += 2)
      if (n % d == 0) return false;
    return true;
  }
  return boost::multiprecision::miller_rabin_test(n, 32);
}

std::vector<std::pair<Integer, int>> factorize(Integer n) {
  std::vector<std::pair<Integer, int>> out;
  if (n < 0) n = -n;
  if (n < 2) return out;
  auto pull = [&](const Integer& p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  };
  pull(Integer(2));
  for (Integer d = 3; d * d <= n; d += 2) {
    if (is_prime(n)) break;
    pull(d);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

IntMatrix int_matrix(std::initializer_list<std::initializer_list<long>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  IntMatrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (long v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

bool is_zero(const IntMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (Index i = 0; i < m.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace specseq
