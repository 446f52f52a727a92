#include "qprelax/linform.hpp"

#include <algorithm>
#include <sstream>

namespace qprelax {

VarKey VarKey::monomial(std::vector<int> S) {
  std::sort(S.begin(), S.end());
  for (std::size_t i = 1; i < S.size(); ++i)
    if (S[i] == S[i - 1]) throw Error("monomial key with duplicate node");
  VarKey k;
  k.kind = Kind::monomial;
  k.set = std::move(S);
  return k;
}

VarKey VarKey::square(int i, std::vector<int> J) {
  std::sort(J.begin(), J.end());
  for (std::size_t a = 1; a < J.size(); ++a)
    if (J[a] == J[a - 1]) throw Error("square key with duplicate node");
  if (std::binary_search(J.begin(), J.end(), i)) throw Error("square key stores i inside J");
  VarKey k;
  k.kind = Kind::square;
  k.node = i;
  k.set = std::move(J);
  return k;
}

VarKey VarKey::weight(std::vector<int> bag, uint64_t mask) {
  std::sort(bag.begin(), bag.end());
  if (bag.size() > 63) throw Error("bag too large for weight key");
  if (mask >> bag.size()) throw Error("weight mask exceeds bag size");
  VarKey k;
  k.kind = Kind::weight;
  k.set = std::move(bag);
  k.mask = mask;
  return k;
}

std::string VarKey::label() const {
  std::ostringstream out;
  auto list = [&](const std::vector<int>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ",";
      out << v[i];
    }
  };
  switch (kind) {
    case Kind::monomial:
      if (set.empty()) return "1";
      out << "z(";
      list(set);
      out << ")";
      break;
    case Kind::square:
      out << "zii(" << node;
      if (!set.empty()) {
        out << "|";
        list(set);
      }
      out << ")";
      break;
    case Kind::weight:
      out << "lam(";
      list(set);
      out << "|";
      for (std::size_t i = 0; i < set.size(); ++i) out << ((mask >> i) & 1);
      out << ")";
      break;
  }
  return out.str();
}

int Registry::intern(const VarKey& k) {
  auto it = index_.find(k);
  if (it != index_.end()) return it->second;
  int idx = static_cast<int>(keys_.size());
  keys_.push_back(k);
  index_.emplace(k, idx);
  return idx;
}

int Registry::index_of(const VarKey& k) const {
  auto it = index_.find(k);
  return it == index_.end() ? -1 : it->second;
}

LinearForm LinearForm::constant(const Rat& c) {
  LinearForm f;
  f.add_term(VarKey::one(), c);
  return f;
}

LinearForm LinearForm::var(const VarKey& k, const Rat& coef) {
  LinearForm f;
  f.add_term(k, coef);
  return f;
}

void LinearForm::add_term(const VarKey& k, const Rat& coef) {
  if (coef == 0) return;
  auto [it, fresh] = terms.emplace(k, coef);
  if (!fresh) {
    it->second += coef;
    if (it->second == 0) terms.erase(it);
  }
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
  for (auto& [k, c] : o.terms) add_term(k, c);
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
  for (auto& [k, c] : o.terms) add_term(k, -c);
  return *this;
}

LinearForm LinearForm::operator+(const LinearForm& o) const {
  LinearForm f = *this;
  f += o;
  return f;
}

LinearForm LinearForm::operator-(const LinearForm& o) const {
  LinearForm f = *this;
  f -= o;
  return f;
}

LinearForm LinearForm::scaled(const Rat& s) const {
  LinearForm f;
  if (s == 0) return f;
  for (auto& [k, c] : terms) f.terms.emplace(k, c * s);
  return f;
}

Rat LinearForm::constant_part() const {
  auto it = terms.find(VarKey::one());
  return it == terms.end() ? Rat(0) : it->second;
}

LinearForm LinearForm::substitute(const std::map<VarKey, LinearForm>& subs) const {
  LinearForm out;
  for (auto& [k, c] : terms) {
    auto it = subs.find(k);
    if (it == subs.end())
      out.add_term(k, c);
    else
      out += it->second.scaled(c);
  }
  return out;
}

std::string LinearForm::str() const {
  if (terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto& [k, c] : terms) {
    Rat a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    if (k.is_constant())
      out << fraction_string(a);
    else if (a == 1)
      out << k.label();
    else
      out << fraction_string(a) << "*" << k.label();
    first = false;
  }
  return out.str();
}

namespace {

void check_disjoint(const std::vector<int>& J1, const std::vector<int>& J2) {
  std::vector<int> a = J1, b = J2;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (int v : a)
    if (std::binary_search(b.begin(), b.end(), v)) throw Error("J1 and J2 overlap");
}

}  // namespace

LinearForm ell(const std::vector<int>& J1, const std::vector<int>& J2) {
  check_disjoint(J1, J2);
  std::vector<int> j2 = J2;
  std::sort(j2.begin(), j2.end());
  LinearForm f;
  const std::size_t k = j2.size();
  for (uint64_t t = 0; t < (uint64_t(1) << k); ++t) {
    std::vector<int> S = J1;
    int bits = 0;
    for (std::size_t b = 0; b < k; ++b)
      if ((t >> b) & 1) {
        S.push_back(j2[b]);
        ++bits;
      }
    f.add_term(VarKey::monomial(std::move(S)), (bits % 2) ? Rat(-1) : Rat(1));
  }
  return f;
}

LinearForm rho(int i, const std::vector<int>& J1, const std::vector<int>& J2) {
  check_disjoint(J1, J2);
  for (int v : J1)
    if (v == i) throw Error("rho: i inside J1");
  for (int v : J2)
    if (v == i) throw Error("rho: i inside J2");
  std::vector<int> j2 = J2;
  std::sort(j2.begin(), j2.end());
  LinearForm f;
  const std::size_t k = j2.size();
  for (uint64_t t = 0; t < (uint64_t(1) << k); ++t) {
    std::vector<int> S = J1;
    int bits = 0;
    for (std::size_t b = 0; b < k; ++b)
      if ((t >> b) & 1) {
        S.push_back(j2[b]);
        ++bits;
      }
    f.add_term(VarKey::square(i, std::move(S)), (bits % 2) ? Rat(-1) : Rat(1));
  }
  return f;
}

template <typename T>
static T ground_key_impl(const VarKey& k, const std::vector<T>& x) {
  auto at = [&](int i) -> const T& {
    if (i < 1 || i > static_cast<int>(x.size())) throw Error("ground: index out of range");
    return x[i - 1];
  };
  switch (k.kind) {
    case VarKey::Kind::monomial: {
      T v(1);
      for (int i : k.set) v *= at(i);
      return v;
    }
    case VarKey::Kind::square: {
      T v = at(k.node);
      v *= at(k.node);
      for (int j : k.set) v *= at(j);
      return v;
    }
    case VarKey::Kind::weight: {
      T v(1);
      for (std::size_t b = 0; b < k.set.size(); ++b) {
        if ((k.mask >> b) & 1)
          v *= at(k.set[b]);
        else
          v *= T(1) - at(k.set[b]);
      }
      return v;
    }
  }
  throw Error("ground: bad key kind");
}

double ground_key(const VarKey& k, const std::vector<double>& x) { return ground_key_impl(k, x); }
Rat ground_key(const VarKey& k, const std::vector<Rat>& x) { return ground_key_impl(k, x); }

double evaluate(const LinearForm& form, const std::vector<double>& x) {
  double v = 0;
  for (auto& [k, c] : form.terms) v += to_double(c) * ground_key(k, x);
  return v;
}

Rat evaluate(const LinearForm& form, const std::vector<Rat>& x) {
  Rat v = 0;
  for (auto& [k, c] : form.terms) v += c * ground_key(k, x);
  return v;
}

}  // namespace qprelax
