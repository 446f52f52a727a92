#pragma once

#include <map>
#include <string>
#include <vector>

#include "qprelax/rational.hpp"
#include "qprelax/varkey.hpp"

namespace qprelax {

// Affine combination of extended variables with exact rational coefficients.
// The constant term is carried on the empty monomial key. No zero
// coefficients are stored; arithmetic and equality are exact.
struct LinearForm {
  std::map<VarKey, Rat> terms;

  static LinearForm constant(const Rat& c);
  static LinearForm var(const VarKey& k, const Rat& coef = Rat(1));

  void add_term(const VarKey& k, const Rat& coef);
  LinearForm& operator+=(const LinearForm& o);
  LinearForm& operator-=(const LinearForm& o);
  LinearForm operator+(const LinearForm& o) const;
  LinearForm operator-(const LinearForm& o) const;
  LinearForm scaled(const Rat& s) const;
  bool operator==(const LinearForm& o) const { return terms == o.terms; }
  bool empty() const { return terms.empty(); }

  Rat constant_part() const;
  // Replaces keys per `subs` (key -> replacement form); untouched keys stay.
  LinearForm substitute(const std::map<VarKey, LinearForm>& subs) const;

  std::string str() const;
};

// RLT factor l(J1,J2): linearization of prod_{J1} z_i prod_{J2} (1 - z_i),
// expanded as sum_{t subseteq J2} (-1)^{|t|} z_{J1 u t}. Exactly 2^{|J2|}
// terms with coefficients +-1; l({},{}) = 1. Subsets of J2 are enumerated
// by a binary counter over sorted(J2).
LinearForm ell(const std::vector<int>& J1, const std::vector<int>& J2);

// Square-augmented factor rho(i,J1,J2): linearization of z_i^2 times the
// RLT factor, over the square variables z^{J1 u t}_{ii}.
LinearForm rho(int i, const std::vector<int>& J1, const std::vector<int>& J2);

// Grounding semantics: monomial(S) -> prod x_i; square(i,J) -> x_i^2 prod x_j;
// weight(B,a) -> prod_{j in B} (a_j ? x_j : 1-x_j).
double evaluate(const LinearForm& form, const std::vector<double>& x);
Rat evaluate(const LinearForm& form, const std::vector<Rat>& x);

double ground_key(const VarKey& k, const std::vector<double>& x);
Rat ground_key(const VarKey& k, const std::vector<Rat>& x);

}  // namespace qprelax
