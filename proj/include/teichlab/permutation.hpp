#pragma once

#include <span>
#include <string>
#include <vector>

#include "teichlab/rational.hpp"

namespace teichlab {

// A permutation of {1, ..., d}, stored by its images pi(1), ..., pi(d).
// All indices in the public API are 1-based.
class Permutation {
 public:
  // Throws Error(InvalidArgument) unless images is a bijection of {1..d}, d >= 1.
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int d);
  // (d, d-1, ..., 1)
  static Permutation reversal(int d);

  int size() const noexcept { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i - 1)]; }
  int inverse(int j) const { return inverse_[static_cast<std::size_t>(j - 1)]; }
  Permutation inverse() const;
  std::span<const int> images() const noexcept { return images_; }

  bool operator==(const Permutation& other) const { return images_ == other.images_; }

  std::string to_string() const;  // "(3,2,1)"

 private:
  std::vector<int> images_;
  std::vector<int> inverse_;
};

// No proper prefix {1..j}, j < d, is mapped onto itself.
bool is_irreducible(const Permutation& p);

// pi(i+1) == pi(i) + 1 (mod d) for all 1 <= i < d.
bool is_rotation(const Permutation& p);

struct TypeWResult {
  bool type_w = false;
  std::vector<int> trace;  // a_0 = 1, a_1, ..., a_l
};

// Runs the a_p recursion: a_0 = 1, stop once a_{p-1} is pi^{-1}(1) or d+1,
// otherwise a_p = pi^{-1}(pi(a_{p-1}) - 1) + 1. Type W iff it stops at pi^{-1}(1).
// Throws NotIrreducible for reducible input, Internal if the recursion fails to
// stop within d+1 steps.
TypeWResult classify_type_w(const Permutation& p);

// Matrix of the alternating form Q on the standard basis:
// Q(e_i, e_j) = 1 if i > j and pi(i) < pi(j); -1 if i < j and pi(i) > pi(j); else 0.
class QForm {
 public:
  explicit QForm(const Permutation& p);

  int size() const noexcept { return d_; }
  int operator()(int i, int j) const { return entries_[static_cast<std::size_t>((i - 1) * d_ + (j - 1))]; }

 private:
  int d_;
  std::vector<int> entries_;
};

inline QForm build_q_form(const Permutation& p) { return QForm(p); }

// u^T Q v. Throws DimensionMismatch.
Rational q_evaluate(const QForm& q, std::span<const Rational> u, std::span<const Rational> v);
double q_evaluate(const QForm& q, std::span<const double> u, std::span<const double> v);

// Q(lambda, e_i): the translation applied by T_{lambda,pi} on the i-th interval.
Rational q_against_basis(const QForm& q, std::span<const Rational> u, int i);

}  // namespace teichlab
