#include "teichlab/permutation.hpp"

#include <sstream>

#include "teichlab/error.hpp"

namespace teichlab {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int d = size();
  if (d < 1) fail(Errc::InvalidArgument, "permutation must have at least one letter");
  inverse_.assign(static_cast<std::size_t>(d), 0);
  for (int i = 1; i <= d; ++i) {
    const int v = images_[static_cast<std::size_t>(i - 1)];
    if (v < 1 || v > d || inverse_[static_cast<std::size_t>(v - 1)] != 0) {
      fail(Errc::InvalidArgument, "images do not form a bijection of {1.." + std::to_string(d) + "}");
    }
    inverse_[static_cast<std::size_t>(v - 1)] = i;
  }
}

Permutation Permutation::identity(int d) {
  std::vector<int> im(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) im[static_cast<std::size_t>(i)] = i + 1;
  return Permutation(std::move(im));
}

Permutation Permutation::reversal(int d) {
  std::vector<int> im(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) im[static_cast<std::size_t>(i)] = d - i;
  return Permutation(std::move(im));
}

Permutation Permutation::inverse() const { return Permutation(inverse_); }

std::string Permutation::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < size(); ++i) os << (i ? "," : "") << images_[static_cast<std::size_t>(i)];
  os << ')';
  return os.str();
}

bool is_irreducible(const Permutation& p) {
  // pi({1..j}) == {1..j} iff max(pi(1..j)) == j.
  int running_max = 0;
  for (int j = 1; j < p.size(); ++j) {
    running_max = std::max(running_max, p(j));
    if (running_max == j) return false;
  }
  return true;
}

bool is_rotation(const Permutation& p) {
  const int d = p.size();
  for (int i = 1; i < d; ++i) {
    if (p(i + 1) != p(i) % d + 1) return false;
  }
  return true;
}

TypeWResult classify_type_w(const Permutation& p) {
  if (!is_irreducible(p)) fail(Errc::NotIrreducible, "type W is only defined for irreducible permutations: " + p.to_string());
  const int d = p.size();
  const int stop_low = p.inverse(1);
  TypeWResult out;
  int a = 1;
  out.trace.push_back(a);
  // The a_p are distinct before stopping, so d+1 entries is the hard ceiling.
  while (a != stop_low && a != d + 1) {
    if (static_cast<int>(out.trace.size()) > d + 1) {
      fail(Errc::Internal, "type W recursion did not reach its stop set within d+1 steps for " + p.to_string());
    }
    a = p.inverse(p(a) - 1) + 1;
    out.trace.push_back(a);
  }
  out.type_w = (a == stop_low);
  return out;
}

QForm::QForm(const Permutation& p) : d_(p.size()), entries_(static_cast<std::size_t>(d_ * d_), 0) {
  for (int i = 1; i <= d_; ++i) {
    for (int j = 1; j <= d_; ++j) {
      int v = 0;
      if (i > j && p(i) < p(j)) v = 1;
      if (i < j && p(i) > p(j)) v = -1;
      entries_[static_cast<std::size_t>((i - 1) * d_ + (j - 1))] = v;
    }
  }
}

namespace {

template <class T>
T q_eval_impl(const QForm& q, std::span<const T> u, std::span<const T> v) {
  const auto d = static_cast<std::size_t>(q.size());
  if (u.size() != d || v.size() != d) {
    fail(Errc::DimensionMismatch, "q_evaluate expects vectors of length " + std::to_string(d));
  }
  T acc = 0;
  for (int i = 1; i <= q.size(); ++i) {
    for (int j = 1; j <= q.size(); ++j) {
      const int m = q(i, j);
      if (m == 1) acc += u[static_cast<std::size_t>(i - 1)] * v[static_cast<std::size_t>(j - 1)];
      if (m == -1) acc -= u[static_cast<std::size_t>(i - 1)] * v[static_cast<std::size_t>(j - 1)];
    }
  }
  return acc;
}

}  // namespace

Rational q_evaluate(const QForm& q, std::span<const Rational> u, std::span<const Rational> v) {
  return q_eval_impl<Rational>(q, u, v);
}

double q_evaluate(const QForm& q, std::span<const double> u, std::span<const double> v) {
  return q_eval_impl<double>(q, u, v);
}

Rational q_against_basis(const QForm& q, std::span<const Rational> u, int i) {
  if (u.size() != static_cast<std::size_t>(q.size())) fail(Errc::DimensionMismatch, "q_against_basis length mismatch");
  if (i < 1 || i > q.size()) fail(Errc::InvalidArgument, "basis index out of range");
  Rational acc = 0;
  for (int k = 1; k <= q.size(); ++k) {
    const int m = q(k, i);
    if (m == 1) acc += u[static_cast<std::size_t>(k - 1)];
    if (m == -1) acc -= u[static_cast<std::size_t>(k - 1)];
  }
  return acc;
}

}  // namespace teichlab
