#ifndef UOS_TESTS_SUPPORT_HPP
#define UOS_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "uos/core.hpp"
#include "uos/models.hpp"

namespace uos::testing {

/// Wraps an operator and counts forward/adjoint applications.
template <class Scalar>
class CountingOperator final : public LinearOperator<Scalar> {
 public:
  explicit CountingOperator(const LinearOperator<Scalar>& inner) : inner_(inner) {}

  Index rows() const override { return inner_.rows(); }
  Index cols() const override { return inner_.cols(); }
  Vector<Scalar> apply(const Vector<Scalar>& x) const override {
    ++forward_count;
    return inner_.apply(x);
  }
  Vector<Scalar> apply_adjoint(const Vector<Scalar>& w) const override {
    ++adjoint_count;
    return inner_.apply_adjoint(w);
  }

  mutable long forward_count = 0;
  mutable long adjoint_count = 0;

 private:
  const LinearOperator<Scalar>& inner_;
};

template <class Scalar>
class CountingModel final : public UnionModel<Scalar> {
 public:
  explicit CountingModel(const UnionModel<Scalar>& inner) : inner_(inner) {}

  Index dimension() const override { return inner_.dimension(); }
  Index order() const override { return inner_.order(); }
  Vector<Scalar> project(const Vector<Scalar>& x) const override {
    ++project_count;
    return inner_.project(x);
  }
  bool contains(const Vector<Scalar>& x, double tol = 1e-9) const override {
    return inner_.contains(x, tol);
  }
  Vector<Scalar> sample(std::mt19937_64& rng, double norm) const override {
    return inner_.sample(rng, norm);
  }
  std::string describe() const override { return inner_.describe(); }

  mutable long project_count = 0;

 private:
  const UnionModel<Scalar>& inner_;
};

/// Independent lexicographic combination enumerator (oracle-side duplicate of
/// the library's; kept separate so oracle checks do not share the code path
/// they verify).
inline std::vector<std::vector<Index>> all_subsets(Index n, Index k) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> cur;
  std::function<void(Index)> rec = [&](Index start) {
    if (static_cast<Index>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (Index i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace uos::testing

#endif  // UOS_TESTS_SUPPORT_HPP
