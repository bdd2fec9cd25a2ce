#include "sampling.hpp"

namespace starinv::detail {

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::uint64_t p : parts) {
    // splitmix64 finalizer over the running state
    h ^= p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    std::uint64_t z = h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    h = z ^ (z >> 31);
  }
  return h;
}

NumericElement gaussian_element(const FDAlgebra& A, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  NumericElement e = NumericElement::zero(A);
  for (std::size_t b : A.canonical_order()) {
    auto& m = e.blocks[b];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double re = g(rng);
        double im = g(rng);
        m(i, j) = {re, im};
      }
  }
  return e;
}

namespace {

NumericElement scale_to(NumericElement e, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double target = radius * u(rng);
  const double n = operator_norm(e);
  if (n == 0) return e;
  return std::complex<double>(target / n) * e;
}

}  // namespace

NumericElement random_element(const FDAlgebra& A, double radius, std::mt19937_64& rng) {
  return scale_to(gaussian_element(A, rng), radius, rng);
}

NumericElement random_self_adjoint(const FDAlgebra& A, double radius, std::mt19937_64& rng) {
  NumericElement g = gaussian_element(A, rng);
  return scale_to(g + adjoint(g), radius, rng);
}

std::vector<NumericElement> diagonal_units(const FDAlgebra& A) {
  std::vector<NumericElement> out;
  for (std::size_t b : A.canonical_order())
    for (int i = 0; i < A.block(b); ++i) {
      NumericElement e = NumericElement::zero(A);
      e.blocks[b](i, i) = 1.0;
      out.push_back(std::move(e));
    }
  return out;
}

}  // namespace starinv::detail
