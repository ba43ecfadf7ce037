#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpz_class;
  using Nested = mpz_class;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100,
  };
};

template <typename BinOp>
struct ScalarBinaryOpTraits<mpz_class, mpz_class, BinOp> {
  using ReturnType = mpz_class;
};

}  // namespace Eigen

namespace foundry {

using Int = mpz_class;
using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;

inline long to_long(const Int& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("integer too large for long");
  return x.get_si();
}

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Node counter for backtracking searches.  Exceeding the cap raises
// BudgetExceeded; it is never a silent truncation.
class Budget {
 public:
  explicit Budget(std::uint64_t cap) : cap_(cap) {}
  static std::uint64_t default_cap();
  Budget() : cap_(default_cap()) {}

  void tick(const char* what) {
    if (++used_ > cap_) throw BudgetExceeded(std::string(what) + ": search budget exceeded");
  }
  std::uint64_t used() const { return used_; }

 private:
  std::uint64_t cap_;
  std::uint64_t used_ = 0;
};

}  // namespace foundry
