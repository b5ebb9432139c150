#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace liefox {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct input_error : error {
  using error::error;
};
struct structural_error : error {
  using error::error;
};
// A checked mathematical hypothesis failed: the inputs are well-formed but
// the claimed property does not hold. Verifiers map this to "refuted".
struct verification_error : error {
  using error::error;
};
// A bounded search ran out of room inside the truncation. The answer is
// inconclusive, never a certified absence.
struct exhaustion_error : error {
  using error::error;
};

// Ground field of a workbench instance: the rationals (p == 0) or GF(p).
struct FieldSpec {
  unsigned long p = 0;

  bool rational() const { return p == 0; }
  bool operator==(const FieldSpec&) const = default;

  static FieldSpec rationals() { return FieldSpec{}; }
  static FieldSpec prime(unsigned long p);

  std::string describe() const;
};

// Exact field element. Rational values are kept canonically reduced;
// prime-field values are canonical residues 0..p-1 with denominator 1.
class Scalar {
 public:
  Scalar() : p_(0) {}
  Scalar(const FieldSpec& f, long num, long den = 1);
  static Scalar parse(const FieldSpec& f, const std::string& text);

  unsigned long characteristic() const { return p_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar operator-() const;
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar inverse() const;
  std::string str() const;

 private:
  mpq_class v_;
  unsigned long p_;

  void canonicalize();
  unsigned long join(const Scalar& o) const;
};

}  // namespace liefox
