#include "liefox/field.hpp"

namespace liefox {

static bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

FieldSpec FieldSpec::prime(unsigned long p) {
  if (!is_prime(p)) throw input_error("field modulus " + std::to_string(p) + " is not prime");
  return FieldSpec{p};
}

std::string FieldSpec::describe() const {
  return rational() ? "Q" : "GF(" + std::to_string(p) + ")";
}

Scalar::Scalar(const FieldSpec& f, long num, long den) : v_(num, den), p_(f.p) {
  if (den == 0) throw input_error("zero denominator");
  v_.canonicalize();
  canonicalize();
}

void Scalar::canonicalize() {
  if (p_ == 0) return;
  mpz_class pz(static_cast<unsigned long>(p_));
  mpz_class num = v_.get_num(), den = v_.get_den();
  if (den != 1) {
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()) == 0)
      throw input_error("denominator not invertible mod " + std::to_string(p_));
    num *= inv;
  }
  mpz_class r = num % pz;
  if (r < 0) r += pz;
  v_ = mpq_class(r);
}

unsigned long Scalar::join(const Scalar& o) const {
  if (p_ == o.p_) return p_;
  // Default-constructed zeros are field-agnostic and adopt the other side.
  if (p_ == 0 && v_ == 0) return o.p_;
  if (o.p_ == 0 && o.v_ == 0) return p_;
  throw structural_error("mixed ground fields in scalar arithmetic");
}

Scalar& Scalar::operator+=(const Scalar& o) {
  p_ = join(o);
  v_ += o.v_;
  canonicalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  p_ = join(o);
  v_ -= o.v_;
  canonicalize();
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  p_ = join(o);
  v_ *= o.v_;
  canonicalize();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw structural_error("division by zero scalar");
  p_ = join(o);
  if (p_ == 0) {
    v_ /= o.v_;
  } else {
    *this *= o.inverse();
  }
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.v_ = -r.v_;
  r.canonicalize();
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  if (p_ != o.p_ && !(v_ == 0 && o.v_ == 0)) join(o);
  return v_ == o.v_;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw structural_error("inverse of zero scalar");
  Scalar r = *this;
  if (p_ == 0) {
    r.v_ = 1 / v_;
    return r;
  }
  mpz_class pz(static_cast<unsigned long>(p_)), inv;
  mpz_class num = v_.get_num();
  mpz_invert(inv.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t());
  r.v_ = mpq_class(inv);
  r.canonicalize();
  return r;
}

std::string Scalar::str() const {
  if (p_ != 0 || v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Scalar Scalar::parse(const FieldSpec& f, const std::string& text) {
  if (text.empty()) throw input_error("empty scalar literal");
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && i == 0);
    if (!ok) throw input_error("bad scalar literal '" + text + "'");
  }
  Scalar r;
  r.p_ = f.p;
  try {
    r.v_ = mpq_class(text);
  } catch (const std::invalid_argument&) {
    throw input_error("bad scalar literal '" + text + "'");
  }
  if (r.v_.get_den() == 0) throw input_error("zero denominator in '" + text + "'");
  r.v_.canonicalize();
  r.canonicalize();
  return r;
}

}  // namespace liefox
