#pragma once

#include <gmp.h>
#include <mpfr.h>

namespace fubm::detail {

// Owning handles for GMP/MPFR values.

class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t bits, double value = 0.0)
    {
        mpfr_init2(v_, bits);
        mpfr_set_d(v_, value, MPFR_RNDN);
    }
    BigFloat(BigFloat const& other)
    {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    BigFloat& operator=(BigFloat const& other)
    {
        if (this != &other) {
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

private:
    mpfr_t v_;
};

class BigInt {
public:
    explicit BigInt(unsigned long value = 0) { mpz_init_set_ui(v_, value); }
    BigInt(BigInt const&) = delete;
    BigInt& operator=(BigInt const&) = delete;
    ~BigInt() { mpz_clear(v_); }

    mpz_ptr get() { return v_; }
    mpz_srcptr get() const { return v_; }

private:
    mpz_t v_;
};

} // namespace fubm::detail
