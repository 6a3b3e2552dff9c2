//! Exact factorials and Clebsch–Gordan coefficients (Racah formula,
//! Condon–Shortley phases).

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::halfint::HalfInt;
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Largest factorial argument kept in the exact table.
pub const MAX_FACTORIAL: usize = 96;

fn factorials() -> &'static [BigUint] {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(MAX_FACTORIAL + 1);
        v.push(BigUint::one());
        for n in 1..=MAX_FACTORIAL {
            let next = &v[n - 1] * BigUint::from(n);
            v.push(next);
        }
        v
    })
}

/// Exact `n!`.
pub fn factorial(n: usize) -> &'static BigUint {
    assert!(n <= MAX_FACTORIAL, "factorial argument {n} beyond table");
    &factorials()[n]
}

fn fact_int(n: i32) -> BigInt {
    debug_assert!(n >= 0);
    BigInt::from(factorial(n as usize).clone())
}

/// A real number of the form `sign · √square` with `square` rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSqrt {
    pub sign: i8,
    pub square: BigRational,
}

impl SignedSqrt {
    pub fn zero() -> Self {
        SignedSqrt { sign: 0, square: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_real<T: Real>(&self) -> T {
        if self.sign == 0 {
            return T::zero();
        }
        let sq = self.square.to_f64().expect("finite rational");
        let v = T::lit(sq.sqrt());
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }
}

/// Checks that `|m| ≤ j` and `j − m` is an integer.
pub(crate) fn check_pair(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return domain(format!("negative angular momentum j = {j}"));
    }
    if m.abs() > j || (j.twice() - m.twice()) % 2 != 0 {
        return domain(format!("invalid projection m = {m} for j = {j}"));
    }
    if j.twice() as u32 > super::wigner::MAX_TWO_J {
        return domain(format!("j = {j} is above the supported maximum"));
    }
    Ok(())
}

/// `⟨j1 m1; j2 m2 | J M⟩` as an exact signed square root.
///
/// Returns zero when `M ≠ m1 + m2` or the triangle rule fails.
pub fn clebsch_gordan_exact(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<SignedSqrt> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j, m)?;
    if m1 + m2 != m {
        return Ok(SignedSqrt::zero());
    }
    let (t1, t2, tj) = (j1.twice(), j2.twice(), j.twice());
    if tj < (t1 - t2).abs() || tj > t1 + t2 || (t1 + t2 + tj) % 2 != 0 {
        return Ok(SignedSqrt::zero());
    }
    let (tm1, tm2, tm) = (m1.twice(), m2.twice(), m.twice());

    // All of these are integers once the checks above pass.
    let a = (tj + t1 - t2) / 2;
    let b = (tj - t1 + t2) / 2;
    let c = (t1 + t2 - tj) / 2;
    let d = (t1 + t2 + tj) / 2 + 1;
    let j1mm1 = (t1 - tm1) / 2;
    let j1pm1 = (t1 + tm1) / 2;
    let j2mm2 = (t2 - tm2) / 2;
    let j2pm2 = (t2 + tm2) / 2;
    let jpm = (tj + tm) / 2;
    let jmm = (tj - tm) / 2;
    let e = (tj - t2 + tm1) / 2;
    let f = (tj - t1 - tm2) / 2;

    let prefactor_num = BigInt::from(tj + 1)
        * fact_int(a)
        * fact_int(b)
        * fact_int(c)
        * fact_int(jpm)
        * fact_int(jmm)
        * fact_int(j1mm1)
        * fact_int(j1pm1)
        * fact_int(j2mm2)
        * fact_int(j2pm2);
    let prefactor = BigRational::new(prefactor_num, fact_int(d));

    let k_min = 0.max(-e).max(-f);
    let k_max = c.min(j1mm1).min(j2pm2);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = fact_int(k)
            * fact_int(c - k)
            * fact_int(j1mm1 - k)
            * fact_int(j2pm2 - k)
            * fact_int(e + k)
            * fact_int(f + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(SignedSqrt::zero());
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    let square = &sum * &sum * prefactor;
    Ok(SignedSqrt { sign, square })
}

/// `⟨j1 m1; j2 m2 | J M⟩` in the requested precision.
pub fn clebsch_gordan<T: Real>(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<T> {
    Ok(clebsch_gordan_exact(j1, m1, j2, m2, j, m)?.to_real())
}
