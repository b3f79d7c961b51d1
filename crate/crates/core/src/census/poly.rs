//! Dense polynomials over exact counts.
//!
//! The counter runs first over `u128` with checked arithmetic and falls back
//! to `BigUint` when a coefficient overflows.

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Count: Clone + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow>;
    fn checked_mul(&self, other: &Self) -> Result<Self, Overflow>;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn into_big(self) -> BigUint;
}

impl Count for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    #[inline]
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow> {
        u128::checked_add(*self, *other).ok_or(Overflow)
    }
    #[inline]
    fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        u128::checked_mul(*self, *other).ok_or(Overflow)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Count for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self + other)
    }
    fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self * other)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn into_big(self) -> BigUint {
        self
    }
}

pub(crate) type Poly<C> = Vec<C>;

/// (1 + x)^k.
pub(crate) fn binomial_row<C: Count>(k: usize) -> Result<Poly<C>, Overflow> {
    let mut row = vec![C::one()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(C::one());
        for w in row.windows(2) {
            next.push(w[0].checked_add(&w[1])?);
        }
        next.push(C::one());
        row = next;
    }
    Ok(row)
}

pub(crate) fn mul<C: Count>(a: &[C], b: &[C]) -> Result<Poly<C>, Overflow> {
    if a.len() == 1 && a[0].is_one() {
        return Ok(b.to_vec());
    }
    if b.len() == 1 && b[0].is_one() {
        return Ok(a.to_vec());
    }
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(&x.checked_mul(y)?)?;
        }
    }
    Ok(out)
}

/// `excluded + x * included`.
pub(crate) fn add_shifted<C: Count>(excluded: &[C], included: &[C]) -> Result<Poly<C>, Overflow> {
    let len = excluded.len().max(included.len() + 1);
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        let mut v = excluded.get(k).cloned().unwrap_or_else(C::zero);
        if k >= 1 {
            if let Some(inc) = included.get(k - 1) {
                v = v.checked_add(inc)?;
            }
        }
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_rows() {
        assert_eq!(binomial_row::<u128>(0).unwrap(), vec![1]);
        assert_eq!(binomial_row::<u128>(4).unwrap(), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn multiply_and_shift() {
        let a: Vec<u128> = vec![1, 1];
        let b: Vec<u128> = vec![1, 2];
        assert_eq!(mul(&a, &b).unwrap(), vec![1, 3, 2]);
        assert_eq!(add_shifted(&a, &b).unwrap(), vec![1, 2, 2]);
        assert_eq!(add_shifted::<u128>(&[1], &[1]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn overflow_is_detected() {
        let big: Vec<u128> = vec![u128::MAX];
        assert_eq!(mul(&big, &[2]), Err(Overflow));
        assert_eq!(add_shifted(&[0, u128::MAX], &[1]), Err(Overflow));
    }
}
