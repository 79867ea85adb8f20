//! Exact arithmetic in Q(ζ_e), stored in the power basis 1, ζ, …, ζ^{φ(e)−1}
//! modulo the cyclotomic polynomial Φ_e.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{divisors, euler_phi, gcd, Rational};
use crate::error::{Error, Result};

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of Φ_e in increasing degree, obtained by dividing x^e − 1 by
/// Φ_d for every proper divisor d of e.
pub fn cyclotomic_polynomial(e: u64) -> Vec<i64> {
    cyclotomic_polynomial_shared(e).as_ref().clone()
}

pub(crate) fn cyclotomic_polynomial_shared(e: u64) -> Arc<Vec<i64>> {
    assert!(e >= 1, "cyclotomic_polynomial: level must be positive");
    if let Some(p) = phi_cache().read().unwrap().get(&e) {
        return Arc::clone(p);
    }
    let mut num = vec![0i64; e as usize + 1];
    num[0] = -1;
    num[e as usize] = 1;
    for d in divisors(e) {
        if d == e {
            continue;
        }
        let den = cyclotomic_polynomial_shared(d);
        num = exact_div_monic(&num, &den);
    }
    let arc = Arc::new(num);
    // Concurrent builders may race here; the values are identical.
    phi_cache().write().unwrap().insert(e, Arc::clone(&arc));
    arc
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Reduces a polynomial (increasing degree) modulo the monic Φ in place and
/// truncates it to `deg Φ` coefficients.
fn reduce_in_place<T>(poly: &mut Vec<T>, phi: &[i64], from: impl Fn(i64) -> T)
where
    T: Clone + Zero + Sub<Output = T> + for<'a> Mul<&'a T, Output = T>,
{
    let d = phi.len() - 1;
    if poly.len() <= d {
        poly.resize(d, T::zero());
        return;
    }
    for i in (d..poly.len()).rev() {
        if poly[i].is_zero() {
            continue;
        }
        let c = poly[i].clone();
        for (j, &pj) in phi.iter().enumerate().take(d) {
            if pj != 0 {
                let t = from(pj) * &c;
                poly[i - d + j] = poly[i - d + j].clone() - t;
            }
        }
        poly[i] = T::zero();
    }
    poly.truncate(d);
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// An element of the cyclotomic field Q(ζ_level).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    level: u64,
    coeffs: Vec<Rational>,
}

impl CycNumber {
    pub fn zero(level: u64) -> Self {
        CycNumber {
            level,
            coeffs: vec![Rational::zero(); euler_phi(level) as usize],
        }
    }

    pub fn from_rational(level: u64, q: Rational) -> Self {
        let mut z = Self::zero(level);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(level: u64, n: i64) -> Self {
        Self::from_rational(level, rat(n))
    }

    pub fn one(level: u64) -> Self {
        Self::from_int(level, 1)
    }

    /// ζ_level^k for any integer k.
    pub fn zeta_pow(level: u64, k: i64) -> Self {
        let mut v = vec![Rational::zero(); level as usize];
        v[(k as i128).rem_euclid(level as i128) as usize] = Rational::one();
        Self::from_power_coeffs(level, v)
    }

    pub fn zeta(level: u64) -> Self {
        Self::zeta_pow(level, 1)
    }

    /// Builds Σ c_j ζ^j from coefficients on arbitrary powers j (any
    /// length); powers are first folded mod `level`.
    pub fn from_power_coeffs(level: u64, coeffs: Vec<Rational>) -> Self {
        let e = level as usize;
        let mut folded: Vec<Rational> = vec![Rational::zero(); e.max(1)];
        for (j, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                folded[j % e] += c;
            }
        }
        let phi = cyclotomic_polynomial_shared(level);
        reduce_in_place(&mut folded, &phi, rat);
        CycNumber {
            level,
            coeffs: folded,
        }
    }

    /// Builds (Σ_j n_j ζ^j) / den from integer coefficients on the powers
    /// ζ^0, …, ζ^{level−1}.
    pub fn from_integer_power_sums(level: u64, sums: &[BigInt], den: &BigInt) -> Self {
        let e = level as usize;
        let mut folded: Vec<BigInt> = vec![BigInt::zero(); e.max(1)];
        for (j, c) in sums.iter().enumerate() {
            folded[j % e] += c;
        }
        let phi = cyclotomic_polynomial_shared(level);
        reduce_in_place(&mut folded, &phi, BigInt::from);
        CycNumber {
            level,
            coeffs: folded
                .into_iter()
                .map(|c| Rational::new(c, den.clone()))
                .collect(),
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value when every non-constant coordinate vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Embeds into Q(ζ_target) via ζ_level = ζ_target^{target/level}.
    pub fn lift(&self, target: u64) -> Result<Self> {
        if target % self.level != 0 {
            return Err(Error::LevelMismatch(self.level, target));
        }
        if target == self.level {
            return Ok(self.clone());
        }
        let step = (target / self.level) as usize;
        let mut v = vec![Rational::zero(); target as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Ok(Self::from_power_coeffs(target, v))
    }

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        Ok(CycNumber {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        Ok(CycNumber {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let n = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let phi = cyclotomic_polynomial_shared(self.level);
        reduce_in_place(&mut prod, &phi, rat);
        Ok(CycNumber {
            level: self.level,
            coeffs: prod,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        self.try_mul(&other.inverse()?)
    }

    /// Multiplicative inverse: the product of the non-trivial conjugates
    /// divided by the norm.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut cofactor = CycNumber::one(self.level);
        for k in 2..self.level.max(2) {
            if gcd(k, self.level) == 1 {
                cofactor = cofactor.try_mul(&self.galois_apply_unchecked(k))?;
            }
        }
        let norm = self
            .try_mul(&cofactor)?
            .as_rational()
            .ok_or_else(|| Error::InternalInconsistency("norm is not rational".into()))?;
        Ok(cofactor.scale(&norm.recip()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycNumber {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// The automorphism σ_k: ζ ↦ ζ^k.
    pub fn galois_apply(&self, k: i64) -> Result<Self> {
        let kr = (k as i128).rem_euclid(self.level as i128) as u64;
        if gcd(kr, self.level) != 1 {
            return Err(Error::NotCoprime(k, self.level));
        }
        Ok(self.galois_apply_unchecked(kr))
    }

    fn galois_apply_unchecked(&self, k: u64) -> Self {
        let e = self.level;
        let mut v = vec![Rational::zero(); e as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[((i as u128 * k as u128) % e as u128) as usize] += c;
            }
        }
        Self::from_power_coeffs(e, v)
    }

    /// N_{Q(ζ_e)/Q}(x): product of σ_k(x) over k coprime to e. Computed on
    /// integer coordinates after clearing the common denominator.
    pub fn absolute_norm(&self) -> Result<Rational> {
        let e = self.level;
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let phi = cyclotomic_polynomial_shared(e);
        let deg = ints.len();
        let conj = |k: u64| -> Vec<BigInt> {
            let mut v = vec![BigInt::zero(); e as usize];
            for (i, c) in ints.iter().enumerate() {
                v[((i as u128 * k as u128) % e as u128) as usize] += c;
            }
            reduce_in_place(&mut v, &phi, BigInt::from);
            v
        };
        let mut acc: Vec<BigInt> = {
            let mut one = vec![BigInt::zero(); deg];
            one[0] = BigInt::one();
            one
        };
        let mut count = 0u32;
        for k in 1..e.max(2) {
            if gcd(k, e) != 1 {
                continue;
            }
            let c = conj(k);
            let mut prod = vec![BigInt::zero(); 2 * deg - 1];
            for (i, a) in acc.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in c.iter().enumerate() {
                    if !b.is_zero() {
                        prod[i + j] += a * b;
                    }
                }
            }
            reduce_in_place(&mut prod, &phi, BigInt::from);
            acc = prod;
            count += 1;
        }
        if acc.iter().skip(1).any(|c| !c.is_zero()) {
            return Err(Error::InternalInconsistency(format!(
                "norm of a level-{e} element is not rational"
            )));
        }
        Ok(Rational::new(acc[0].clone(), num_traits::pow(den, count as usize)))
    }

    /// Evaluates an integer polynomial (increasing degree) at this element.
    pub fn eval_poly(&self, poly: &[i64]) -> Self {
        let mut acc = CycNumber::zero(self.level);
        for &c in poly.iter().rev() {
            acc = acc.try_mul(self).expect("same level");
            acc.coeffs[0] += rat(c);
        }
        acc
    }

    /// Complex conjugate σ_{−1}.
    pub fn conjugate(&self) -> Self {
        self.galois_apply_unchecked(self.level.max(2) - 1)
    }
}

impl PartialEq<Rational> for CycNumber {
    fn eq(&self, other: &Rational) -> bool {
        self.as_rational().as_ref() == Some(other)
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber[{}](", self.level)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z{}", self.level)?;
                    } else {
                        write!(f, "z{}^{}", self.level, i)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<'a> $tr<&'a CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &'a CycNumber) -> CycNumber {
                self.$inner(rhs).expect("cyclotomic operands must share a level")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Arithmetic operation selector for [`cyc_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn cyc_arith(a: &CycNumber, b: &CycNumber, op: CycOp) -> Result<CycNumber> {
    match op {
        CycOp::Add => a.try_add(b),
        CycOp::Sub => a.try_sub(b),
        CycOp::Mul => a.try_mul(b),
        CycOp::Div => a.try_div(b),
    }
}

/// π_m = 2 + ζ_{2^m} + ζ_{2^m}^{−1}, a totally real element of norm 2.
pub fn pi_element(m: u32) -> CycNumber {
    assert!(m >= 2, "pi_element: m must be at least 2");
    let e = 1u64 << m;
    let mut v = vec![Rational::zero(); e as usize];
    v[0] = rat(2);
    v[1] += Rational::one();
    v[e as usize - 1] += Rational::one();
    CycNumber::from_power_coeffs(e, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    #[test]
    fn cyclotomic_polynomial_examples() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len(), 49);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn phi_vanishes_at_zeta() {
        for e in 1..=100 {
            let z = CycNumber::zeta(e);
            assert!(z.eval_poly(&cyclotomic_polynomial(e)).is_zero(), "level {e}");
        }
    }

    #[test]
    fn arith_examples() {
        let i = CycNumber::zeta(4);
        assert_eq!(&i * &i, rational(-1, 1));
        let z8 = CycNumber::zeta(8);
        let s = &z8 + &z8.conjugate();
        let two = CycNumber::from_int(8, 2);
        assert_eq!(&(&two + &s) * &(&two - &s), rational(2, 1));
        let x = &CycNumber::one(5) + &CycNumber::zeta(5);
        assert_eq!(cyc_arith(&x, &x, CycOp::Div).unwrap(), rational(1, 1));
        assert!(matches!(
            cyc_arith(&x, &CycNumber::zero(5), CycOp::Div),
            Err(Error::DivisionByZero)
        ));
        assert!(matches!(
            cyc_arith(&x, &CycNumber::one(4), CycOp::Add),
            Err(Error::LevelMismatch(5, 4))
        ));
    }

    #[test]
    fn galois_examples() {
        let i = CycNumber::zeta(4);
        assert_eq!(i.galois_apply(3).unwrap(), -&i);
        for e in [5u64, 7, 8, 12, 15] {
            let z = CycNumber::zeta(e);
            let r = &z + &z.conjugate();
            assert_eq!(r.galois_apply(e as i64 - 1).unwrap(), r);
        }
        assert!(matches!(i.galois_apply(2), Err(Error::NotCoprime(2, 4))));
    }

    #[test]
    fn galois_composition_and_roots() {
        for e in [7u64, 9, 12, 16, 20, 21] {
            let x = CycNumber::from_power_coeffs(
                e,
                (0..e as i64).map(|j| rational(j * j - 3, j + 1)).collect(),
            );
            let phi = cyclotomic_polynomial(e);
            for k in 1..e {
                if gcd(k, e) != 1 {
                    continue;
                }
                assert!(CycNumber::zeta(e)
                    .galois_apply(k as i64)
                    .unwrap()
                    .eval_poly(&phi)
                    .is_zero());
                for l in 1..e {
                    if gcd(l, e) != 1 {
                        continue;
                    }
                    let lhs = x.galois_apply(l as i64).unwrap().galois_apply(k as i64).unwrap();
                    let rhs = x.galois_apply((k * l % e) as i64).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            assert_eq!(x.galois_apply(1).unwrap(), x);
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(CycNumber::from_int(4, 5).absolute_norm().unwrap(), rational(25, 1));
        let one_plus_i = &CycNumber::one(4) + &CycNumber::zeta(4);
        assert_eq!(one_plus_i.absolute_norm().unwrap(), rational(2, 1));
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let x = &CycNumber::one(p) - &CycNumber::zeta(p);
            assert_eq!(x.absolute_norm().unwrap(), rational(p as i64, 1));
        }
        let half = CycNumber::from_rational(6, rational(1, 2));
        assert_eq!(half.absolute_norm().unwrap(), rational(1, 4));
    }

    #[test]
    fn pi_elements() {
        assert_eq!(pi_element(2), rational(2, 1));
        let z8 = CycNumber::zeta(8);
        assert_eq!(pi_element(3), &(&CycNumber::from_int(8, 2) + &z8) + &z8.conjugate());
        for m in 3..=6u32 {
            let p = pi_element(m);
            let two = CycNumber::from_int(p.level(), 2);
            let shifted = &p - &two;
            let prev = pi_element(m - 1).lift(p.level()).unwrap();
            assert_eq!(&shifted * &shifted, prev, "recursion at m={m}");
        }
    }

    #[test]
    fn lift_preserves_arithmetic() {
        let z = CycNumber::zeta(3);
        let l = z.lift(12).unwrap();
        assert_eq!(l, CycNumber::zeta_pow(12, 4));
        assert_eq!(&l * &l, (&z * &z).lift(12).unwrap());
        assert!(z.lift(10).is_err());
    }
}
