//! Quadratic fields through binary quadratic forms: class numbers, ideal
//! principality, prime splitting, ideal square roots of rational integers,
//! and the norm of the fundamental unit.
//!
//! An ideal [a, (b + √D)/2] of the maximal order corresponds to the form
//! (a, b, (b² − D)/4a). Principality is tested in the wide sense: an ideal
//! is principal iff its form represents +1 or −1.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::arith::{factorize, is_fundamental_discriminant, isqrt};
use crate::characters::kronecker;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The form (1, D mod 2, (D mod 2 − D)/4).
    pub fn principal(d: i64) -> Self {
        let b = d.rem_euclid(2);
        QuadForm::new(1, b, (b * b - d) / 4)
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Reducedness: |b| ≤ a ≤ c (b ≥ 0 on the boundary) for D < 0;
    /// 0 < b < √D and √D − b < 2|a| < √D + b for D > 0.
    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        if d < 0 {
            let (a, b, c) = (self.a, self.b, self.c);
            a > 0 && b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
        } else {
            let s = isqrt(d as u64) as i64;
            let a2 = 2 * self.a.abs();
            let b = self.b;
            // With √D irrational: b < √D ⟺ b ≤ s; x < √D ⟺ x ≤ s for integers.
            b > 0 && b <= s && (a2 + b) > s && (a2 - b) <= s
        }
    }

    /// Action of [[1,1],[0,1]] (translation) on the form.
    pub fn translate(&self, t: i64) -> Self {
        QuadForm::new(
            self.a,
            self.b + 2 * self.a * t,
            self.a * t * t + self.b * t + self.c,
        )
    }

    /// Action of [[0,−1],[1,0]].
    pub fn swap(&self) -> Self {
        QuadForm::new(self.c, -self.b, self.a)
    }

    /// The reduced form properly equivalent to a positive definite form.
    pub fn reduce_definite(&self) -> Self {
        let mut f = *self;
        loop {
            // Normalize b into (−a, a].
            let two_a = 2 * f.a;
            let t = (f.a - f.b).div_euclid(two_a);
            f = f.translate(t);
            if f.a > f.c {
                f = f.swap();
                continue;
            }
            if f.a == f.c && f.b < 0 {
                f.b = -f.b;
            }
            return f;
        }
    }

    /// One step of the reduction operator ρ on indefinite forms.
    pub fn rho(&self) -> Self {
        let d = self.discriminant();
        let s = isqrt(d as u64) as i64;
        let c = self.c;
        let two_c = 2 * c.abs();
        let b_new = if c.abs() as f64 > (d as f64).sqrt() {
            // −|c| < b' ≤ |c|, b' ≡ −b mod 2|c|
            let mut r = (-self.b).rem_euclid(two_c);
            if r > c.abs() {
                r -= two_c;
            }
            r
        } else {
            // √D − 2|c| < b' < √D, b' ≡ −b mod 2|c|
            s - (s + self.b).rem_euclid(two_c)
        };
        QuadForm::new(c, b_new, (b_new * b_new - d) / (4 * c))
    }

    /// A reduced form properly equivalent to this indefinite form.
    pub fn reduce_indefinite(&self) -> Self {
        let mut f = *self;
        let mut steps = 0u64;
        while !f.is_reduced() {
            f = f.rho();
            steps += 1;
            assert!(steps < 1_000_000, "indefinite reduction did not terminate");
        }
        f
    }

    pub fn reduce(&self) -> Self {
        if self.discriminant() < 0 {
            self.reduce_definite()
        } else {
            self.reduce_indefinite()
        }
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Ideal `content · [a, (b + √D)/2]` of the maximal order of discriminant D.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuadIdeal {
    pub discriminant: i64,
    pub content: u64,
    pub a: u64,
    pub b: i64,
}

impl QuadIdeal {
    /// The primitive ideal [a, (b + √D)/2]; requires b² ≡ D mod 4a.
    pub fn new(d: i64, a: u64, b: i64) -> Result<Self> {
        Self::with_content(d, 1, a, b)
    }

    pub fn with_content(d: i64, content: u64, a: u64, b: i64) -> Result<Self> {
        let a_i = a as i64;
        if a == 0 || content == 0 || (b * b - d).rem_euclid(4 * a_i) != 0 {
            return Err(Error::InvalidArgument(format!(
                "[{a}, ({b} + √{d})/2] is not an ideal"
            )));
        }
        // Normal form: b in (−a, a].
        let mut b = b.rem_euclid(2 * a_i);
        if b > a_i {
            b -= 2 * a_i;
        }
        Ok(QuadIdeal {
            discriminant: d,
            content,
            a,
            b,
        })
    }

    pub fn unit(d: i64) -> Self {
        QuadIdeal::new(d, 1, d.rem_euclid(2)).expect("unit ideal")
    }

    pub fn norm(&self) -> u64 {
        self.content * self.content * self.a
    }

    /// The form attached to the primitive part.
    pub fn form(&self) -> QuadForm {
        let a = self.a as i64;
        QuadForm::new(a, self.b, (self.b * self.b - self.discriminant) / (4 * a))
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.content != 1 {
            write!(f, "{}·", self.content)?;
        }
        write!(f, "[{}, ({} + √{})/2]", self.a, self.b, self.discriminant)
    }
}

fn check_fundamental(d: i64) -> Result<()> {
    if is_fundamental_discriminant(d) {
        Ok(())
    } else {
        Err(Error::NotFundamentalDiscriminant(d))
    }
}

/// All reduced forms of discriminant D.
pub fn reduced_forms(d: i64) -> Vec<QuadForm> {
    let mut out = Vec::new();
    if d < 0 {
        let amax = isqrt((-d / 3) as u64) as i64;
        for a in 1..=amax {
            for b in -a + 1..=a {
                if (b - d).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let f = QuadForm::new(a, b, num / (4 * a));
                if f.is_reduced() {
                    out.push(f);
                }
            }
        }
    } else {
        let s = isqrt(d as u64) as i64;
        for b in 1..=s {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let n = (d - b * b) / 4;
            for abs_a in 1..=n {
                if n % abs_a != 0 {
                    continue;
                }
                for a in [abs_a, -abs_a] {
                    let f = QuadForm::new(a, b, -n / a);
                    if f.is_reduced() {
                        out.push(f);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// The ρ-cycle of a reduced indefinite form.
pub fn cycle(f: &QuadForm) -> Vec<QuadForm> {
    let d = f.discriminant();
    let bound = cycle_bound(d);
    let mut out = vec![*f];
    let mut g = f.rho();
    while g != *f {
        out.push(g);
        if out.len() as u64 > bound {
            panic!("ρ-cycle of {f} exceeds the period bound {bound}");
        }
        g = g.rho();
    }
    out
}

/// Upper bound on the length of a ρ-cycle, O(√D log D) with slack.
fn cycle_bound(d: i64) -> u64 {
    let x = d as f64;
    (4.0 * x.sqrt() * (x.ln() + 2.0)) as u64 + 16
}

/// Narrow class number: the number of proper equivalence classes of forms,
/// i.e. reduced forms for D < 0 and ρ-cycles of reduced forms for D > 0.
pub fn narrow_class_number(d: i64) -> Result<u64> {
    check_fundamental(d)?;
    let forms = reduced_forms(d);
    if d < 0 {
        return Ok(forms.len() as u64);
    }
    let mut seen: HashSet<QuadForm> = HashSet::new();
    let mut cycles = 0;
    for f in &forms {
        if seen.contains(f) {
            continue;
        }
        cycles += 1;
        for g in cycle(f) {
            seen.insert(g);
        }
    }
    Ok(cycles)
}

/// Wide class number h(D).
pub fn class_number(d: i64) -> Result<u64> {
    let narrow = narrow_class_number(d)?;
    if d < 0 || fundamental_unit_norm(d)? == -1 {
        Ok(narrow)
    } else {
        Ok(narrow / 2)
    }
}

/// Period length of the continued fraction of ω = (D mod 2 + √D)/2.
pub fn continued_fraction_period(d: i64) -> Result<u64> {
    if d <= 0 {
        return Err(Error::InvalidArgument(format!("{d} is not positive")));
    }
    let s = isqrt(d as u64) as i128;
    let d = d as i128;
    let bound = cycle_bound(d as i64);
    let (mut p, mut q) = (d.rem_euclid(2), 2i128);
    // One step to enter the purely periodic part.
    let step = |p: i128, q: i128| {
        let a = (p + s).div_euclid(q);
        let p2 = a * q - p;
        let q2 = (d - p2 * p2) / q;
        (p2, q2)
    };
    (p, q) = step(p, q);
    let start = (p, q);
    let mut len = 0u64;
    loop {
        if q <= 0 {
            return Err(Error::InternalInconsistency(format!(
                "non-positive denominator in the expansion for D = {d}"
            )));
        }
        (p, q) = step(p, q);
        len += 1;
        if (p, q) == start {
            return Ok(len);
        }
        if len > bound {
            return Err(Error::InternalInconsistency(format!(
                "continued fraction period for D = {d} exceeds {bound}"
            )));
        }
    }
}

/// Norm of the fundamental unit of Q(√D), from the parity of the period of
/// the continued fraction of ω.
pub fn fundamental_unit_norm(d: i64) -> Result<i32> {
    check_fundamental(d)?;
    if d < 0 {
        return Err(Error::InvalidArgument(format!("{d} is negative")));
    }
    Ok(if continued_fraction_period(d)? % 2 == 1 {
        -1
    } else {
        1
    })
}

/// Wide principality of an ideal.
pub fn is_principal(ideal: &QuadIdeal) -> bool {
    let f = ideal.form().reduce();
    if ideal.discriminant < 0 {
        f.a == 1
    } else {
        cycle(&f).iter().any(|g| g.a.abs() == 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

fn ideal_above(d: i64, n: u64) -> QuadIdeal {
    let n_i = n as i64;
    let b = (0..2 * n_i)
        .find(|&b| (b - d).rem_euclid(2) == 0 && (b * b - d).rem_euclid(4 * n_i) == 0)
        .expect("ideal of this norm exists");
    QuadIdeal::new(d, n, b).expect("valid ideal")
}

/// Decomposition type of a rational prime, with a prime ideal above it when
/// it is not inert.
pub fn split_prime(d: i64, p: u64) -> (Splitting, Option<QuadIdeal>) {
    match kronecker(d, p) {
        0 => (Splitting::Ramified, Some(ideal_above(d, p))),
        1 => (Splitting::Split, Some(ideal_above(d, p))),
        _ => (Splitting::Inert, None),
    }
}

/// The ideal 𝔞 with (n) = 𝔞², if every prime ideal occurs in (n) to an even
/// power. Split and inert primes need even rational valuation; a ramified
/// p contributes 𝔭^{v_p(n)}, since (p) = 𝔭².
pub fn ideal_sqrt_of_element(d: i64, n: i64) -> Option<QuadIdeal> {
    if n == 0 {
        return None;
    }
    let mut content = 1u64;
    let mut ramified_part = 1u64;
    for (p, v) in factorize(n.unsigned_abs()) {
        match kronecker(d, p) {
            0 => {
                content *= p.pow(v / 2);
                if v % 2 == 1 {
                    ramified_part *= p;
                }
            }
            _ => {
                if v % 2 == 1 {
                    return None;
                }
                content *= p.pow(v / 2);
            }
        }
    }
    let prim = ideal_above(d, ramified_part);
    Some(QuadIdeal {
        content,
        ..prim
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number(-4).unwrap(), 1);
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(reduced_forms(-23), vec![
            QuadForm::new(1, 1, 6),
            QuadForm::new(2, -1, 3),
            QuadForm::new(2, 1, 3)
        ]);
        assert_eq!(class_number(40).unwrap(), 2);
        assert_eq!(class_number(-20).unwrap(), 2);
        assert_eq!(class_number(136).unwrap(), 2);
        assert_eq!(narrow_class_number(136).unwrap(), 4);
        assert_eq!(class_number(12).unwrap(), 1);
        assert_eq!(narrow_class_number(12).unwrap(), 2);
        assert_eq!(class_number(20), Err(Error::NotFundamentalDiscriminant(20)));
    }

    #[test]
    fn definite_reduction_is_a_class_invariant() {
        for f in reduced_forms(-84) {
            // Transport by SL2(Z) generators and reduce back.
            let g = f.translate(3).swap().translate(-2).swap().translate(5);
            assert_eq!(g.discriminant(), -84);
            assert_eq!(g.reduce(), f);
        }
    }

    #[test]
    fn unit_norm_examples() {
        assert_eq!(fundamental_unit_norm(8).unwrap(), -1);
        assert_eq!(fundamental_unit_norm(136).unwrap(), 1);
        assert_eq!(fundamental_unit_norm(5).unwrap(), -1);
        assert_eq!(fundamental_unit_norm(12).unwrap(), 1);
        assert_eq!(continued_fraction_period(136).unwrap(), 4);
    }

    /// Smallest solution of x² − D y² = ±4 by search over y, as an
    /// independent route to the unit norm for small D.
    fn brute_unit_norm(d: i64) -> Option<i32> {
        for y in 1i64..2_000_000 {
            let t = d as i128 * (y as i128) * (y as i128);
            for (sign, rhs) in [(-1, t - 4), (1, t + 4)] {
                if rhs < 0 {
                    continue;
                }
                let x = isqrt(rhs as u64) as i128;
                if x * x == rhs {
                    return Some(sign);
                }
            }
        }
        None
    }

    #[test]
    fn unit_norm_matches_brute_force() {
        for d in 5..=200i64 {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            if let Some(expected) = brute_unit_norm(d) {
                assert_eq!(fundamental_unit_norm(d).unwrap(), expected, "D = {d}");
            }
        }
    }

    #[test]
    fn principality_examples() {
        let two_34 = QuadIdeal::new(136, 2, 0).unwrap();
        assert!(is_principal(&two_34));
        let two_10 = QuadIdeal::new(40, 2, 0).unwrap();
        assert!(!is_principal(&two_10));
        assert!(is_principal(&QuadIdeal::unit(40)));
        assert!(is_principal(&QuadIdeal::unit(-23)));
        assert!(!is_principal(&QuadIdeal::new(-23, 2, 1).unwrap()));
        assert!(is_principal(&QuadIdeal::new(8, 2, 0).unwrap()));
    }

    #[test]
    fn principal_classes_match_represented_norms() {
        // An ideal of norm a is principal iff x² + bxy + cy² (principal form)
        // represents ±a; brute-force over a box for small real discriminants.
        for d in [12i64, 40, 60, 65, 136, 145, 156, 229] {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let pf = QuadForm::principal(d);
            for p in [2u64, 3, 5, 7, 11, 13] {
                if let (_, Some(ideal)) = split_prime(d, p) {
                    let represented = (-400i64..=400).any(|x| {
                        (1i64..=400).any(|y| pf.evaluate(x, y).unsigned_abs() == p)
                    }) || pf.evaluate(1, 0).unsigned_abs() == p;
                    assert_eq!(is_principal(&ideal), represented, "D={d}, p={p}");
                }
            }
        }
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_prime(5, 2), (Splitting::Inert, None));
        let (kind, ideal) = split_prime(40, 2);
        assert_eq!(kind, Splitting::Ramified);
        assert_eq!(ideal, Some(QuadIdeal::new(40, 2, 0).unwrap()));
        assert_eq!(split_prime(-4, 5).0, Splitting::Split);
    }

    #[test]
    fn split_cases_partition() {
        for d in [-23i64, -20, -4, 5, 8, 40, 136, 221] {
            for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
                let (kind, ideal) = split_prime(d, p);
                assert_eq!(kind == Splitting::Ramified, d % p as i64 == 0);
                assert_eq!(ideal.is_some(), kind != Splitting::Inert);
                if let Some(i) = ideal {
                    assert_eq!(i.norm(), p);
                }
            }
        }
    }

    #[test]
    fn ideal_sqrt_examples() {
        assert_eq!(ideal_sqrt_of_element(8, -3), None);
        assert_eq!(
            ideal_sqrt_of_element(40, -2),
            Some(QuadIdeal::new(40, 2, 0).unwrap())
        );
        let two = ideal_sqrt_of_element(5, 4).unwrap();
        assert_eq!((two.content, two.a), (2, 1));
        assert_eq!(two.norm(), 4);
        assert_eq!(ideal_sqrt_of_element(24, -3).map(|i| i.norm()), Some(3));
        assert_eq!(ideal_sqrt_of_element(5, 0), None);
        assert_eq!(ideal_sqrt_of_element(12, -1), Some(QuadIdeal::unit(12)));
    }

    #[test]
    fn minus_unit_cycle_iff_negative_norm() {
        for d in 5..=500i64 {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let f = QuadForm::principal(d).reduce();
            let cyc = cycle(&f);
            let has_minus_one = cyc.iter().any(|g| g.a == -1);
            let n = fundamental_unit_norm(d).unwrap();
            assert_eq!(has_minus_one, n == -1, "D = {d}");
            // Up to the sign of a, the principal cycle has the period of ω.
            let unsigned: HashSet<(i64, i64, i64)> =
                cyc.iter().map(|g| (g.a.abs(), g.b, g.c.abs())).collect();
            let period = continued_fraction_period(d).unwrap();
            assert_eq!(unsigned.len() as u64 % 2, period % 2, "D = {d}");
        }
    }
}
