//! Dirichlet characters encoded by exponents on the canonical generators of
//! (Z/mZ)*.
//!
//! A character χ mod m with exponent vector (e_1, …, e_k) sends the i-th
//! canonical generator g_i (of order o_i) to exp(2πi·e_i/o_i). Values are
//! returned as powers of ζ_{ord χ}.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use crate::arith::{crt_pair, gcd, lcm, UnitGroupStructure};
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};

fn unit_group_cache() -> &'static RwLock<HashMap<u64, Arc<UnitGroupStructure>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<UnitGroupStructure>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Unit group of (Z/mZ)* with its discrete-log tables, built once per
/// modulus and shared afterwards.
pub fn shared_unit_group(m: u64) -> Arc<UnitGroupStructure> {
    if let Some(g) = unit_group_cache().read().unwrap().get(&m) {
        return Arc::clone(g);
    }
    let g = Arc::new(UnitGroupStructure::new(m));
    unit_group_cache()
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&g))
        .clone()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirichletCharacter {
    modulus: u64,
    exponents: Vec<u64>,
    order: u64,
}

impl DirichletCharacter {
    /// Builds the character with the given generator exponents (reduced
    /// modulo the generator orders).
    pub fn new(modulus: u64, exponents: &[u64]) -> Result<Self> {
        let g = shared_unit_group(modulus);
        if exponents.len() != g.rank() {
            return Err(Error::LengthMismatch {
                expected: g.rank(),
                got: exponents.len(),
            });
        }
        let exponents: Vec<u64> = exponents
            .iter()
            .zip(&g.orders)
            .map(|(&e, &o)| e % o)
            .collect();
        Ok(Self::from_reduced(modulus, exponents, &g.orders))
    }

    fn from_reduced(modulus: u64, exponents: Vec<u64>, orders: &[u64]) -> Self {
        let order = exponents
            .iter()
            .zip(orders)
            .fold(1, |acc, (&e, &o)| lcm(acc, o / gcd(o, e)));
        DirichletCharacter {
            modulus,
            exponents,
            order,
        }
    }

    pub fn principal(modulus: u64) -> Self {
        let g = shared_unit_group(modulus);
        Self::from_reduced(modulus, vec![0; g.rank()], &g.orders)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    fn unit_group(&self) -> Arc<UnitGroupStructure> {
        shared_unit_group(self.modulus)
    }

    /// t with χ(a) = ζ_{ord χ}^t, or `None` when gcd(a, m) > 1.
    pub fn value_exponent(&self, a: i64) -> Option<u64> {
        let g = self.unit_group();
        let logs = g.log(a)?;
        Some(self.pair_with_logs(&logs, &g.orders))
    }

    fn pair_with_logs(&self, logs: &[u64], orders: &[u64]) -> u64 {
        let ord = self.order as u128;
        let mut t = 0u128;
        for ((&e, &l), &o) in self.exponents.iter().zip(logs).zip(orders) {
            // e·ord/o is integral because o/gcd(o, e) divides ord.
            t += e as u128 * ord / o as u128 * l as u128;
        }
        (t % ord) as u64
    }

    /// χ(a) as an element of Q(ζ_{ord χ}).
    pub fn evaluate(&self, a: i64) -> CycNumber {
        match self.value_exponent(a) {
            Some(t) => CycNumber::zeta_pow(self.order, t as i64),
            None => CycNumber::zero(self.order),
        }
    }

    /// χ(−1) as ±1.
    pub fn parity(&self) -> i32 {
        match self.value_exponent(-1) {
            Some(0) => 1,
            _ => -1,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == -1
    }

    /// The smallest f | m such that χ factors through (Z/fZ)*, computed one
    /// prime-power part at a time.
    pub fn conductor(&self) -> u64 {
        let g = self.unit_group();
        let mut f = 1u64;
        for (p, q, _) in g.prime_power_parts() {
            let cofactor = self.modulus / q;
            let mut local = q;
            let mut pj = 1u64;
            while pj < q {
                let trivial = (0..q / pj)
                    .map(|t| 1 + t * pj)
                    .filter(|a| a % p != 0)
                    .all(|a| {
                        let x = crt_pair(a, q, 1, cofactor);
                        self.value_exponent(x as i64) == Some(0)
                    });
                if trivial {
                    local = pj;
                    break;
                }
                pj *= p;
            }
            f *= local;
        }
        f
    }

    /// The same character viewed modulo `target`. Requires that the
    /// conductor divides `target`.
    pub fn at_modulus(&self, target: u64) -> Result<Self> {
        if target == self.modulus {
            return Ok(self.clone());
        }
        let f = if target % self.modulus == 0 {
            1
        } else {
            self.conductor()
        };
        if target % f != 0 {
            return Err(Error::InvalidArgument(format!(
                "character of conductor {f} cannot be defined mod {target}"
            )));
        }
        let tg = shared_unit_group(target);
        let span = lcm(self.modulus, target);
        let mut exps = Vec::with_capacity(tg.rank());
        for (&gen, &o) in tg.generators.iter().zip(&tg.orders) {
            let mut x = gen;
            while gcd(x, self.modulus) != 1 {
                x += target;
                debug_assert!(x < span + target);
            }
            let t = self.value_exponent(x as i64).expect("lift is a unit") as u128;
            let num = t * o as u128;
            debug_assert_eq!(num % self.order as u128, 0);
            exps.push((num / self.order as u128) as u64);
        }
        Ok(Self::from_reduced(target, exps, &tg.orders))
    }

    /// The primitive character inducing χ.
    pub fn primitive(&self) -> Self {
        self.at_modulus(self.conductor())
            .expect("conductor always divides the modulus")
    }

    pub fn pow(&self, k: i64) -> Self {
        let g = self.unit_group();
        let exps = self
            .exponents
            .iter()
            .zip(&g.orders)
            .map(|(&e, &o)| ((e as i128 * k as i128).rem_euclid(o as i128)) as u64)
            .collect();
        Self::from_reduced(self.modulus, exps, &g.orders)
    }

    pub fn conj(&self) -> Self {
        self.pow(-1)
    }

    /// Product χψ at the modulus lcm(m_χ, m_ψ).
    pub fn mul(&self, other: &Self) -> Self {
        let m = lcm(self.modulus, other.modulus);
        let a = self.at_modulus(m).expect("lift to a multiple");
        let b = other.at_modulus(m).expect("lift to a multiple");
        let g = shared_unit_group(m);
        let exps = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .zip(&g.orders)
            .map(|((&x, &y), &o)| (x + y) % o)
            .collect();
        Self::from_reduced(m, exps, &g.orders)
    }

    /// Table of value exponents over 0..m (None where gcd(a, m) > 1).
    pub fn value_table(&self) -> Vec<Option<u64>> {
        let g = self.unit_group();
        (0..self.modulus)
            .map(|a| {
                g.log(a as i64)
                    .map(|logs| self.pair_with_logs(&logs, &g.orders))
            })
            .collect()
    }
}

pub fn make_character(m: u64, exponents: &[u64]) -> Result<DirichletCharacter> {
    DirichletCharacter::new(m, exponents)
}

pub fn char_mul(a: &DirichletCharacter, b: &DirichletCharacter) -> DirichletCharacter {
    a.mul(b)
}

pub fn char_pow(a: &DirichletCharacter, k: i64) -> DirichletCharacter {
    a.pow(k)
}

/// Every character modulo m, in lexicographic exponent order.
pub fn all_characters(m: u64) -> Vec<DirichletCharacter> {
    let g = shared_unit_group(m);
    let mut out = Vec::with_capacity(g.order() as usize);
    let mut exps = vec![0u64; g.rank()];
    loop {
        out.push(DirichletCharacter::from_reduced(m, exps.clone(), &g.orders));
        let mut i = exps.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < g.orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// Kronecker symbol (d/n) for n >= 1.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut n = n;
    let mut result = 1i32;
    let mut a = d as i128;
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            0 | 2 | 4 | 6 => return 0,
            3 | 5 => result = -result,
            _ => {}
        }
    }
    // Jacobi symbol (a/n) for odd n.
    let mut nn = n as i128;
    a = a.rem_euclid(nn);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(nn % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut nn);
        if a % 4 == 3 && nn % 4 == 3 {
            result = -result;
        }
        a %= nn;
    }
    if nn == 1 {
        result
    } else {
        0
    }
}

/// The quadratic character n ↦ (d/n) for a fundamental discriminant d,
/// defined modulo |d|.
pub fn kronecker_character(d: i64) -> DirichletCharacter {
    let m = d.unsigned_abs();
    let g = shared_unit_group(m);
    let exps = g
        .generators
        .iter()
        .zip(&g.orders)
        .map(|(&gen, &o)| if kronecker(d, gen) == 1 { 0 } else { o / 2 })
        .collect();
    DirichletCharacter::from_reduced(m, exps, &g.orders)
}

/// Partitions a Galois-closed set into orbits under χ ↦ χ^k, gcd(k, ord χ) = 1.
/// Orbits come in first-appearance order, each led by its first member in S.
pub fn galois_orbits(set: &[DirichletCharacter]) -> Result<Vec<Vec<DirichletCharacter>>> {
    let members: HashSet<&DirichletCharacter> = set.iter().collect();
    let mut seen: HashSet<DirichletCharacter> = HashSet::new();
    let mut orbits = Vec::new();
    for chi in set {
        if seen.contains(chi) {
            continue;
        }
        let ord = chi.order();
        let mut orbit = Vec::new();
        for k in 1..=ord {
            if gcd(k, ord) != 1 {
                continue;
            }
            let c = chi.pow(k as i64);
            if !members.contains(&c) {
                return Err(Error::NotClosed);
            }
            if seen.insert(c.clone()) {
                orbit.push(c);
            }
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f={}:e=", self.modulus)?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ[{self}; ord {}]", self.order)
    }
}

impl FromStr for DirichletCharacter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_character(s, 0).map(|(c, _)| c)
    }
}

/// Parses `f=<m>:e=<e1,...>` starting at byte `base` of a larger input;
/// returns the character and the number of bytes consumed.
pub(crate) fn parse_character(s: &str, base: usize) -> Result<(DirichletCharacter, usize)> {
    let err = |off: usize, what: &str| Error::Parse {
        offset: base + off,
        expected: what.to_string(),
    };
    let rest = s.strip_prefix("f=").ok_or_else(|| err(0, "'f='"))?;
    let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
    if digits == 0 {
        return Err(err(2, "modulus digits"));
    }
    let m: u64 = rest[..digits]
        .parse()
        .map_err(|_| err(2, "modulus that fits in 64 bits"))?;
    if m == 0 {
        return Err(err(2, "positive modulus"));
    }
    let mut pos = 2 + digits;
    if !s[pos..].starts_with(":e=") {
        return Err(err(pos, "':e='"));
    }
    pos += 3;
    let mut exps = Vec::new();
    loop {
        let d = s[pos..].bytes().take_while(u8::is_ascii_digit).count();
        if d == 0 {
            if exps.is_empty() && !s[pos..].starts_with(',') {
                break;
            }
            return Err(err(pos, "exponent digits"));
        }
        exps.push(
            s[pos..pos + d]
                .parse::<u64>()
                .map_err(|_| err(pos, "exponent that fits in 64 bits"))?,
        );
        pos += d;
        if s[pos..].starts_with(',') {
            pos += 1;
        } else {
            break;
        }
    }
    let chi = DirichletCharacter::new(m, &exps).map_err(|e| match e {
        Error::LengthMismatch { expected, .. } => {
            err(pos, &format!("{expected} exponents for modulus {m}"))
        }
        other => other,
    })?;
    Ok((chi, pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_phi;

    fn chi(m: u64, e: &[u64]) -> DirichletCharacter {
        make_character(m, e).unwrap()
    }

    #[test]
    fn make_character_examples() {
        let c4 = chi(4, &[1]);
        assert_eq!(c4.evaluate(3), CycNumber::from_int(2, -1));
        assert!(chi(5, &[0]).is_principal());
        let c8 = chi(8, &[1, 0]);
        assert_eq!(c8.value_exponent(7), Some(1));
        assert_eq!(c8.value_exponent(5), Some(0));
        assert_eq!(c8.value_exponent(3), Some(1));
        assert_eq!(
            make_character(8, &[1]),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 1
            })
        );
        assert_eq!(chi(5, &[6]).exponents(), &[2]);
    }

    #[test]
    fn evaluate_examples() {
        let c4 = chi(4, &[1]);
        assert_eq!(c4.evaluate(2), CycNumber::zero(2));
        assert_eq!(chi(5, &[1]).evaluate(2), CycNumber::zeta(4));
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(DirichletCharacter::principal(12).conductor(), 1);
        let c4_20 = chi(4, &[1]).at_modulus(20).unwrap();
        assert_eq!(c4_20.modulus(), 20);
        assert_eq!(c4_20.conductor(), 4);
        assert_eq!(chi(5, &[1]).conductor(), 5);
        assert_eq!(kronecker_character(-20).conductor(), 20);
        assert_eq!(kronecker_character(8).conductor(), 8);
        assert_eq!(kronecker_character(-8).conductor(), 8);
    }

    #[test]
    fn conductor_agrees_with_divisor_scan() {
        for m in 1..=120u64 {
            for c in all_characters(m) {
                let brute = crate::arith::divisors(m)
                    .into_iter()
                    .find(|&f| {
                        (1..m as i64).all(|a| {
                            gcd(a as u64, m) != 1
                                || (a as u64) % f != 1 % f
                                || c.value_exponent(a) == Some(0)
                        })
                    })
                    .unwrap();
                assert_eq!(c.conductor(), brute, "{c}");
            }
        }
    }

    #[test]
    fn parity_examples() {
        assert_eq!(DirichletCharacter::principal(7).parity(), 1);
        assert_eq!(chi(4, &[1]).parity(), -1);
        assert_eq!(chi(5, &[2]).parity(), 1);
        assert_eq!(kronecker_character(5), chi(5, &[2]));
    }

    #[test]
    fn group_law_examples() {
        let c = chi(7, &[1]);
        assert!(c.mul(&c.conj()).is_principal());
        let c4 = chi(4, &[1]);
        let sq = c4.mul(&c4);
        assert!(sq.is_principal());
        assert_eq!(sq.modulus(), 4);
        let p = kronecker_character(8).mul(&chi(5, &[1]));
        assert_eq!(p.modulus(), 40);
        assert_eq!(p.order(), 4);
    }

    #[test]
    fn orbit_examples() {
        let c4 = chi(4, &[1]);
        assert_eq!(galois_orbits(&[c4.clone()]).unwrap().len(), 1);
        let odd5: Vec<_> = all_characters(5).into_iter().filter(|c| c.is_odd()).collect();
        let o = galois_orbits(&odd5).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].len(), 2);
        let odd7: Vec<_> = all_characters(7).into_iter().filter(|c| c.is_odd()).collect();
        let mut sizes: Vec<usize> = galois_orbits(&odd7).unwrap().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2]);
        assert_eq!(galois_orbits(&odd5[..1]), Err(Error::NotClosed));
    }

    #[test]
    fn half_of_characters_are_odd() {
        for m in 3..=200u64 {
            let all = all_characters(m);
            assert_eq!(all.len() as u64, euler_phi(m));
            let odd = all.iter().filter(|c| c.is_odd()).count();
            assert_eq!(2 * odd, all.len(), "modulus {m}");
        }
    }

    #[test]
    fn kronecker_symbol_values() {
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(40, 2), 0);
        assert_eq!(kronecker(-23, 2), 1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(-3, 7), 1);
        // Brute check against Euler's criterion for odd primes.
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            for d in -60i64..60 {
                let r = crate::arith::reduce_mod(d, p);
                let euler = crate::arith::mod_pow(r, (p - 1) / 2, p);
                let expect = match euler {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(kronecker(d, p), expect, "({d}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_character_matches_symbol() {
        for d in [-3i64, -4, -7, -8, -15, -20, -23, -40, 5, 8, 12, 13, 40, 136] {
            let c = kronecker_character(d);
            for n in 1..200u64 {
                let v = match c.value_exponent(n as i64) {
                    None => 0,
                    Some(0) => 1,
                    Some(_) => -1,
                };
                assert_eq!(v, kronecker(d, n), "d={d}, n={n}");
            }
            assert_eq!(c.parity(), if d < 0 { -1 } else { 1 });
        }
    }

    #[test]
    fn text_encoding() {
        let c = chi(40, &[1, 1, 3]);
        assert_eq!(c.to_string(), "f=40:e=1,1,3");
        assert_eq!("f=40:e=1,1,3".parse::<DirichletCharacter>().unwrap(), c);
        assert_eq!("f=1:e=".parse::<DirichletCharacter>().unwrap().modulus(), 1);
        assert!(matches!(
            "f=5:x=1".parse::<DirichletCharacter>(),
            Err(Error::Parse { offset: 3, .. })
        ));
    }
}
