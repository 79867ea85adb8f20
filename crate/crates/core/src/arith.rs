//! Integer and rational substrate: factorization, small modular helpers and
//! the structure of (Z/mZ)* with canonical generators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds `num/den` as an exact rational. Panics on a zero denominator.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Returns the integer value of `q` when its denominator is one.
pub fn as_integer(q: &Rational) -> Option<BigInt> {
    if q.denom().is_one() {
        Some(q.numer().clone())
    } else {
        None
    }
}

/// Prime factorization by trial division; primes strictly increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize: n must be positive");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let f = factorize(n);
    f.len() == 1 && f[0].1 == 1
}

/// `Some((p, k))` when `n = p^k` with `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduces a signed integer into `0..m`.
pub fn reduce_mod(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    let phi = euler_phi(m);
    let mut order = phi;
    for (p, _) in factorize(phi) {
        while order % p == 0 && mod_pow(a, order / p, m) == 1 {
            order /= p;
        }
    }
    order
}

/// Smallest primitive root modulo an odd prime power.
fn smallest_primitive_root(p: u64, k: u32) -> u64 {
    let q = p.pow(k);
    let phi = (p - 1) * p.pow(k - 1);
    (2..q)
        .find(|&g| gcd(g, p) == 1 && multiplicative_order(g, q) == phi)
        .expect("odd prime powers have primitive roots")
}

/// One prime-power factor q = p^k of the modulus, with its local
/// generators and a discrete-log table.
#[derive(Debug, Clone)]
struct LocalPart {
    prime: u64,
    q: u64,
    /// Generators as residues mod q.
    local_gens: Vec<u64>,
    orders: Vec<u64>,
    /// Discrete-log table indexed by residue mod q. For odd q the entry is
    /// the exponent of the primitive root; for q = 2^k (k >= 3) it is the
    /// exponent of 5 of ±a; for q = 4 it is the exponent of 3.
    table: Vec<u32>,
}

impl LocalPart {
    fn new(p: u64, k: u32) -> Self {
        let q = p.pow(k);
        let (local_gens, orders) = match (p, k) {
            (2, 1) => (vec![], vec![]),
            (2, 2) => (vec![3], vec![2]),
            (2, _) => (vec![q - 1, 5], vec![2, q / 4]),
            _ => {
                let g = smallest_primitive_root(p, k);
                (vec![g], vec![(p - 1) * p.pow(k - 1)])
            }
        };
        let mut table = vec![u32::MAX; q as usize];
        match (p, k) {
            (2, 1) => table[1] = 0,
            (2, 2) => {
                table[1] = 0;
                table[3] = 1;
            }
            (2, _) => {
                let mut x = 1u64;
                for j in 0..q / 4 {
                    table[x as usize] = j as u32;
                    table[(q - x) as usize] = j as u32;
                    x = x * 5 % q;
                }
            }
            _ => {
                let g = local_gens[0];
                let mut x = 1u64;
                for j in 0..orders[0] {
                    table[x as usize] = j as u32;
                    x = x * g % q;
                }
            }
        }
        LocalPart {
            prime: p,
            q,
            local_gens,
            orders,
            table,
        }
    }

    /// Exponents of `a` (coprime to p) on the local generators.
    fn log(&self, a: u64) -> Vec<u64> {
        let r = a % self.q;
        match (self.prime, self.local_gens.len()) {
            (2, 0) => vec![],
            (2, 1) => vec![self.table[r as usize] as u64],
            (2, _) => {
                let sign = if r % 4 == 1 { 0 } else { 1 };
                vec![sign, self.table[r as usize] as u64]
            }
            _ => vec![self.table[r as usize] as u64],
        }
    }
}

/// Structure of (Z/mZ)* with the canonical generator choice: the smallest
/// primitive root for odd prime powers, 3 for 4, (−1, 5) for 2^k with
/// k >= 3, concatenated over the prime-power parts in increasing prime order.
/// Generators are residues mod m that are 1 on every other prime-power part.
#[derive(Debug, Clone)]
pub struct UnitGroupStructure {
    pub modulus: u64,
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
    parts: Vec<LocalPart>,
}

impl UnitGroupStructure {
    pub fn new(m: u64) -> Self {
        assert!(m >= 1, "unit_group: modulus must be positive");
        let parts: Vec<LocalPart> = if m == 1 {
            vec![]
        } else {
            factorize(m)
                .into_iter()
                .map(|(p, k)| LocalPart::new(p, k))
                .collect()
        };
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        for part in &parts {
            let cofactor = m / part.q;
            for (&g, &o) in part.local_gens.iter().zip(&part.orders) {
                generators.push(crt_pair(g, part.q, 1, cofactor));
                orders.push(o);
            }
        }
        UnitGroupStructure {
            modulus: m,
            generators,
            orders,
            parts,
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Group order φ(m).
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Exponent of the group (lcm of generator orders).
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| lcm(acc, o))
    }

    /// Exponent vector of `a` on the canonical generators, or `None` when
    /// gcd(a, m) > 1.
    pub fn log(&self, a: i64) -> Option<Vec<u64>> {
        let r = reduce_mod(a, self.modulus);
        if gcd(r, self.modulus) != 1 {
            return None;
        }
        let mut out = Vec::with_capacity(self.rank());
        for part in &self.parts {
            out.extend(part.log(r));
        }
        Some(out)
    }

    /// Residue mod m with the given exponents on the canonical generators.
    pub fn residue(&self, exponents: &[u64]) -> u64 {
        assert_eq!(exponents.len(), self.rank());
        self.generators
            .iter()
            .zip(exponents)
            .fold(1 % self.modulus, |acc, (&g, &e)| {
                (acc as u128 * mod_pow(g, e, self.modulus) as u128 % self.modulus as u128) as u64
            })
    }

    /// Prime-power moduli of the parts, in increasing prime order, together
    /// with the index range of their generators.
    pub fn prime_power_parts(&self) -> Vec<(u64, u64, std::ops::Range<usize>)> {
        let mut start = 0;
        self.parts
            .iter()
            .map(|p| {
                let r = start..start + p.local_gens.len();
                start = r.end;
                (p.prime, p.q, r)
            })
            .collect()
    }
}

pub fn unit_group(m: u64) -> UnitGroupStructure {
    UnitGroupStructure::new(m)
}

/// x with x ≡ a mod m and x ≡ b mod n, for coprime m, n.
pub fn crt_pair(a: u64, m: u64, b: u64, n: u64) -> u64 {
    if n == 1 {
        return a % m;
    }
    if m == 1 {
        return b % n;
    }
    let inv = mod_inverse(m % n, n).expect("crt_pair: moduli must be coprime");
    let mn = m as u128 * n as u128;
    let diff = (b as i128 - a as i128).rem_euclid(n as i128) as u128;
    let t = diff * inv as u128 % n as u128;
    ((a as u128 + m as u128 * t) % mn) as u64
}

/// Exact integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}


/// True when `d` is the discriminant of a quadratic field (d ≠ 1): either
/// d ≡ 1 mod 4 squarefree, or d = 4m with m ≡ 2, 3 mod 4 squarefree.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |n: i64| factorize(n.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(40), vec![(2, 3), (5, 1)]);
        assert_eq!(factorize(125000), vec![(2, 3), (5, 6)]);
        assert_eq!(factorize(997), vec![(997, 1)]);
    }

    #[test]
    fn unit_group_examples() {
        let g5 = unit_group(5);
        assert_eq!(g5.generators, vec![2]);
        assert_eq!(g5.orders, vec![4]);
        let g8 = unit_group(8);
        assert_eq!(g8.generators, vec![7, 5]);
        assert_eq!(g8.orders, vec![2, 2]);
        let g1 = unit_group(1);
        assert!(g1.generators.is_empty());
        assert!(g1.orders.is_empty());
        let g2 = unit_group(2);
        assert!(g2.generators.is_empty());
        assert_eq!(unit_group(4).generators, vec![3]);
    }

    #[test]
    fn primitive_roots_match_exhaustive_order_check() {
        for &(q, g) in &[(7u64, 3u64), (9, 2), (25, 2), (49, 3), (11, 2), (13, 2), (23, 5)] {
            assert_eq!(unit_group(q).generators, vec![g], "modulus {q}");
            let seen: std::collections::BTreeSet<u64> =
                (0..euler_phi(q)).map(|i| mod_pow(g, i, q)).collect();
            assert_eq!(seen.len() as u64, euler_phi(q));
        }
    }

    #[test]
    fn exponent_map_is_bijective_up_to_2000() {
        for m in 1..=2000u64 {
            let g = unit_group(m);
            assert_eq!(g.order(), euler_phi(m), "order mismatch at {m}");
            let mut hit = vec![false; m as usize];
            let mut exps = vec![0u64; g.rank()];
            loop {
                let r = g.residue(&exps);
                assert_eq!(gcd(r, m), 1);
                assert!(!hit[r as usize], "residue {r} hit twice mod {m}");
                hit[r as usize] = true;
                assert_eq!(g.log(r as i64).unwrap(), exps, "log mismatch mod {m}");
                let mut i = 0;
                loop {
                    if i == exps.len() {
                        break;
                    }
                    exps[i] += 1;
                    if exps[i] < g.orders[i] {
                        break;
                    }
                    exps[i] = 0;
                    i += 1;
                }
                if i == exps.len() {
                    break;
                }
            }
            let count = hit.iter().filter(|&&h| h).count() as u64;
            assert_eq!(count, euler_phi(m), "coverage mod {m}");
        }
    }

    #[test]
    fn log_rejects_non_units() {
        assert_eq!(unit_group(12).log(6), None);
        assert_eq!(unit_group(12).log(-1), Some(vec![1, 1]));
    }

    #[test]
    fn small_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(40), 16);
        assert_eq!(crt_pair(3, 4, 2, 5), 7);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(isqrt(99), 9);
        assert_eq!(prime_power(32), Some((2, 5)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn fundamental_discriminants() {
        let neg: Vec<i64> = (-30..0).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(neg, vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3]);
        let pos: Vec<i64> = (0..30).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(pos, vec![5, 8, 12, 13, 17, 21, 24, 28, 29]);
        assert!(is_fundamental_discriminant(136));
        assert!(!is_fundamental_discriminant(1));
    }
}
