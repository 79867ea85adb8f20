//! Executable checks of divisibility and factorization statements about
//! minus class numbers and unit indices.
//!
//! Every check returns a [`CheckReport`] listing the exact intermediate
//! values it used. Sweeps run checks in parallel and return them in input
//! order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    divisors, factorize, gcd, is_fundamental_discriminant, is_prime, prime_power, rational,
    Rational,
};
use crate::characters::{shared_unit_group, DirichletCharacter};
use crate::error::{Error, Result};
use crate::fieldlat::{compositum, cyclotomic_field, quadratic_field, subfields, AbelianField};
use crate::hminus::{minus_class_number, minus_partial_product, MinusReport};
use crate::quadratic::{class_number, is_principal, split_prime, Splitting};
use crate::unitindex::{hasse_unit_index, martinet_pair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Hypotheses not met; nothing was asserted.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub inputs: Vec<String>,
    pub quantities: Vec<Quantity>,
    pub verdict: Verdict,
    pub citation: String,
}

impl CheckReport {
    fn new(name: &str, inputs: Vec<String>, citation: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            inputs,
            quantities: Vec::new(),
            verdict: Verdict::Vacuous,
            citation: citation.to_string(),
        }
    }

    fn record(&mut self, name: &str, value: impl Display) {
        self.quantities.push(Quantity {
            name: name.to_string(),
            value: value.to_string(),
        });
    }

    fn decide(mut self, ok: bool) -> Self {
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self
    }

    fn vacuous(name: &str, inputs: Vec<String>, citation: &str, reason: &str) -> Self {
        let mut r = CheckReport::new(name, inputs, citation);
        r.record("reason", reason);
        r
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn quantity(&self, name: &str) -> Option<&str> {
        self.quantities
            .iter()
            .find(|q| q.name == name)
            .map(|q| q.value.as_str())
    }
}

const MASLEY: &str = "h^-(Q(zeta_m)) divides h^-(Q(zeta_mn)) (Masley)";
const ODD_DEGREE: &str =
    "K in L CM-fields with (L:K) odd: h^-(K) divides h^-(L), and the p-parts embed for p not dividing (L:K) (Louboutin-Okazaki)";
const V4: &str =
    "V4-extension L/K of CM-fields: h^-(L) = Q(L)/(Q1 Q2) * w_L/(w1 w2) * h^-(K1) h^-(K2) (Louboutin)";
const METSANKYLA: &str =
    "L1, L2 of coprime prime-power conductor: h^-(L1 L2) = h^-(L1) h^-(L2) T1 T2 with integral T1 = h^-(L1 L2^+)/h^-(L1) (Metsankyla)";
const UNRAMIFIED: &str =
    "K = Q(sqrt(d1 d2)), L = Q(sqrt d1, sqrt d2): L/K unramified but L^+/K^+ ramified, so h^-(K) does not divide h^-(L)";
const CAPITULATION: &str =
    "K = Q(sqrt(-2m)), L = Q(i, sqrt(2m)) with (2, sqrt(2m)) non-principal: the class capitulates and h^-(K) does not divide h^-(L)";
const MARTINET: &str =
    "p = 1 mod 8 with N(eps_2p) = +1: Q(Q(i, sqrt(2p))) = 2 while Q(Q(i, sqrt 2, sqrt p)) = 1 (Martinet)";
const TOWER: &str =
    "K in L CM-fields: Q(K) divides Q(L)(W_L : W_K); if the norm W_L/W_L^2 -> W_K/W_K^2 is onto then Q(L) divides Q(K) (Hasse)";

fn ratio(a: &BigInt, b: &BigInt) -> Rational {
    Rational::new(a.clone(), b.clone())
}

fn hm(k: &AbelianField) -> Result<MinusReport> {
    minus_class_number(k, None)
}

/// Divisibility h⁻(Q(ζ_m)) | h⁻(Q(ζ_{mn})).
pub fn check_masley(m: u64, n: u64, max_degree: usize) -> Result<CheckReport> {
    let k = cyclotomic_field(m, max_degree)?;
    let l = cyclotomic_field(m * n, max_degree)?;
    if !k.is_cm() {
        return Err(Error::NotCm(format!("Q(zeta_{m})")));
    }
    let (hk, hl) = (hm(&k)?.h_minus, hm(&l)?.h_minus);
    Ok(masley_report(m, m * n, &hk, &hl))
}

fn masley_report(m: u64, big: u64, hk: &BigInt, hl: &BigInt) -> CheckReport {
    let mut r = CheckReport::new("masley", vec![format!("zeta:{m}"), format!("zeta:{big}")], MASLEY);
    r.record("h_minus_K", hk);
    r.record("h_minus_L", hl);
    let ok = (hl % hk).is_zero();
    r.decide(ok)
}

/// h⁻(K) | h⁻(L) for K ⊆ L with (L:K) odd, together with the prime-to-(L:K)
/// part of h⁻(K) dividing h⁻(L).
pub fn check_odd_degree(k: &AbelianField, l: &AbelianField) -> Result<CheckReport> {
    if !k.is_subfield_of(l) {
        return Err(Error::NotSubfield(k.to_spec(), l.to_spec()));
    }
    let index = l.degree() / k.degree();
    if index % 2 == 0 {
        return Err(Error::EvenIndex(index));
    }
    let (hk, hl) = (hm(k)?.h_minus, hm(l)?.h_minus);
    let mut r = CheckReport::new("odd-degree", vec![k.to_spec(), l.to_spec()], ODD_DEGREE);
    r.record("index", index);
    r.record("h_minus_K", &hk);
    r.record("h_minus_L", &hl);
    let idx = BigInt::from(index);
    let mut coprime_part = hk.clone();
    loop {
        let g = coprime_part.gcd(&idx);
        if g.is_one() {
            break;
        }
        coprime_part /= g;
    }
    r.record("h_minus_K_prime_to_index", &coprime_part);
    let ok = (&hl % &hk).is_zero() && (&hl % &coprime_part).is_zero();
    Ok(r.decide(ok))
}

struct V4Data {
    l: AbelianField,
    report: MinusReport,
    imaginary: [(i64, u64, u8, u64); 2],
}

fn v4_data(d1: i64, d2: i64, max_degree: usize) -> Result<V4Data> {
    let bad = |why: &str| Error::NotV4Cm(format!("d1 = {d1}, d2 = {d2}: {why}"));
    if d1 >= 0 || !is_fundamental_discriminant(d1) {
        return Err(bad("d1 must be a negative fundamental discriminant"));
    }
    if !is_fundamental_discriminant(d2) {
        return Err(bad("d2 must be a fundamental discriminant"));
    }
    if d1 == d2 {
        return Err(bad("the quadratic fields coincide"));
    }
    let l = compositum(&quadratic_field(d1)?, &quadratic_field(d2)?, max_degree)?;
    let imag: Vec<i64> = l.quadratic_subfields().into_iter().filter(|&d| d < 0).collect();
    if l.degree() != 4 || imag.len() != 2 {
        return Err(bad("not a biquadratic CM-field"));
    }
    let report = hm(&l)?;
    let mut imaginary = [(0i64, 0u64, 0u8, 0u64); 2];
    for (slot, &d) in imaginary.iter_mut().zip(&imag) {
        let k = quadratic_field(d)?;
        let q = hasse_unit_index(&k, None)?.q;
        *slot = (d, class_number(d)?, q, k.roots_of_unity_order());
    }
    Ok(V4Data { l, report, imaginary })
}

/// Both sides of the V4 class number relation for L = Q(√d1, √d2) over Q.
pub fn check_v4(d1: i64, d2: i64, max_degree: usize) -> Result<CheckReport> {
    let V4Data { l, report, imaginary } = v4_data(d1, d2, max_degree)?;
    let mut r = CheckReport::new("v4", vec![format!("quad:{d1}*quad:{d2}")], V4);
    r.record("field", l.to_spec());
    r.record("Q_L", report.q);
    r.record("w_L", report.w);
    let mut num = BigInt::from(report.q) * BigInt::from(report.w);
    let mut den = BigInt::one();
    for (i, (d, h, q, w)) in imaginary.iter().enumerate() {
        r.record(&format!("d{}", i + 1), d);
        r.record(&format!("h{}", i + 1), h);
        r.record(&format!("Q{}", i + 1), q);
        r.record(&format!("w{}", i + 1), w);
        num *= BigInt::from(*h);
        den *= BigInt::from(*q) * BigInt::from(*w);
    }
    let rhs = ratio(&num, &den);
    r.record("lhs", &report.h_minus);
    r.record("rhs", &rhs);
    Ok(r.decide(rhs == Rational::from_integer(report.h_minus.clone())))
}

/// q(L) = 2 Q(L) w_L / (Q1 Q2 w1 w2) for L = Q(√d1, √d2) over Q, where the
/// unit-signature term vanishes. Asserted to lie in {1, 2, 4}.
pub fn derived_kuroda_q(d1: i64, d2: i64, max_degree: usize) -> Result<Rational> {
    let V4Data { report, imaginary, .. } = v4_data(d1, d2, max_degree)?;
    let num = BigInt::from(2u8) * BigInt::from(report.q) * BigInt::from(report.w);
    let den: BigInt = imaginary
        .iter()
        .map(|(_, _, q, w)| BigInt::from(*q) * BigInt::from(*w))
        .product();
    let q = ratio(&num, &den);
    if ![1, 2, 4].iter().any(|&v| q == rational(v, 1)) {
        return Err(Error::InternalInconsistency(format!(
            "unit index q(L) = {q} for d1 = {d1}, d2 = {d2}"
        )));
    }
    Ok(q)
}

fn prime_of_conductor(k: &AbelianField) -> Option<u64> {
    prime_power(k.conductor()).map(|(p, _)| p)
}

/// Parity of the restriction of χ to the p-primary part of its modulus.
fn local_parity_odd(chi: &DirichletCharacter, p: u64) -> bool {
    let g = shared_unit_group(chi.modulus());
    for (prime, q, range) in g.prime_power_parts() {
        if prime == p {
            let local = DirichletCharacter::new(q, &chi.exponents()[range])
                .expect("projection has the local rank");
            return local.is_odd();
        }
    }
    false
}

/// X₁(L): odd characters of L outside X(L₁) ∪ X(L₂) whose p-component is
/// odd and q-component even, with p the prime of L₁.
pub fn x1_characters(l: &AbelianField, l1: &AbelianField, l2: &AbelianField) -> Vec<DirichletCharacter> {
    let p = prime_of_conductor(l1).unwrap_or(1);
    l.odd_characters()
        .into_iter()
        .filter(|c| !l1.contains_character(c) && !l2.contains_character(c))
        .filter(|c| local_parity_odd(c, p))
        .collect()
}

/// The factorization h⁻(L₁L₂) = h⁻(L₁) h⁻(L₂) T₁ T₂ for CM-fields of
/// coprime prime-power conductors, with T₁ recomputed as the partial
/// product over X₁(L).
pub fn check_metsankyla(l1: &AbelianField, l2: &AbelianField, max_degree: usize) -> Result<CheckReport> {
    let describe = || format!("{} and {}", l1.to_spec(), l2.to_spec());
    let (p, q) = match (prime_of_conductor(l1), prime_of_conductor(l2)) {
        (Some(p), Some(q)) if p != q => (p, q),
        _ => return Err(Error::NotPrimePowerConductors(describe())),
    };
    if !l1.is_cm() || !l2.is_cm() {
        return Err(Error::NotCm(describe()));
    }
    let l = compositum(l1, l2, max_degree)?;
    let k1 = compositum(l1, &l2.maximal_real_subfield(), max_degree)?;
    let k2 = compositum(l2, &l1.maximal_real_subfield(), max_degree)?;
    let (rl, r1, r2, rk1, rk2) = (hm(&l)?, hm(l1)?, hm(l2)?, hm(&k1)?, hm(&k2)?);

    let mut r = CheckReport::new("metsankyla", vec![l1.to_spec(), l2.to_spec()], METSANKYLA);
    r.record("p", p);
    r.record("q", q);
    r.record("degree_L", l.degree());
    r.record("h_minus_L", &rl.h_minus);
    r.record("h_minus_L1", &r1.h_minus);
    r.record("h_minus_L2", &r2.h_minus);
    r.record("h_minus_L1L2plus", &rk1.h_minus);
    r.record("h_minus_L2L1plus", &rk2.h_minus);
    let t1 = ratio(&rk1.h_minus, &r1.h_minus);
    let t2 = ratio(&rk2.h_minus, &r2.h_minus);
    r.record("T1", &t1);
    r.record("T2", &t2);
    r.record("Q_L", rl.q);
    r.record("Q_K1", rk1.q);
    r.record("Q_K2", rk2.q);
    r.record("w_L", rl.w);
    r.record("w_K1", rk1.w);
    r.record("w_K2", rk2.w);

    let mut ok = t1.is_integer() && t2.is_integer();
    let product = Rational::from_integer(&r1.h_minus * &r2.h_minus) * &t1 * &t2;
    ok &= product == Rational::from_integer(rl.h_minus.clone());
    ok &= rl.q == 2 && rk1.q == 1 && rk2.q == 1 && rk1.w * rk2.w == 2 * rl.w;

    for (name, first, report_first, report_k, t) in [("T1", l1, &r1, &rk1, &t1), ("T2", l2, &r2, &rk2, &t2)] {
        let other = if std::ptr::eq(first, l1) { l2 } else { l1 };
        let set = x1_characters(&l, first, other);
        let partial = minus_partial_product(&set)?;
        let normalized = partial
            * ratio(
                &(BigInt::from(report_k.q) * BigInt::from(report_k.w)),
                &(BigInt::from(report_first.q) * BigInt::from(report_first.w)),
            );
        r.record(&format!("{name}_characters"), set.len());
        r.record(&format!("{name}_from_characters"), &normalized);
        ok &= &normalized == t;
    }
    Ok(r.decide(ok))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Counterexample {
    /// K = Q(√(d1 d2)) inside L = Q(√d1, √d2), d1 a negative prime
    /// discriminant, d2 > 0 coprime.
    Unramified { d1: i64, d2: i64 },
    /// K = Q(√−2m) inside L = Q(i, √2m), m odd.
    Capitulation { m: u64 },
}

fn is_negative_prime_discriminant(d: i64) -> bool {
    d == -4 || d == -8 || (d < 0 && d % 4 == -1 && is_prime(d.unsigned_abs()))
}

/// Non-divisibility h⁻(K) ∤ h⁻(L) in the two families of CM-extensions
/// where the correction factors of the general divisibility theorem are
/// needed. Parameters outside a family's hypotheses give
/// `PreconditionViolated`.
pub fn check_counterexample(family: Counterexample, max_degree: usize) -> Result<CheckReport> {
    let (name, citation, k, l, inputs) = match family {
        Counterexample::Unramified { d1, d2 } => {
            if !is_negative_prime_discriminant(d1) {
                return Err(Error::PreconditionViolated(format!(
                    "{d1} is not -4, -8 or -q with q = 3 mod 4 prime"
                )));
            }
            if d2 <= 0 || !is_fundamental_discriminant(d2) || gcd(d1.unsigned_abs(), d2 as u64) != 1 {
                return Err(Error::PreconditionViolated(format!(
                    "{d2} is not a positive fundamental discriminant coprime to {d1}"
                )));
            }
            let k = quadratic_field(d1 * d2)?;
            let l = compositum(&quadratic_field(d1)?, &quadratic_field(d2)?, max_degree)?;
            ("counterexample-1", UNRAMIFIED, k, l, vec![format!("d1={d1}"), format!("d2={d2}")])
        }
        Counterexample::Capitulation { m } => {
            let d = 8 * m as i64;
            if m % 2 == 0 || !is_fundamental_discriminant(d) {
                return Err(Error::PreconditionViolated(format!(
                    "m = {m} must be odd and squarefree"
                )));
            }
            match split_prime(d, 2) {
                (Splitting::Ramified, Some(b)) if !is_principal(&b) => {}
                _ => {
                    return Err(Error::PreconditionViolated(format!(
                        "(2, sqrt {}) is principal",
                        2 * m
                    )))
                }
            }
            let k = quadratic_field(-d)?;
            let l = compositum(&quadratic_field(-4)?, &quadratic_field(d)?, max_degree)?;
            ("counterexample-2", CAPITULATION, k, l, vec![format!("m={m}")])
        }
    };
    let (rk, rl) = (hm(&k)?, hm(&l)?);
    let mut r = CheckReport::new(name, inputs, citation);
    r.record("K", k.to_spec());
    r.record("L", l.to_spec());
    r.record("h_minus_K", &rk.h_minus);
    r.record("h_minus_L", &rl.h_minus);
    r.record("Q_L", rl.q);
    r.record("rule_L", rl.rule);
    let divides = (&rl.h_minus % &rk.h_minus).is_zero();
    Ok(r.decide(!divides))
}

/// Martinet's pair as a check; vacuous when N(ε_{2p}) = −1.
pub fn check_martinet(p: u64, max_degree: usize) -> Result<CheckReport> {
    let inputs = vec![format!("p={p}")];
    match martinet_pair(p, max_degree) {
        Ok(m) => {
            let mut r = CheckReport::new("martinet", inputs, MARTINET);
            r.record("unit_norm", m.unit_norm);
            r.record("Q_K", m.q_k);
            r.record("Q_L", m.q_l);
            r.record("rule_K", m.rule_k);
            r.record("rule_L", m.rule_l);
            Ok(r.decide(m.q_k == 2 && m.q_l == 1))
        }
        Err(Error::PreconditionViolated(why)) => {
            Ok(CheckReport::vacuous("martinet", inputs, MARTINET, &why))
        }
        Err(e) => Err(e),
    }
}

/// Whether N_{L/K} maps W_L/W_L² onto W_K/W_K², for CM-fields K ⊆ L.
pub fn norm_onto_roots_mod_squares(k: &AbelianField, l: &AbelianField) -> Result<bool> {
    if !k.is_subfield_of(l) {
        return Err(Error::NotSubfield(k.to_spec(), l.to_spec()));
    }
    if !k.is_cm() || !l.is_cm() {
        return Err(Error::NotCm(format!("{} or {}", k.to_spec(), l.to_spec())));
    }
    let (wk, wl) = (k.roots_of_unity_order(), l.roots_of_unity_order());
    let index = (l.degree() / k.degree()) as u64;
    if wl % 4 == 2 {
        // W_L/W_L² is generated by −1, whose norm is (−1)^{(L:K)}.
        return Ok(index % 2 == 1);
    }
    // ζ_{w_L} ∈ L forces w_L | f, and σ_a acts on it by a ↦ a mod w_L.
    let f = l.conductor();
    let k_chars: Vec<DirichletCharacter> = k
        .characters()
        .iter()
        .map(|c| c.at_modulus(f))
        .collect::<Result<_>>()?;
    let l_tables: Vec<Vec<Option<u64>>> = l.characters().iter().map(|c| c.value_table()).collect();
    let k_tables: Vec<Vec<Option<u64>>> = k_chars.iter().map(|c| c.value_table()).collect();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut exponent_sum: u64 = 0;
    for a in 1..f {
        if gcd(a, f) != 1 || !k_tables.iter().all(|t| t[a as usize] == Some(0)) {
            continue;
        }
        let key: Vec<u64> = l_tables.iter().map(|t| t[a as usize].unwrap_or(0)).collect();
        if seen.insert(key) {
            exponent_sum = (exponent_sum + a) % wl;
        }
    }
    if seen.len() as u64 != index {
        return Err(Error::InternalInconsistency(format!(
            "found {} automorphisms of L/K, expected {index}",
            seen.len()
        )));
    }
    let order = wl / gcd(exponent_sum, wl);
    Ok(order.trailing_zeros() == wk.trailing_zeros())
}

/// The unit index inequalities between CM-fields K ⊆ L with known indices.
pub fn check_unit_index_tower(k: &AbelianField, l: &AbelianField) -> Result<CheckReport> {
    let onto = norm_onto_roots_mod_squares(k, l)?;
    let (qk, ql) = (hasse_unit_index(k, None)?.q as u64, hasse_unit_index(l, None)?.q as u64);
    let (wk, wl) = (k.roots_of_unity_order(), l.roots_of_unity_order());
    let mut r = CheckReport::new("unit-index-tower", vec![k.to_spec(), l.to_spec()], TOWER);
    r.record("Q_K", qk);
    r.record("Q_L", ql);
    r.record("w_K", wk);
    r.record("w_L", wl);
    r.record("norm_onto", onto);
    let mut ok = (ql * (wl / wk)) % qk == 0;
    if onto {
        ok &= qk % ql == 0;
    }
    Ok(r.decide(ok))
}

/// Q(K) = 2 when the norm from Q(ζ_f), f the conductor, is onto on roots
/// of unity modulo squares and f is composite. `None` when this argument
/// does not decide.
pub fn unit_index_from_cyclotomic_norm(k: &AbelianField, max_degree: usize) -> Result<Option<u8>> {
    let f = k.conductor();
    if prime_power(f).is_some() {
        return Ok(None);
    }
    let l = cyclotomic_field(f, max_degree)?;
    Ok(norm_onto_roots_mod_squares(k, &l)?.then_some(2))
}

/// All pairs m | M ≤ max with 3 ≤ m < M and m, M ≢ 2 mod 4.
pub fn sweep_masley(max: u64, max_degree: usize) -> Result<Vec<CheckReport>> {
    let levels: Vec<u64> = (3..=max).filter(|m| m % 4 != 2).collect();
    let h: BTreeMap<u64, BigInt> = levels
        .par_iter()
        .map(|&m| Ok((m, hm(&cyclotomic_field(m, max_degree)?)?.h_minus)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for &big in &levels {
        for m in divisors(big) {
            if m >= 3 && m < big && m % 4 != 2 {
                out.push(masley_report(m, big, &h[&m], &h[&big]));
            }
        }
    }
    out.sort_by_key(|r| (r.inputs[0].len(), r.inputs.clone()));
    Ok(out)
}

fn negative_fundamentals(max_abs: u64) -> Vec<i64> {
    (1..=max_abs as i64)
        .map(|n| -n)
        .filter(|&d| is_fundamental_discriminant(d))
        .collect()
}

/// Coprime pairs d1 > d2 of negative fundamental discriminants with
/// |d1 d2| ≤ max_product.
pub fn sweep_v4(max_product: u64, max_degree: usize) -> Result<Vec<CheckReport>> {
    let ds = negative_fundamentals(max_product / 3);
    let mut pairs = Vec::new();
    for (i, &d1) in ds.iter().enumerate() {
        for &d2 in &ds[i + 1..] {
            let prod = d1.unsigned_abs() * d2.unsigned_abs();
            if prod <= max_product && gcd(d1.unsigned_abs(), d2.unsigned_abs()) == 1 {
                pairs.push((d1, d2));
            }
        }
    }
    pairs
        .par_iter()
        .map(|&(d1, d2)| check_v4(d1, d2, max_degree))
        .collect()
}

/// CM-fields whose conductor is a prime power ≤ max_conductor.
pub fn prime_power_cm_fields(max_conductor: u64, max_degree: usize) -> Result<Vec<AbelianField>> {
    let mut found: BTreeSet<AbelianField> = BTreeSet::new();
    for m in 3..=max_conductor {
        if m % 4 == 2 || prime_power(m).is_none() {
            continue;
        }
        let cyc = cyclotomic_field(m, max_degree)?;
        found.extend(subfields(&cyc).into_iter().filter(|k| k.is_cm() && k.conductor() == m));
    }
    let mut v: Vec<AbelianField> = found.into_iter().collect();
    v.sort_by_key(|k| (k.conductor(), k.degree(), k.to_spec()));
    Ok(v)
}

/// Every pair of CM-fields with prime-power conductors ≤ max_conductor at
/// distinct primes, the smaller prime first, with compositum degree at most
/// `max_compositum_degree`.
pub fn sweep_metsankyla(
    max_conductor: u64,
    max_compositum_degree: usize,
    max_degree: usize,
) -> Result<Vec<CheckReport>> {
    let fields = prime_power_cm_fields(max_conductor, max_degree)?;
    let mut pairs = Vec::new();
    for a in &fields {
        for b in &fields {
            let (p, q) = (prime_of_conductor(a).unwrap(), prime_of_conductor(b).unwrap());
            if p < q && a.degree() * b.degree() <= max_compositum_degree {
                pairs.push((a, b));
            }
        }
    }
    pairs
        .par_iter()
        .map(|(a, b)| check_metsankyla(a, b, max_degree))
        .collect()
}

/// Unramified family with d1 = −4 and every odd fundamental 0 < d2 ≤ max.
pub fn sweep_counterexample_unramified(max_d2: i64, max_degree: usize) -> Result<Vec<CheckReport>> {
    let d2s: Vec<i64> = (5..=max_d2)
        .filter(|&d| d % 2 == 1 && is_fundamental_discriminant(d))
        .collect();
    d2s.par_iter()
        .map(|&d2| check_counterexample(Counterexample::Unramified { d1: -4, d2 }, max_degree))
        .collect()
}

/// Capitulation family over odd squarefree m ≤ max; principal cases are
/// reported as vacuous.
pub fn sweep_counterexample_capitulation(max_m: u64, max_degree: usize) -> Result<Vec<CheckReport>> {
    let ms: Vec<u64> = (1..=max_m)
        .filter(|&m| m % 2 == 1 && factorize(m).iter().all(|&(_, e)| e == 1))
        .collect();
    ms.par_iter()
        .map(|&m| match check_counterexample(Counterexample::Capitulation { m }, max_degree) {
            Err(Error::PreconditionViolated(why)) => Ok(CheckReport::vacuous(
                "counterexample-2",
                vec![format!("m={m}")],
                CAPITULATION,
                &why,
            )),
            other => other,
        })
        .collect()
}

/// Martinet pairs for all primes p ≡ 1 mod 8 up to max.
pub fn sweep_martinet(max_p: u64, max_degree: usize) -> Result<Vec<CheckReport>> {
    let ps: Vec<u64> = (17..=max_p).filter(|&p| p % 8 == 1 && is_prime(p)).collect();
    ps.par_iter().map(|&p| check_martinet(p, max_degree)).collect()
}
