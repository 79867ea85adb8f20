//! Minus class numbers from the analytic class number formula
//!
//! h⁻(K) = Q(K) · w_K · ∏_{χ odd} (−B_{1,χ} / 2),
//!
//! with the product grouped into Galois orbits: each orbit contributes the
//! absolute norm of −B_{1,χ}/2 from Q(ζ_{ord χ}).

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::arith::{as_integer, rational, Rational};
use crate::characters::{galois_orbits, DirichletCharacter};
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::fieldlat::AbelianField;
use crate::unitindex::{hasse_unit_index, Rule};

/// B_{1,χ} = (1/f) Σ_{1 ≤ a ≤ f, (a,f)=1} χ(a) a for the primitive character
/// attached to χ, as an element of Q(ζ_{ord χ}).
pub fn bernoulli_b1(chi: &DirichletCharacter) -> Result<CycNumber> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    if !chi.is_odd() {
        return Err(Error::EvenCharacter);
    }
    let prim = chi.primitive();
    let f = prim.modulus();
    let ord = prim.order();
    let mut sums = vec![0u128; ord as usize];
    for (a, t) in prim.value_table().into_iter().enumerate() {
        if let Some(t) = t {
            sums[t as usize] += a as u128;
        }
    }
    let sums: Vec<BigInt> = sums.into_iter().map(BigInt::from).collect();
    Ok(CycNumber::from_integer_power_sums(ord, &sums, &BigInt::from(f)))
}

/// −B_{1,χ}/2.
pub fn minus_factor(chi: &DirichletCharacter) -> Result<CycNumber> {
    Ok(bernoulli_b1(chi)?.scale(&rational(-1, 2)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitFactor {
    pub rep: DirichletCharacter,
    pub size: usize,
    pub norm: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinusReport {
    pub field: AbelianField,
    pub q: u8,
    pub rule: Rule,
    pub w: u64,
    pub orbit_factors: Vec<OrbitFactor>,
    pub h_minus: BigInt,
}

fn orbit_factors(set: &[DirichletCharacter]) -> Result<Vec<OrbitFactor>> {
    if let Some(bad) = set.iter().find(|c| !c.is_odd()) {
        return Err(if bad.is_principal() {
            Error::PrincipalCharacter
        } else {
            Error::EvenCharacter
        });
    }
    let orbits = galois_orbits(set)?;
    orbits
        .par_iter()
        .map(|orbit| {
            let rep = orbit[0].clone();
            let norm = minus_factor(&rep)?.absolute_norm()?;
            Ok(OrbitFactor {
                rep,
                size: orbit.len(),
                norm,
            })
        })
        .collect()
}

/// ∏_{χ ∈ S} (−B_{1,χ}/2) for a Galois-stable set S of odd characters.
pub fn minus_partial_product(set: &[DirichletCharacter]) -> Result<Rational> {
    Ok(orbit_factors(set)?
        .into_iter()
        .fold(Rational::one(), |acc, f| acc * f.norm))
}

/// h⁻(K), with Q(K) from the rule cascade unless `q_override` is given.
pub fn minus_class_number(k: &AbelianField, q_override: Option<u8>) -> Result<MinusReport> {
    let verdict = hasse_unit_index(k, q_override)?;
    let w = k.roots_of_unity_order();
    let factors = orbit_factors(&k.odd_characters())?;
    let product = factors
        .iter()
        .fold(Rational::from_integer(BigInt::from(verdict.q) * BigInt::from(w)), |acc, f| {
            acc * &f.norm
        });
    let h = match as_integer(&product) {
        Some(h) if h.is_positive() => h,
        _ => {
            return Err(Error::NonIntegralResult(format!(
                "Q w prod = {product} for conductor {}, degree {}",
                k.conductor(),
                k.degree()
            )))
        }
    };
    Ok(MinusReport {
        field: k.clone(),
        q: verdict.q,
        rule: verdict.rule,
        w,
        orbit_factors: factors,
        h_minus: h,
    })
}

/// Convenience wrapper returning only h⁻(K).
pub fn h_minus(k: &AbelianField) -> Result<BigInt> {
    Ok(minus_class_number(k, None)?.h_minus)
}

/// w_K · ∏ (−B_{1,χ}/2) over X⁻(K): h⁻(K)/Q(K) without needing Q(K).
pub fn h_minus_over_q(k: &AbelianField) -> Result<Rational> {
    if !k.is_cm() {
        return Err(Error::NotCm(k.to_spec()));
    }
    let p = minus_partial_product(&k.odd_characters())?;
    Ok(p * Rational::from_integer(BigInt::from(k.roots_of_unity_order())))
}
