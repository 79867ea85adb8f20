//! Hasse's unit index Q(K) = (E_K : W_K E_{K⁺}) and the order of the
//! capitulation kernel of K⁺ → K for abelian CM-fields.
//!
//! The decision runs a fixed cascade on the 2-primary subfield of K (which
//! has odd index in K and the same unit index):
//!
//! * R1 imaginary quadratic fields;
//! * R2 full cyclotomic fields Q(ζ_m): index 2 iff m is composite;
//! * R3 prime-power conductor: index 1;
//! * R4 direct products over distinct prime-power conductors: index 1 iff
//!   exactly one factor is imaginary;
//! * cyclic fields: index 1;
//! * R5 biquadratic fields with real quadratic K⁺ = Q(√D), decided by the
//!   ideal-theoretic criteria in Q(√D) (essential ramification when
//!   w ≡ 2 mod 4, the ideal above 2 when w ≡ 4 mod 8).
//!
//! Anything else is reported as unsupported; callers may supply Q by hand.

use std::fmt;

use serde::Serialize;

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::fieldlat::{prime_power_decomposition, two_primary_subfield, AbelianField};
use crate::quadratic::{ideal_sqrt_of_element, is_principal, split_prime, Splitting};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    /// Value supplied by the caller.
    UserOverride,
    /// Imaginary quadratic field: E_K = W_K.
    ImaginaryQuadratic,
    /// Q(ζ_m) with m a prime power.
    CyclotomicPrimePower,
    /// Q(ζ_m) with m composite: 1 − ζ_m is a unit.
    CyclotomicComposite,
    /// Imaginary subfield of Q(ζ_{p^k}).
    PrimePowerConductor,
    /// Product over distinct prime-power conductors, one imaginary factor.
    OneImaginaryFactor,
    /// Product over distinct prime-power conductors, several imaginary factors.
    SeveralImaginaryFactors,
    /// Cyclic over Q.
    Cyclic,
    /// w ≡ 2 mod 4 and K/K⁺ essentially ramified.
    EssentiallyRamified,
    /// w ≡ 2 mod 4, (α) = 𝔞² with 𝔞 principal.
    SquareRootPrincipal,
    /// w ≡ 2 mod 4, (α) = 𝔞² with 𝔞 not principal; [𝔞] capitulates.
    SquareRootNonPrincipal,
    /// w ≡ 2^m mod 2^{m+1}, π_m not an ideal square in K⁺.
    PiNotSquare,
    /// w ≡ 2^m mod 2^{m+1}, π_m = 𝔟² with 𝔟 principal.
    PiSquarePrincipal,
    /// w ≡ 2^m mod 2^{m+1}, π_m = 𝔟² with 𝔟 not principal; [𝔟] capitulates.
    PiSquareNonPrincipal,
}

impl Rule {
    /// Short tag used in tables and JSON.
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::UserOverride => "override",
            Rule::ImaginaryQuadratic => "R1",
            Rule::CyclotomicPrimePower | Rule::CyclotomicComposite => "R2",
            Rule::PrimePowerConductor => "R3",
            Rule::OneImaginaryFactor | Rule::SeveralImaginaryFactors => "R4",
            Rule::Cyclic => "R4/cyclic",
            Rule::EssentiallyRamified => "R5/(i)1",
            Rule::SquareRootPrincipal => "R5/(i)2a",
            Rule::SquareRootNonPrincipal => "R5/(i)2b",
            Rule::PiNotSquare => "R5/(ii)1",
            Rule::PiSquarePrincipal => "R5/(ii)2a",
            Rule::PiSquareNonPrincipal => "R5/(ii)2b",
        }
    }

    /// The statement the rule applies.
    pub fn citation(&self) -> &'static str {
        match self {
            Rule::UserOverride => "unit index supplied by the caller",
            Rule::ImaginaryQuadratic => "imaginary quadratic fields have E_K = W_K, so Q = 1",
            Rule::CyclotomicPrimePower => {
                "Q(zeta_m) has Q = 1 when m (not 2 mod 4) is a prime power (Hasse, Satz 27)"
            }
            Rule::CyclotomicComposite => {
                "Q(zeta_m) has Q = 2 when m (not 2 mod 4) is composite (Hasse, Satz 27)"
            }
            Rule::PrimePowerConductor => {
                "imaginary subfields of Q(zeta_{p^k}) have Q = 1 and trivial capitulation (Hasse, Satz 23)"
            }
            Rule::OneImaginaryFactor => {
                "compositum over distinct prime-power conductors with exactly one imaginary factor has Q = 1 (Uchida)"
            }
            Rule::SeveralImaginaryFactors => {
                "compositum over distinct prime-power conductors with two or more imaginary factors has Q = 2 (Uchida)"
            }
            Rule::Cyclic => "cyclic CM-fields have Q = 1 (Hasse, Satz 24)",
            Rule::EssentiallyRamified => {
                "w = 2 mod 4 and K/K+ essentially ramified: Q = 1, no capitulation"
            }
            Rule::SquareRootPrincipal => "w = 2 mod 4, (alpha) = a^2 with a principal: Q = 2",
            Rule::SquareRootNonPrincipal => {
                "w = 2 mod 4, (alpha) = a^2 with a non-principal: Q = 1, kernel generated by [a]"
            }
            Rule::PiNotSquare => "w = 2^m mod 2^(m+1), pi_m not an ideal square: Q = 1, no capitulation",
            Rule::PiSquarePrincipal => "w = 2^m mod 2^(m+1), pi_m = b^2 with b principal: Q = 2",
            Rule::PiSquareNonPrincipal => {
                "w = 2^m mod 2^(m+1), pi_m = b^2 with b non-principal: Q = 1, kernel generated by [b]"
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitIndexVerdict {
    /// Hasse's unit index, 1 or 2.
    pub q: u8,
    /// Order of the capitulation kernel, when decided.
    pub kappa_order: Option<u8>,
    pub rule: Rule,
    /// Whether K/K⁺ is essentially ramified; only decided by the w ≡ 2 mod 4
    /// biquadratic criteria.
    pub essential_ramification: Option<bool>,
    /// True when the verdict was computed on a proper 2-primary subfield.
    pub reduced_to_two_part: bool,
}

impl UnitIndexVerdict {
    fn new(q: u8, kappa: u8, rule: Rule) -> Self {
        UnitIndexVerdict {
            q,
            kappa_order: Some(kappa),
            rule,
            essential_ramification: None,
            reduced_to_two_part: false,
        }
    }

    fn with_ramification(mut self, ess: bool) -> Self {
        self.essential_ramification = Some(ess);
        self
    }
}

type RuleFn = fn(&AbelianField) -> Result<Option<UnitIndexVerdict>>;

const CASCADE: [RuleFn; 6] = [
    rule_imaginary_quadratic,
    rule_full_cyclotomic,
    rule_prime_power_conductor,
    rule_prime_power_decomposition,
    rule_cyclic,
    rule_biquadratic,
];

fn rule_imaginary_quadratic(k: &AbelianField) -> Result<Option<UnitIndexVerdict>> {
    Ok((k.degree() == 2).then(|| UnitIndexVerdict::new(1, 1, Rule::ImaginaryQuadratic)))
}

fn rule_full_cyclotomic(k: &AbelianField) -> Result<Option<UnitIndexVerdict>> {
    Ok(k.as_full_cyclotomic().map(|m| {
        if prime_power(m).is_some() {
            UnitIndexVerdict::new(1, 1, Rule::CyclotomicPrimePower)
        } else {
            UnitIndexVerdict::new(2, 1, Rule::CyclotomicComposite)
        }
    }))
}

fn rule_prime_power_conductor(k: &AbelianField) -> Result<Option<UnitIndexVerdict>> {
    Ok(prime_power(k.conductor())
        .map(|_| UnitIndexVerdict::new(1, 1, Rule::PrimePowerConductor)))
}

fn rule_prime_power_decomposition(k: &AbelianField) -> Result<Option<UnitIndexVerdict>> {
    let Some(parts) = prime_power_decomposition(k) else {
        return Ok(None);
    };
    if parts.len() < 2 {
        return Ok(None);
    }
    let imaginary = parts.iter().filter(|p| p.is_cm()).count();
    Ok(match imaginary {
        0 => None,
        1 => Some(UnitIndexVerdict::new(1, 1, Rule::OneImaginaryFactor)),
        _ => Some(UnitIndexVerdict::new(2, 1, Rule::SeveralImaginaryFactors)),
    })
}

fn rule_cyclic(k: &AbelianField) -> Result<Option<UnitIndexVerdict>> {
    let cyclic = k.characters().iter().any(|c| c.order() as usize == k.degree());
    Ok(cyclic.then(|| UnitIndexVerdict::new(1, 1, Rule::Cyclic)))
}

/// Biquadratic CM-field data: (D of K⁺, imaginary quadratic subfields, w).
fn biquadratic_data(k: &AbelianField) -> Option<(i64, Vec<i64>, u64)> {
    if k.degree() != 4 || k.exponent() != 2 {
        return None;
    }
    let d = k.maximal_real_subfield().quadratic_discriminant()?;
    let imaginary: Vec<i64> = k.quadratic_subfields().into_iter().filter(|&x| x < 0).collect();
    Some((d, imaginary, k.roots_of_unity_order()))
}

/// Essential-ramification test for K = K⁺(√d₁) over K⁺ = Q(√D): returns
/// the square-root ideal 𝔞 with (d₁) = 𝔞² when it exists.
pub fn essential_ramification_witness(
    real_disc: i64,
    imaginary_disc: i64,
) -> Option<crate::quadratic::QuadIdeal> {
    ideal_sqrt_of_element(real_disc, imaginary_disc)
}

fn rule_biquadratic(k: &AbelianField) -> Result<Option<UnitIndexVerdict>> {
    let Some((d, imaginary, w)) = biquadratic_data(k) else {
        return Ok(None);
    };
    if w % 4 == 2 {
        // K = K⁺(√d₁) with d₁ the imaginary subfield of smallest conductor.
        let d1 = imaginary[0];
        let verdict = match essential_ramification_witness(d, d1) {
            None => UnitIndexVerdict::new(1, 1, Rule::EssentiallyRamified).with_ramification(true),
            Some(a) if is_principal(&a) => {
                UnitIndexVerdict::new(2, 1, Rule::SquareRootPrincipal).with_ramification(false)
            }
            Some(_) => {
                UnitIndexVerdict::new(1, 2, Rule::SquareRootNonPrincipal).with_ramification(false)
            }
        };
        return Ok(Some(verdict));
    }
    if w % 8 == 4 {
        // i ∈ K, so m = 2 and π_2 = 2: (2) is an ideal square iff 2 ramifies.
        let verdict = match split_prime(d, 2) {
            (Splitting::Ramified, Some(b)) if is_principal(&b) => {
                UnitIndexVerdict::new(2, 1, Rule::PiSquarePrincipal)
            }
            (Splitting::Ramified, Some(_)) => UnitIndexVerdict::new(1, 2, Rule::PiSquareNonPrincipal),
            _ => UnitIndexVerdict::new(1, 1, Rule::PiNotSquare),
        };
        return Ok(Some(verdict));
    }
    // w ≡ 0 mod 8: ζ_8 ∈ K forces K = Q(ζ_8), K⁺ = Q(√2), π_3 = 2 + √2 and
    // (2 + √2) = (√2) is prime, not a square.
    if k.as_full_cyclotomic() == Some(8) && d == 8 {
        return Ok(Some(UnitIndexVerdict::new(1, 1, Rule::PiNotSquare)));
    }
    Err(Error::InternalInconsistency(format!(
        "biquadratic field {k:?} with w = {w} is not Q(zeta_8)"
    )))
}

fn describe(k: &AbelianField) -> String {
    format!("conductor {}, degree {}, {}", k.conductor(), k.degree(), k.to_spec())
}

/// Q(K) with its capitulation indicator. `override_q`, when given, is
/// returned as is.
pub fn hasse_unit_index(k: &AbelianField, override_q: Option<u8>) -> Result<UnitIndexVerdict> {
    if !k.is_cm() {
        return Err(Error::NotCm(describe(k)));
    }
    if let Some(q) = override_q {
        if q != 1 && q != 2 {
            return Err(Error::InvalidArgument(format!("unit index override {q} is not 1 or 2")));
        }
        return Ok(UnitIndexVerdict {
            q,
            kappa_order: None,
            rule: Rule::UserOverride,
            essential_ramification: None,
            reduced_to_two_part: false,
        });
    }
    let reduced = two_primary_subfield(k);
    let was_reduced = reduced != *k;
    for rule in CASCADE {
        if let Some(mut v) = rule(&reduced)? {
            v.reduced_to_two_part = was_reduced;
            return Ok(v);
        }
    }
    Err(Error::Unsupported(describe(k)))
}

/// Every verdict produced by any rule on K or on its 2-primary subfield,
/// without early exit. Used to check that overlapping rules agree.
pub fn all_matching_verdicts(k: &AbelianField) -> Result<Vec<UnitIndexVerdict>> {
    if !k.is_cm() {
        return Err(Error::NotCm(describe(k)));
    }
    let reduced = two_primary_subfield(k);
    let mut out = Vec::new();
    for field in [k, &reduced] {
        for rule in CASCADE {
            if let Some(v) = rule(field)? {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Outcome of the Q(i, √2p) versus Q(i, √2, √p) comparison for p ≡ 1 mod 8.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MartinetReport {
    pub p: u64,
    pub unit_norm: i32,
    pub q_k: u8,
    pub q_l: u8,
    pub rule_k: Rule,
    pub rule_l: Rule,
}

/// For p ≡ 1 mod 8 with N(ε_{2p}) = +1: Q(Q(i, √2p)) = 2 while
/// Q(Q(i, √2, √p)) = 1. Returns `PreconditionViolated` when the unit norm
/// is −1.
pub fn martinet_pair(p: u64, max_degree: usize) -> Result<MartinetReport> {
    use crate::fieldlat::{compositum, cyclotomic_field, quadratic_field};
    use crate::quadratic::fundamental_unit_norm;

    if !crate::arith::is_prime(p) || p % 8 != 1 {
        return Err(Error::InvalidArgument(format!("{p} is not a prime ≡ 1 mod 8")));
    }
    let d = 8 * p as i64;
    let n = fundamental_unit_norm(d)?;
    if n == -1 {
        return Err(Error::PreconditionViolated(format!(
            "fundamental unit of Q(sqrt {}) has norm -1",
            2 * p
        )));
    }
    let k = compositum(&quadratic_field(-4)?, &quadratic_field(d)?, max_degree)?;
    let l = compositum(&cyclotomic_field(8, max_degree)?, &quadratic_field(p as i64)?, max_degree)?;
    let vk = hasse_unit_index(&k, None)?;
    let vl = hasse_unit_index(&l, None)?;
    Ok(MartinetReport {
        p,
        unit_norm: n,
        q_k: vk.q,
        q_l: vl.q,
        rule_k: vk.rule,
        rule_l: vl.rule,
    })
}
