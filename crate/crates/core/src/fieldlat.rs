//! Abelian number fields described extensionally by their character groups.
//!
//! Every field is stored at its conductor: all member characters are defined
//! modulo the lcm of their conductors, sorted by exponent vector. Two fields
//! are equal iff their character sets are equal.

use std::collections::BTreeSet;
use std::fmt;

use crate::arith::{divisors, euler_phi, is_fundamental_discriminant, lcm};
use crate::characters::{
    all_characters, kronecker_character, shared_unit_group, DirichletCharacter,
};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEGREE: usize = 256;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianField {
    conductor: u64,
    chars: Vec<DirichletCharacter>,
}

impl AbelianField {
    pub fn rationals() -> Self {
        AbelianField {
            conductor: 1,
            chars: vec![DirichletCharacter::principal(1)],
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.chars.len()
    }

    /// Member characters, all defined modulo the conductor.
    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.chars
    }

    pub fn contains_character(&self, chi: &DirichletCharacter) -> bool {
        match chi.at_modulus(self.conductor) {
            Ok(c) => self.chars.binary_search(&c).is_ok(),
            Err(_) => false,
        }
    }

    pub fn odd_characters(&self) -> Vec<DirichletCharacter> {
        self.chars.iter().filter(|c| c.is_odd()).cloned().collect()
    }

    pub fn even_characters(&self) -> Vec<DirichletCharacter> {
        self.chars.iter().filter(|c| !c.is_odd()).cloned().collect()
    }

    /// True iff the field is totally imaginary, which for abelian fields is
    /// the same as being CM.
    pub fn is_cm(&self) -> bool {
        self.chars.iter().any(DirichletCharacter::is_odd)
    }

    /// The subfield of even characters.
    pub fn maximal_real_subfield(&self) -> Self {
        Self::from_closed_set(self.even_characters())
    }

    /// `Some(m)` when this field is Q(ζ_m) with m ≢ 2 mod 4.
    pub fn as_full_cyclotomic(&self) -> Option<u64> {
        if self.degree() as u64 == euler_phi(self.conductor) {
            Some(self.conductor)
        } else {
            None
        }
    }

    /// Order w of the group of roots of unity in the field.
    pub fn roots_of_unity_order(&self) -> u64 {
        let n = divisors(self.conductor)
            .into_iter()
            .filter(|&n| n % 4 != 2)
            .filter(|&n| {
                all_characters(n)
                    .iter()
                    .all(|c| self.contains_character(c))
            })
            .max()
            .unwrap_or(1);
        if n % 2 == 0 {
            n
        } else {
            2 * n
        }
    }

    /// True iff `self` is a subfield of `other`.
    pub fn is_subfield_of(&self, other: &AbelianField) -> bool {
        other.conductor % self.conductor == 0
            && self.chars.iter().all(|c| other.contains_character(c))
    }

    /// Exponent of the character group.
    pub fn exponent(&self) -> u64 {
        self.chars.iter().fold(1, |acc, c| lcm(acc, c.order()))
    }

    /// Discriminant of a quadratic field (degree 2).
    pub fn quadratic_discriminant(&self) -> Option<i64> {
        if self.degree() != 2 {
            return None;
        }
        let chi = self.chars.iter().find(|c| !c.is_principal())?;
        Some(chi.parity() as i64 * self.conductor as i64)
    }

    /// Discriminants of all quadratic subfields, in increasing |d| order.
    pub fn quadratic_subfields(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .chars
            .iter()
            .filter(|c| c.order() == 2)
            .map(|c| c.parity() as i64 * c.conductor() as i64)
            .collect();
        out.sort_by_key(|d| (d.unsigned_abs(), *d));
        out
    }

    /// A generating set of the character group, chosen greedily in sorted
    /// order.
    pub fn generators(&self) -> Vec<DirichletCharacter> {
        let mut gens: Vec<DirichletCharacter> = Vec::new();
        let mut span: BTreeSet<DirichletCharacter> =
            [DirichletCharacter::principal(self.conductor)].into();
        for c in self.chars.iter().rev() {
            if span.contains(c) {
                continue;
            }
            gens.push(c.clone());
            span = close_set(span.into_iter().chain([c.clone()]).collect(), usize::MAX)
                .expect("unbounded closure");
        }
        gens.reverse();
        gens
    }

    /// Canonical field-spec text `chars:<gen>+<gen>...`.
    pub fn to_spec(&self) -> String {
        let gens = self.generators();
        if gens.is_empty() {
            return format!("chars:{}", DirichletCharacter::principal(1));
        }
        let parts: Vec<String> = gens.iter().map(ToString::to_string).collect();
        format!("chars:{}", parts.join("+"))
    }

    /// Builds a field from a set of characters already closed under the group
    /// law; restricts members to the set's conductor.
    fn from_closed_set(chars: Vec<DirichletCharacter>) -> Self {
        let f = chars.iter().fold(1, |acc, c| lcm(acc, c.conductor()));
        let mut chars: Vec<DirichletCharacter> = chars
            .into_iter()
            .map(|c| c.at_modulus(f).expect("conductor divides f"))
            .collect();
        chars.sort();
        chars.dedup();
        AbelianField { conductor: f, chars }
    }
}

impl fmt::Debug for AbelianField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AbelianField(conductor {}, degree {}, {})",
            self.conductor,
            self.degree(),
            self.to_spec()
        )
    }
}

impl fmt::Display for AbelianField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_spec())
    }
}

/// Closure of a set of characters sharing one modulus under multiplication.
fn close_set(
    start: BTreeSet<DirichletCharacter>,
    max_degree: usize,
) -> Result<BTreeSet<DirichletCharacter>> {
    let mut group = start;
    let gens: Vec<DirichletCharacter> = group.iter().cloned().collect();
    let mut frontier: Vec<DirichletCharacter> = gens.clone();
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = x.mul(g);
            if group.insert(y.clone()) {
                if group.len() > max_degree {
                    return Err(Error::DegreeBoundExceeded(max_degree));
                }
                frontier.push(y);
            }
        }
    }
    Ok(group)
}

/// The field whose character group is generated by `gens`.
pub fn field_from_generators(
    gens: &[DirichletCharacter],
    max_degree: usize,
) -> Result<AbelianField> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one generator is required".into(),
        ));
    }
    let f = gens.iter().fold(1, |acc, c| lcm(acc, c.conductor()));
    let mut start: BTreeSet<DirichletCharacter> = BTreeSet::new();
    start.insert(DirichletCharacter::principal(f));
    for g in gens {
        start.insert(g.at_modulus(f)?);
    }
    let group = close_set(start, max_degree)?;
    Ok(AbelianField {
        conductor: f,
        chars: group.into_iter().collect(),
    })
}

/// Q(ζ_m); m ≡ 2 mod 4 is normalized to m/2.
pub fn cyclotomic_field(m: u64, max_degree: usize) -> Result<AbelianField> {
    if m == 0 {
        return Err(Error::InvalidArgument("cyclotomic level must be positive".into()));
    }
    let m = if m % 4 == 2 { m / 2 } else { m };
    if euler_phi(m) as usize > max_degree {
        return Err(Error::DegreeBoundExceeded(max_degree));
    }
    let mut chars = all_characters(m);
    chars.sort();
    Ok(AbelianField { conductor: m, chars })
}

/// Q(√d) for a fundamental discriminant d.
pub fn quadratic_field(d: i64) -> Result<AbelianField> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamentalDiscriminant(d));
    }
    let chi = kronecker_character(d);
    let m = chi.modulus();
    let mut chars = vec![DirichletCharacter::principal(m), chi];
    chars.sort();
    Ok(AbelianField { conductor: m, chars })
}

pub fn compositum(a: &AbelianField, b: &AbelianField, max_degree: usize) -> Result<AbelianField> {
    let gens: Vec<DirichletCharacter> = a.generators().into_iter().chain(b.generators()).collect();
    if gens.is_empty() {
        return Ok(AbelianField::rationals());
    }
    field_from_generators(&gens, max_degree)
}

pub fn intersection(a: &AbelianField, b: &AbelianField) -> AbelianField {
    let common: Vec<DirichletCharacter> = a
        .chars
        .iter()
        .filter(|c| b.contains_character(c))
        .cloned()
        .collect();
    AbelianField::from_closed_set(common)
}

/// Splits the field along the prime-power parts of its conductor when the
/// character group is the direct product of its projections.
pub fn prime_power_decomposition(k: &AbelianField) -> Option<Vec<AbelianField>> {
    let g = shared_unit_group(k.conductor);
    let parts = g.prime_power_parts();
    let mut projections: Vec<BTreeSet<DirichletCharacter>> = vec![BTreeSet::new(); parts.len()];
    for chi in &k.chars {
        for (i, (_, q, range)) in parts.iter().enumerate() {
            let local = DirichletCharacter::new(*q, &chi.exponents()[range.clone()])
                .expect("projection has the local rank");
            projections[i].insert(local);
        }
    }
    let product: usize = projections.iter().map(BTreeSet::len).product();
    if product != k.degree() {
        return None;
    }
    Some(
        projections
            .into_iter()
            .map(|set| AbelianField::from_closed_set(set.into_iter().collect()))
            .collect(),
    )
}

/// The subfield cut out by the 2-Sylow subgroup of the character group.
pub fn two_primary_subfield(k: &AbelianField) -> AbelianField {
    AbelianField::from_closed_set(
        k.chars
            .iter()
            .filter(|c| c.order().is_power_of_two())
            .cloned()
            .collect(),
    )
}

/// Every subfield, as the fields of all subgroups of the character group,
/// ordered by (degree, conductor, characters).
pub fn subfields(k: &AbelianField) -> Vec<AbelianField> {
    let principal = DirichletCharacter::principal(k.conductor);
    let mut found: BTreeSet<BTreeSet<DirichletCharacter>> = BTreeSet::new();
    let trivial: BTreeSet<DirichletCharacter> = [principal].into();
    found.insert(trivial.clone());
    let mut frontier = vec![trivial];
    // Cyclic subgroups suffice as building blocks.
    let cyclic: Vec<BTreeSet<DirichletCharacter>> = k
        .chars
        .iter()
        .map(|c| (0..c.order()).map(|j| c.pow(j as i64)).collect())
        .collect();
    while let Some(h) = frontier.pop() {
        for (c, cyc) in k.chars.iter().zip(&cyclic) {
            if h.contains(c) {
                continue;
            }
            let mut start = h.clone();
            start.extend(cyc.iter().cloned());
            let next = close_set(start, usize::MAX).expect("unbounded closure");
            if found.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<AbelianField> = found
        .into_iter()
        .map(|s| AbelianField::from_closed_set(s.into_iter().collect()))
        .collect();
    out.sort_by(|a, b| (a.degree(), a.conductor, &a.chars).cmp(&(b.degree(), b.conductor, &b.chars)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::make_character;

    const B: usize = DEFAULT_MAX_DEGREE;

    fn chi(m: u64, e: &[u64]) -> DirichletCharacter {
        make_character(m, e).unwrap()
    }

    #[test]
    fn from_generators_examples() {
        let qi = field_from_generators(&[chi(4, &[1])], B).unwrap();
        assert_eq!(qi.degree(), 2);
        assert_eq!(qi, quadratic_field(-4).unwrap());
        let z20 = field_from_generators(&[chi(4, &[1]), chi(5, &[1])], B).unwrap();
        assert_eq!(z20.degree(), 8);
        assert_eq!(z20, cyclotomic_field(20, B).unwrap());
        let q = field_from_generators(&[DirichletCharacter::principal(7)], B).unwrap();
        assert_eq!(q, AbelianField::rationals());
        assert!(matches!(
            field_from_generators(&[chi(5, &[1])], 3),
            Err(Error::DegreeBoundExceeded(3))
        ));
    }

    #[test]
    fn cyclotomic_and_quadratic() {
        assert_eq!(cyclotomic_field(4, B).unwrap().degree(), 2);
        assert_eq!(cyclotomic_field(14, B).unwrap(), cyclotomic_field(7, B).unwrap());
        let k = quadratic_field(-20).unwrap();
        assert_eq!(k.conductor(), 20);
        assert!(k.is_cm());
        let r = quadratic_field(40).unwrap();
        assert_eq!(r.conductor(), 40);
        assert!(!r.is_cm());
        assert_eq!(quadratic_field(12).unwrap().quadratic_discriminant(), Some(12));
        assert_eq!(quadratic_field(-3).unwrap().quadratic_discriminant(), Some(-3));
        assert_eq!(quadratic_field(20), Err(Error::NotFundamentalDiscriminant(20)));
    }

    #[test]
    fn cm_and_real_subfield() {
        let z5 = cyclotomic_field(5, B).unwrap();
        assert!(z5.is_cm());
        assert_eq!(z5.maximal_real_subfield(), quadratic_field(5).unwrap());
        assert!(!AbelianField::rationals().is_cm());
        for m in 3..=60u64 {
            if m % 4 == 2 {
                continue;
            }
            let k = cyclotomic_field(m, B).unwrap();
            let plus = k.maximal_real_subfield();
            assert_eq!(plus.degree() * 2, k.degree());
            assert_eq!(plus.maximal_real_subfield(), plus);
            assert!(!plus.is_cm());
        }
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(cyclotomic_field(12, B).unwrap().roots_of_unity_order(), 12);
        let qi5 = compositum(&quadratic_field(-4).unwrap(), &quadratic_field(5).unwrap(), B).unwrap();
        assert_eq!(qi5.roots_of_unity_order(), 4);
        assert_eq!(quadratic_field(-3).unwrap().roots_of_unity_order(), 6);
        assert_eq!(quadratic_field(-23).unwrap().roots_of_unity_order(), 2);
        for m in 1..=60u64 {
            if m % 4 == 2 {
                continue;
            }
            let w = cyclotomic_field(m, B).unwrap().roots_of_unity_order();
            assert_eq!(w, if m % 2 == 0 { m } else { 2 * m }, "m = {m}");
        }
    }

    #[test]
    fn compositum_and_intersection() {
        let qi = quadratic_field(-4).unwrap();
        let q5 = quadratic_field(5).unwrap();
        let k = compositum(&qi, &q5, B).unwrap();
        assert_eq!(k.degree(), 4);
        assert_eq!(k.conductor(), 20);
        assert_eq!(compositum(&k, &k, B).unwrap(), k);
        let z8 = cyclotomic_field(8, B).unwrap();
        let z12 = cyclotomic_field(12, B).unwrap();
        // Q(ζ_8) ∩ Q(ζ_12) = Q(i): the only shared character is χ_{−4}.
        assert_eq!(intersection(&z8, &z12), qi);
        assert_eq!(compositum(&z8, &z12, B).unwrap(), cyclotomic_field(24, B).unwrap());
    }

    #[test]
    fn decomposition_examples() {
        let qi = quadratic_field(-4).unwrap();
        let q5 = quadratic_field(5).unwrap();
        let k = compositum(&qi, &q5, B).unwrap();
        assert_eq!(prime_power_decomposition(&k), Some(vec![qi.clone(), q5]));
        assert_eq!(prime_power_decomposition(&quadratic_field(-20).unwrap()), None);
        assert_eq!(
            prime_power_decomposition(&cyclotomic_field(15, B).unwrap()),
            Some(vec![cyclotomic_field(3, B).unwrap(), cyclotomic_field(5, B).unwrap()])
        );
    }

    #[test]
    fn two_primary_examples() {
        let z7 = cyclotomic_field(7, B).unwrap();
        assert_eq!(two_primary_subfield(&z7), quadratic_field(-7).unwrap());
        let qi = quadratic_field(-4).unwrap();
        assert_eq!(two_primary_subfield(&qi), qi);
        let t = two_primary_subfield(&cyclotomic_field(13, B).unwrap());
        assert_eq!((t.degree(), t.conductor()), (4, 13));
    }

    #[test]
    fn two_primary_subfield_is_cm_with_odd_index() {
        for m in 3..=60u64 {
            if m % 4 == 2 {
                continue;
            }
            for k in subfields(&cyclotomic_field(m, B).unwrap()) {
                if !k.is_cm() {
                    continue;
                }
                let t = two_primary_subfield(&k);
                assert!(t.is_cm());
                assert!(t.is_subfield_of(&k));
                assert_eq!((k.degree() / t.degree()) % 2, 1);
                assert_eq!(k.odd_characters().len(), k.degree() / 2);
            }
        }
    }

    #[test]
    fn subfield_counts() {
        // Q(ζ_5): Q, Q(√5), Q(ζ_5). Q(ζ_8): Q, three quadratics, itself.
        assert_eq!(subfields(&cyclotomic_field(5, B).unwrap()).len(), 3);
        assert_eq!(subfields(&cyclotomic_field(8, B).unwrap()).len(), 5);
        // (Z/24)* ≅ C2^3 has 16 subgroups.
        assert_eq!(subfields(&cyclotomic_field(24, B).unwrap()).len(), 16);
    }

    #[test]
    fn conductor_of_compositum_is_lcm() {
        let ds = [-3i64, -4, -7, -8, 5, 8, 12, 13, -15, 17];
        for &a in &ds {
            for &b in &ds {
                let ka = quadratic_field(a).unwrap();
                let kb = quadratic_field(b).unwrap();
                let c = compositum(&ka, &kb, B).unwrap();
                assert_eq!(c.conductor(), lcm(ka.conductor(), kb.conductor()));
            }
        }
    }

    #[test]
    fn spec_round_trip_of_generators() {
        let k = cyclotomic_field(40, B).unwrap();
        let again = field_from_generators(&k.generators(), B).unwrap();
        assert_eq!(again, k);
    }
}
