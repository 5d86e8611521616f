//! Finite abelian groups presented as `Z_{n_1} x ... x Z_{n_r}`.
//!
//! Elements and characters are both residue vectors. The character with
//! exponents `m` takes the value `exp(2 pi i sum_j m_j s_j / n_j)` at `s`.
//! Elements and characters are enumerated lexicographically with the first
//! coordinate most significant, which coincides with the mixed-radix
//! [`AbelianGroup::index_of`] order.
//!
//! The field-to-group maps at the bottom convert finite field elements into
//! this representation once, so downstream code never does field arithmetic.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::finite_field::{Extension, FieldElement, FieldTable};

/// Largest group order for which [`AbelianGroup::characters`] materializes
/// the full character list.
pub const DEFAULT_GROUP_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group element or character does not belong to Z_{moduli:?}")]
    GroupMismatch { moduli: Vec<u64> },
    #[error("group order {order} exceeds the cap {cap}")]
    GroupTooLarge { order: u64, cap: u64 },
    #[error("invalid group presentation {0:?}: need at least one modulus, all >= 1")]
    InvalidModuli(Vec<u64>),
    #[error("field element is zero; it has no multiplicative coordinate")]
    ZeroElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    moduli: Vec<u64>,
    order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterIndex {
    exponents: Vec<u64>,
}

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

impl CharacterIndex {
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.residues)
    }
}

impl fmt::Display for CharacterIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.exponents)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, v: &[u64]) -> fmt::Result {
    if v.len() == 1 {
        return write!(f, "{}", v[0]);
    }
    write!(f, "(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z_{n}")?;
        }
        Ok(())
    }
}

impl AbelianGroup {
    pub fn new(moduli: Vec<u64>) -> Result<Self, GroupError> {
        if moduli.is_empty() || moduli.contains(&0) {
            return Err(GroupError::InvalidModuli(moduli));
        }
        let order = moduli
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| GroupError::InvalidModuli(moduli.clone()))?;
        Ok(AbelianGroup { moduli, order })
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        Self::new(vec![n])
    }

    /// `self x other`, coordinates of `self` first.
    pub fn product(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&other.moduli);
        AbelianGroup::new(moduli).expect("product of valid groups")
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement, GroupError> {
        let e = GroupElement { residues };
        self.check(&e.residues)?;
        Ok(e)
    }

    pub fn character(&self, exponents: Vec<u64>) -> Result<CharacterIndex, GroupError> {
        self.check(&exponents)?;
        Ok(CharacterIndex { exponents })
    }

    fn check(&self, v: &[u64]) -> Result<(), GroupError> {
        if v.len() != self.moduli.len() || v.iter().zip(&self.moduli).any(|(x, n)| x >= n) {
            return Err(self.mismatch());
        }
        Ok(())
    }

    fn mismatch(&self) -> GroupError {
        GroupError::GroupMismatch {
            moduli: self.moduli.clone(),
        }
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.check(&e.residues).is_ok()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            residues: vec![0; self.moduli.len()],
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(&a.residues)?;
        self.check(&b.residues)?;
        Ok(GroupElement {
            residues: self
                .moduli
                .iter()
                .zip(a.residues.iter().zip(&b.residues))
                .map(|(n, (x, y))| (x + y) % n)
                .collect(),
        })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(&a.residues)?;
        Ok(GroupElement {
            residues: self
                .moduli
                .iter()
                .zip(&a.residues)
                .map(|(n, x)| (n - x) % n)
                .collect(),
        })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.add(a, &self.neg(b)?)
    }

    /// Mixed-radix rank of `e` in the lexicographic element order.
    pub fn index_of(&self, e: &GroupElement) -> Result<u64, GroupError> {
        self.check(&e.residues)?;
        Ok(self.rank_of(&e.residues))
    }

    fn rank_of(&self, v: &[u64]) -> u64 {
        v.iter().zip(&self.moduli).fold(0, |acc, (x, n)| acc * n + x)
    }

    fn unrank(&self, mut idx: u64) -> Vec<u64> {
        let mut out = vec![0; self.moduli.len()];
        for (slot, n) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = idx % n;
            idx /= n;
        }
        out
    }

    pub fn element_at(&self, idx: u64) -> Result<GroupElement, GroupError> {
        if idx >= self.order {
            return Err(self.mismatch());
        }
        Ok(GroupElement {
            residues: self.unrank(idx),
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| GroupElement {
            residues: self.unrank(i),
        })
    }

    pub fn character_at(&self, idx: u64) -> Result<CharacterIndex, GroupError> {
        if idx >= self.order {
            return Err(self.mismatch());
        }
        Ok(CharacterIndex {
            exponents: self.unrank(idx),
        })
    }

    pub fn character_index_of(&self, m: &CharacterIndex) -> Result<u64, GroupError> {
        self.check(&m.exponents)?;
        Ok(self.rank_of(&m.exponents))
    }

    /// The whole dual group, lexicographic in the exponent vectors.
    pub fn characters(&self) -> Result<Vec<CharacterIndex>, GroupError> {
        self.characters_with_cap(DEFAULT_GROUP_CAP)
    }

    pub fn characters_with_cap(&self, cap: u64) -> Result<Vec<CharacterIndex>, GroupError> {
        if self.order > cap {
            return Err(GroupError::GroupTooLarge {
                order: self.order,
                cap,
            });
        }
        Ok((0..self.order)
            .map(|i| CharacterIndex {
                exponents: self.unrank(i),
            })
            .collect())
    }

    /// `beta - alpha` in the dual group, i.e. `beta * conj(alpha)`.
    pub fn character_quotient(
        &self,
        beta: &CharacterIndex,
        alpha: &CharacterIndex,
    ) -> Result<CharacterIndex, GroupError> {
        let b = GroupElement {
            residues: beta.exponents.clone(),
        };
        let a = GroupElement {
            residues: alpha.exponents.clone(),
        };
        Ok(CharacterIndex {
            exponents: self.sub(&b, &a)?.residues,
        })
    }

    /// The phase `sum_j m_j s_j / n_j mod 1` as an exact fraction
    /// `num / den` with `den = lcm(n_j)` and `0 <= num < den`.
    pub fn char_phase(&self, m: &CharacterIndex, s: &GroupElement) -> Result<(u128, u128), GroupError> {
        self.check(&m.exponents)?;
        self.check(&s.residues)?;
        let den = self
            .moduli
            .iter()
            .fold(1u128, |acc, &n| num_integer::lcm(acc, n as u128));
        let num = self
            .moduli
            .iter()
            .zip(m.exponents.iter().zip(&s.residues))
            .fold(0u128, |acc, (&n, (&mj, &sj))| {
                let term = (mj as u128 * sj as u128 % n as u128) * (den / n as u128);
                (acc + term) % den
            });
        Ok((num, den))
    }

    pub fn char_eval(&self, m: &CharacterIndex, s: &GroupElement) -> Result<Complex64, GroupError> {
        let (num, den) = self.char_phase(m, s)?;
        Ok(root_of_unity(num, den))
    }
}

/// `exp(2 pi i num / den)` for `0 <= num < den`.
pub fn root_of_unity(num: u128, den: u128) -> Complex64 {
    if num == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * num == den {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * num == den {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * num == 3 * den {
        return Complex64::new(0.0, -1.0);
    }
    let angle = std::f64::consts::TAU * (num as f64 / den as f64);
    let (s, c) = angle.sin_cos();
    Complex64::new(c, s)
}

/// A bijection between (part of) a finite field and a cyclic-product group.
pub trait FieldGroupMap {
    fn group(&self) -> &AbelianGroup;
    /// The field elements in the map's domain, in increasing index order.
    fn domain(&self) -> Vec<FieldElement>;
    fn to_group(&self, x: FieldElement) -> Result<GroupElement, GroupError>;
    /// A preimage of `g`; for quotient maps, the smallest-log representative.
    fn from_group(&self, g: &GroupElement) -> Result<FieldElement, GroupError>;
}

/// `(GF(p^k), +) -> (Z_p)^k` via coefficient vectors.
pub struct AdditiveMap<'a> {
    field: &'a FieldTable,
    group: AbelianGroup,
}

pub fn additive_group_of(field: &FieldTable) -> AdditiveMap<'_> {
    let group = AbelianGroup::new(vec![field.characteristic(); field.degree() as usize])
        .expect("field characteristic is positive");
    AdditiveMap { field, group }
}

impl FieldGroupMap for AdditiveMap<'_> {
    fn group(&self) -> &AbelianGroup {
        &self.group
    }

    fn domain(&self) -> Vec<FieldElement> {
        self.field.elements().collect()
    }

    fn to_group(&self, x: FieldElement) -> Result<GroupElement, GroupError> {
        self.group.element(self.field.coeffs(x))
    }

    fn from_group(&self, g: &GroupElement) -> Result<FieldElement, GroupError> {
        self.group.check(&g.residues)?;
        Ok(self
            .field
            .from_coeffs(&g.residues)
            .expect("residues were range-checked"))
    }
}

/// `GF(q)^x -> Z_{q-1}` via the discrete logarithm.
pub struct MultiplicativeMap<'a> {
    field: &'a FieldTable,
    group: AbelianGroup,
}

pub fn mult_group_of(field: &FieldTable) -> MultiplicativeMap<'_> {
    let group = AbelianGroup::cyclic(field.order() - 1).expect("q >= 2");
    MultiplicativeMap { field, group }
}

impl FieldGroupMap for MultiplicativeMap<'_> {
    fn group(&self) -> &AbelianGroup {
        &self.group
    }

    fn domain(&self) -> Vec<FieldElement> {
        self.field.nonzero_elements().collect()
    }

    fn to_group(&self, x: FieldElement) -> Result<GroupElement, GroupError> {
        let l = self.field.discrete_log(x).map_err(|_| GroupError::ZeroElement)?;
        self.group.element(vec![l])
    }

    fn from_group(&self, g: &GroupElement) -> Result<FieldElement, GroupError> {
        self.group.check(&g.residues)?;
        Ok(self.field.exp(g.residues[0]))
    }
}

/// `GF(q^m)^x / GF(q)^x -> Z_{(q^m - 1)/(q - 1)}`, sending the class of
/// `g^i` to `i mod (q^m - 1)/(q - 1)`.
pub struct ProjectiveMap<'a> {
    ext: &'a Extension,
    group: AbelianGroup,
}

pub fn quotient_mult_group(ext: &Extension) -> ProjectiveMap<'_> {
    let index = (ext.big().order() - 1) / (ext.base().order() - 1);
    let group = AbelianGroup::cyclic(index).expect("index >= 1");
    ProjectiveMap { ext, group }
}

impl FieldGroupMap for ProjectiveMap<'_> {
    fn group(&self) -> &AbelianGroup {
        &self.group
    }

    fn domain(&self) -> Vec<FieldElement> {
        self.ext.big().nonzero_elements().collect()
    }

    fn to_group(&self, x: FieldElement) -> Result<GroupElement, GroupError> {
        let l = self
            .ext
            .big()
            .discrete_log(x)
            .map_err(|_| GroupError::ZeroElement)?;
        self.group.element(vec![l % self.group.order()])
    }

    fn from_group(&self, g: &GroupElement) -> Result<FieldElement, GroupError> {
        self.group.check(&g.residues)?;
        Ok(self.ext.big().exp(g.residues[0]))
    }
}
