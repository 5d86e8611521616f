//! Dense Sidon sets from finite fields, Sidon verification, and the search
//! for the smallest group known to hold a Sidon set of a given size.
//!
//! Five families are built, each from a prime power `q`:
//!
//! | family       | group                       | `(|G|, |S|)`          |
//! |--------------|-----------------------------|-----------------------|
//! | Erdős–Turán  | `(GF(q), +)^2`, q odd       | `(q^2, q)`            |
//! | Singer       | `GF(q^3)^x / GF(q)^x`       | `(q^2 + q + 1, q + 1)`|
//! | Bose         | `GF(q^2)^x`                 | `(q^2 - 1, q)`        |
//! | Spence       | `GF(q)^x x (GF(q), +)`      | `(q(q - 1), q - 1)`   |
//! | Hughes       | `(GF(q)^x)^2`, q >= 3       | `((q - 1)^2, q - 2)`  |
//!
//! Elements are always kept sorted in the group's lexicographic order.
//! `remove_points` drops the largest ones.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::abelian_group::{
    additive_group_of, mult_group_of, quotient_mult_group, AbelianGroup, FieldGroupMap, GroupElement, GroupError,
};
use crate::arith;
use crate::finite_field::{
    is_prime_power, make_extension, make_field_with_cap, FieldError, DEFAULT_FIELD_CAP,
};

/// Default cap on `d` for [`m_exact`].
pub const DEFAULT_EXACT_CAP: u64 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SidonError {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("char(q)>2 required (q = {0})")]
    EvenCharacteristic(u64),
    #[error("q = {0} is too small for this family (q >= 3 required)")]
    QTooSmall(u64),
    #[error("cannot remove {k} points from a set of size {size}")]
    KTooLarge { k: u64, size: u64 },
    #[error("{family}({q}) self-check failed: {reason}")]
    ConstructionSelfCheckFailed { family: Family, q: u64, reason: String },
    #[error("d = {d} exceeds the exhaustive-search cap {cap}")]
    DTooLarge { d: u64, cap: u64 },
    #[error("duplicate element {0} in Sidon set")]
    DuplicateElement(String),
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    ErdosTuran,
    Singer,
    Bose,
    Spence,
    Hughes,
    Custom,
}

impl Family {
    pub const CONSTRUCTED: [Family; 5] = [
        Family::ErdosTuran,
        Family::Singer,
        Family::Bose,
        Family::Spence,
        Family::Hughes,
    ];

    /// Order in which equal group orders are resolved by [`m_known`].
    pub const SEARCH_ORDER: [Family; 5] = [
        Family::Singer,
        Family::Bose,
        Family::Spence,
        Family::Hughes,
        Family::ErdosTuran,
    ];

    /// Tag used in the text format and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            Family::ErdosTuran => "erdos-turan",
            Family::Singer => "singer",
            Family::Bose => "bose",
            Family::Spence => "spence",
            Family::Hughes => "hughes",
            Family::Custom => "custom",
        }
    }

    /// `(|G|, |S|)` for parameter `q`, without checking validity of `q`.
    pub fn parameters(self, q: u64) -> Option<(u64, u64)> {
        match self {
            Family::ErdosTuran => Some((q * q, q)),
            Family::Singer => Some((q * q + q + 1, q + 1)),
            Family::Bose => Some((q * q - 1, q)),
            Family::Spence => Some((q * (q - 1), q - 1)),
            Family::Hughes => Some(((q - 1) * (q - 1), q.saturating_sub(2))),
            Family::Custom => None,
        }
    }

    /// Whether `q` is a legal parameter for this family.
    pub fn accepts(self, q: u64) -> bool {
        match is_prime_power(q) {
            None => false,
            Some(pp) => match self {
                Family::ErdosTuran => pp.p != 2,
                Family::Hughes => q >= 3,
                Family::Custom => false,
                _ => true,
            },
        }
    }

    /// Smallest legal `q` whose set has at least `d` points.
    pub fn smallest_q_for(self, d: u64) -> Option<u64> {
        if self == Family::Custom {
            return None;
        }
        (2u64..)
            .find(|&q| self.accepts(q) && self.parameters(q).map_or(false, |(_, s)| s >= d))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::ErdosTuran => "ErdosTuran",
            Family::Singer => "Singer",
            Family::Bose => "Bose",
            Family::Spence => "Spence",
            Family::Hughes => "Hughes",
            Family::Custom => "Custom",
        };
        f.write_str(name)
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "erdos-turan" | "erdosturan" | "et" => Ok(Family::ErdosTuran),
            "singer" => Ok(Family::Singer),
            "bose" => Ok(Family::Bose),
            "spence" => Ok(Family::Spence),
            "hughes" => Ok(Family::Hughes),
            "custom" => Ok(Family::Custom),
            other => Err(format!("unknown family '{other}'")),
        }
    }
}

/// A subset of a finite abelian group, tagged with where it came from.
///
/// Being a Sidon set is not enforced; see [`SidonSet::is_sidon`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidonSet {
    group: AbelianGroup,
    elements: Vec<GroupElement>,
    family: Family,
    q: Option<u64>,
    removed: u64,
}

impl SidonSet {
    /// Sorts the elements into canonical order and rejects duplicates.
    pub fn new(
        group: AbelianGroup,
        mut elements: Vec<GroupElement>,
        family: Family,
        q: Option<u64>,
        removed: u64,
    ) -> Result<Self, SidonError> {
        for e in &elements {
            if !group.contains(e) {
                return Err(GroupError::GroupMismatch {
                    moduli: group.moduli().to_vec(),
                }
                .into());
            }
        }
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(SidonError::DuplicateElement(w[0].to_string()));
        }
        Ok(SidonSet {
            group,
            elements,
            family,
            q,
            removed,
        })
    }

    pub fn custom(group: AbelianGroup, elements: Vec<GroupElement>) -> Result<Self, SidonError> {
        Self::new(group, elements, Family::Custom, None, 0)
    }

    /// Convenience constructor for cyclic groups.
    pub fn cyclic(n: u64, residues: &[u64]) -> Result<Self, SidonError> {
        let group = AbelianGroup::cyclic(n)?;
        let elements = residues
            .iter()
            .map(|&r| group.element(vec![r]))
            .collect::<Result<Vec<_>, _>>()?;
        Self::custom(group, elements)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn q(&self) -> Option<u64> {
        self.q
    }

    pub fn removed(&self) -> u64 {
        self.removed
    }

    /// `Singer(2)`, `Hughes(9)-2`, `Custom`.
    pub fn label(&self) -> String {
        family_label(self.family, self.q, self.removed)
    }

    /// `(|G|, |S|)`.
    pub fn parameters(&self) -> (u64, u64) {
        (self.group.order(), self.elements.len() as u64)
    }

    pub fn is_sidon(&self) -> bool {
        self.first_violation().is_none()
    }

    /// A witness `(a, b, c, d)` with `a + b = c + d` and `{a, b} != {c, d}`,
    /// or `None` for a Sidon set.
    ///
    /// Scans ordered differences of distinct elements; a repeated
    /// difference `a - b = c - d` gives the sum collision `a + d = c + b`.
    pub fn first_violation(&self) -> Option<[GroupElement; 4]> {
        let g = &self.group;
        let mut seen = std::collections::HashMap::with_capacity(self.len() * self.len());
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                if i == j {
                    continue;
                }
                let diff = g.index_of(&g.sub(a, b).unwrap()).unwrap();
                if let Some(&(k, l)) = seen.get(&diff) {
                    let (c, d): (&GroupElement, &GroupElement) = (&self.elements[k], &self.elements[l]);
                    return Some([a.clone(), d.clone(), c.clone(), b.clone()]);
                }
                seen.insert(diff, (i, j));
            }
        }
        None
    }

    /// Drops the `k` largest elements.
    pub fn remove_points(&self, k: u64) -> Result<SidonSet, SidonError> {
        let size = self.len() as u64;
        if k > size {
            return Err(SidonError::KTooLarge { k, size });
        }
        let mut out = self.clone();
        out.elements.truncate((size - k) as usize);
        out.removed += k;
        Ok(out)
    }

    /// Renders the line-oriented text format.
    pub fn to_text(&self) -> String {
        let moduli: Vec<String> = self.group.moduli().iter().map(u64::to_string).collect();
        let q = self.q.map_or_else(|| "none".to_string(), |q| q.to_string());
        let mut out = format!(
            "group: {}; family: {}; q: {}; removed: {}\n",
            moduli.join(" x "),
            self.family.tag(),
            q,
            self.removed
        );
        for e in &self.elements {
            let r: Vec<String> = e.residues().iter().map(u64::to_string).collect();
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SidonSet, SidonError> {
        let perr = |line: usize, reason: &str| SidonError::Parse {
            line,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
        let hline = hline + 1;

        let (mut moduli, mut family, mut q, mut removed) = (None, None, None, None);
        for field in header.split(';') {
            let (key, value) = field
                .split_once(':')
                .ok_or_else(|| perr(hline, "header fields must be 'key: value'"))?;
            let value = value.trim();
            match key.trim() {
                "group" => {
                    let m = value
                        .split('x')
                        .map(|t| t.trim().parse::<u64>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| perr(hline, "bad group moduli"))?;
                    moduli = Some(m);
                }
                "family" => family = Some(value.parse::<Family>().map_err(|e| perr(hline, &e))?),
                "q" => {
                    q = Some(match value {
                        "none" | "-" => None,
                        v => Some(v.parse::<u64>().map_err(|_| perr(hline, "bad q"))?),
                    })
                }
                "removed" => removed = Some(value.parse::<u64>().map_err(|_| perr(hline, "bad removed count"))?),
                other => return Err(perr(hline, &format!("unknown header key '{other}'"))),
            }
        }
        let group = AbelianGroup::new(moduli.ok_or_else(|| perr(hline, "missing group"))?)?;
        let mut elements = Vec::new();
        for (i, line) in lines {
            let residues = line
                .split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| perr(i + 1, "bad residue"))?;
            elements.push(
                group
                    .element(residues)
                    .map_err(|e| perr(i + 1, &e.to_string()))?,
            );
        }
        SidonSet::new(
            group,
            elements,
            family.unwrap_or(Family::Custom),
            q.flatten(),
            removed.unwrap_or(0),
        )
    }
}

pub fn family_label(family: Family, q: Option<u64>, removed: u64) -> String {
    match (family, q) {
        (Family::Custom, _) | (_, None) => family.to_string(),
        (_, Some(q)) if removed == 0 => format!("{family}({q})"),
        (_, Some(q)) => format!("{family}({q})-{removed}"),
    }
}

fn require_prime_power(q: u64) -> Result<(), SidonError> {
    is_prime_power(q).map(|_| ()).ok_or(SidonError::NotAPrimePower(q))
}

/// Builds family member `q` with the default field cap.
pub fn build(family: Family, q: u64) -> Result<SidonSet, SidonError> {
    build_with_cap(family, q, DEFAULT_FIELD_CAP)
}

pub fn build_with_cap(family: Family, q: u64, cap: u64) -> Result<SidonSet, SidonError> {
    match family {
        Family::ErdosTuran => erdos_turan_with_cap(q, cap),
        Family::Singer => singer_with_cap(q, cap),
        Family::Bose => bose_with_cap(q, cap),
        Family::Spence => spence_with_cap(q, cap),
        Family::Hughes => hughes_with_cap(q, cap),
        Family::Custom => Err(SidonError::ConstructionSelfCheckFailed {
            family,
            q,
            reason: "custom sets have no construction".into(),
        }),
    }
}

/// `{(x, x^2)}` in `(GF(q), +)^2`.
pub fn erdos_turan(q: u64) -> Result<SidonSet, SidonError> {
    erdos_turan_with_cap(q, DEFAULT_FIELD_CAP)
}

pub fn erdos_turan_with_cap(q: u64, cap: u64) -> Result<SidonSet, SidonError> {
    require_prime_power(q)?;
    let field = make_field_with_cap(q, cap)?;
    if field.characteristic() == 2 {
        return Err(SidonError::EvenCharacteristic(q));
    }
    let add = additive_group_of(&field);
    let group = add.group().product(add.group());
    let elements = field
        .elements()
        .map(|x| {
            let mut r = add.to_group(x)?.residues().to_vec();
            r.extend_from_slice(add.to_group(field.mul(x, x))?.residues());
            group.element(r)
        })
        .collect::<Result<Vec<_>, _>>()?;
    SidonSet::new(group, elements, Family::ErdosTuran, Some(q), 0)
}

/// Classes of nonzero trace-zero elements of `GF(q^3)` in `GF(q^3)^x / GF(q)^x`.
pub fn singer(q: u64) -> Result<SidonSet, SidonError> {
    singer_with_cap(q, DEFAULT_FIELD_CAP)
}

pub fn singer_with_cap(q: u64, cap: u64) -> Result<SidonSet, SidonError> {
    require_prime_power(q)?;
    let ext = make_extension(q, 3, cap)?;
    let proj = quotient_mult_group(&ext);
    let mut classes = HashSet::new();
    for x in ext.big().nonzero_elements() {
        if ext.trace_in_big(x).is_zero() {
            classes.insert(proj.to_group(x)?);
        }
    }
    let set = SidonSet::new(
        proj.group().clone(),
        classes.into_iter().collect(),
        Family::Singer,
        Some(q),
        0,
    )?;
    self_check(set, q)
}

/// Discrete logs of the trace-one elements of `GF(q^2)`.
///
/// This is the level set that actually has `q` points; the trace-zero
/// level set is [`bose_trace_zero`].
pub fn bose(q: u64) -> Result<SidonSet, SidonError> {
    bose_with_cap(q, DEFAULT_FIELD_CAP)
}

pub fn bose_with_cap(q: u64, cap: u64) -> Result<SidonSet, SidonError> {
    let set = bose_level_set(q, cap, 1, Family::Bose)?;
    self_check(set, q)
}

/// Discrete logs of the nonzero trace-zero elements of `GF(q^2)`.
///
/// Has `q - 1` points forming a coset of the order-`(q - 1)` subgroup of
/// `Z_{q^2 - 1}`, so it is not Sidon for `q > 3`. Kept as a negative control;
/// tagged [`Family::Custom`] since it does not have the family's size.
pub fn bose_trace_zero(q: u64) -> Result<SidonSet, SidonError> {
    bose_level_set(q, DEFAULT_FIELD_CAP, 0, Family::Custom)
}

fn bose_level_set(q: u64, cap: u64, level: u64, family: Family) -> Result<SidonSet, SidonError> {
    require_prime_power(q)?;
    let ext = make_extension(q, 2, cap)?;
    let target = ext.embed(ext.base().constant(level));
    let mult = mult_group_of(ext.big());
    let elements = ext
        .big()
        .nonzero_elements()
        .filter(|&x| ext.trace_in_big(x) == target)
        .map(|x| mult.to_group(x))
        .collect::<Result<Vec<_>, _>>()?;
    let q_tag = (family != Family::Custom).then_some(q);
    SidonSet::new(mult.group().clone(), elements, family, q_tag, 0)
}

/// `{(x, x)}` in `GF(q)^x x (GF(q), +)`.
pub fn spence(q: u64) -> Result<SidonSet, SidonError> {
    spence_with_cap(q, DEFAULT_FIELD_CAP)
}

pub fn spence_with_cap(q: u64, cap: u64) -> Result<SidonSet, SidonError> {
    require_prime_power(q)?;
    let field = make_field_with_cap(q, cap)?;
    let mult = mult_group_of(&field);
    let add = additive_group_of(&field);
    let group = mult.group().product(add.group());
    let elements = field
        .nonzero_elements()
        .map(|x| {
            let mut r = mult.to_group(x)?.residues().to_vec();
            r.extend_from_slice(add.to_group(x)?.residues());
            group.element(r)
        })
        .collect::<Result<Vec<_>, _>>()?;
    SidonSet::new(group, elements, Family::Spence, Some(q), 0)
}

/// `{(x, y) : x, y != 0, x + y = 1}` in `(GF(q)^x)^2`.
pub fn hughes(q: u64) -> Result<SidonSet, SidonError> {
    hughes_with_cap(q, DEFAULT_FIELD_CAP)
}

pub fn hughes_with_cap(q: u64, cap: u64) -> Result<SidonSet, SidonError> {
    require_prime_power(q)?;
    if q < 3 {
        return Err(SidonError::QTooSmall(q));
    }
    let field = make_field_with_cap(q, cap)?;
    let mult = mult_group_of(&field);
    let group = mult.group().product(mult.group());
    let one = field.one();
    let elements = field
        .nonzero_elements()
        .filter(|&x| x != one)
        .map(|x| {
            let y = field.sub(one, x);
            let mut r = mult.to_group(x)?.residues().to_vec();
            r.extend_from_slice(mult.to_group(y)?.residues());
            group.element(r)
        })
        .collect::<Result<Vec<_>, _>>()?;
    SidonSet::new(group, elements, Family::Hughes, Some(q), 0)
}

fn self_check(set: SidonSet, q: u64) -> Result<SidonSet, SidonError> {
    let family = set.family();
    let (g, s) = family.parameters(q).expect("constructed family");
    let fail = |reason: String| SidonError::ConstructionSelfCheckFailed { family, q, reason };
    if set.parameters() != (g, s) {
        return Err(fail(format!(
            "parameters {:?}, expected {:?}",
            set.parameters(),
            (g, s)
        )));
    }
    if let Some(v) = set.first_violation() {
        return Err(fail(format!("{} + {} = {} + {}", v[0], v[1], v[2], v[3])));
    }
    Ok(set)
}

/// Best group order over the five families for a Sidon set of size `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnownBound {
    pub d: u64,
    pub order: u64,
    pub family: Family,
    /// `None` only for the trivial case `d = 1`.
    pub q: Option<u64>,
    pub removed: u64,
}

impl KnownBound {
    pub fn label(&self) -> String {
        match self.q {
            None => "trivial".to_string(),
            Some(_) => family_label(self.family, self.q, self.removed),
        }
    }

    /// Builds the witness set: the family member, trimmed to `d` points.
    pub fn witness(&self, cap: u64) -> Result<SidonSet, SidonError> {
        match self.q {
            None => {
                let g = AbelianGroup::cyclic(1)?;
                SidonSet::custom(g.clone(), vec![g.zero()])
            }
            Some(q) => build_with_cap(self.family, q, cap)?.remove_points(self.removed),
        }
    }
}

/// Smallest group order among the known dense families holding a Sidon set
/// of size `d` (subsets of Sidon sets are Sidon, so larger members are
/// trimmed). `d = 1` is the singleton in the trivial group.
///
/// Equal orders are resolved by [`Family::SEARCH_ORDER`], then smaller `q`.
pub fn m_known(d: u64) -> KnownBound {
    assert!(d >= 1, "m_known needs d >= 1");
    if d == 1 {
        return KnownBound {
            d,
            order: 1,
            family: Family::Custom,
            q: None,
            removed: 0,
        };
    }
    Family::SEARCH_ORDER
        .iter()
        .filter_map(|&family| {
            // Group order grows with q in every family, so the smallest
            // admissible q is the best member.
            let q = family.smallest_q_for(d)?;
            let (order, size) = family.parameters(q)?;
            Some(KnownBound {
                d,
                order,
                family,
                q: Some(q),
                removed: size - d,
            })
        })
        .min_by_key(|b| b.order)
        .expect("every d is covered by the Bose family")
}

/// All abelian groups of order `n` up to isomorphism, as lists of
/// prime-power cyclic factors.
pub fn abelian_groups_of_order(n: u64) -> Vec<AbelianGroup> {
    let mut shapes: Vec<Vec<u64>> = vec![vec![]];
    for (p, e) in arith::factorize(n) {
        let mut next = Vec::new();
        for shape in &shapes {
            for part in arith::partitions(e) {
                let mut s = shape.clone();
                s.extend(part.iter().map(|&a| p.pow(a)));
                next.push(s);
            }
        }
        shapes = next;
    }
    shapes
        .into_iter()
        .map(|s| AbelianGroup::new(if s.is_empty() { vec![1] } else { s }).unwrap())
        .collect()
}

/// Backtracking search for a Sidon subset of size `d` containing 0.
/// Returns the set as element indices.
pub fn find_sidon_subset(group: &AbelianGroup, d: usize) -> Option<Vec<u64>> {
    let n = group.order();
    if d == 0 {
        return Some(vec![]);
    }
    if (d as u64) > n {
        return None;
    }
    let els: Vec<GroupElement> = group.elements().collect();
    let diff_idx = |a: u64, b: u64| -> u64 {
        group
            .index_of(&group.sub(&els[a as usize], &els[b as usize]).unwrap())
            .unwrap()
    };

    fn rec(
        chosen: &mut Vec<u64>,
        used: &mut Vec<bool>,
        d: usize,
        n: u64,
        diff_idx: &dyn Fn(u64, u64) -> u64,
    ) -> bool {
        if chosen.len() == d {
            return true;
        }
        let start = chosen.last().map_or(0, |&l| l + 1);
        for c in start..n {
            let mut new_diffs = Vec::with_capacity(2 * chosen.len());
            let mut ok = true;
            for &e in chosen.iter() {
                for diff in [diff_idx(c, e), diff_idx(e, c)] {
                    if used[diff as usize] || new_diffs.contains(&diff) {
                        ok = false;
                        break;
                    }
                    new_diffs.push(diff);
                }
                if !ok {
                    break;
                }
            }
            if !ok {
                continue;
            }
            for &x in &new_diffs {
                used[x as usize] = true;
            }
            chosen.push(c);
            if rec(chosen, used, d, n, diff_idx) {
                return true;
            }
            chosen.pop();
            for &x in &new_diffs {
                used[x as usize] = false;
            }
        }
        false
    }

    // Translation invariance: some solution contains 0.
    let mut chosen = vec![0u64];
    let mut used = vec![false; n as usize];
    rec(&mut chosen, &mut used, d, n, &diff_idx).then_some(chosen)
}

/// True minimum order of an abelian group containing a Sidon set of size
/// `d`, by exhaustive search over every group of each order from
/// `d^2 - d + 1` upward.
pub fn m_exact(d: u64) -> Result<u64, SidonError> {
    m_exact_with_cap(d, DEFAULT_EXACT_CAP)
}

pub fn m_exact_with_cap(d: u64, cap: u64) -> Result<u64, SidonError> {
    if d > cap {
        return Err(SidonError::DTooLarge { d, cap });
    }
    if d <= 1 {
        return Ok(1);
    }
    let start = d * d - d + 1;
    Ok((start..)
        .find(|&n| {
            abelian_groups_of_order(n)
                .par_iter()
                .any(|g| find_sidon_subset(g, d as usize).is_some())
        })
        .expect("cyclic groups of order d^3 hold {0, 1, d, d^2} style sets"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residues(set: &SidonSet) -> Vec<Vec<u64>> {
        set.elements().iter().map(|e| e.residues().to_vec()).collect()
    }

    /// Independent oracle: sums over unordered pairs (with repetition).
    fn sidon_by_sums(set: &SidonSet) -> bool {
        let g = set.group();
        let mut seen = HashSet::new();
        let els = set.elements();
        for i in 0..els.len() {
            for j in i..els.len() {
                if !seen.insert(g.add(&els[i], &els[j]).unwrap()) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn is_sidon_examples() {
        assert!(SidonSet::cyclic(7, &[1, 2, 4]).unwrap().is_sidon());
        let bad = SidonSet::cyclic(9, &[0, 1, 2]).unwrap();
        assert!(!bad.is_sidon());
        let [a, b, c, d] = bad.first_violation().unwrap();
        let g = bad.group();
        assert_eq!(g.add(&a, &b).unwrap(), g.add(&c, &d).unwrap());
        let mut ab = [a, b];
        let mut cd = [c, d];
        ab.sort();
        cd.sort();
        assert_ne!(ab, cd);
        assert!(SidonSet::cyclic(5, &[]).unwrap().is_sidon());
        assert!(SidonSet::cyclic(5, &[3]).unwrap().is_sidon());
        // Order-2 difference: 0 + 0 = 2 + 2 in Z_4.
        assert!(!SidonSet::cyclic(4, &[0, 2]).unwrap().is_sidon());
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            SidonSet::cyclic(7, &[1, 1]),
            Err(SidonError::DuplicateElement(_))
        ));
        assert!(SidonSet::cyclic(7, &[7]).is_err());
    }

    #[test]
    fn erdos_turan_q3() {
        let s = erdos_turan(3).unwrap();
        assert_eq!(s.group().moduli(), &[3, 3]);
        assert_eq!(residues(&s), vec![vec![0, 0], vec![1, 1], vec![2, 1]]);
        assert!(s.is_sidon());
        assert_eq!(erdos_turan(2).unwrap_err(), SidonError::EvenCharacteristic(2));
        assert_eq!(erdos_turan(6).unwrap_err(), SidonError::NotAPrimePower(6));
    }

    #[test]
    fn singer_small() {
        let s = singer(2).unwrap();
        assert_eq!(s.parameters(), (7, 3));
        assert!(s.is_sidon());
        // Perfect difference set: every nonzero residue is a difference once.
        let mut diffs: Vec<u64> = Vec::new();
        for a in s.elements() {
            for b in s.elements() {
                if a != b {
                    diffs.push(s.group().index_of(&s.group().sub(a, b).unwrap()).unwrap());
                }
            }
        }
        diffs.sort();
        assert_eq!(diffs, (1..7).collect::<Vec<_>>());
        assert_eq!(singer(3).unwrap().parameters(), (13, 4));
    }

    #[test]
    fn bose_small() {
        let s = bose(3).unwrap();
        assert_eq!(s.parameters(), (8, 3));
        let s = bose(4).unwrap();
        assert_eq!(s.parameters(), (15, 4));
        assert!(sidon_by_sums(&s));
        let lit = bose_trace_zero(3).unwrap();
        assert_eq!(lit.len(), 2);
        assert_eq!(lit.family(), Family::Custom);
        assert!(!bose_trace_zero(4).unwrap().is_sidon());
    }

    #[test]
    fn spence_small() {
        let s = spence(3).unwrap();
        assert_eq!(s.group().moduli(), &[2, 3]);
        assert_eq!(residues(&s), vec![vec![0, 1], vec![1, 2]]);
        let s = spence(4).unwrap();
        assert_eq!(s.group().moduli(), &[3, 2, 2]);
        assert_eq!(s.len(), 3);
        assert!(sidon_by_sums(&s));
        let s = spence(2).unwrap();
        assert_eq!(s.group().moduli(), &[1, 2]);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn hughes_small() {
        let s = hughes(4).unwrap();
        assert_eq!(residues(&s), vec![vec![1, 2], vec![2, 1]]);
        let s = hughes(5).unwrap();
        assert_eq!(residues(&s), vec![vec![1, 2], vec![2, 1], vec![3, 3]]);
        assert!(sidon_by_sums(&s));
        assert_eq!(hughes(2).unwrap_err(), SidonError::QTooSmall(2));
    }

    #[test]
    fn remove_points_drops_largest() {
        let h = hughes(5).unwrap();
        assert_eq!(h.remove_points(0).unwrap(), h);
        let r = h.remove_points(1).unwrap();
        assert_eq!(residues(&r), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(r.removed(), 1);
        assert_eq!(r.label(), "Hughes(5)-1");
        assert!(r.is_sidon());
        assert!(h.remove_points(3).unwrap().is_empty());
        assert_eq!(
            h.remove_points(4).unwrap_err(),
            SidonError::KTooLarge { k: 4, size: 3 }
        );
    }

    #[test]
    fn sidon_is_invariant_under_field_group_maps() {
        // Rebuild each family's set through a different coordinatization
        // (multiplying the generator-based logs by a unit of Z_{q-1}) and
        // check the verdict does not change.
        for q in [5u64, 7, 8, 9] {
            let h = hughes(q).unwrap();
            let n = q - 1;
            for u in (1..n).filter(|&u| num_integer::gcd(u, n) == 1) {
                let g = h.group().clone();
                let els = h
                    .elements()
                    .iter()
                    .map(|e| {
                        g.element(e.residues().iter().map(|r| r * u % n).collect())
                            .unwrap()
                    })
                    .collect();
                assert!(SidonSet::custom(g, els).unwrap().is_sidon());
            }
        }
    }

    #[test]
    fn families_match_parameters_and_are_sidon() {
        for q in (2..=32).filter(|&q| is_prime_power(q).is_some()) {
            for family in Family::CONSTRUCTED {
                if !family.accepts(q) {
                    continue;
                }
                let s = build(family, q).unwrap();
                assert_eq!(Some(s.parameters()), family.parameters(q), "{family}({q})");
                assert!(sidon_by_sums(&s), "{family}({q})");
                assert_eq!(s.is_sidon(), sidon_by_sums(&s));
            }
        }
    }

    #[test]
    fn text_format_round_trip() {
        let s = hughes(7).unwrap().remove_points(2).unwrap();
        let text = s.to_text();
        assert!(text.starts_with("group: 6 x 6; family: hughes; q: 7; removed: 2\n"));
        assert_eq!(SidonSet::from_text(&text).unwrap(), s);
        let c = SidonSet::cyclic(9, &[0, 1, 2]).unwrap();
        assert_eq!(SidonSet::from_text(&c.to_text()).unwrap(), c);
        assert!(SidonSet::from_text("group: 7; family: nope; q: 2; removed: 0\n").is_err());
        assert!(SidonSet::from_text("group: 7\n1,2\n").is_err());
        assert!(SidonSet::from_text("").is_err());
    }

    #[test]
    fn m_known_examples() {
        assert_eq!(m_known(1).order, 1);
        let b = m_known(2);
        assert_eq!((b.order, b.family, b.q), (3, Family::Bose, Some(2)));
        let b = m_known(3);
        assert_eq!((b.order, b.family, b.q), (7, Family::Singer, Some(2)));
        assert_eq!(b.label(), "Singer(2)");
        for d in 1..=40 {
            let b = m_known(d);
            let w = b.witness(DEFAULT_FIELD_CAP).unwrap();
            assert_eq!(w.len() as u64, d);
            assert_eq!(w.group().order(), b.order);
            assert!(w.is_sidon());
        }
    }

    #[test]
    fn group_enumeration() {
        let orders = |n| abelian_groups_of_order(n).len();
        assert_eq!(orders(1), 1);
        assert_eq!(orders(8), 3);
        assert_eq!(orders(16), 5);
        assert_eq!(orders(72), 6);
        assert_eq!(orders(13), 1);
        assert!(abelian_groups_of_order(12).iter().all(|g| g.order() == 12));
    }

    #[test]
    fn m_exact_small() {
        assert_eq!(m_exact(1).unwrap(), 1);
        assert_eq!(m_exact(2).unwrap(), 3);
        assert_eq!(m_exact(3).unwrap(), 7);
        assert_eq!(m_exact(7).unwrap_err(), SidonError::DTooLarge { d: 7, cap: 6 });
        // Nothing of order < 7 has a 3-point Sidon set.
        for n in 1..7 {
            assert!(abelian_groups_of_order(n)
                .iter()
                .all(|g| find_sidon_subset(g, 3).is_none()));
        }
    }
}
