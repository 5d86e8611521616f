//! The Bodmann–Haas construction and numerical certification of weighted
//! projective 2-designs.
//!
//! For `S` inside a finite abelian group `G`, the construction returns the
//! `|G|` restricted characters `x_a(s) = a(s) / sqrt(|S|)` followed by the
//! `|S|` standard basis vectors of `C^S`. With weights `|S|^2 / (2|G|)` on the
//! characters and `1/2` on the basis vectors,
//!
//! ```text
//! M = sum_k w_k (x_k ⊗ x_k)(x_k ⊗ x_k)^*
//! ```
//!
//! equals the projector onto symmetric tensors exactly when `S` is Sidon.
//!
//! Two independent checks are provided. [`verify_direct`] assembles the
//! `d^2 x d^2` matrix and compares it entrywise with the projector.
//! [`verify_frame_potential`] uses `tr M` and `tr M^2` only: for `M` supported
//! on the symmetric subspace, `||M - P||_F^2 = tr M^2 - 2 tr M + d(d+1)/2`.

use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::abelian_group::{root_of_unity, AbelianGroup, CharacterIndex, GroupElement, GroupError};
use crate::sidon::SidonSet;

/// Largest `d` for which the dense `d^2 x d^2` routines run by default.
pub const DEFAULT_DENSE_CAP: usize = 48;
/// Number of random entries inspected by [`pattern_check`] above `d = 12`.
pub const DEFAULT_PATTERN_SAMPLES: usize = 100_000;
pub const DEFAULT_PATTERN_SEED: u64 = 0x5eed_b0d4_a22a_5u64;
const UNIT_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("the Bodmann-Haas construction needs a nonempty set")]
    EmptySet,
    #[error("dimension {dim} exceeds the dense-matrix cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("vector {index} has length {len}, expected {dim}")]
    WrongLength { index: usize, len: usize, dim: usize },
    #[error("vector {index} has norm {norm}, expected 1")]
    NotUnit { index: usize, norm: f64 },
    #[error("weight {index} is {weight}; weights must be finite and nonnegative")]
    BadWeight { index: usize, weight: f64 },
    #[error("{vectors} vectors but {weights} weights")]
    CountMismatch { vectors: usize, weights: usize },
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// What a design vector is, when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VectorLabel {
    Character(CharacterIndex),
    Basis(GroupElement),
    Unlabeled,
}

/// The group data behind a Bodmann–Haas design.
#[derive(Debug, Clone)]
pub struct DesignSource {
    pub group: AbelianGroup,
    pub support: Vec<GroupElement>,
}

/// Unit vectors in `C^d` with nonnegative weights.
#[derive(Debug, Clone)]
pub struct WeightedDesign {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
    weights: Vec<f64>,
    labels: Vec<VectorLabel>,
    exact_weights: Option<Vec<Ratio<u64>>>,
    source: Option<DesignSource>,
}

impl WeightedDesign {
    /// An unlabeled design. Checks lengths, unit norms and weights.
    pub fn new(dim: usize, vectors: Vec<Vec<Complex64>>, weights: Vec<f64>) -> Result<Self, DesignError> {
        if vectors.len() != weights.len() {
            return Err(DesignError::CountMismatch {
                vectors: vectors.len(),
                weights: weights.len(),
            });
        }
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(DesignError::WrongLength {
                    index,
                    len: v.len(),
                    dim,
                });
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(DesignError::NotUnit { index, norm });
            }
        }
        for (index, &weight) in weights.iter().enumerate() {
            if !weight.is_finite() || weight < 0.0 {
                return Err(DesignError::BadWeight { index, weight });
            }
        }
        let labels = vec![VectorLabel::Unlabeled; vectors.len()];
        Ok(WeightedDesign {
            dim,
            vectors,
            weights,
            labels,
            exact_weights: None,
            source: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> &[VectorLabel] {
        &self.labels
    }

    pub fn source(&self) -> Option<&DesignSource> {
        self.source.as_ref()
    }

    /// Weights as exact fractions, for designs built by [`bodmann_haas`].
    pub fn exact_weights(&self) -> Option<&[Ratio<u64>]> {
        self.exact_weights.as_deref()
    }

    /// Exact sum of the weights, accumulated one term at a time.
    pub fn exact_weight_sum(&self) -> Option<Ratio<u64>> {
        self.exact_weights
            .as_ref()
            .map(|ws| ws.iter().fold(Ratio::from_integer(0), |acc, w| acc + w))
    }

    /// `d(d+1)/2`, the rank of the symmetric projector.
    pub fn target_trace(&self) -> f64 {
        symmetric_rank(self.dim) as f64
    }

    /// Renders `dim: d; count: n` followed by one `w; re,im; ...` line per
    /// vector, all reals with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim: {}; count: {}\n", self.dim, self.len());
        for (w, v) in self.weights.iter().zip(&self.vectors) {
            out.push_str(&format!("{w:.16e}"));
            for z in v {
                out.push_str(&format!("; {:.16e},{:.16e}", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<WeightedDesign, DesignError> {
        let perr = |line: usize, reason: &str| DesignError::Parse {
            line,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
        let (mut dim, mut count) = (None, None);
        for field in header.split(';') {
            let (key, value) = field
                .split_once(':')
                .ok_or_else(|| perr(1, "header fields must be 'key: value'"))?;
            let value: usize = value.trim().parse().map_err(|_| perr(1, "bad integer"))?;
            match key.trim() {
                "dim" => dim = Some(value),
                "count" => count = Some(value),
                other => return Err(perr(1, &format!("unknown header key '{other}'"))),
            }
        }
        let dim = dim.ok_or_else(|| perr(1, "missing dim"))?;
        let count = count.ok_or_else(|| perr(1, "missing count"))?;
        let mut vectors = Vec::with_capacity(count);
        let mut weights = Vec::with_capacity(count);
        for (i, line) in lines {
            let mut parts = line.split(';');
            let w: f64 = parts
                .next()
                .unwrap()
                .trim()
                .parse()
                .map_err(|_| perr(i + 1, "bad weight"))?;
            let v = parts
                .map(|p| {
                    let (re, im) = p.split_once(',')?;
                    Some(Complex64::new(re.trim().parse().ok()?, im.trim().parse().ok()?))
                })
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| perr(i + 1, "bad complex entry"))?;
            weights.push(w);
            vectors.push(v);
        }
        if vectors.len() != count {
            return Err(perr(
                1,
                &format!("header says {count} vectors, found {}", vectors.len()),
            ));
        }
        WeightedDesign::new(dim, vectors, weights)
    }
}

pub fn symmetric_rank(d: usize) -> usize {
    d * (d + 1) / 2
}

/// The Bodmann–Haas design of `set`: characters of the ambient group
/// restricted to `set`, then the standard basis of `C^set`.
///
/// Coordinates follow the set's canonical element order. The Sidon property
/// is not checked here.
pub fn bodmann_haas(set: &SidonSet) -> Result<WeightedDesign, DesignError> {
    if set.is_empty() {
        return Err(DesignError::EmptySet);
    }
    let group = set.group().clone();
    let support = set.elements().to_vec();
    let d = support.len();
    let g = group.order();
    let scale = 1.0 / (d as f64).sqrt();
    let characters = group.characters()?;

    let mut vectors: Vec<Vec<Complex64>> = characters
        .par_iter()
        .map(|alpha| {
            support
                .iter()
                .map(|s| group.char_eval(alpha, s).unwrap() * scale)
                .collect()
        })
        .collect();
    let mut labels: Vec<VectorLabel> = characters.into_iter().map(VectorLabel::Character).collect();
    for (r, s) in support.iter().enumerate() {
        let mut e = vec![Complex64::new(0.0, 0.0); d];
        e[r] = Complex64::new(1.0, 0.0);
        vectors.push(e);
        labels.push(VectorLabel::Basis(s.clone()));
    }

    let char_weight = Ratio::new((d * d) as u64, 2 * g);
    let basis_weight = Ratio::new(1, 2);
    let mut exact = vec![char_weight; g as usize];
    exact.extend(std::iter::repeat(basis_weight).take(d));
    let weights = exact.iter().map(ratio_to_f64).collect();

    Ok(WeightedDesign {
        dim: d,
        vectors,
        weights,
        labels,
        exact_weights: Some(exact),
        source: Some(DesignSource { group, support }),
    })
}

fn ratio_to_f64(r: &Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `P = (I + T)/2` on `C^d ⊗ C^d`, rows and columns indexed by `(s, s')`
/// as `s * d + s'`.
#[derive(Debug, Clone)]
pub struct SymmetricProjector {
    dim: usize,
    matrix: Vec<f64>,
}

pub fn symmetric_projector(d: usize) -> Result<SymmetricProjector, DesignError> {
    symmetric_projector_with_cap(d, DEFAULT_DENSE_CAP)
}

pub fn symmetric_projector_with_cap(d: usize, cap: usize) -> Result<SymmetricProjector, DesignError> {
    if d > cap {
        return Err(DesignError::DimensionTooLarge { dim: d, cap });
    }
    let n = d * d;
    let mut matrix = vec![0.0; n * n];
    for s in 0..d {
        for sp in 0..d {
            for t in 0..d {
                for tp in 0..d {
                    matrix[(s * d + sp) * n + t * d + tp] = projector_entry(s, sp, t, tp);
                }
            }
        }
    }
    Ok(SymmetricProjector { dim: d, matrix })
}

/// `(δ_{s,t} δ_{s',t'} + δ_{s,t'} δ_{s',t}) / 2`.
pub fn projector_entry(s: usize, sp: usize, t: usize, tp: usize) -> f64 {
    let a = (s == t && sp == tp) as u8 as f64;
    let b = (s == tp && sp == t) as u8 as f64;
    0.5 * (a + b)
}

impl SymmetricProjector {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, s: usize, sp: usize, t: usize, tp: usize) -> f64 {
        let d = self.dim;
        self.matrix[(s * d + sp) * d * d + t * d + tp]
    }

    pub fn trace(&self) -> f64 {
        let n = self.dim * self.dim;
        (0..n).map(|i| self.matrix[i * n + i]).sum()
    }

    /// `||P^2 - P||_F`.
    pub fn idempotency_residual(&self) -> f64 {
        let n = self.dim * self.dim;
        let m = &self.matrix;
        (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let sq: f64 = (0..n).map(|k| m[i * n + k] * m[k * n + j]).sum();
                        (sq - m[i * n + j]).powi(2)
                    })
                    .sum::<f64>()
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn default_direct_tol(d: usize) -> f64 {
    1e-9 * d as f64
}

pub fn default_potential_tol(d: usize) -> f64 {
    1e-8 * (d * d) as f64
}

/// `||M - P||_F` with `M` assembled entry by entry as a `d^2 x d^2` matrix.
pub fn verify_direct(design: &WeightedDesign) -> Result<f64, DesignError> {
    verify_direct_with_cap(design, DEFAULT_DENSE_CAP)
}

pub fn verify_direct_with_cap(design: &WeightedDesign, cap: usize) -> Result<f64, DesignError> {
    let d = design.dim;
    if d > cap {
        return Err(DesignError::DimensionTooLarge { dim: d, cap });
    }
    let n = d * d;
    // Rows of x ⊗ x for every design vector.
    let tensors: Vec<Vec<Complex64>> = design
        .vectors
        .iter()
        .map(|x| {
            let mut v = Vec::with_capacity(n);
            for a in x {
                for b in x {
                    v.push(a * b);
                }
            }
            v
        })
        .collect();

    let sq: f64 = (0..n)
        .into_par_iter()
        .map(|row| {
            let mut m_row = vec![Complex64::new(0.0, 0.0); n];
            for (w, v) in design.weights.iter().zip(&tensors) {
                let c = v[row] * *w;
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (m, y) in m_row.iter_mut().zip(v) {
                    *m += c * y.conj();
                }
            }
            let (s, sp) = (row / d, row % d);
            m_row
                .iter()
                .enumerate()
                .map(|(col, m)| (m - projector_entry(s, sp, col / d, col % d)).norm_sqr())
                .collect::<CompensatedSum>()
                .value()
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .collect::<CompensatedSum>()
        .value();
    Ok(sq.sqrt())
}

/// How to combine parallel partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// Partial sums combined in a fixed order; bit-identical across runs
    /// and thread counts.
    #[default]
    Deterministic,
    /// Whatever order the thread pool produces.
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePotentialReport {
    /// `tr M = sum_k w_k ||x_k||^4`.
    pub trace_m: f64,
    /// `tr M^2 = sum_{j,k} w_j w_k |<x_j, x_k>|^4`.
    pub potential: f64,
    /// `d(d+1)/2`.
    pub target: f64,
    pub tol: f64,
    pub certified: bool,
}

impl FramePotentialReport {
    fn new(trace_m: f64, potential: f64, dim: usize, tol: f64) -> Self {
        let target = symmetric_rank(dim) as f64;
        FramePotentialReport {
            trace_m,
            potential,
            target,
            tol,
            certified: (trace_m - target).abs() <= tol && (potential - target).abs() <= tol,
        }
    }

    /// `tr M^2 - 2 tr M + d(d+1)/2`, which equals `||M - P||_F^2`.
    pub fn residual_squared(&self) -> f64 {
        self.potential - 2.0 * self.trace_m + self.target
    }
}

/// Certifies through `tr M` and `tr M^2`. Designs built by
/// [`bodmann_haas`] use character sums for the character block; anything
/// else goes through the full Gram matrix.
pub fn verify_frame_potential(design: &WeightedDesign, tol: f64) -> FramePotentialReport {
    match frame_potential_characters(design) {
        Some(r) => FramePotentialReport::new(r.0, r.1, design.dim, tol),
        None => {
            let (t, p) = frame_potential_gram(design, Reduction::Deterministic);
            FramePotentialReport::new(t, p, design.dim, tol)
        }
    }
}

fn trace_m(design: &WeightedDesign) -> f64 {
    design
        .weights
        .iter()
        .zip(&design.vectors)
        .map(|(w, x)| {
            let n2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            w * n2 * n2
        })
        .collect::<CompensatedSum>()
        .value()
}

/// `(tr M, tr M^2)` from all pairwise inner products. `O(n^2 d)`.
pub fn frame_potential_gram(design: &WeightedDesign, reduction: Reduction) -> (f64, f64) {
    let vs = &design.vectors;
    let ws = &design.weights;
    let row = |j: usize| -> f64 {
        let xj = &vs[j];
        let mut acc = CompensatedSum::default();
        for k in j..vs.len() {
            let ip: Complex64 = xj.iter().zip(&vs[k]).map(|(a, b)| a.conj() * b).sum();
            let t = ws[j] * ws[k] * ip.norm_sqr().powi(2);
            acc.add(if k == j { t } else { 2.0 * t });
        }
        acc.value()
    };
    let potential = match reduction {
        Reduction::Deterministic => (0..vs.len())
            .into_par_iter()
            .map(row)
            .collect::<Vec<f64>>()
            .into_iter()
            .collect::<CompensatedSum>()
            .value(),
        Reduction::Fast => (0..vs.len()).into_par_iter().map(row).sum(),
    };
    (trace_m(design), potential)
}

/// `(tr M, tr M^2)` for an unmodified Bodmann–Haas design, using that
/// `<x_a, x_b> = (1/|S|) sum_{s in S} (b - a)(s)` depends on `b - a` only.
/// `O(|G| |S|)`. Returns `None` for designs without group data.
pub fn frame_potential_characters(design: &WeightedDesign) -> Option<(f64, f64)> {
    let src = design.source.as_ref()?;
    let exact = design.exact_weights.as_ref()?;
    let g = src.group.order() as usize;
    let d = src.support.len();
    let w_char = ratio_to_f64(&exact[0]);
    let w_basis = ratio_to_f64(&exact[g]);

    let den = src
        .group
        .moduli()
        .iter()
        .fold(1u128, |acc, &n| num_integer::lcm(acc, n as u128));
    let fourth_powers: Vec<f64> = (0..g as u64)
        .into_par_iter()
        .map(|i| {
            let gamma = src.group.character_at(i).unwrap();
            let sum: Complex64 = src
                .support
                .iter()
                .map(|s| {
                    let (num, _) = src.group.char_phase(&gamma, s).unwrap();
                    root_of_unity(num, den)
                })
                .sum();
            (sum.norm_sqr() / (d * d) as f64).powi(2)
        })
        .collect();
    let char_block = fourth_powers.into_iter().collect::<CompensatedSum>().value();

    let mut acc = CompensatedSum::default();
    // sum over ordered character pairs: |G| * sum_gamma |c(gamma)|^4.
    acc.add(w_char * w_char * g as f64 * char_block);
    // |<x_a, e_r>|^4 = 1/|S|^2 for each of |G||S| pairs, both orders.
    acc.add(2.0 * w_char * w_basis * (g * d) as f64 / (d * d) as f64);
    acc.add(w_basis * w_basis * d as f64);
    Some((trace_m(design), acc.value()))
}

/// Result of comparing the character and basis blocks of a Bodmann–Haas
/// design against their closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternReport {
    /// Largest `|X_entry - (|G|/|S|^2) [s + s' = t + t']|`.
    pub x_max_dev: f64,
    /// Largest `|E_entry - [s = s' = t = t']|`.
    pub e_max_dev: f64,
    pub entries_checked: usize,
    pub exhaustive: bool,
}

/// Entry `((s, s'), (t, t'))` of `X = sum_a (x_a ⊗ x_a)(x_a ⊗ x_a)^*`,
/// summed over the design's character vectors.
pub fn character_block_entry(design: &WeightedDesign, idx: [usize; 4]) -> Complex64 {
    let [s, sp, t, tp] = idx;
    design
        .vectors
        .iter()
        .zip(&design.labels)
        .filter(|(_, l)| matches!(l, VectorLabel::Character(_)))
        .map(|(x, _)| x[s] * x[sp] * (x[t] * x[tp]).conj())
        .sum()
}

/// Entry of `E = sum_r (e_r ⊗ e_r)(e_r ⊗ e_r)^*` over the basis vectors.
pub fn basis_block_entry(design: &WeightedDesign, idx: [usize; 4]) -> Complex64 {
    let [s, sp, t, tp] = idx;
    design
        .vectors
        .iter()
        .zip(&design.labels)
        .filter(|(_, l)| matches!(l, VectorLabel::Basis(_)))
        .map(|(x, _)| x[s] * x[sp] * (x[t] * x[tp]).conj())
        .sum()
}

/// Checks the character block against `(|G|/|S|^2) [s + s' = t + t']`
/// (sums taken in the group) and the basis block against
/// `[s = s' = t = t']`. Exhaustive for `d <= 12`, otherwise `samples`
/// random entries from a seeded generator.
pub fn pattern_check(design: &WeightedDesign, samples: usize, seed: u64) -> Option<PatternReport> {
    let src = design.source.as_ref()?;
    let d = design.dim;
    let g = &src.group;
    let scale = g.order() as f64 / (d * d) as f64;
    let sums: Vec<Vec<GroupElement>> = src
        .support
        .iter()
        .map(|a| src.support.iter().map(|b| g.add(a, b).unwrap()).collect())
        .collect();

    let check = |idx: [usize; 4]| -> (f64, f64) {
        let [s, sp, t, tp] = idx;
        let x_expected = if sums[s][sp] == sums[t][tp] { scale } else { 0.0 };
        let e_expected = (s == sp && sp == t && t == tp) as u8 as f64;
        (
            (character_block_entry(design, idx) - x_expected).norm(),
            (basis_block_entry(design, idx) - e_expected).norm(),
        )
    };

    let exhaustive = d <= 12;
    let indices: Vec<[usize; 4]> = if exhaustive {
        let mut v = Vec::with_capacity(d.pow(4));
        for s in 0..d {
            for sp in 0..d {
                for t in 0..d {
                    for tp in 0..d {
                        v.push([s, sp, t, tp]);
                    }
                }
            }
        }
        v
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                // Half the samples are forced onto the support of X so the
                // nonzero pattern is exercised too.
                let s = rng.gen_range(0..d);
                let sp = rng.gen_range(0..d);
                if rng.gen_bool(0.5) {
                    [s, sp, sp, s]
                } else {
                    [s, sp, rng.gen_range(0..d), rng.gen_range(0..d)]
                }
            })
            .collect()
    };
    let (x_max_dev, e_max_dev) = indices
        .par_iter()
        .map(|&i| check(i))
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    Some(PatternReport {
        x_max_dev,
        e_max_dev,
        entries_checked: indices.len(),
        exhaustive,
    })
}
