//! Table-driven arithmetic in GF(q), q = p^k.
//!
//! Elements are stored as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! of their coefficient vector over `Z_p` (constant term first), so the
//! natural integer order on [`FieldElement`] is lexicographic with the
//! top coefficient most significant. The modulus and the generator are the
//! smallest candidates in that order, which makes every table reproducible.
//!
//! Multiplication, inversion and discrete logarithms go through full
//! log/antilog tables built once at construction.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::arith;

/// Largest field order [`make_field`] accepts unless told otherwise.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("field order {q} exceeds the configured cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("GF({base}) is not a subfield of GF({big})")]
    IncompatibleFields { base: u64, big: u64 },
    #[error("value {value} is not an element of GF({q})")]
    InvalidElement { value: u64, q: u64 },
}

/// `q = p^k` with `p` prime and `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub k: u32,
    pub q: u64,
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.k)
        }
    }
}

/// Returns `(p, k)` with `n = p^k`, or `None` (including for `n < 2`).
pub fn is_prime_power(n: u64) -> Option<PrimePower> {
    match arith::factorize(n).as_slice() {
        [(p, k)] => Some(PrimePower { p: *p, k: *k, q: n }),
        _ => None,
    }
}

/// An element of a particular [`FieldTable`]. Only meaningful together
/// with the table that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    /// The integer encoding of the coefficient vector.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

type Poly = Vec<u64>;

/// Arithmetic tables for one finite field.
#[derive(Debug, Clone)]
pub struct FieldTable {
    pp: PrimePower,
    /// Monic modulus, `k + 1` coefficients, constant term first.
    modulus: Poly,
    generator: FieldElement,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
    antilog: Vec<u32>,
}

pub fn make_field(q: u64) -> Result<FieldTable, FieldError> {
    make_field_with_cap(q, DEFAULT_FIELD_CAP)
}

pub fn make_field_with_cap(q: u64, cap: u64) -> Result<FieldTable, FieldError> {
    let pp = is_prime_power(q).ok_or(FieldError::NotAPrimePower(q))?;
    if q > cap || q > u32::MAX as u64 {
        return Err(FieldError::FieldTooLarge { q, cap });
    }
    let modulus = smallest_irreducible(pp.p, pp.k as usize);
    let generator = smallest_primitive(&pp, &modulus);

    let order = (q - 1) as usize;
    let mut log = vec![0u32; q as usize];
    let mut antilog = Vec::with_capacity(order);
    let g = decode(generator, pp.p, pp.k as usize);
    let mut cur = decode(1, pp.p, pp.k as usize);
    for i in 0..order {
        let idx = encode(&cur, pp.p);
        antilog.push(idx as u32);
        log[idx as usize] = i as u32;
        cur = mul_mod(&cur, &g, &modulus, pp.p);
    }
    Ok(FieldTable {
        pp,
        modulus,
        generator: FieldElement(generator as u32),
        log,
        antilog,
    })
}

impl FieldTable {
    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn order(&self) -> u64 {
        self.pp.q
    }

    pub fn characteristic(&self) -> u64 {
        self.pp.p
    }

    pub fn degree(&self) -> u32 {
        self.pp.k
    }

    /// Coefficients of the monic modulus, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn element(&self, index: u64) -> Result<FieldElement, FieldError> {
        if index < self.pp.q {
            Ok(FieldElement(index as u32))
        } else {
            Err(FieldError::InvalidElement {
                value: index,
                q: self.pp.q,
            })
        }
    }

    /// The element of the prime subfield with value `c mod p`.
    pub fn constant(&self, c: u64) -> FieldElement {
        FieldElement((c % self.pp.p) as u32)
    }

    /// All elements in increasing index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.pp.q as u32).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.pp.q as u32).map(FieldElement)
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        decode(x.0 as u64, self.pp.p, self.pp.k as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.pp.k as usize || coeffs.iter().any(|&c| c >= self.pp.p) {
            return Err(FieldError::InvalidElement {
                value: encode(coeffs, self.pp.p),
                q: self.pp.q,
            });
        }
        Ok(FieldElement(encode(coeffs, self.pp.p) as u32))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.combine(a, b, |x, y, p| (x + y) % p)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.combine(a, b, |x, y, p| (x + p - y) % p)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(self.zero(), a)
    }

    fn combine(&self, a: FieldElement, b: FieldElement, op: impl Fn(u64, u64, u64) -> u64) -> FieldElement {
        let p = self.pp.p;
        if self.pp.k == 1 {
            return FieldElement(op(a.0 as u64, b.0 as u64, p) as u32);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.pp.k {
            out += op(x % p, y % p, p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FieldElement(out as u32)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let n = self.pp.q - 1;
        let e = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % n;
        FieldElement(self.antilog[e as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.pp.q - 1;
        let e = (n - self.log[a.0 as usize] as u64) % n;
        Ok(FieldElement(self.antilog[e as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        if a.is_zero() {
            return self.zero();
        }
        let n = (self.pp.q - 1) as u128;
        let l = (self.log[a.0 as usize] as u128 * e as u128) % n;
        FieldElement(self.antilog[l as usize])
    }

    /// `generator^i`.
    pub fn exp(&self, i: u64) -> FieldElement {
        FieldElement(self.antilog[(i % (self.pp.q - 1)) as usize])
    }

    /// The `i` in `[0, q-1)` with `generator^i = x`.
    pub fn discrete_log(&self, x: FieldElement) -> Result<u64, FieldError> {
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.log[x.0 as usize] as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: FieldElement) -> Result<u64, FieldError> {
        let l = self.discrete_log(x)?;
        let n = self.pp.q - 1;
        Ok(n / num_integer::gcd(l, n))
    }
}

/// GF(q^m) together with an embedding of GF(q) into it.
///
/// Both fields are built independently with [`make_field_with_cap`]; the
/// embedding sends the base field's polynomial variable to the smallest
/// root of the base modulus that lies in the order-q subfield of the big
/// field.
#[derive(Debug, Clone)]
pub struct Extension {
    big: FieldTable,
    base: FieldTable,
    degree: u32,
    embed: Vec<FieldElement>,
    restrict: HashMap<FieldElement, FieldElement>,
}

pub fn make_extension(q: u64, m: u32, cap: u64) -> Result<Extension, FieldError> {
    let big_q = q
        .checked_pow(m)
        .ok_or(FieldError::FieldTooLarge { q: u64::MAX, cap })?;
    let base = make_field_with_cap(q, cap)?;
    let big = make_field_with_cap(big_q, cap)?;
    Extension::new(big, base)
}

impl Extension {
    pub fn new(big: FieldTable, base: FieldTable) -> Result<Self, FieldError> {
        let incompatible = FieldError::IncompatibleFields {
            base: base.order(),
            big: big.order(),
        };
        if big.characteristic() != base.characteristic() || big.degree() % base.degree() != 0 {
            return Err(incompatible);
        }
        let degree = big.degree() / base.degree();
        let q = base.order();

        // Subfield of order q: zero plus the powers of g^((Q-1)/(q-1)).
        let mut subfield: Vec<FieldElement> = vec![big.zero()];
        let step = (big.order() - 1) / (q - 1);
        subfield.extend((0..q - 1).map(|j| big.exp(j * step)));
        subfield.sort();

        let theta = subfield
            .iter()
            .copied()
            .find(|&x| eval_poly(&big, base.modulus(), x).is_zero())
            .ok_or(incompatible)?;

        let mut embed = Vec::with_capacity(q as usize);
        for a in base.elements() {
            let mut acc = big.zero();
            let mut power = big.one();
            for c in base.coeffs(a) {
                acc = big.add(acc, big.mul(big.constant(c), power));
                power = big.mul(power, theta);
            }
            embed.push(acc);
        }
        let restrict = base.elements().map(|a| (embed[a.0 as usize], a)).collect();
        Ok(Extension {
            big,
            base,
            degree,
            embed,
            restrict,
        })
    }

    pub fn big(&self) -> &FieldTable {
        &self.big
    }

    pub fn base(&self) -> &FieldTable {
        &self.base
    }

    /// `m` in GF(q^m) over GF(q).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn embed(&self, a: FieldElement) -> FieldElement {
        self.embed[a.0 as usize]
    }

    /// Maps an element of the embedded subfield back to the base table.
    pub fn restrict(&self, x: FieldElement) -> Option<FieldElement> {
        self.restrict.get(&x).copied()
    }

    /// `x + x^q + ... + x^(q^(m-1))`, computed in the big field.
    pub fn trace_in_big(&self, x: FieldElement) -> FieldElement {
        let q = self.base.order();
        let mut acc = self.big.zero();
        let mut frob = x;
        for _ in 0..self.degree {
            acc = self.big.add(acc, frob);
            frob = self.big.pow(frob, q);
        }
        acc
    }

    /// Trace of `x` to the base field, as an element of the base table.
    pub fn trace(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        self.big.element(x.0 as u64)?;
        let t = self.trace_in_big(x);
        // The trace is Frobenius-fixed, so it always lands in the subfield.
        Ok(self
            .restrict(t)
            .expect("trace value lies outside the embedded subfield"))
    }
}

fn eval_poly(field: &FieldTable, coeffs: &[u64], x: FieldElement) -> FieldElement {
    coeffs
        .iter()
        .rev()
        .fold(field.zero(), |acc, &c| field.add(field.mul(acc, x), field.constant(c)))
}

fn decode(mut idx: u64, p: u64, k: usize) -> Poly {
    let mut out = vec![0; k];
    for c in out.iter_mut() {
        *c = idx % p;
        idx /= p;
    }
    out
}

fn encode(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two residues modulo a monic polynomial of degree `k`.
fn mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Poly {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in modulus[..k].iter().enumerate() {
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + (p - m) * c) % p;
        }
    }
    prod.truncate(k);
    prod
}

/// Remainder of `a` modulo the monic polynomial `m` (both constant first).
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - mi) * c) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k <= 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    for deg in 1..=k / 2 {
        for low in 0..p.pow(deg as u32) {
            let mut g = decode(low, p, deg);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u64, k: usize) -> Poly {
    (0..p.pow(k as u32))
        .map(|low| {
            let mut f = decode(low, p, k);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial of every degree exists")
}

fn smallest_primitive(pp: &PrimePower, modulus: &[u64]) -> u64 {
    let n = pp.q - 1;
    let k = pp.k as usize;
    let divisors = arith::prime_divisors(n);
    let one = decode(1, pp.p, k);
    let pow = |base: &Poly, mut e: u64| {
        let mut acc = one.clone();
        let mut b = base.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, modulus, pp.p);
            }
            b = mul_mod(&b, &b, modulus, pp.p);
            e >>= 1;
        }
        acc
    };
    (1..pp.q)
        .find(|&g| {
            let gp = decode(g, pp.p, k);
            divisors.iter().all(|&r| pow(&gp, n / r) != one)
        })
        .expect("the multiplicative group of a finite field is cyclic")
}
