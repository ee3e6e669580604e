//! Arithmetic in GF(2^n) for odd n, in a polynomial basis.
//!
//! Elements are bit vectors; bit `j` holds the coefficient of `x^j`. The
//! context owns the modulus and a precomputed trace table, and is immutable
//! after construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree (the trace table has `2^n` entries).
pub const MAX_DEGREE: u32 = 15;

/// An element of GF(2^n) as its coefficient bit vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// characteristic 2: addition is XOR
impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FieldElement {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

/// Carry-less product of two polynomials over GF(2).
fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `m` over GF(2).
fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    let p = poly as u64;
    if p < 2 {
        return false;
    }
    let d = degree(p);
    if d == 0 {
        return false;
    }
    for dq in 1..=d / 2 {
        for q in (1u64 << dq)..(1u64 << (dq + 1)) {
            if poly_rem(p, q) == 0 {
                return false;
            }
        }
    }
    true
}

/// Numerically smallest irreducible polynomial of degree `n`.
pub fn least_irreducible(n: u32) -> u32 {
    ((1u32 << n)..(1u32 << (n + 1)))
        .find(|&p| is_irreducible(p))
        .expect("an irreducible polynomial exists in every degree")
}

/// Immutable description of GF(2^n) with cached trace values.
#[derive(Clone, Debug)]
pub struct FieldContext {
    n: u32,
    modulus: u32,
    trace: Vec<u8>,
    /// `a^-1` and `a^-3` for `a ≠ 0`; index 0 unused.
    inverse: Vec<u32>,
    inv_cube: Vec<u32>,
}

impl FieldContext {
    /// Field of odd degree `n` over the least irreducible modulus.
    pub fn new(n: u32) -> Result<Self> {
        Self::check_degree(n)?;
        Self::with_modulus(n, least_irreducible(n))
    }

    pub fn with_modulus(n: u32, modulus: u32) -> Result<Self> {
        Self::check_degree(n)?;
        if degree(modulus as u64) != n as i32 || !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus { modulus, degree: n });
        }
        let mut ctx = FieldContext { n, modulus, trace: Vec::new(), inverse: Vec::new(), inv_cube: Vec::new() };
        ctx.trace = (0..ctx.order()).map(|a| ctx.trace_by_frobenius(FieldElement(a))).collect();
        ctx.inverse = (0..ctx.order())
            .map(|a| if a == 0 { 0 } else { ctx.pow(FieldElement(a), (ctx.order() - 2) as u64).0 })
            .collect();
        ctx.inv_cube = ctx.inverse.iter().map(|&a| ctx.cube(FieldElement(a)).0).collect();
        Ok(ctx)
    }

    fn check_degree(n: u32) -> Result<()> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::InvalidDegree(n, "degree must lie in 1..=15"));
        }
        if n.is_multiple_of(2) {
            return Err(Error::InvalidDegree(n, "n must be odd"));
        }
        Ok(())
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.n
    }

    /// `k` with `n = 2k + 1`.
    #[inline]
    pub fn half_degree(&self) -> u32 {
        self.n / 2
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, `2^n`.
    #[inline]
    pub fn order(&self) -> u32 {
        1 << self.n
    }

    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if bits >= self.order() {
            return Err(Error::ElementOutOfRange(bits));
        }
        Ok(FieldElement(bits))
    }

    /// All elements in ascending bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(FieldElement)
    }

    /// Nonzero elements in ascending bit order.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.order()).map(FieldElement)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let prod = clmul(a.0 as u64, b.0 as u64);
        FieldElement(poly_rem(prod, self.modulus as u64) as u32)
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    #[inline]
    pub fn cube(&self, a: FieldElement) -> FieldElement {
        self.mul(self.square(a), a)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `a^(2^j)`.
    pub fn frobenius(&self, a: FieldElement, j: u32) -> FieldElement {
        (0..j).fold(a, |acc, _| self.square(acc))
    }

    /// Inverse as `a^(2^n - 2)`, tabulated at construction.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(self.inverse[a.0 as usize]))
    }

    fn trace_by_frobenius(&self, a: FieldElement) -> u8 {
        let mut acc = FieldElement::ZERO;
        let mut conj = a;
        for _ in 0..self.n {
            acc += conj;
            conj = self.square(conj);
        }
        debug_assert!(acc.0 <= 1, "trace must lie in the prime field");
        acc.0 as u8
    }

    /// Absolute trace `a + a^2 + ... + a^(2^(n-1))`, as 0 or 1.
    #[inline]
    pub fn trace(&self, a: FieldElement) -> u8 {
        self.trace[a.0 as usize]
    }

    /// `sum_{j even, 0 <= j <= n-1} a^(2^j)`.
    pub fn theta(&self, a: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut conj = a;
        for j in 0..self.n {
            if j % 2 == 0 {
                acc += conj;
            }
            conj = self.square(conj);
        }
        acc
    }

    /// `a^2 + a`.
    #[inline]
    pub fn eta(&self, a: FieldElement) -> FieldElement {
        self.square(a) + a
    }

    /// Indicator of `v` lying outside the hyperplane `H_u = ker tr(u^-3 .)`.
    pub fn hyperplane_quotient(&self, u: FieldElement, v: FieldElement) -> Result<u8> {
        if u.is_zero() {
            return Err(Error::ZeroParameter);
        }
        Ok(self.trace(self.mul(FieldElement(self.inv_cube[u.0 as usize]), v)))
    }

    /// The alternating form `tr(a b^2 + a^2 b)` on GF(2^n).
    pub fn angle_form(&self, a: FieldElement, b: FieldElement) -> u8 {
        let ab2 = self.mul(a, self.square(b));
        let a2b = self.mul(self.square(a), b);
        self.trace(ab2 + a2b)
    }

    /// Elements of trace zero, ascending.
    pub fn trace_zero_subspace(&self) -> Vec<FieldElement> {
        self.elements().filter(|&a| self.trace(a) == 0).collect()
    }

    /// Symplectic basis of the trace-zero subspace for the form `tr(ab)`,
    /// by Gram–Schmidt over the elements taken in ascending bit order.
    pub fn symplectic_basis(&self) -> SymplecticBasis {
        let k = self.half_degree() as usize;
        let pool = self.trace_zero_subspace();
        let mut xs: Vec<FieldElement> = Vec::with_capacity(k);
        let mut ys: Vec<FieldElement> = Vec::with_capacity(k);
        for _ in 0..k {
            let in_complement = |v: FieldElement| xs.iter().chain(ys.iter()).all(|&w| self.trace(self.mul(v, w)) == 0);
            let x = *pool
                .iter()
                .find(|&&v| !v.is_zero() && in_complement(v))
                .expect("trace form is nondegenerate on the complement");
            let y = *pool
                .iter()
                .find(|&&v| in_complement(v) && self.trace(self.mul(x, v)) == 1)
                .expect("trace form is nondegenerate on the complement");
            xs.push(x);
            ys.push(y);
        }
        SymplecticBasis { xs, ys }
    }

    /// Checks trace-zero membership and every pairing `tr(x_s x_t)`,
    /// `tr(y_s y_t)`, `tr(x_s y_t)`.
    pub fn validate_symplectic(&self, basis: &SymplecticBasis) -> Result<()> {
        let k = self.half_degree() as usize;
        if basis.xs.len() != k || basis.ys.len() != k {
            return Err(Error::DimensionMismatch(format!("symplectic basis needs {k} + {k} vectors")));
        }
        for &v in basis.xs.iter().chain(basis.ys.iter()) {
            if self.trace(v) != 0 {
                return Err(Error::InvalidInput(format!("{:#b} has nonzero trace", v.0)));
            }
        }
        for s in 0..k {
            for t in 0..k {
                let xx = self.trace(self.mul(basis.xs[s], basis.xs[t]));
                let yy = self.trace(self.mul(basis.ys[s], basis.ys[t]));
                let xy = self.trace(self.mul(basis.xs[s], basis.ys[t]));
                if xx != 0 || yy != 0 || xy != u8::from(s == t) {
                    return Err(Error::InvalidInput(format!("symplectic pairing fails at (s, t) = ({s}, {t})")));
                }
            }
        }
        Ok(())
    }

    /// Smallest `z` whose conjugates `z^(2^i)` form a self-dual basis,
    /// i.e. `tr(z^(2^i) z^(2^j)) = δ_ij`.
    pub fn self_dual_normal_basis(&self) -> Result<FieldElement> {
        self.units()
            .find(|&z| self.is_self_dual_normal(z))
            .ok_or_else(|| Error::Consistency("no self-dual normal basis found".into()))
    }

    pub fn is_self_dual_normal(&self, z: FieldElement) -> bool {
        let conj: Vec<FieldElement> = (0..self.n).map(|i| self.frobenius(z, i)).collect();
        conj.iter()
            .enumerate()
            .all(|(i, &a)| conj.iter().enumerate().all(|(j, &b)| self.trace(self.mul(a, b)) == u8::from(i == j)))
    }

    /// Symplectic basis derived from a self-dual normal generator:
    /// `x_s = z_{2s} + z_{2s+1}` and `y_t = z_{2t} + sum_{j >= 2t+2} z_j`,
    /// where `z_j = z^(2^j)`.
    pub fn symplectic_from_normal(&self, z: FieldElement) -> SymplecticBasis {
        let k = self.half_degree() as usize;
        let conj: Vec<FieldElement> = (0..self.n).map(|i| self.frobenius(z, i)).collect();
        let xs = (0..k).map(|s| conj[2 * s] + conj[2 * s + 1]).collect();
        let ys = (0..k).map(|t| conj[2 * t + 2..].iter().fold(conj[2 * t], |acc, &c| acc + c)).collect();
        SymplecticBasis { xs, ys }
    }
}

/// Vectors `x_0..x_{k-1}`, `y_0..y_{k-1}` with `tr(x_s y_t) = δ_st` and all
/// other pairings zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticBasis {
    pub xs: Vec<FieldElement>,
    pub ys: Vec<FieldElement>,
}
