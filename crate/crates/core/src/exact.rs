//! Exact scalar and matrix types over the Gaussian rationals.

use std::fmt;

use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;
pub type GaussInt = Complex<i64>;
pub type GaussRational = Complex<Rational>;

/// `i^p` for `p` taken mod 4.
#[inline]
pub fn i_pow(p: u8) -> GaussInt {
    match p & 3 {
        0 => Complex::new(1, 0),
        1 => Complex::new(0, 1),
        2 => Complex::new(-1, 0),
        _ => Complex::new(0, -1),
    }
}

/// `2^e` as a rational, for any sign of `e`.
pub fn pow2(e: i32) -> Rational {
    if e >= 0 {
        Rational::from_integer(1i64 << e)
    } else {
        Rational::new(1, 1i64 << (-e))
    }
}

/// `p/q` in lowest terms with positive denominator.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let q: i64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if q == 0 {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(p, q))
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod ratio_str {
    use super::{fmt_rational, Rational};
    use serde::Serializer;

    pub fn one<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn opt<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn many<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_rational))
    }
}

pub fn norm_sq(z: &GaussRational) -> Rational {
    z.re * z.re + z.im * z.im
}

/// `(re + i·im)·2^log2`, kept with `re` and `im` not both even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianScaled {
    pub re: i64,
    pub im: i64,
    pub log2: i32,
}

impl GaussianScaled {
    pub const ZERO: GaussianScaled = GaussianScaled { re: 0, im: 0, log2: 0 };

    pub fn new(re: i64, im: i64, log2: i32) -> Self {
        let mut v = GaussianScaled { re, im, log2 };
        v.canonicalize();
        v
    }

    pub fn from_gauss(z: GaussInt) -> Self {
        Self::new(z.re, z.im, 0)
    }

    fn canonicalize(&mut self) {
        if self.re == 0 && self.im == 0 {
            self.log2 = 0;
            return;
        }
        while self.re % 2 == 0 && self.im % 2 == 0 {
            self.re /= 2;
            self.im /= 2;
            self.log2 += 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn conj(&self) -> Self {
        GaussianScaled { re: self.re, im: -self.im, log2: self.log2 }
    }

    pub fn neg(&self) -> Self {
        GaussianScaled { re: -self.re, im: -self.im, log2: self.log2 }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.log2 + other.log2,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let e = self.log2.min(other.log2);
        let (a, b) = (self.log2 - e, other.log2 - e);
        Self::new((self.re << a) + (other.re << b), (self.im << a) + (other.im << b), e)
    }

    /// `|z|^2` as an exact rational.
    pub fn norm_sq(&self) -> Rational {
        Rational::from_integer(self.re * self.re + self.im * self.im) * pow2(2 * self.log2)
    }

    pub fn to_rational(&self) -> GaussRational {
        let s = pow2(self.log2);
        Complex::new(Rational::from_integer(self.re) * s, Rational::from_integer(self.im) * s)
    }

    /// Gaussian integer value when `log2 >= 0`.
    pub fn to_gauss_int(&self) -> Option<GaussInt> {
        if self.log2 < 0 {
            return None;
        }
        Some(Complex::new(self.re << self.log2, self.im << self.log2))
    }
}

impl fmt::Display for GaussianScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_rational();
        write!(f, "{}{:+}i", z.re, z.im)
    }
}

/// Dense matrix of Gaussian rationals, stored as Gaussian-integer numerators
/// over one positive common denominator.
///
/// The representation is kept reduced (`gcd` of every numerator part and
/// the denominator is 1), so structural equality is exact equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianRationalMatrix {
    rows: usize,
    cols: usize,
    num: Vec<GaussInt>,
    den: i64,
}

impl GaussianRationalMatrix {
    pub fn from_numerators(rows: usize, cols: usize, num: Vec<GaussInt>, den: i64) -> Result<Self> {
        if num.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", num.len())));
        }
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let mut m = GaussianRationalMatrix { rows, cols, num, den };
        m.reduce();
        Ok(m)
    }

    /// Builds from exact entries, choosing the least common denominator.
    pub fn from_entries(rows: usize, cols: usize, entries: &[GaussRational]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        let den = entries.iter().fold(1i64, |acc, z| acc.lcm(z.re.denom()).lcm(z.im.denom()));
        let num = entries
            .iter()
            .map(|z| Complex::new(z.re.numer() * (den / z.re.denom()), z.im.numer() * (den / z.im.denom())))
            .collect();
        Self::from_numerators(rows, cols, num, den)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        GaussianRationalMatrix { rows, cols, num: vec![Complex::zero(); rows * cols], den: 1 }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.num[i * n + i] = Complex::one();
        }
        m
    }

    fn reduce(&mut self) {
        if self.den < 0 {
            self.den = -self.den;
            self.num.iter_mut().for_each(|z| *z = -*z);
        }
        let mut g = self.den;
        for z in &self.num {
            if g == 1 {
                break;
            }
            g = g.gcd(&z.re).gcd(&z.im);
        }
        if self.num.iter().all(|z| z.is_zero()) {
            g = self.den;
        }
        if g > 1 {
            self.den /= g;
            self.num.iter_mut().for_each(|z| *z = Complex::new(z.re / g, z.im / g));
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn denominator(&self) -> i64 {
        self.den
    }

    #[inline]
    pub fn numerator(&self, i: usize, j: usize) -> GaussInt {
        self.num[i * self.cols + j]
    }

    pub fn numerators(&self) -> &[GaussInt] {
        &self.num
    }

    pub fn entry(&self, i: usize, j: usize) -> GaussRational {
        let z = self.numerator(i, j);
        Complex::new(Rational::new(z.re, self.den), Rational::new(z.im, self.den))
    }

    /// `|entry|^2` without forming rationals for the parts.
    pub fn entry_norm_sq(&self, i: usize, j: usize) -> Rational {
        let z = self.numerator(i, j);
        Rational::new(z.re * z.re + z.im * z.im, self.den * self.den)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        let den = self.den.lcm(&other.den);
        let (a, b) = (den / self.den, den / other.den);
        let num = self.num.iter().zip(&other.num).map(|(x, y)| x * a + y * (b * sign)).collect();
        let mut m = GaussianRationalMatrix { rows: self.rows, cols: self.cols, num, den };
        m.reduce();
        m
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        Ok(self.combine(other, 1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        Ok(self.combine(other, -1))
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "hadamard")?;
        let num = self.num.iter().zip(&other.num).map(|(x, y)| x * y).collect();
        Self::from_numerators(self.rows, self.cols, num, self.den * other.den)
    }

    /// Matrix product, parallel over rows of the result.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, inner) = (other.cols, self.cols);
        let mut num = vec![GaussInt::zero(); self.rows * n];
        num.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
            for t in 0..inner {
                let a = self.num[i * inner + t];
                if a.is_zero() {
                    continue;
                }
                let row = &other.num[t * n..(t + 1) * n];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        });
        Self::from_numerators(self.rows, n, num, self.den * other.den)
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        GaussianRationalMatrix {
            rows: self.rows,
            cols: self.cols,
            num: self.num.iter().map(|z| z.conj()).collect(),
            den: self.den,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut num = vec![GaussInt::zero(); self.num.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                num[j * self.rows + i] = self.num[i * self.cols + j];
            }
        }
        GaussianRationalMatrix { rows: self.cols, cols: self.rows, num, den: self.den }
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, c: Rational) -> Self {
        let num = self.num.iter().map(|z| z * *c.numer()).collect();
        let mut m = GaussianRationalMatrix { rows: self.rows, cols: self.cols, num, den: self.den * c.denom() };
        m.reduce();
        m
    }

    pub fn trace(&self) -> GaussRational {
        let mut acc = GaussInt::zero();
        for i in 0..self.rows.min(self.cols) {
            acc += self.num[i * self.cols + i];
        }
        Complex::new(Rational::new(acc.re, self.den), Rational::new(acc.im, self.den))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    /// First index where `self` and `other` differ, in row-major order.
    pub fn first_mismatch(&self, other: &Self) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0));
        }
        (0..self.rows * self.cols)
            .find(|&p| self.entry(p / self.cols, p % self.cols) != other.entry(p / self.cols, p % self.cols))
            .map(|p| (p / self.cols, p % self.cols))
    }
}
