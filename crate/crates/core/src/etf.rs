//! Frame synthesis, Gram matrices, and exact ETF certificates.
//!
//! The frame for the hyperdifference set `D` has one column per group
//! element `g` (canonical order) holding the blocks `π_γ(g)`, `γ` ascending,
//! each flattened row-major, times the global scale `2^((k - 2n)/2)`. Its
//! Gram matrix is `(Φ*Φ)_{g,h} = ⟨φ_h, φ_g⟩ = (1/|G|) Σ_{χ∈D} d_χ χ(g^-1 h)`.

use std::io::{BufRead, Write};

use num_complex::Complex;
use num_traits::Zero;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bgroup::{GroupContext, GroupElement};
use crate::chartab::{evaluate, CharKind, CharLabel, CharacterTable};
use crate::error::{Error, Result};
use crate::exact::{
    fmt_rational, i_pow, parse_rational, ratio_str, GaussInt, GaussRational, GaussianRationalMatrix, GaussianScaled,
    Rational,
};
use crate::gf2n::FieldContext;
use crate::heis::RepContext;

pub const FORMAT_TAG: &str = "LINEPACK-MATRIX v1";

/// Gaussian-integer matrix with a global scale whose square is `2^log2_scale_sq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledGaussianMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussInt>,
    log2_scale_sq: i32,
}

impl ScaledGaussianMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<GaussInt>, log2_scale_sq: i32) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(ScaledGaussianMatrix { rows, cols, entries, log2_scale_sq })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn log2_scale_sq(&self) -> i32 {
        self.log2_scale_sq
    }

    pub fn entries(&self) -> &[GaussInt] {
        &self.entries
    }

    #[inline]
    pub fn entry(&self, r: usize, c: usize) -> GaussInt {
        self.entries[r * self.cols + c]
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut GaussInt {
        &mut self.entries[r * self.cols + c]
    }

    fn sparse_rows(&self) -> Vec<Vec<(usize, GaussInt)>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| (c, self.entry(r, c))).filter(|(_, z)| !z.is_zero()).collect())
            .collect()
    }

    fn sparse_cols(&self) -> Vec<Vec<(usize, GaussInt)>> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| (r, self.entry(r, c))).filter(|(_, z)| !z.is_zero()).collect())
            .collect()
    }

    /// `entries · entriesᴴ`, unscaled.
    pub fn row_gram(&self) -> Vec<GaussInt> {
        pair_products(&self.sparse_rows(), self.cols)
    }

    /// `entriesᴴ · entries`, unscaled: entry `(g, h)` is `⟨col_h, col_g⟩`.
    pub fn column_gram(&self) -> Vec<GaussInt> {
        pair_products(&self.sparse_cols(), self.rows)
    }
}

/// `out[a][b] = Σ conj(v_a) v_b` over sparse vectors of the given length.
fn pair_products(vectors: &[Vec<(usize, GaussInt)>], len: usize) -> Vec<GaussInt> {
    let count = vectors.len();
    let mut out = vec![GaussInt::zero(); count * count];
    out.par_chunks_mut(count.max(1)).enumerate().for_each_init(
        || vec![GaussInt::zero(); len],
        |buf, (a, row)| {
            for &(p, z) in &vectors[a] {
                buf[p] = z.conj();
            }
            for (b, slot) in row.iter_mut().enumerate() {
                *slot = vectors[b].iter().map(|&(p, z)| buf[p] * z).sum();
            }
            for &(p, _) in &vectors[a] {
                buf[p] = GaussInt::zero();
            }
        },
    );
    out
}

/// `m = 2^(n-1) (2^n - 1)`.
pub fn frame_dimension(field: &FieldContext) -> u64 {
    let n = field.degree();
    (1u64 << (n - 1)) * ((1u64 << n) - 1)
}

/// The `m × 2^(2n)` frame `Φ_D`.
pub fn synthesize_frame(rep: &RepContext<'_>) -> Result<ScaledGaussianMatrix> {
    let group = rep.group();
    let f = group.field();
    let (n, k) = (f.degree() as i32, f.half_degree() as i32);
    let dim = rep.dim();
    let family = rep.rep_family();
    let rows = family.len() * dim * dim;
    let cols = group.order();
    let mut entries = vec![GaussInt::zero(); rows * cols];
    for (c, g) in group.elements().enumerate() {
        for (b, member) in family.iter().enumerate() {
            let mat = member.eval(g);
            for r in 0..dim {
                let (col, p) = mat.row_entry(r);
                entries[((b * dim + r) * dim + col) * cols + c] = i_pow(p);
            }
        }
    }
    ScaledGaussianMatrix::new(rows, cols, entries, k - 2 * n)
}

/// `Φ*Φ` from the frame's columns.
pub fn gram_frame(frame: &ScaledGaussianMatrix) -> Result<GaussianRationalMatrix> {
    let num = frame.column_gram();
    let (num, den) = apply_scale(num, frame.log2_scale_sq)?;
    GaussianRationalMatrix::from_numerators(frame.cols, frame.cols, num, den)
}

fn apply_scale(num: Vec<GaussInt>, log2: i32) -> Result<(Vec<GaussInt>, i64)> {
    if !(-62..=62).contains(&log2) {
        return Err(Error::Unsupported("scale exponent out of range".into()));
    }
    if log2 >= 0 {
        let f = 1i64 << log2;
        Ok((num.into_iter().map(|z| z * f).collect(), 1))
    } else {
        Ok((num, 1i64 << -log2))
    }
}

/// `(1/|G|) Σ_{χ∈S} d_χ χ(g^-1 h)` over every pair.
pub fn gram_character(
    group: &GroupContext,
    table: &CharacterTable,
    subset: &[usize],
) -> Result<GaussianRationalMatrix> {
    if subset.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let weights = class_weights(table, subset)?;
    let n = group.order();
    let elems: Vec<GroupElement> = group.elements().collect();
    let mut num = vec![GaussInt::zero(); n * n];
    num.par_chunks_mut(n).enumerate().for_each(|(gi, row)| {
        let ginv = group.inv(elems[gi]);
        for (hi, slot) in row.iter_mut().enumerate() {
            *slot = weights[group.class_index(group.mul(ginv, elems[hi]))];
        }
    });
    GaussianRationalMatrix::from_numerators(n, n, num, n as i64)
}

fn class_weights(table: &CharacterTable, subset: &[usize]) -> Result<Vec<GaussInt>> {
    if let Some(&bad) = subset.iter().find(|&&i| i >= table.characters.len()) {
        return Err(Error::IndexOutOfRange(bad));
    }
    table
        .weighted_sum(subset)
        .iter()
        .map(|v| v.to_gauss_int().ok_or_else(|| Error::InvalidInput("non-integral character sum".into())))
        .collect()
}

/// One entry of `𝒢_D` indexed literally as in the closed form:
///
/// ```text
/// 1/2 - 1/2^(n+1)                                      x = α, y = β
/// -1/2^(n+1)                                           x = α, y ≠ β
/// (i/2^(n+1)) (-1)^tr((x-α)^-3 (y - β + α^3 + xα^2))   otherwise
/// ```
///
/// This evaluates `χ(g h^-1)`, so it is the conjugate (transpose) of the
/// `(g, h)` entry of `Φ*Φ`.
pub fn gram_closed_form(field: &FieldContext, g: GroupElement, h: GroupElement) -> GaussianScaled {
    let n = field.degree() as i32;
    let (x, y, a, b) = (g.x, g.y, h.x, h.y);
    if x == a {
        if y == b {
            GaussianScaled::new((1 << n) - 1, 0, -(n + 1))
        } else {
            GaussianScaled::new(-1, 0, -(n + 1))
        }
    } else {
        let arg = y + b + field.cube(a) + field.mul(x, field.square(a));
        let t = field.hyperplane_quotient(x + a, arg).expect("x ≠ α");
        GaussianScaled::new(0, if t == 0 { 1 } else { -1 }, -(n + 1))
    }
}

/// `𝒢_D` from the closed form, in the `Φ*Φ` convention.
pub fn gram_closed_form_matrix(group: &GroupContext) -> Result<GaussianRationalMatrix> {
    let f = group.field();
    let n = group.order();
    let den = 1i64 << (f.degree() + 1);
    let elems: Vec<GroupElement> = group.elements().collect();
    let mut num = vec![GaussInt::zero(); n * n];
    num.par_chunks_mut(n).enumerate().for_each(|(gi, row)| {
        for (hi, slot) in row.iter_mut().enumerate() {
            *slot = scaled_numerator(&gram_closed_form(f, elems[hi], elems[gi]), den);
        }
    });
    GaussianRationalMatrix::from_numerators(n, n, num, den)
}

fn scaled_numerator(v: &GaussianScaled, den: i64) -> GaussInt {
    let q = v.to_rational();
    Complex::new((q.re * den).to_integer(), (q.im * den).to_integer())
}

/// `(Φ*Φ)_{g,h} = 2^(k-2n) Σ_γ tr(π_γ(g)^* π_γ(h))` from the representation matrices.
pub fn gram_entry_frame(rep: &RepContext<'_>, g: GroupElement, h: GroupElement) -> GaussRational {
    let f = rep.group().field();
    let (n, k) = (f.degree() as i32, f.half_degree() as i32);
    let sum: GaussInt = rep.rep_family().iter().map(|m| m.hs_pair(g, h).conj()).sum();
    GaussianScaled::from_gauss(sum).mul(&GaussianScaled::new(1, 0, k - 2 * n)).to_rational()
}

/// `(1/|G|) Σ_{χ∈S} d_χ χ(g^-1 h)`.
pub fn gram_entry_character(
    group: &GroupContext,
    table: &CharacterTable,
    subset: &[usize],
    g: GroupElement,
    h: GroupElement,
) -> GaussRational {
    let c = group.class_index(group.mul(group.inv(g), h));
    let sum = subset.iter().fold(GaussianScaled::ZERO, |acc, &i| {
        let ch = &table.characters[i];
        acc.add(&GaussianScaled::new(ch.degree as i64, 0, 0).mul(&ch.values[c]))
    });
    sum.to_rational() / Rational::from_integer(group.order() as i64)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleReport {
    pub seed: u64,
    pub samples: usize,
    pub mismatches: usize,
    /// First `(g, h)` indices that disagree or break the pattern.
    pub first_violation: Option<(usize, usize)>,
    /// Sampled entries whose modulus breaks the ETF pattern.
    pub pattern_violations: usize,
}

/// `(1/|G|) Σ_{γ≠0} 2^k χ̃_γ(g^-1 h)` from the closed-form character values,
/// without building the table.
pub fn gram_entry_d_characters(group: &GroupContext, g: GroupElement, h: GroupElement) -> GaussRational {
    let f = group.field();
    let k = f.half_degree() as i32;
    let q = group.mul(group.inv(g), h);
    let sum = f.units().fold(GaussianScaled::ZERO, |acc, gamma| {
        let label = CharLabel { kind: CharKind::Nonlinear, parameter: gamma, sign: 1 };
        acc.add(&evaluate(group, &label, q))
    });
    sum.mul(&GaussianScaled::new(1, 0, k - 2 * f.degree() as i32)).to_rational()
}

/// Compares the three Gram routes on uniformly sampled entries, and checks
/// each sampled entry against the expected diagonal and off-diagonal values.
pub fn sample_three_way(rep: &RepContext<'_>, samples: usize, seed: u64) -> SampleReport {
    let group = rep.group();
    let f = group.field();
    let order = group.order();
    let n = f.degree() as i32;
    let diag = Rational::new(frame_dimension(f) as i64, order as i64);
    let off = crate::exact::pow2(-2 * (n + 1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> =
        (0..samples).map(|_| (rng.random_range(0..order), rng.random_range(0..order))).collect();
    let outcomes: Vec<(bool, bool)> = pairs
        .par_iter()
        .map(|&(gi, hi)| {
            let (g, h) = (group.element_at(gi), group.element_at(hi));
            let closed = gram_closed_form(f, h, g).to_rational();
            let chars = gram_entry_d_characters(group, g, h);
            let frame = gram_entry_frame(rep, g, h);
            let agree = closed == chars && chars == frame;
            let modulus = chars.re * chars.re + chars.im * chars.im;
            let pattern = if gi == hi { chars == Complex::new(diag, Rational::zero()) } else { modulus == off };
            (agree, pattern)
        })
        .collect();
    let first = outcomes.iter().position(|o| !o.0 || !o.1).map(|p| pairs[p]);
    SampleReport {
        seed,
        samples,
        mismatches: outcomes.iter().filter(|o| !o.0).count(),
        first_violation: first,
        pattern_violations: outcomes.iter().filter(|o| !o.1).count(),
    }
}

/// Squared Welch bounds for `N` vectors in dimension `m`:
/// `(N - m)/(m(N - 1))` for unit vectors and `m(N - m)/(N^2 (N - 1))` for a
/// Parseval frame.
pub fn welch_bound_sq(m: u64, big_n: u64) -> Result<(Rational, Rational)> {
    if m == 0 || m >= big_n {
        return Err(Error::InvalidInput(format!("Welch bound needs 1 <= m < N, got m = {m}, N = {big_n}")));
    }
    let (m, n) = (m as i64, big_n as i64);
    Ok((Rational::new(n - m, m * (n - 1)), Rational::new(m * (n - m), n * n * (n - 1))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Optimal,
    NotEtf,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EtfCertificate {
    pub m: u64,
    pub num_vectors: u64,
    pub parseval: bool,
    #[serde(serialize_with = "ratio_str::opt")]
    pub diagonal_value: Option<Rational>,
    #[serde(serialize_with = "ratio_str::opt")]
    pub off_diag_modulus_squared: Option<Rational>,
    #[serde(serialize_with = "ratio_str::opt")]
    pub welch_squared: Option<Rational>,
    #[serde(serialize_with = "ratio_str::opt")]
    pub welch_unit_squared: Option<Rational>,
    pub verdict: Verdict,
    pub method: Vec<String>,
    pub agreement: Option<bool>,
    pub violation: Option<String>,
}

impl EtfCertificate {
    pub fn is_optimal(&self) -> bool {
        self.verdict == Verdict::Optimal
    }
}

/// Certificate for an `N × N` Gram matrix given its precomputed square.
fn certify_gram(gram: &GaussianRationalMatrix, projection: Option<String>, method: &str) -> Result<EtfCertificate> {
    if !gram.is_square() {
        return Err(Error::DimensionMismatch(format!("Gram matrix is {}x{}", gram.rows(), gram.cols())));
    }
    let big_n = gram.rows();
    let mut cert = EtfCertificate {
        m: 0,
        num_vectors: big_n as u64,
        parseval: projection.is_none(),
        diagonal_value: None,
        off_diag_modulus_squared: None,
        welch_squared: None,
        welch_unit_squared: None,
        verdict: Verdict::NotEtf,
        method: vec![method.to_string()],
        agreement: None,
        violation: None,
    };
    let tr = gram.trace();
    if !tr.im.is_zero() || !tr.re.is_integer() || tr.re <= Rational::zero() {
        cert.violation = Some(format!("trace {} + {}i is not a positive integer", tr.re, tr.im));
        return Ok(cert);
    }
    cert.m = tr.re.to_integer() as u64;
    if let Some(why) = projection {
        cert.violation = Some(why);
        return Ok(cert);
    }
    let d0 = gram.entry(0, 0);
    cert.diagonal_value = Some(d0.re);
    if let Some(i) = (0..big_n).find(|&i| gram.entry(i, i) != d0) {
        cert.violation = Some(format!("diagonal differs at ({i}, {i})"));
        return Ok(cert);
    }
    match welch_bound_sq(cert.m, big_n as u64) {
        Ok((unit, parseval)) => {
            cert.welch_unit_squared = Some(unit);
            cert.welch_squared = Some(parseval);
        }
        Err(_) => {
            cert.violation = Some("degenerate: m = N, no off-diagonal angle".into());
            return Ok(cert);
        }
    }
    let first = gram.entry_norm_sq(0, 1);
    cert.off_diag_modulus_squared = Some(first);
    let bad = (0..big_n * big_n)
        .into_par_iter()
        .filter(|&p| p / big_n != p % big_n)
        .find_first(|&p| gram.entry_norm_sq(p / big_n, p % big_n) != first);
    if let Some(p) = bad {
        cert.violation = Some(format!("off-diagonal modulus differs at ({}, {})", p / big_n, p % big_n));
        return Ok(cert);
    }
    if Some(first) != cert.welch_squared {
        cert.violation = Some("off-diagonal modulus does not meet the Welch bound".into());
        return Ok(cert);
    }
    cert.verdict = Verdict::Optimal;
    Ok(cert)
}

/// Certifies an exact Gram matrix: projection, constant diagonal, constant
/// off-diagonal modulus, and equality with the Parseval Welch value.
pub fn verify_gram(gram: &GaussianRationalMatrix) -> Result<EtfCertificate> {
    if !gram.is_square() {
        return Err(Error::DimensionMismatch(format!("Gram matrix is {}x{}", gram.rows(), gram.cols())));
    }
    let projection = if let Some((i, j)) = gram.first_mismatch(&gram.adjoint()) {
        Some(format!("not Hermitian at ({i}, {j})"))
    } else {
        gram.first_mismatch(&gram.matmul(gram)?).map(|(i, j)| format!("G^2 != G at ({i}, {j})"))
    };
    certify_gram(gram, projection, "gram")
}

/// Certifies a frame: exact Parseval identity, then the Gram checks on `Φ*Φ`.
pub fn verify_frame(frame: &ScaledGaussianMatrix) -> Result<EtfCertificate> {
    let rg = frame.row_gram();
    let m = frame.rows;
    // entries·entriesᴴ must equal 2^-log2_scale_sq · I
    let parseval = if frame.log2_scale_sq > 0 {
        Some("scale too large for a Parseval frame".to_string())
    } else {
        let diag = GaussInt::new(1i64 << -frame.log2_scale_sq, 0);
        (0..m * m)
            .find(|&p| rg[p] != if p / m == p % m { diag } else { GaussInt::zero() })
            .map(|p| format!("Parseval identity fails at row pair ({}, {})", p / m, p % m))
    };
    let gram = gram_frame(frame)?;
    let mut cert = certify_gram(&gram, parseval, "frame")?;
    if cert.m != m as u64 && cert.violation.is_none() {
        cert.verdict = Verdict::NotEtf;
        cert.violation = Some(format!("Gram rank {} differs from frame dimension {m}", cert.m));
    }
    Ok(cert)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FrameManifest {
    pub n: u32,
    pub k: u32,
    pub modulus: u32,
    pub m: u64,
    pub num_vectors: u64,
    #[serde(rename = "welch_sq", serialize_with = "ratio_str::one")]
    pub welch_sq: Rational,
    pub ordering: &'static str,
    #[serde(rename = "d_order")]
    pub d_order: &'static str,
}

impl FrameManifest {
    pub fn new(field: &FieldContext) -> Self {
        let m = frame_dimension(field);
        let big_n = 1u64 << (2 * field.degree());
        FrameManifest {
            n: field.degree(),
            k: field.half_degree(),
            modulus: field.modulus(),
            m,
            num_vectors: big_n,
            welch_sq: welch_bound_sq(m, big_n).expect("m < N").1,
            ordering: "lex-xy",
            d_order: "gamma-asc",
        }
    }
}

/// A parsed matrix file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixFile {
    Frame(ScaledGaussianMatrix),
    Gram(GaussianRationalMatrix),
}

fn header(rows: usize, cols: usize, num: i32, den: i32) -> String {
    format!("{FORMAT_TAG} rows={rows} cols={cols} scale_log2_num={num} scale_log2_den={den}")
}

/// Frame file: entries `re;im` of the integer matrix; scale `2^(num/den)`.
pub fn write_frame<W: Write>(out: &mut W, frame: &ScaledGaussianMatrix) -> std::io::Result<()> {
    writeln!(out, "{}", header(frame.rows, frame.cols, frame.log2_scale_sq, 2))?;
    let mut line = String::new();
    for r in 0..frame.rows {
        line.clear();
        for c in 0..frame.cols {
            if c > 0 {
                line.push(' ');
            }
            let z = frame.entry(r, c);
            line.push_str(&format!("{};{}", z.re, z.im));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Gram file: entries `re;im` as reduced rationals `p/q`.
pub fn write_gram<W: Write>(out: &mut W, gram: &GaussianRationalMatrix) -> std::io::Result<()> {
    writeln!(out, "{}", header(gram.rows(), gram.cols(), 0, 1))?;
    let mut line = String::new();
    for r in 0..gram.rows() {
        line.clear();
        for c in 0..gram.cols() {
            if c > 0 {
                line.push(' ');
            }
            let z = gram.entry(r, c);
            line.push_str(&fmt_rational(&z.re));
            line.push(';');
            line.push_str(&fmt_rational(&z.im));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn header_field(tokens: &[&str], key: &str) -> Result<i64> {
    tokens
        .iter()
        .find_map(|t| t.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
        .ok_or_else(|| Error::Parse(format!("header lacks `{key}`")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad `{key}` in header")))
}

/// Parses either file kind; a `/` in the first entry marks a Gram file.
pub fn read_matrix<R: BufRead>(input: R) -> Result<MatrixFile> {
    let mut lines = input.lines();
    let io = |e: std::io::Error| Error::Parse(e.to_string());
    let head = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?.map_err(io)?;
    let rest = head.strip_prefix(FORMAT_TAG).ok_or_else(|| Error::Parse(format!("missing `{FORMAT_TAG}` header")))?;
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    let rows = header_field(&tokens, "rows")?;
    let cols = header_field(&tokens, "cols")?;
    let num = header_field(&tokens, "scale_log2_num")?;
    let den = header_field(&tokens, "scale_log2_den")?;
    if rows < 0 || cols < 0 || den <= 0 {
        return Err(Error::Parse("invalid dimensions or scale".into()));
    }
    let (rows, cols) = (rows as usize, cols as usize);
    let mut cells: Vec<String> = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {r}")))?.map_err(io)?;
        let before = cells.len();
        cells.extend(line.split_whitespace().map(str::to_string));
        if cells.len() - before != cols {
            return Err(Error::Parse(format!("row {r} has {} entries, expected {cols}", cells.len() - before)));
        }
    }
    if let Some(extra) = lines.next() {
        if !extra.map_err(io)?.trim().is_empty() {
            return Err(Error::Parse("trailing data after last row".into()));
        }
    }
    let split = |cell: &str| -> Result<(String, String)> {
        cell.split_once(';')
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .ok_or_else(|| Error::Parse(format!("entry `{cell}` lacks `;`")))
    };
    let is_gram = cells.first().is_some_and(|c| c.contains('/'));
    if is_gram {
        let entries = cells
            .iter()
            .map(|c| {
                let (a, b) = split(c)?;
                Ok(Complex::new(parse_rational(&a)?, parse_rational(&b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixFile::Gram(GaussianRationalMatrix::from_entries(rows, cols, &entries)?))
    } else {
        if (num * 2) % den != 0 {
            return Err(Error::Unsupported("frame scale must have a square that is a power of two".into()));
        }
        let entries = cells
            .iter()
            .map(|c| {
                let (a, b) = split(c)?;
                let p = |s: &str| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{s}`")));
                Ok(GaussInt::new(p(&a)?, p(&b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixFile::Frame(ScaledGaussianMatrix::new(rows, cols, entries, (num * 2 / den) as i32)?))
    }
}
