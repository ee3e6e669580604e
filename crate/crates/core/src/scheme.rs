//! Commutative association schemes.
//!
//! A scheme on `n` points is stored as an `n × n` matrix of relation indices
//! (relation `0` is the diagonal) together with the primitive idempotents,
//! each written in the adjacency basis as `E_j = Σ_l e_{j,l} A_l` with a
//! common denominator. All structure constants are exact; dense matrices are
//! only formed on request.

use std::sync::OnceLock;

use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::bgroup::GroupContext;
use crate::chartab::CharacterTable;
use crate::error::{Error, Result};
use crate::exact::{ratio_str, GaussInt, GaussRational, GaussianRationalMatrix, Rational};

type Wide = Complex<i128>;

/// Idempotent coefficients: `E_j = Σ_l coeffs[j][l] / den · A_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentBasis {
    pub den: i64,
    pub coeffs: Vec<Vec<GaussInt>>,
}

/// Krein parameters `q_{i,j}^k`, defined by `E_i ∘ E_j = (1/n) Σ_k q_{i,j}^k E_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KreinTensor {
    r: usize,
    q: Vec<Rational>,
}

impl KreinTensor {
    pub fn size(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Rational {
        self.q[(i * self.r + j) * self.r + k]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.q
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HyperdiffReport {
    pub subset: Vec<usize>,
    pub is_hyperdiff: bool,
    /// `m_D = Σ_{j∈D} m_j`.
    pub rank: u64,
    #[serde(serialize_with = "ratio_str::many")]
    pub b: Vec<Rational>,
    #[serde(serialize_with = "ratio_str::opt")]
    pub c1: Option<Rational>,
    #[serde(serialize_with = "ratio_str::opt")]
    pub c2: Option<Rational>,
    #[serde(serialize_with = "ratio_str::opt")]
    pub off_diag_modulus_squared: Option<Rational>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SchemeSummary {
    pub points: usize,
    pub valencies: Vec<usize>,
    pub ranks: Vec<u64>,
    #[serde(serialize_with = "ratio_str::many")]
    pub b: Vec<Rational>,
}

#[derive(Debug)]
pub struct SchemeDescriptor {
    points: usize,
    relation: Vec<u16>,
    valencies: Vec<usize>,
    transpose: Vec<usize>,
    intersection: Vec<u32>,
    basis: IdempotentBasis,
    ranks: Vec<u64>,
    dual: Vec<usize>,
    krein: OnceLock<KreinTensor>,
}

fn ratio_from_wide(num: i128, den: i128) -> Result<Rational> {
    let g = num.gcd(&den);
    let (mut p, mut q) = (num / g, den / g);
    if q < 0 {
        p = -p;
        q = -q;
    }
    match (i64::try_from(p), i64::try_from(q)) {
        (Ok(p), Ok(q)) => Ok(Rational::new(p, q)),
        _ => Err(Error::Unsupported("rational overflows 64 bits".into())),
    }
}

fn widen(z: GaussInt) -> Wide {
    Complex::new(z.re as i128, z.im as i128)
}

/// Intersection numbers counted from the rows of `base`. Every pair
/// `(x, y)` with `x ∈ base` must give the same table for its relation.
fn count_intersections(n: usize, r: usize, rel: &[u16], base: &[usize]) -> Result<Vec<u32>> {
    let mut p = vec![0u32; r * r * r];
    let mut seen = vec![false; r];
    let mut local = vec![0u32; r * r];
    for &x in base {
        let row = &rel[x * n..(x + 1) * n];
        for y in 0..n {
            local.iter_mut().for_each(|c| *c = 0);
            for z in 0..n {
                local[row[z] as usize * r + rel[z * n + y] as usize] += 1;
            }
            let k = row[y] as usize;
            for ij in 0..r * r {
                let slot = &mut p[ij * r + k];
                if !seen[k] {
                    *slot = local[ij];
                } else if *slot != local[ij] {
                    return Err(Error::Consistency(format!(
                        "intersection number p_{{{},{}}}^{k} depends on the pair ({x}, {y})",
                        ij / r,
                        ij % r
                    )));
                }
            }
            seen[k] = true;
        }
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(Error::Consistency(format!("relation {k} has no pair in the base rows")));
    }
    Ok(p)
}

impl SchemeDescriptor {
    /// Builds and verifies a scheme, counting intersection numbers over all
    /// pairs of points.
    pub fn new(points: usize, relation: Vec<u16>, basis: IdempotentBasis) -> Result<Self> {
        let base: Vec<usize> = (0..points).collect();
        Self::build(points, relation, basis, &base)
    }

    /// As [`SchemeDescriptor::new`], but counts only from the given rows;
    /// sufficient when the automorphism group is transitive on points.
    pub fn with_base_points(points: usize, relation: Vec<u16>, basis: IdempotentBasis, base: &[usize]) -> Result<Self> {
        Self::build(points, relation, basis, base)
    }

    fn build(n: usize, relation: Vec<u16>, basis: IdempotentBasis, base: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroParameter);
        }
        if relation.len() != n * n {
            return Err(Error::DimensionMismatch(format!("{} relation entries for {n} points", relation.len())));
        }
        let r = relation.iter().copied().max().unwrap_or(0) as usize + 1;

        // (A1) relation 0 is exactly the diagonal
        for x in 0..n {
            for y in 0..n {
                if (relation[x * n + y] == 0) != (x == y) {
                    return Err(Error::Consistency(format!("relation 0 is not the diagonal at ({x}, {y})")));
                }
            }
        }
        // (A2) every index in 0..r is used; the matrices then partition J
        let mut valencies = vec![0usize; r];
        for &l in &relation[..n] {
            valencies[l as usize] += 1;
        }
        if let Some(l) = valencies.iter().position(|&v| v == 0) {
            return Err(Error::Consistency(format!("relation {l} is empty")));
        }
        // (A3) transposes
        let mut transpose = vec![usize::MAX; r];
        for x in 0..n {
            for y in 0..n {
                let (l, t) = (relation[x * n + y] as usize, relation[y * n + x] as usize);
                if transpose[l] == usize::MAX {
                    transpose[l] = t;
                } else if transpose[l] != t {
                    return Err(Error::Consistency(format!("transpose of relation {l} is not a relation")));
                }
            }
        }
        // (A4) intersection numbers, (A5) commutativity
        let intersection = count_intersections(n, r, &relation, base)?;
        for i in 0..r {
            if intersection[(i * r + transpose[i]) * r] as usize != valencies[i] {
                return Err(Error::Consistency(format!("relation {i} is not regular")));
            }
            for j in 0..r {
                for k in 0..r {
                    if intersection[(i * r + j) * r + k] != intersection[(j * r + i) * r + k] {
                        return Err(Error::Consistency(format!("scheme is not commutative at ({i}, {j}, {k})")));
                    }
                }
            }
        }

        let mut s = SchemeDescriptor {
            points: n,
            relation,
            valencies,
            transpose,
            intersection,
            basis,
            ranks: Vec::new(),
            dual: Vec::new(),
            krein: OnceLock::new(),
        };
        s.check_idempotents()?;
        Ok(s)
    }

    /// Idempotent identities in coefficient space: `E_0 = J/n`, Hermitian,
    /// integral ranks, `Σ E_j = I`, and `E_i E_j = δ_{ij} E_i`.
    fn check_idempotents(&mut self) -> Result<()> {
        let (n, r) = (self.points, self.class_count());
        let IdempotentBasis { den, coeffs } = &self.basis;
        let den = *den;
        if den <= 0 {
            return Err(Error::InvalidInput("idempotent denominator must be positive".into()));
        }
        if coeffs.len() != r || coeffs.iter().any(|c| c.len() != r) {
            return Err(Error::DimensionMismatch(format!("need {r} idempotents with {r} coefficients each")));
        }
        if coeffs[0].iter().any(|c| *c * n as i64 != GaussInt::new(den, 0)) {
            return Err(Error::Consistency("E_0 is not J/n".into()));
        }
        for l in 0..r {
            let total: GaussInt = coeffs.iter().map(|c| c[l]).sum();
            let want = if l == 0 { den } else { 0 };
            if total != GaussInt::new(want, 0) {
                return Err(Error::Consistency("idempotents do not sum to I".into()));
            }
        }
        let mut ranks = Vec::with_capacity(r);
        for (j, c) in coeffs.iter().enumerate() {
            if (0..r).any(|l| c[self.transpose[l]] != c[l].conj()) {
                return Err(Error::Consistency(format!("E_{j} is not Hermitian")));
            }
            let t = c[0] * n as i64;
            if t.im != 0 || t.re <= 0 || t.re % den != 0 {
                return Err(Error::Consistency(format!("E_{j} has non-integral rank")));
            }
            ranks.push((t.re / den) as u64);
        }

        // M_j[a][c] = Σ_b e_{j,b} p_{a,b}^c, then (E_i E_j)_c = Σ_a e_{i,a} M_j[a][c]
        let p = &self.intersection;
        let den_w = den as i128;
        for j in 0..r {
            let mut m = vec![Wide::zero(); r * r];
            for a in 0..r {
                for b in 0..r {
                    let e = widen(coeffs[j][b]);
                    if e.is_zero() {
                        continue;
                    }
                    for c in 0..r {
                        let pv = p[(a * r + b) * r + c];
                        if pv != 0 {
                            m[a * r + c] += e * pv as i128;
                        }
                    }
                }
            }
            for (i, ci) in coeffs.iter().enumerate() {
                for c in 0..r {
                    let mut acc = Wide::zero();
                    for (a, &cia) in ci.iter().enumerate() {
                        acc += widen(cia) * m[a * r + c];
                    }
                    let want = if i == j { widen(ci[c]) * den_w } else { Wide::zero() };
                    if acc != want {
                        return Err(Error::Consistency(format!(
                            "E_{i} E_{j} is not {}",
                            if i == j { "E_i" } else { "0" }
                        )));
                    }
                }
            }
        }

        let dual = (0..r)
            .map(|j| {
                let conj: Vec<GaussInt> = coeffs[j].iter().map(|z| z.conj()).collect();
                coeffs
                    .iter()
                    .position(|c| *c == conj)
                    .ok_or_else(|| Error::Consistency(format!("conj(E_{j}) is not an idempotent")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.ranks = ranks;
        self.dual = dual;
        Ok(())
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Number of relations, equal to the number of idempotents (`d + 1`).
    pub fn class_count(&self) -> usize {
        self.valencies.len()
    }

    pub fn valencies(&self) -> &[usize] {
        &self.valencies
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    /// `ĵ` with `E_ĵ = conj(E_j)`.
    pub fn dual_map(&self) -> &[usize] {
        &self.dual
    }

    pub fn transpose_map(&self) -> &[usize] {
        &self.transpose
    }

    pub fn basis(&self) -> &IdempotentBasis {
        &self.basis
    }

    #[inline]
    pub fn relation(&self, x: usize, y: usize) -> usize {
        self.relation[x * self.points + y] as usize
    }

    #[inline]
    pub fn intersection_number(&self, i: usize, j: usize, k: usize) -> u32 {
        let r = self.class_count();
        self.intersection[(i * r + j) * r + k]
    }

    pub fn idempotent_coefficients(&self, j: usize) -> Vec<GaussRational> {
        let d = self.basis.den;
        self.basis.coeffs[j].iter().map(|z| Complex::new(Rational::new(z.re, d), Rational::new(z.im, d))).collect()
    }

    fn materialize(&self, coeffs: &[GaussInt], den: i64) -> Result<GaussianRationalMatrix> {
        let num = self.relation.iter().map(|&l| coeffs[l as usize]).collect();
        GaussianRationalMatrix::from_numerators(self.points, self.points, num, den)
    }

    pub fn adjacency_matrix(&self, l: usize) -> Result<GaussianRationalMatrix> {
        if l >= self.class_count() {
            return Err(Error::IndexOutOfRange(l));
        }
        let mut c = vec![GaussInt::zero(); self.class_count()];
        c[l] = GaussInt::new(1, 0);
        self.materialize(&c, 1)
    }

    pub fn idempotent_matrix(&self, j: usize) -> Result<GaussianRationalMatrix> {
        if j >= self.class_count() {
            return Err(Error::IndexOutOfRange(j));
        }
        self.materialize(&self.basis.coeffs[j], self.basis.den)
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        if let Some(&bad) = subset.iter().find(|&&j| j >= self.class_count()) {
            return Err(Error::IndexOutOfRange(bad));
        }
        Ok(())
    }

    fn gram_numerators(&self, subset: &[usize]) -> Vec<GaussInt> {
        (0..self.class_count()).map(|l| subset.iter().map(|&j| self.basis.coeffs[j][l]).sum()).collect()
    }

    /// Coefficients of `𝒢_D = Σ_{j∈D} E_j` in the adjacency basis.
    pub fn gram_coefficients(&self, subset: &[usize]) -> Result<Vec<GaussRational>> {
        self.check_subset(subset)?;
        let d = self.basis.den;
        Ok(self
            .gram_numerators(subset)
            .into_iter()
            .map(|z| Complex::new(Rational::new(z.re, d), Rational::new(z.im, d)))
            .collect())
    }

    /// Dense `𝒢_D`.
    pub fn gram_projector(&self, subset: &[usize]) -> Result<GaussianRationalMatrix> {
        self.check_subset(subset)?;
        self.materialize(&self.gram_numerators(subset), self.basis.den)
    }

    pub fn subset_rank(&self, subset: &[usize]) -> u64 {
        subset.iter().map(|&j| self.ranks[j]).sum()
    }

    /// Recounts the intersection numbers over every pair of points.
    pub fn verify_axioms_exhaustive(&self) -> Result<()> {
        let base: Vec<usize> = (0..self.points).collect();
        let r = self.class_count();
        let p = count_intersections(self.points, r, &self.relation, &base)?;
        if p != self.intersection {
            return Err(Error::Consistency("intersection numbers differ between base rows and full count".into()));
        }
        Ok(())
    }

    /// Matrix-level check of every axiom and idempotent identity.
    pub fn verify_dense(&self) -> Result<()> {
        const LIMIT: usize = 256;
        if self.points > LIMIT {
            return Err(Error::Unsupported(format!("dense verification is limited to {LIMIT} points")));
        }
        let (n, r) = (self.points, self.class_count());
        let adj = (0..r).map(|l| self.adjacency_matrix(l)).collect::<Result<Vec<_>>>()?;
        let idem = (0..r).map(|j| self.idempotent_matrix(j)).collect::<Result<Vec<_>>>()?;
        if !adj[0].is_identity() {
            return Err(Error::Consistency("A_0 is not I".into()));
        }
        let mut total = GaussianRationalMatrix::zeros(n, n);
        for a in &adj {
            total = total.add(a)?;
        }
        let ones = GaussianRationalMatrix::from_numerators(n, n, vec![GaussInt::new(1, 0); n * n], 1)?;
        if total != ones {
            return Err(Error::Consistency("adjacency matrices do not sum to J".into()));
        }
        for i in 0..r {
            if adj[i].transpose() != adj[self.transpose[i]] {
                return Err(Error::Consistency(format!("A_{i}^T is not an adjacency matrix")));
            }
            for j in 0..r {
                let prod = adj[i].matmul(&adj[j])?;
                let mut expand = GaussianRationalMatrix::zeros(n, n);
                for (k, a) in adj.iter().enumerate() {
                    let p = self.intersection_number(i, j, k);
                    if p != 0 {
                        expand = expand.add(&a.scale(Rational::from_integer(p as i64)))?;
                    }
                }
                if prod != expand {
                    return Err(Error::Consistency(format!("A_{i} A_{j} does not expand by intersection numbers")));
                }
            }
        }
        if idem[0] != ones.scale(Rational::new(1, n as i64)) {
            return Err(Error::Consistency("E_0 is not J/n".into()));
        }
        let mut total = GaussianRationalMatrix::zeros(n, n);
        for (i, e) in idem.iter().enumerate() {
            total = total.add(e)?;
            if !e.is_hermitian() {
                return Err(Error::Consistency(format!("E_{i} is not Hermitian")));
            }
            if e.trace() != Complex::new(Rational::from_integer(self.ranks[i] as i64), Rational::zero()) {
                return Err(Error::Consistency(format!("trace of E_{i} is not its rank")));
            }
            for (j, f) in idem.iter().enumerate() {
                let prod = e.matmul(f)?;
                let ok = if i == j { prod == *e } else { prod == GaussianRationalMatrix::zeros(n, n) };
                if !ok {
                    return Err(Error::Consistency(format!("E_{i} E_{j} fails orthogonality")));
                }
            }
        }
        if !total.is_identity() {
            return Err(Error::Consistency("idempotents do not sum to I".into()));
        }
        Ok(())
    }

    /// Krein parameters through the eigenvalues `P_{l,k} = n k_l e_{k,l'} / m_k`:
    /// `q_{i,j}^k = n Σ_l e_{i,l} e_{j,l} P_{l,k}`. Computed once and cached;
    /// fails if any parameter is negative, non-real, or asymmetric in `(i, j)`.
    pub fn krein_parameters(&self) -> Result<&KreinTensor> {
        if let Some(t) = self.krein.get() {
            return Ok(t);
        }
        let (n, r) = (self.points as i128, self.class_count());
        let c = &self.basis.coeffs;
        let den3 = (self.basis.den as i128).pow(3);
        let mut q = Vec::with_capacity(r * r * r);
        for i in 0..r {
            for j in 0..r {
                let ij: Vec<Wide> =
                    (0..r).map(|l| widen(c[i][l]) * widen(c[j][l]) * self.valencies[l] as i128).collect();
                for (k, ck) in c.iter().enumerate() {
                    let mut acc = Wide::zero();
                    for l in 0..r {
                        acc += ij[l] * widen(ck[self.transpose[l]]);
                    }
                    if acc.im != 0 {
                        return Err(Error::Consistency(format!("q_{{{i},{j}}}^{k} is not real")));
                    }
                    let v = ratio_from_wide(n * n * acc.re, self.ranks[k] as i128 * den3)?;
                    if v.is_negative() {
                        return Err(Error::Consistency(format!("Krein condition fails: q_{{{i},{j}}}^{k} = {v}")));
                    }
                    q.push(v);
                }
            }
        }
        let t = KreinTensor { r, q };
        for i in 0..r {
            for j in 0..i {
                for k in 0..r {
                    if t.get(i, j, k) != t.get(j, i, k) {
                        return Err(Error::Consistency(format!("q_{{{i},{j}}}^{k} is not symmetric")));
                    }
                }
            }
        }
        Ok(self.krein.get_or_init(|| t))
    }

    /// `b_k = Σ_{i,j∈D} q_{i,ĵ}^k` for every `k`.
    pub fn b_values(&self, subset: &[usize]) -> Result<Vec<Rational>> {
        self.check_subset(subset)?;
        let q = self.krein_parameters()?;
        Ok((0..self.class_count())
            .map(|k| {
                subset
                    .iter()
                    .flat_map(|&i| subset.iter().map(move |&j| (i, j)))
                    .map(|(i, j)| q.get(i, self.dual[j], k))
                    .sum()
            })
            .collect())
    }

    /// Tests `D` by constant off-diagonal modulus of `𝒢_D` and, independently,
    /// by equality of `b_1, …, b_d`; the two must agree.
    pub fn hyperdiff_check(&self, subset: &[usize]) -> Result<HyperdiffReport> {
        let g = self.gram_coefficients(subset)?;
        let b = self.b_values(subset)?;
        let r = self.class_count();
        let off: Vec<Rational> = g[1..].iter().map(|z| z.re * z.re + z.im * z.im).collect();
        let flat = off.windows(2).all(|w| w[0] == w[1]);
        let equal_b = b[1..].windows(2).all(|w| w[0] == w[1]);
        if flat != equal_b {
            return Err(Error::Consistency(format!(
                "hyperdifference criteria disagree for {subset:?}: flat modulus {flat}, equal b {equal_b}"
            )));
        }
        let m = self.subset_rank(subset);
        let mut report = HyperdiffReport {
            subset: subset.to_vec(),
            is_hyperdiff: flat,
            rank: m,
            b,
            c1: None,
            c2: None,
            off_diag_modulus_squared: None,
        };
        if flat && r > 1 {
            let n = self.points as i64;
            let m = m as i64;
            let o = off[0];
            let c1 = o * n;
            let c2 = Rational::new(m * m, n * n) - o;
            if c1 != Rational::new(m * (n - m), n * (n - 1)) {
                return Err(Error::Consistency(format!("C1 = {c1} disagrees with m(n-m)/(n(n-1))")));
            }
            let lambda = Rational::new(m * (m - 1), n - 1);
            if c2 * n != lambda || report.b[1] != lambda {
                return Err(Error::Consistency(format!("b_k = {} disagrees with m(m-1)/(n-1)", report.b[1])));
            }
            report.c1 = Some(c1);
            report.c2 = Some(c2);
            report.off_diag_modulus_squared = Some(o);
        }
        Ok(report)
    }

    /// Dense check of `𝒢_D ∘ conj(𝒢_D) = C_1 E_0 + C_2 I` for a hyperdifference set.
    pub fn hadamard_identity_holds(&self, report: &HyperdiffReport) -> Result<bool> {
        let (Some(c1), Some(c2)) = (report.c1, report.c2) else {
            return Ok(false);
        };
        let g = self.gram_projector(&report.subset)?;
        let lhs = g.hadamard(&g.conj())?;
        let rhs = self.idempotent_matrix(0)?.scale(c1).add(&GaussianRationalMatrix::identity(self.points).scale(c2))?;
        Ok(lhs == rhs)
    }

    pub fn summary(&self, subset: &[usize]) -> Result<SchemeSummary> {
        Ok(SchemeSummary {
            points: self.points,
            valencies: self.valencies.clone(),
            ranks: self.ranks.clone(),
            b: self.b_values(subset)?,
        })
    }
}

/// The group scheme: `(g, h)` lies in relation `i` when `h g^-1 ∈ C_i`, and
/// `E_χ` has entries `(d_χ / |G|) χ(g^-1 h)`. Idempotents follow the order
/// of `table.characters`.
pub fn group_scheme(group: &GroupContext, table: &CharacterTable) -> Result<SchemeDescriptor> {
    let n = group.order();
    let r = group.conjugacy_classes().len();
    if table.classes.len() != r || table.characters.len() != r {
        return Err(Error::DimensionMismatch("character table does not match the group".into()));
    }
    if r > u16::MAX as usize {
        return Err(Error::Unsupported("too many classes".into()));
    }
    let elems: Vec<_> = group.elements().collect();
    let inverses: Vec<_> = elems.iter().map(|&g| group.inv(g)).collect();
    let mut relation = vec![0u16; n * n];
    for (gi, row) in relation.chunks_mut(n).enumerate() {
        for (hi, slot) in row.iter_mut().enumerate() {
            *slot = group.class_index(group.mul(elems[hi], inverses[gi])) as u16;
        }
    }
    let coeffs = table
        .characters
        .iter()
        .map(|ch| {
            ch.values
                .iter()
                .map(|v| {
                    v.to_gauss_int()
                        .map(|z| z * ch.degree as i64)
                        .ok_or_else(|| Error::InvalidInput("character value is not a Gaussian integer".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let basis = IdempotentBasis { den: n as i64, coeffs };
    // right translations act transitively, so row 0 determines every p_ij^k
    SchemeDescriptor::with_base_points(n, relation, basis, &[0])
}

/// `q_{η,τ}^χ = (d_η d_τ / d_χ) (1/|G|) Σ_g η(g) τ(g) conj χ(g)`.
pub fn krein_from_characters(table: &CharacterTable) -> Result<KreinTensor> {
    let r = table.characters.len();
    let sizes = table.class_sizes();
    let vals = table
        .characters
        .iter()
        .map(|ch| {
            ch.values
                .iter()
                .map(|v| v.to_gauss_int().map(widen).ok_or_else(|| Error::InvalidInput("non-integral value".into())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let order = table.group_order as i128;
    let mut q = Vec::with_capacity(r * r * r);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let mut acc = Wide::zero();
                for (c, &size) in sizes.iter().enumerate() {
                    acc += vals[i][c] * vals[j][c] * vals[k][c].conj() * size as i128;
                }
                if acc.im != 0 {
                    return Err(Error::Consistency("character triple sum is not real".into()));
                }
                let d = |x: usize| table.characters[x].degree as i128;
                q.push(ratio_from_wide(d(i) * d(j) * acc.re, d(k) * order)?);
            }
        }
    }
    Ok(KreinTensor { r, q })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SrgParameters {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl SrgParameters {
    pub fn complement(&self) -> SrgParameters {
        let SrgParameters { v, k, lambda, mu } = *self;
        SrgParameters { v, k: v - k - 1, lambda: v + mu - 2 - 2 * k, mu: v + lambda - 2 * k }
    }
}

#[derive(Debug)]
pub struct SrgScheme {
    pub params: SrgParameters,
    pub lambda_plus: i64,
    pub lambda_minus: i64,
    pub scheme: SchemeDescriptor,
    /// `{1}` when `2k - v = 2λ_-`, `{2}` when `2k - v = 2λ_+`.
    pub nontrivial: Option<usize>,
    /// Report for the nontrivial set if there is one, otherwise for `{1}`.
    pub report: HyperdiffReport,
}

fn isqrt(x: i64) -> Option<i64> {
    if x < 0 {
        return None;
    }
    let s = (x as f64).sqrt() as i64;
    (s.saturating_sub(1)..=s + 1).find(|t| t * t == x)
}

/// Restricted eigenvalues `λ_± = ((λ-μ) ± √((λ-μ)^2 + 4(k-μ))) / 2`.
pub fn srg_eigenvalues(p: &SrgParameters) -> Result<(i64, i64)> {
    let (k, l, m) = (p.k as i64, p.lambda as i64, p.mu as i64);
    let disc = (l - m) * (l - m) + 4 * (k - m);
    let root = isqrt(disc).ok_or_else(|| {
        Error::Unsupported(format!(
            "SRG({},{},{},{}) has irrational eigenvalues (conference graph)",
            p.v, p.k, p.lambda, p.mu
        ))
    })?;
    if (l - m + root) % 2 != 0 {
        return Err(Error::Unsupported("SRG eigenvalues are not integers".into()));
    }
    Ok(((l - m + root) / 2, (l - m - root) / 2))
}

fn check_adjacency(p: &SrgParameters, adj: &[bool]) -> Result<()> {
    let v = p.v;
    if adj.len() != v * v {
        return Err(Error::DimensionMismatch(format!("adjacency has {} entries for {v} vertices", adj.len())));
    }
    let mismatch = || Error::InvalidInput(format!("adjacency is not SRG({},{},{},{})", p.v, p.k, p.lambda, p.mu));
    for x in 0..v {
        if adj[x * v + x] || (0..v).filter(|&y| adj[x * v + y]).count() != p.k {
            return Err(mismatch());
        }
        for y in 0..v {
            if adj[x * v + y] != adj[y * v + x] {
                return Err(mismatch());
            }
            if x == y {
                continue;
            }
            let common = (0..v).filter(|&z| adj[x * v + z] && adj[z * v + y]).count();
            if common != if adj[x * v + y] { p.lambda } else { p.mu } {
                return Err(mismatch());
            }
        }
    }
    Ok(())
}

/// The 2-class scheme `{I, A, J - I - A}` of a strongly regular graph, with
/// `E_1` on the `λ_+` eigenspace and `E_2` on the `λ_-` eigenspace.
pub fn srg_scheme(params: SrgParameters, adjacency: &[bool]) -> Result<SrgScheme> {
    let SrgParameters { v, k, .. } = params;
    if v < 3 || k == 0 || k + 1 >= v {
        return Err(Error::InvalidInput("SRG must be neither empty nor complete".into()));
    }
    check_adjacency(&params, adjacency)?;
    let (lp, lm) = srg_eigenvalues(&params)?;
    let (vi, ki) = (v as i64, k as i64);
    let spread = lp - lm;
    let den = vi * spread;
    let e0 = vec![spread; 3];
    let e1 = vec![lm - ki - lm * vi, vi - ki + lm, lm - ki];
    let e2: Vec<i64> = (0..3).map(|l| if l == 0 { den } else { 0 } - e0[l] - e1[l]).collect();
    let to_gauss = |c: Vec<i64>| c.into_iter().map(|x| GaussInt::new(x, 0)).collect();
    let basis = IdempotentBasis { den, coeffs: vec![to_gauss(e0), to_gauss(e1), to_gauss(e2)] };
    let relation = adjacency
        .iter()
        .enumerate()
        .map(|(p, &a)| {
            if p / v == p % v {
                0
            } else if a {
                1
            } else {
                2
            }
        })
        .collect();
    let scheme = SchemeDescriptor::new(v, relation, basis)?;
    let nontrivial = if 2 * ki - vi == 2 * lm {
        Some(1)
    } else if 2 * ki - vi == 2 * lp {
        Some(2)
    } else {
        None
    };
    let report = scheme.hyperdiff_check(&[nontrivial.unwrap_or(1)])?;
    if report.is_hyperdiff != nontrivial.is_some() {
        return Err(Error::Consistency("eigenvalue criterion disagrees with the hyperdifference test".into()));
    }
    Ok(SrgScheme { params, lambda_plus: lp, lambda_minus: lm, scheme, nontrivial, report })
}

/// Rook's graph `K_m × K_m`: SRG(m², 2(m-1), m-2, 2).
pub fn lattice_graph(m: usize) -> (SrgParameters, Vec<bool>) {
    let v = m * m;
    let adj = (0..v * v)
        .map(|p| {
            let (a, b) = (p / v, p % v);
            a != b && (a / m == b / m || a % m == b % m)
        })
        .collect();
    (SrgParameters { v, k: 2 * (m - 1), lambda: m - 2, mu: 2 }, adj)
}

/// Line graph of `K_m`: SRG(m(m-1)/2, 2(m-2), m-2, 4).
pub fn triangular_graph(m: usize) -> (SrgParameters, Vec<bool>) {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let v = pairs.len();
    let adj = (0..v * v)
        .map(|p| {
            let (x, y) = (pairs[p / v], pairs[p % v]);
            x != y && (x.0 == y.0 || x.0 == y.1 || x.1 == y.0 || x.1 == y.1)
        })
        .collect();
    (SrgParameters { v, k: 2 * (m - 2), lambda: m - 2, mu: 4 }, adj)
}

/// Paley graph on a prime `q ≡ 1 (mod 4)`.
pub fn paley_graph(q: usize) -> Result<(SrgParameters, Vec<bool>)> {
    if q < 5 || q % 4 != 1 || !(2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d)) {
        return Err(Error::InvalidInput(format!("Paley graph needs a prime q ≡ 1 mod 4, got {q}")));
    }
    let mut square = vec![false; q];
    for x in 1..q {
        square[x * x % q] = true;
    }
    let adj = (0..q * q).map(|p| square[(p / q + q - p % q) % q]).collect();
    Ok((SrgParameters { v: q, k: (q - 1) / 2, lambda: (q - 5) / 4, mu: (q - 1) / 4 }, adj))
}

pub fn complement_graph(params: &SrgParameters, adj: &[bool]) -> (SrgParameters, Vec<bool>) {
    let v = params.v;
    let comp = adj.iter().enumerate().map(|(p, &a)| p / v != p % v && !a).collect();
    (params.complement(), comp)
}

/// A built-in graph (lattice, triangular, Paley, or a complement) with the
/// requested parameters.
pub fn builtin_srg(params: SrgParameters) -> Result<Vec<bool>> {
    let v = params.v;
    let mut candidates = Vec::new();
    if let Some(m) = (2..=v).take_while(|m| m * m <= v).find(|m| m * m == v) {
        candidates.push(lattice_graph(m));
    }
    if let Some(m) = (3..=v + 1).take_while(|m| m * (m - 1) / 2 <= v).find(|m| m * (m - 1) / 2 == v) {
        candidates.push(triangular_graph(m));
    }
    if let Ok(g) = paley_graph(v) {
        candidates.push(g);
    }
    for (p, adj) in candidates {
        if p == params {
            return Ok(adj);
        }
        let (cp, cadj) = complement_graph(&p, &adj);
        if cp == params {
            return Ok(cadj);
        }
    }
    Err(Error::Unsupported(format!(
        "no built-in graph with parameters ({},{},{},{})",
        params.v, params.k, params.lambda, params.mu
    )))
}
