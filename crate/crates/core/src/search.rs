//! Parameter search for constant-degree hyperdifference sets.
//!
//! A tuple `(n, k, l, m)` describes `k` characters of degree `l` in a group of
//! order `n` with `m = k l^2`. Enumeration keeps tuples with `l ≥ 2`, `l | n`,
//! `m < n` and `(n - 1) | m(m - 1)`; the remaining filters need group data.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Roots;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bgroup::GroupContext;
use crate::chartab::{full_table, CharacterTable};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::gf2n::FieldContext;
use crate::heis::RepContext;

/// Known `(n, k, l, m)` rows that survive every filter of the search.
pub const SURVIVING_TUPLES: [(u64, u64, u64, u64); 10] = [
    (64, 7, 2, 28),
    (256, 30, 2, 120),
    (256, 34, 2, 136),
    (320, 22, 2, 88),
    (320, 58, 2, 232),
    (576, 69, 2, 276),
    (576, 75, 2, 300),
    (640, 18, 2, 72),
    (896, 45, 2, 180),
    (896, 179, 2, 716),
];

pub const VERDICT_INTEGRALITY: &str = "integrality";
pub const VERDICT_CLASSES: &str = "classes";
pub const VERDICT_CHARS: &str = "chars";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchTuple {
    pub n: u64,
    pub k: u64,
    pub l: u64,
    pub m: u64,
    /// `m(m - 1)/(n - 1)`.
    pub lambda: u64,
    /// Filter name to outcome; absent when the data is unavailable.
    pub verdicts: BTreeMap<String, bool>,
}

impl SearchTuple {
    pub fn params(&self) -> (u64, u64, u64, u64) {
        (self.n, self.k, self.l, self.m)
    }

    fn verdict_cell(&self, name: &str) -> &'static str {
        match self.verdicts.get(name) {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_order: u64,
    /// Keep only orders admitting a nonabelian group.
    pub nonabelian_orders: bool,
    pub min_k: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_order: 1023, nonabelian_orders: false, min_k: 1 }
    }
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Whether some group of order `n` is nonabelian. Every group of order `n`
/// is abelian exactly when `n` is cube-free and `p^i ≢ 1 (mod q)` for all
/// prime powers `p^i | n` and primes `q | n`.
pub fn admits_nonabelian_group(n: u64) -> bool {
    let f = prime_factors(n);
    if f.iter().any(|&(_, e)| e >= 3) {
        return true;
    }
    f.iter().any(|&(p, e)| {
        (1..=e).any(|i| {
            let pi = p.pow(i);
            f.iter().any(|&(q, _)| q != p && pi % q == 1)
        })
    })
}

/// All tuples with `n ≤ max_order`, sorted by `(n, l, k)`.
pub fn enumerate_tuples(opts: &SearchOptions) -> Vec<SearchTuple> {
    let mut out: Vec<SearchTuple> = (2..=opts.max_order)
        .into_par_iter()
        .filter(|&n| !opts.nonabelian_orders || admits_nonabelian_group(n))
        .flat_map_iter(|n| {
            (2..n)
                .filter(move |l| n % l == 0 && l * l < n)
                .flat_map(move |l| {
                    (opts.min_k.max(1)..)
                        .map(move |k| (k, k * l * l))
                        .take_while(move |&(_, m)| m < n)
                        .filter(move |&(_, m)| integral(n, m))
                        .map(move |(k, m)| SearchTuple {
                            n,
                            k,
                            l,
                            m,
                            lambda: m * (m - 1) / (n - 1),
                            verdicts: BTreeMap::from([(VERDICT_INTEGRALITY.to_string(), true)]),
                        })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by_key(|t| (t.n, t.l, t.k));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassFilterOutcome {
    pub pass: bool,
    /// Nonidentity classes (by position) violating the size bound.
    pub failing_classes: Vec<usize>,
    /// No class fills a whole coset of the commutator subgroup.
    pub classes_below_commutator: bool,
    /// At least half of the characters are nonlinear.
    pub half_nonlinear: bool,
}

/// The class-size bound `|G|/|C_i| ≥ |G:[G,G]| + (m/(l^2 k))(|G| - m)/(|G| - 1)`
/// for every class but the first, which must be the identity.
pub fn conjugacy_size_filter(
    tuple: &SearchTuple,
    class_sizes: &[usize],
    commutator_index: u64,
) -> Result<ClassFilterOutcome> {
    let n = tuple.n as i64;
    if class_sizes.iter().sum::<usize>() as i64 != n {
        return Err(Error::InvalidInput(format!("class sizes do not sum to {n}")));
    }
    if class_sizes.first() != Some(&1) {
        return Err(Error::InvalidInput("first class must be the identity".into()));
    }
    if commutator_index == 0 || !tuple.n.is_multiple_of(commutator_index) {
        return Err(Error::InvalidInput("commutator index must divide the group order".into()));
    }
    let (k, l, m) = (tuple.k as i64, tuple.l as i64, tuple.m as i64);
    let bound =
        Rational::from_integer(commutator_index as i64) + Rational::new(m, l * l * k) * Rational::new(n - m, n - 1);
    let failing_classes: Vec<usize> = class_sizes
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &s)| Rational::new(n, s as i64) < bound)
        .map(|(i, _)| i)
        .collect();
    let commutator_order = tuple.n / commutator_index;
    let classes_below_commutator = class_sizes.iter().all(|&s| (s as u64) < commutator_order);
    let half_nonlinear = class_sizes.len() as u64 >= 2 * commutator_index;
    Ok(ClassFilterOutcome {
        pass: failing_classes.is_empty() && classes_below_commutator && half_nonlinear,
        failing_classes,
        classes_below_commutator,
        half_nonlinear,
    })
}

/// `Σ_f c_f √f` with `f` squarefree and `c_f > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RadicalSum {
    terms: BTreeMap<u64, Rational>,
}

fn squarefree_split(x: u64) -> (u64, u64) {
    let mut s = 1;
    let mut f = 1;
    for (p, e) in prime_factors(x) {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= p;
        }
    }
    (s, f)
}

impl RadicalSum {
    /// `√r` for a nonnegative rational `r`.
    pub fn sqrt_of(r: Rational) -> Result<Self> {
        let mut out = RadicalSum::default();
        out.add_sqrt(r)?;
        Ok(out)
    }

    pub fn add_sqrt(&mut self, r: Rational) -> Result<()> {
        if r < Rational::zero() {
            return Err(Error::InvalidInput("square root of a negative rational".into()));
        }
        if r.is_zero() {
            return Ok(());
        }
        // √(p/q) = √(pq)/q
        let (p, q) = (*r.numer() as u64, *r.denom() as u64);
        let (s, f) = squarefree_split(p * q);
        *self.terms.entry(f).or_insert_with(Rational::zero) += Rational::new(s as i64, q as i64);
        Ok(())
    }

    /// Rational bounds `lo ≤ value ≤ hi` with about `bits` bits of precision.
    fn bounds(&self, bits: u32) -> (Rational, Rational) {
        let scale = 1u128 << bits;
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (&f, &c) in &self.terms {
            let root = (f as u128 * scale * scale).sqrt();
            let exact = root * root == f as u128 * scale * scale;
            let d = scale as i64;
            lo += c * Rational::new(root as i64, d);
            hi += c * Rational::new(root as i64 + i64::from(!exact), d);
        }
        (lo, hi)
    }

    /// Exact three-way comparison. Single-radical sums compare by squares;
    /// otherwise the radicals are linearly independent, so bounds refine
    /// until they separate.
    pub fn compare(&self, other: &RadicalSum) -> Result<std::cmp::Ordering> {
        let single = |s: &RadicalSum| -> Option<(u64, Rational)> {
            match s.terms.len() {
                0 => Some((1, Rational::zero())),
                1 => s.terms.iter().next().map(|(&f, &c)| (f, c)),
                _ => None,
            }
        };
        if let (Some((f1, c1)), Some((f2, c2))) = (single(self), single(other)) {
            return Ok((c1 * c1 * f1 as i64).cmp(&(c2 * c2 * f2 as i64)));
        }
        for bits in [8u32, 16, 24, 31] {
            let (a_lo, a_hi) = self.bounds(bits);
            let (b_lo, b_hi) = other.bounds(bits);
            if a_lo > b_hi {
                return Ok(std::cmp::Ordering::Greater);
            }
            if a_hi < b_lo {
                return Ok(std::cmp::Ordering::Less);
            }
        }
        Err(Error::Unsupported("radical comparison did not separate".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CharFilterOutcome {
    pub pass: bool,
    /// `|Irr_l| ≥ k`.
    pub enough_characters: bool,
    /// `Σ_{Irr_l} |χ(g)|^2 ≥ (n - m)/(n - 1)` at every `g ≠ 1`.
    pub squared_test: bool,
    /// `Σ_{Irr_l} |χ(g)| ≥ √(k(n - m)/(n - 1))` at every `g ≠ 1`.
    pub absolute_test: bool,
    /// Classes where the absolute test holds with equality.
    pub equality_classes: Vec<usize>,
}

/// The two character-sum tests over the degree-`l` characters. Class `0`
/// must be the identity.
pub fn character_sum_filter(tuple: &SearchTuple, table: &CharacterTable) -> Result<CharFilterOutcome> {
    if table.group_order != tuple.n {
        return Err(Error::InvalidInput(format!("table has order {}, tuple has n = {}", table.group_order, tuple.n)));
    }
    if table.class_sizes().first() != Some(&1) {
        return Err(Error::InvalidInput("first class must be the identity".into()));
    }
    let (n, k, m) = (tuple.n as i64, tuple.k as i64, tuple.m as i64);
    let irr_l = table.of_degree(tuple.l);
    let sq_bound = Rational::new(n - m, n - 1);
    let abs_bound = RadicalSum::sqrt_of(Rational::new(k * (n - m), n - 1))?;
    let mut squared_test = true;
    let mut absolute_test = true;
    let mut equality_classes = Vec::new();
    for c in 1..table.classes.len() {
        let norms: Vec<Rational> = irr_l.iter().map(|&i| table.characters[i].values[c].norm_sq()).collect();
        if norms.iter().sum::<Rational>() < sq_bound {
            squared_test = false;
        }
        let mut lhs = RadicalSum::default();
        for r in norms {
            lhs.add_sqrt(r)?;
        }
        match lhs.compare(&abs_bound)? {
            std::cmp::Ordering::Less => absolute_test = false,
            std::cmp::Ordering::Equal => equality_classes.push(c),
            std::cmp::Ordering::Greater => {}
        }
    }
    let enough_characters = irr_l.len() as u64 >= tuple.k;
    Ok(CharFilterOutcome {
        pass: enough_characters && squared_test && absolute_test,
        enough_characters,
        squared_test,
        absolute_test,
        equality_classes,
    })
}

/// Fills the class and character verdicts for tuples whose order is that of
/// a Suzuki 2-group `|G| = 2^(2n)` with `n` odd.
pub fn apply_builtin_groups(tuples: &mut [SearchTuple]) -> Result<()> {
    let mut cache: BTreeMap<u64, (Vec<usize>, u64, CharacterTable)> = BTreeMap::new();
    for t in tuples.iter_mut() {
        let Some(deg) = suzuki_degree(t.n) else { continue };
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(t.n) {
            let g = GroupContext::suzuki(FieldContext::new(deg)?)?;
            let table = full_table(&g, &RepContext::new(&g)?)?;
            let index = table.of_degree(1).len() as u64;
            e.insert((g.class_sizes(), index, table));
        }
        let (sizes, index, table) = &cache[&t.n];
        let classes = conjugacy_size_filter(t, sizes, *index)?;
        let chars = character_sum_filter(t, table)?;
        t.verdicts.insert(VERDICT_CLASSES.into(), classes.pass);
        t.verdicts.insert(VERDICT_CHARS.into(), chars.pass);
    }
    Ok(())
}

/// Largest Suzuki degree whose character table is cheap to build here.
const SUZUKI_DATA_MAX_DEGREE: u32 = 5;

fn suzuki_degree(order: u64) -> Option<u32> {
    if !order.is_power_of_two() {
        return None;
    }
    let e = order.trailing_zeros();
    (e.is_multiple_of(2) && (e / 2) % 2 == 1 && e / 2 >= 3 && e / 2 <= SUZUKI_DATA_MAX_DEGREE).then_some(e / 2)
}

/// `n,k,l,m,lambda,verdict_integrality,verdict_classes,verdict_chars`.
pub fn to_csv(tuples: &[SearchTuple]) -> String {
    let mut out = String::from("n,k,l,m,lambda,verdict_integrality,verdict_classes,verdict_chars\n");
    for t in tuples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            t.n,
            t.k,
            t.l,
            t.m,
            t.lambda,
            t.verdict_cell(VERDICT_INTEGRALITY),
            t.verdict_cell(VERDICT_CLASSES),
            t.verdict_cell(VERDICT_CHARS)
        );
    }
    out
}

/// Integrality condition `(n - 1) | m(m - 1)`.
pub fn integral(n: u64, m: u64) -> bool {
    n > 1 && (m * m.saturating_sub(1)).is_multiple_of(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::{CharKind, CharLabel, Character};
    use crate::exact::GaussianScaled;
    use crate::gf2n::FieldElement;

    fn tuple(n: u64, k: u64, l: u64) -> SearchTuple {
        let m = k * l * l;
        SearchTuple { n, k, l, m, lambda: m * (m - 1) / (n - 1), verdicts: BTreeMap::new() }
    }

    #[test]
    fn calibration_counts() {
        let all = enumerate_tuples(&SearchOptions::default());
        assert_eq!(all.len(), 238);
        let k2 = enumerate_tuples(&SearchOptions { min_k: 2, ..Default::default() });
        assert_eq!(k2.len(), 238);
        let nonab = enumerate_tuples(&SearchOptions { nonabelian_orders: true, ..Default::default() });
        assert_eq!(nonab.len(), 224);
        let params: Vec<_> = all.iter().map(SearchTuple::params).collect();
        for row in SURVIVING_TUPLES {
            assert!(params.contains(&row), "{row:?}");
        }
        assert!(params.contains(&(64, 9, 2, 36)));
    }

    #[test]
    fn small_orders() {
        assert!(enumerate_tuples(&SearchOptions { max_order: 2, ..Default::default() }).is_empty());
        let t = enumerate_tuples(&SearchOptions { max_order: 64, ..Default::default() });
        assert!(t.iter().any(|t| t.params() == (64, 7, 2, 28)));
        assert!(t.windows(2).all(|w| (w[0].n, w[0].l, w[0].k) < (w[1].n, w[1].l, w[1].k)));
    }

    #[test]
    fn nonabelian_orders() {
        let yes = [6, 8, 10, 12, 16, 20, 21, 27, 39, 55, 64];
        let no = [1, 2, 3, 4, 5, 9, 15, 25, 33, 35, 45, 49, 51, 65, 77];
        assert!(yes.iter().all(|&n| admits_nonabelian_group(n)));
        assert!(no.iter().all(|&n| !admits_nonabelian_group(n)));
    }

    #[test]
    fn class_filter() {
        let t = tuple(64, 7, 2);
        let mut sizes = vec![1usize; 8];
        sizes.extend(vec![4; 14]);
        let out = conjugacy_size_filter(&t, &sizes, 8).unwrap();
        assert!(out.pass);
        // a class as large as the commutator subgroup cannot pass
        let sizes = [1, 8, 7, 8, 8, 8, 8, 8, 8];
        let out = conjugacy_size_filter(&t, &sizes, 8).unwrap();
        assert!(!out.pass && !out.classes_below_commutator);
        assert!(conjugacy_size_filter(&t, &[1, 2, 3], 8).is_err());
    }

    #[test]
    fn radical_comparison() {
        use std::cmp::Ordering::*;
        let r = |x: i64, y: i64| RadicalSum::sqrt_of(Rational::new(x, y)).unwrap();
        assert_eq!(r(8, 1).compare(&r(2, 1)).unwrap(), Greater);
        let mut s = r(2, 1);
        s.add_sqrt(Rational::new(2, 1)).unwrap();
        assert_eq!(s.compare(&r(8, 1)).unwrap(), Equal);
        let mut t = r(2, 1);
        t.add_sqrt(Rational::from_integer(3)).unwrap();
        // √2 + √3 ≈ 3.146 vs √9.9 ≈ 3.146 4
        assert_eq!(t.compare(&r(99, 10)).unwrap(), Less);
        assert_eq!(t.compare(&r(98, 10)).unwrap(), Greater);
        assert_eq!(RadicalSum::default().compare(&r(1, 4)).unwrap(), Less);
    }

    #[test]
    fn character_filter_on_suzuki() {
        let g = GroupContext::suzuki(FieldContext::new(3).unwrap()).unwrap();
        let table = full_table(&g, &RepContext::new(&g).unwrap()).unwrap();
        let out = character_sum_filter(&tuple(64, 7, 2), &table).unwrap();
        assert!(out.pass, "{out:?}");
        assert!(character_sum_filter(&tuple(256, 30, 2), &table).is_err());
    }

    #[test]
    fn vanishing_characters_fail() {
        // S_3: degree-2 character vanishes on transpositions
        let v = |x: i64| GaussianScaled::new(x, 0, 0);
        let lab = |s| CharLabel { kind: CharKind::Linear, parameter: FieldElement(0), sign: s };
        let chars = vec![
            Character { label: lab(1), degree: 1, values: vec![v(1), v(1), v(1)] },
            Character { label: lab(-1), degree: 1, values: vec![v(1), v(-1), v(1)] },
            Character {
                label: CharLabel { kind: CharKind::Nonlinear, parameter: FieldElement(1), sign: 1 },
                degree: 2,
                values: vec![v(2), v(0), v(-1)],
            },
        ];
        let table = CharacterTable::from_parts(vec![1, 3, 2], chars, vec![2]).unwrap();
        let t = SearchTuple { n: 6, k: 1, l: 2, m: 4, lambda: 2, verdicts: BTreeMap::new() };
        let out = character_sum_filter(&t, &table).unwrap();
        assert!(!out.squared_test && !out.pass);
    }

    #[test]
    fn builtin_verdicts_and_csv() {
        let mut t = enumerate_tuples(&SearchOptions { max_order: 64, ..Default::default() });
        apply_builtin_groups(&mut t).unwrap();
        let row = t.iter().find(|t| t.params() == (64, 7, 2, 28)).unwrap();
        assert_eq!(row.verdicts.get(VERDICT_CLASSES), Some(&true));
        assert_eq!(row.verdicts.get(VERDICT_CHARS), Some(&true));
        let csv = to_csv(&t);
        assert!(csv.starts_with("n,k,l,m,lambda,verdict_integrality,verdict_classes,verdict_chars\n"));
        assert!(csv.contains("\n64,7,2,28,12,pass,pass,pass\n"));
        assert!(t.iter().filter(|t| t.n != 64).all(|t| !t.verdicts.contains_key(VERDICT_CLASSES)));
    }
}
