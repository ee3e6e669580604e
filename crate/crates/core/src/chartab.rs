//! Exact character table of the Suzuki 2-group.
//!
//! The `2^n` linear characters are `λ_c(x, y) = (-1)^tr(cx)`. For every
//! `γ ≠ 0` there are two nonlinear characters of degree `2^k`, supported on
//! `x ∈ {0, γ}`:
//!
//! ```text
//! χ(0, y) = 2^k (-1)^tr(γ^-3 y)        χ(γ, y) = ±i 2^k (-1)^tr(γ^-3 y)
//! ```
//!
//! The `+` family is the orbit of `χ_π` under `ψ` and forms the
//! hyperdifference set `D`; the `-` family holds the complex conjugates.

use num_traits::Zero;
use serde::Serialize;

use crate::bgroup::{ClassSummary, GroupContext, GroupElement};
use crate::error::{Error, Result};
use crate::exact::{GaussInt, GaussianScaled, Rational};
use crate::gf2n::FieldElement;
use crate::heis::RepContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CharKind {
    Linear,
    Nonlinear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharLabel {
    pub kind: CharKind,
    pub parameter: FieldElement,
    /// `+1` for `D` and for linear characters, `-1` for the conjugate family.
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Character {
    pub label: CharLabel,
    pub degree: u64,
    /// One value per conjugacy class.
    pub values: Vec<GaussianScaled>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    pub group_order: u64,
    pub classes: Vec<ClassSummary>,
    pub characters: Vec<Character>,
    /// Indices of the hyperdifference set `D` in `characters`.
    pub d_set: Vec<usize>,
}

fn sign_value(bit: u8, magnitude_log2: i32, times_i: bool) -> GaussianScaled {
    let s = if bit == 0 { 1 } else { -1 };
    if times_i {
        GaussianScaled::new(0, s, magnitude_log2)
    } else {
        GaussianScaled::new(s, 0, magnitude_log2)
    }
}

/// Closed-form value of a labelled character at an element.
pub fn evaluate(group: &GroupContext, label: &CharLabel, g: GroupElement) -> GaussianScaled {
    let f = group.field();
    match label.kind {
        CharKind::Linear => sign_value(f.trace(f.mul(label.parameter, g.x)), 0, false),
        CharKind::Nonlinear => {
            let k = f.half_degree() as i32;
            let gamma = label.parameter;
            let q = f.hyperplane_quotient(gamma, g.y).expect("γ is nonzero");
            if g.x.is_zero() {
                sign_value(q, k, false)
            } else if g.x == gamma {
                let v = sign_value(q, k, true);
                if label.sign < 0 {
                    v.neg()
                } else {
                    v
                }
            } else {
                GaussianScaled::ZERO
            }
        }
    }
}

fn tabulate(group: &GroupContext, label: CharLabel, degree: u64) -> Result<Character> {
    let mut values = Vec::with_capacity(group.conjugacy_classes().len());
    for class in group.conjugacy_classes() {
        let v = evaluate(group, &label, class.representative);
        if class.members.iter().any(|&m| evaluate(group, &label, m) != v) {
            return Err(Error::Consistency(format!("{label:?} is not a class function")));
        }
        values.push(v);
    }
    Ok(Character { label, degree, values })
}

/// `λ_c` for every `c`, ascending.
pub fn linear_characters(group: &GroupContext) -> Result<Vec<Character>> {
    group
        .field()
        .elements()
        .map(|c| tabulate(group, CharLabel { kind: CharKind::Linear, parameter: c, sign: 1 }, 1))
        .collect()
}

/// The `+` family (ascending `γ`) followed by the `-` family. The `+`
/// values are checked against traces of `π ∘ ψ_{γ^-1}` on every class.
pub fn nonlinear_characters(group: &GroupContext, rep: &RepContext<'_>) -> Result<Vec<Character>> {
    let f = group.field();
    let degree = 1u64 << f.half_degree();
    let mut out = Vec::with_capacity(2 * (f.order() as usize - 1));
    for sign in [1i8, -1] {
        for gamma in f.units() {
            let label = CharLabel { kind: CharKind::Nonlinear, parameter: gamma, sign };
            out.push(tabulate(group, label, degree)?);
        }
    }
    for (member, ch) in rep.rep_family().iter().zip(&out) {
        for (class, value) in group.conjugacy_classes().iter().zip(&ch.values) {
            let traced = GaussianScaled::from_gauss(member.character(class.representative));
            if traced != *value {
                return Err(Error::Consistency(format!(
                    "trace of π∘ψ at γ = {:#x} disagrees with the closed form",
                    member.gamma.0
                )));
            }
        }
    }
    Ok(out)
}

/// Assembles and verifies the full table.
pub fn full_table(group: &GroupContext, rep: &RepContext<'_>) -> Result<CharacterTable> {
    let mut characters = linear_characters(group)?;
    let first_nonlinear = characters.len();
    characters.extend(nonlinear_characters(group, rep)?);
    let d_count = group.field().order() as usize - 1;
    let table = CharacterTable {
        group_order: group.order() as u64,
        classes: group.class_summary(),
        characters,
        d_set: (first_nonlinear..first_nonlinear + d_count).collect(),
    };
    table.verify_orthogonality()?;
    Ok(table)
}

fn to_int(v: &GaussianScaled) -> Result<GaussInt> {
    v.to_gauss_int().ok_or_else(|| Error::InvalidInput("character values must be algebraic integers in Z[i]".into()))
}

impl CharacterTable {
    /// Table from raw data, e.g. for groups without a built-in construction.
    pub fn from_parts(class_sizes: Vec<usize>, characters: Vec<Character>, d_set: Vec<usize>) -> Result<Self> {
        let nclasses = class_sizes.len();
        if characters.iter().any(|c| c.values.len() != nclasses) {
            return Err(Error::DimensionMismatch("character length differs from class count".into()));
        }
        if let Some(&bad) = d_set.iter().find(|&&i| i >= characters.len()) {
            return Err(Error::IndexOutOfRange(bad));
        }
        let group_order = class_sizes.iter().sum::<usize>() as u64;
        let classes = class_sizes
            .into_iter()
            .enumerate()
            .map(|(i, size)| ClassSummary { representative: [i as u32, 0], size })
            .collect();
        Ok(CharacterTable { group_order, classes, characters, d_set })
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.size).collect()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.characters.iter().map(|c| c.degree).collect()
    }

    /// `Σ_classes |C| χ_a(C) conj χ_b(C)`, i.e. `|G|` times the inner product.
    pub fn row_pairing(&self, a: usize, b: usize) -> Result<GaussInt> {
        let (ca, cb) = (&self.characters[a], &self.characters[b]);
        let mut acc = GaussInt::zero();
        for (i, cls) in self.classes.iter().enumerate() {
            acc += to_int(&ca.values[i])? * to_int(&cb.values[i])?.conj() * cls.size as i64;
        }
        Ok(acc)
    }

    /// `Σ_χ χ(C_a) conj χ(C_b)`.
    pub fn column_pairing(&self, a: usize, b: usize) -> Result<GaussInt> {
        let mut acc = GaussInt::zero();
        for ch in &self.characters {
            acc += to_int(&ch.values[a])? * to_int(&ch.values[b])?.conj();
        }
        Ok(acc)
    }

    /// Exact first and second orthogonality, plus `Σ d^2 = |G|`.
    pub fn verify_orthogonality(&self) -> Result<()> {
        let order = self.group_order as i64;
        if self.characters.len() != self.classes.len() {
            return Err(Error::Consistency("table is not square".into()));
        }
        let deg_sq: u64 = self.characters.iter().map(|c| c.degree * c.degree).sum();
        if deg_sq != self.group_order {
            return Err(Error::Consistency(format!("sum of squared degrees is {deg_sq}")));
        }
        for a in 0..self.characters.len() {
            for b in a..self.characters.len() {
                let expect = if a == b { order } else { 0 };
                if self.row_pairing(a, b)? != GaussInt::new(expect, 0) {
                    return Err(Error::Consistency(format!("row orthogonality fails at ({a}, {b})")));
                }
            }
        }
        for a in 0..self.classes.len() {
            for b in a..self.classes.len() {
                let expect = if a == b { order / self.classes[a].size as i64 } else { 0 };
                if self.column_pairing(a, b)? != GaussInt::new(expect, 0) {
                    return Err(Error::Consistency(format!("column orthogonality fails at ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    /// `Σ_{χ∈S} d_χ χ(C)` for each class.
    pub fn weighted_sum(&self, subset: &[usize]) -> Vec<GaussianScaled> {
        (0..self.classes.len())
            .map(|c| {
                subset.iter().fold(GaussianScaled::ZERO, |acc, &i| {
                    let ch = &self.characters[i];
                    acc.add(&GaussianScaled::new(ch.degree as i64, 0, 0).mul(&ch.values[c]))
                })
            })
            .collect()
    }

    /// `|Σ_{χ∈D} χ(C)|^2` per class; `2^(2k)` off the identity.
    pub fn flat_sums(&self) -> Vec<Rational> {
        (0..self.classes.len())
            .map(|c| {
                self.d_set.iter().fold(GaussianScaled::ZERO, |acc, &i| acc.add(&self.characters[i].values[c])).norm_sq()
            })
            .collect()
    }

    /// `|Σ_{χ∈D} d_χ χ(C)|^2` per class; `m(|G| - m)/(|G| - 1)` off the
    /// identity exactly when `D` is a hyperdifference set.
    pub fn weighted_flat_sums(&self) -> Vec<Rational> {
        self.weighted_sum(&self.d_set).iter().map(|v| v.norm_sq()).collect()
    }

    /// Index of the complex-conjugate character for every row.
    pub fn dual_map(&self) -> Result<Vec<usize>> {
        self.characters
            .iter()
            .map(|ch| {
                let conj: Vec<GaussianScaled> = ch.values.iter().map(|v| v.conj()).collect();
                self.characters
                    .iter()
                    .position(|o| o.values == conj)
                    .ok_or_else(|| Error::Consistency("character table not closed under conjugation".into()))
            })
            .collect()
    }

    /// Characters of the given degree.
    pub fn of_degree(&self, degree: u64) -> Vec<usize> {
        (0..self.characters.len()).filter(|&i| self.characters[i].degree == degree).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2n::FieldContext;

    fn table(n: u32) -> (GroupContext, CharacterTable) {
        let g = GroupContext::suzuki(FieldContext::new(n).unwrap()).unwrap();
        let t = {
            let rep = RepContext::new(&g).unwrap();
            full_table(&g, &rep).unwrap()
        };
        (g, t)
    }

    #[test]
    fn linear_characters_are_multiplicative() {
        let (g, t) = table(3);
        assert!(t.characters[0].values.iter().all(|v| *v == GaussianScaled::new(1, 0, 0)));
        let mut s = 11u64;
        for ch in &t.characters[..8] {
            for _ in 0..1000 {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
                let a = g.element_at((s >> 20) as usize % 64);
                let b = g.element_at((s >> 40) as usize % 64);
                let lhs = evaluate(&g, &ch.label, g.mul(a, b));
                let rhs = evaluate(&g, &ch.label, a).mul(&evaluate(&g, &ch.label, b));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn degrees_and_counts() {
        let (_, t) = table(3);
        assert_eq!(t.characters.len(), 22);
        let mut degrees = t.degrees();
        degrees.sort();
        assert_eq!(degrees, [vec![1u64; 8], vec![2u64; 14]].concat());
        assert_eq!(t.column_pairing(0, 0).unwrap(), GaussInt::new(64, 0));
    }

    #[test]
    fn nonlinear_value_examples() {
        let (g, t) = table(3);
        for &i in &t.d_set {
            assert_eq!(t.characters[i].values[0], GaussianScaled::new(2, 0, 0));
            let gamma = t.characters[i].label.parameter;
            for class in g.conjugacy_classes() {
                let x = class.representative.x;
                if !x.is_zero() && x != gamma {
                    assert!(t.characters[i].values[g.class_index(class.representative)].is_zero());
                }
            }
        }
        let one = GroupElement::new(FieldElement::ONE, FieldElement::ZERO);
        let chi1 = &t.characters[t.d_set[0]];
        assert_eq!(chi1.label.parameter, FieldElement::ONE);
        assert_eq!(chi1.values[g.class_index(one)], GaussianScaled::new(0, 2, 0));
    }

    #[test]
    fn central_column_sum_is_minus_two_to_k() {
        for n in [3, 5] {
            let (g, t) = table(n);
            let k = (n / 2) as i32;
            for y in g.field().units() {
                let c = g.class_index(GroupElement::new(FieldElement::ZERO, y));
                let sum = t.d_set.iter().fold(GaussianScaled::ZERO, |acc, &i| acc.add(&t.characters[i].values[c]));
                assert_eq!(sum, GaussianScaled::new(-1, 0, k));
            }
        }
    }

    #[test]
    fn flat_sums_are_constant() {
        for (n, expect) in [(3u32, 4i64), (5, 16)] {
            let (_, t) = table(n);
            let sums = t.flat_sums();
            assert!(sums[1..].iter().all(|s| *s == Rational::from_integer(expect)));
            // weighted by d = 2^k, the constant is m(|G| - m)/(|G| - 1)
            let order = t.group_order as i64;
            let m = t.d_set.iter().map(|&i| (t.characters[i].degree as i64).pow(2)).sum::<i64>();
            let welch = Rational::new(m * (order - m), order - 1);
            assert_eq!(welch, Rational::from_integer(expect * expect));
            assert!(t.weighted_flat_sums()[1..].iter().all(|s| *s == welch));
        }
    }

    #[test]
    fn dual_map_swaps_families() {
        let (_, t) = table(3);
        let dual = t.dual_map().unwrap();
        assert_eq!(dual[..8], (0..8).collect::<Vec<_>>());
        for i in 8..15 {
            assert_eq!(dual[i], i + 7);
            assert_eq!(dual[i + 7], i);
        }
    }

    #[test]
    fn table_at_n7_is_orthogonal() {
        let (_, t) = table(7);
        assert_eq!(t.characters.len(), 128 + 2 * 127);
    }

    #[test]
    fn broken_table_is_rejected() {
        let (_, t) = table(3);
        let mut chars = t.characters.clone();
        chars[9].values[3] = chars[9].values[3].neg();
        let bad = CharacterTable::from_parts(t.class_sizes(), chars, t.d_set.clone()).unwrap();
        assert!(matches!(bad.verify_orthogonality(), Err(Error::Consistency(_))));
        assert!(CharacterTable::from_parts(vec![1, 1], t.characters.clone(), vec![]).is_err());
    }
}
