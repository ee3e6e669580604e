//! The Heisenberg group over `Z_2^k` and the representation of the Suzuki
//! group onto `H ∪ iH` on `L^2(Z_2^k)`.
//!
//! All operators involved are monomial (one nonzero entry per row, a power
//! of `i`), so they are stored as a permutation plus a phase per row.

use std::collections::{HashSet, VecDeque};

use num_traits::Zero;

use crate::bgroup::{GroupContext, GroupElement};
use crate::error::{Error, Result};
use crate::exact::{i_pow, GaussInt};
use crate::gf2n::{FieldElement, SymplecticBasis};

/// Monomial matrix: row `r` has the single entry `i^phase[r]` in column
/// `perm[r]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    perm: Vec<u32>,
    phase: Vec<u8>,
}

impl Monomial {
    pub fn identity(dim: usize) -> Self {
        Monomial { perm: (0..dim as u32).collect(), phase: vec![0; dim] }
    }

    /// `i^p · I`.
    pub fn scalar(dim: usize, p: u8) -> Self {
        Monomial { perm: (0..dim as u32).collect(), phase: vec![p & 3; dim] }
    }

    /// `(T_s f)(x) = f(x - e_s)` on functions of `x ∈ Z_2^k`.
    pub fn translation(k: u32, s: u32) -> Self {
        let dim = 1u32 << k;
        Monomial { perm: (0..dim).map(|x| x ^ (1 << s)).collect(), phase: vec![0; dim as usize] }
    }

    /// `(M_t f)(x) = (-1)^(x_t) f(x)`.
    pub fn modulation(k: u32, t: u32) -> Self {
        let dim = 1u32 << k;
        Monomial { perm: (0..dim).collect(), phase: (0..dim).map(|x| (((x >> t) & 1) * 2) as u8).collect() }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let perm = self.perm.iter().map(|&c| other.perm[c as usize]).collect();
        let phase = self.perm.iter().zip(&self.phase).map(|(&c, &p)| (p + other.phase[c as usize]) & 3).collect();
        Monomial { perm, phase }
    }

    /// Multiplies every entry by `i^p`.
    pub fn times_phase(&self, p: u8) -> Monomial {
        Monomial { perm: self.perm.clone(), phase: self.phase.iter().map(|&q| (q + p) & 3).collect() }
    }

    pub fn inverse(&self) -> Monomial {
        let mut perm = vec![0u32; self.dim()];
        let mut phase = vec![0u8; self.dim()];
        for (r, (&c, &p)) in self.perm.iter().zip(&self.phase).enumerate() {
            perm[c as usize] = r as u32;
            phase[c as usize] = (4 - p) & 3;
        }
        Monomial { perm, phase }
    }

    pub fn trace(&self) -> GaussInt {
        self.perm
            .iter()
            .zip(&self.phase)
            .enumerate()
            .filter(|(r, (&c, _))| c as usize == *r)
            .fold(GaussInt::zero(), |acc, (_, (_, &p))| acc + i_pow(p))
    }

    /// Hilbert–Schmidt pairing `tr(self · other^*)`.
    pub fn hs_inner(&self, other: &Monomial) -> GaussInt {
        self.perm
            .iter()
            .zip(&self.phase)
            .zip(other.perm.iter().zip(&other.phase))
            .filter(|((c, _), (d, _))| c == d)
            .fold(GaussInt::zero(), |acc, ((_, &p), (_, &q))| acc + i_pow(p.wrapping_sub(q)))
    }

    /// Row-major dense form.
    pub fn to_dense(&self) -> Vec<GaussInt> {
        let d = self.dim();
        let mut out = vec![GaussInt::zero(); d * d];
        for (r, (&c, &p)) in self.perm.iter().zip(&self.phase).enumerate() {
            out[r * d + c as usize] = i_pow(p);
        }
        out
    }

    /// Column of row `r`'s nonzero entry and its phase exponent.
    #[inline]
    pub fn row_entry(&self, r: usize) -> (usize, u8) {
        (self.perm[r] as usize, self.phase[r])
    }
}

/// Translations `T_0..T_{k-1}` and modulations `M_0..M_{k-1}`.
pub fn heis_generators(k: u32) -> (Vec<Monomial>, Vec<Monomial>) {
    let ts = (0..k).map(|s| Monomial::translation(k, s)).collect();
    let ms = (0..k).map(|t| Monomial::modulation(k, t)).collect();
    (ts, ms)
}

/// Closure of a generating set under multiplication.
pub fn generated_group(gens: &[Monomial]) -> HashSet<Monomial> {
    let Some(first) = gens.first() else {
        return HashSet::new();
    };
    let id = Monomial::identity(first.dim());
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let next = m.mul(g);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Data fixing the representation `π: G -> H<iI>`.
#[derive(Clone, Debug)]
pub struct RepContext<'g> {
    group: &'g GroupContext,
    symplectic: SymplecticBasis,
    /// `α_0..α_{k-1}, β_0..β_{k-1}, 1`.
    basis: Vec<FieldElement>,
    images: Vec<Monomial>,
    /// Coordinates of every field element in `basis`, as a bit mask.
    coords: Vec<u32>,
    /// `π(x, 0)` for every `x`.
    table: Vec<Monomial>,
}

impl<'g> RepContext<'g> {
    /// Uses the canonical Gram–Schmidt symplectic basis.
    pub fn new(group: &'g GroupContext) -> Result<Self> {
        let basis = group.field().symplectic_basis();
        Self::with_basis(group, basis)
    }

    pub fn with_basis(group: &'g GroupContext, symplectic: SymplecticBasis) -> Result<Self> {
        let f = group.field();
        f.validate_symplectic(&symplectic)?;
        let k = f.half_degree();
        let dim = 1usize << k;
        let (ts, ms) = heis_generators(k);

        let alphas: Vec<FieldElement> = symplectic.xs.iter().map(|&x| f.theta(x)).collect();
        let betas: Vec<FieldElement> = symplectic.ys.iter().map(|&y| f.theta(y)).collect();
        let mut basis = alphas.clone();
        basis.extend(&betas);
        basis.push(FieldElement::ONE);

        let mut images = Vec::with_capacity(basis.len());
        for (s, &a) in alphas.iter().enumerate() {
            images.push(ts[s].times_phase(f.trace(f.cube(a))));
        }
        for (t, &b) in betas.iter().enumerate() {
            images.push(ms[t].times_phase(f.trace(f.cube(b))));
        }
        images.push(Monomial::scalar(dim, 1));

        let order = f.order() as usize;
        let mut coords = vec![u32::MAX; order];
        for mask in 0..order as u32 {
            let x = basis
                .iter()
                .enumerate()
                .filter(|(j, _)| (mask >> j) & 1 == 1)
                .fold(FieldElement::ZERO, |acc, (_, &b)| acc + b);
            if coords[x.0 as usize] != u32::MAX {
                return Err(Error::Consistency("θ-image of the symplectic basis plus 1 is not a basis".into()));
            }
            coords[x.0 as usize] = mask;
        }

        let mut ctx = RepContext { group, symplectic, basis, images, coords, table: Vec::new() };
        ctx.table = f.elements().map(|x| ctx.factored_image(x)).collect::<Result<Vec<_>>>()?;
        Ok(ctx)
    }

    pub fn group(&self) -> &'g GroupContext {
        self.group
    }

    pub fn symplectic(&self) -> &SymplecticBasis {
        &self.symplectic
    }

    /// `α_s = θ(x_s)`, `β_t = θ(y_t)` followed by `1`.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    /// Images of `(b, 0)` for each basis element `b`.
    pub fn generator_images(&self) -> &[Monomial] {
        &self.images
    }

    /// `2^k`.
    pub fn dim(&self) -> usize {
        1 << self.group.field().half_degree()
    }

    /// `π(x, 0)` by multiplying generators in the order α's, β's, 1, then
    /// correcting by the central character of the leftover `(0, c)`.
    fn factored_image(&self, x: FieldElement) -> Result<Monomial> {
        let f = self.group.field();
        let mask = *self
            .coords
            .get(x.0 as usize)
            .filter(|&&m| m != u32::MAX)
            .ok_or_else(|| Error::Consistency(format!("no coordinates for {:#x}", x.0)))?;
        let mut elem = GroupElement::IDENTITY;
        let mut mat = Monomial::identity(self.dim());
        for (j, &b) in self.basis.iter().enumerate() {
            if (mask >> j) & 1 == 1 {
                elem = self.group.mul(elem, GroupElement::new(b, FieldElement::ZERO));
                mat = mat.mul(&self.images[j]);
            }
        }
        if elem.x != x {
            return Err(Error::Consistency("basis decomposition does not reproduce x".into()));
        }
        // (x, 0) = (x, c)·(0, c) and π(0, c) = (-1)^tr(c)
        Ok(mat.times_phase(2 * f.trace(elem.y)))
    }

    /// `π(x, y) = π(x, 0)·(-1)^tr(y)`.
    pub fn rep_pi(&self, g: GroupElement) -> Monomial {
        let sign = self.group.field().trace(g.y);
        self.table[g.x.0 as usize].times_phase(2 * sign)
    }

    /// `χ_π(g)`.
    pub fn character(&self, g: GroupElement) -> GaussInt {
        self.rep_pi(g).trace()
    }

    /// Evaluator `g ↦ π(ψ_{γ^-1}(g))`.
    pub fn family_member(&self, gamma: FieldElement) -> Result<RepEvaluator<'_, 'g>> {
        let gamma_inv = self.group.field().inv(gamma).map_err(|_| Error::ZeroParameter)?;
        Ok(RepEvaluator { rep: self, gamma, gamma_inv })
    }

    /// One evaluator per `γ ≠ 0`, ascending.
    pub fn rep_family(&self) -> Vec<RepEvaluator<'_, 'g>> {
        self.group.field().units().map(|g| self.family_member(g).expect("units are invertible")).collect()
    }

    /// Checks the polycyclic relations of `G_1` in the group and their images:
    /// `f_i^2 = f_{n+1}^tr(b_i^3)` and `f_i f_j = f_j f_i f_{n+1}^<b_i, b_j>`.
    pub fn check_presentation(&self) -> Result<()> {
        let f = self.group.field();
        let one = FieldElement::ONE;
        let minus = Monomial::scalar(self.dim(), 2);
        let id = Monomial::identity(self.dim());
        let central = |e: u8| if e == 1 { minus.clone() } else { id.clone() };
        for (i, &bi) in self.basis.iter().enumerate() {
            let fi = (bi, 0u8);
            let p = f.trace(f.cube(bi));
            if self.group.quotient_mul(one, fi, fi)? != (FieldElement::ZERO, p) {
                return Err(Error::Consistency(format!("power relation fails in G_1 at {i}")));
            }
            let img = &self.images[i];
            if img.mul(img) != central(p) {
                return Err(Error::Consistency(format!("power relation fails for image {i}")));
            }
            for (j, &bj) in self.basis.iter().enumerate() {
                let fj = (bj, 0u8);
                let e = f.angle_form(bi, bj);
                let lhs = self.group.quotient_mul(one, fi, fj)?;
                let rhs =
                    self.group.quotient_mul(one, self.group.quotient_mul(one, fj, fi)?, (FieldElement::ZERO, e))?;
                if lhs != rhs {
                    return Err(Error::Consistency(format!("commuting relation fails in G_1 at ({i}, {j})")));
                }
                let img_j = &self.images[j];
                if img.mul(img_j) != img_j.mul(img).mul(&central(e)) {
                    return Err(Error::Consistency(format!("commuting relation fails for images ({i}, {j})")));
                }
            }
        }
        Ok(())
    }
}

/// The representation `π ∘ ψ_{γ^-1}`, whose character is the member of the
/// hyperdifference set labelled by `γ`.
#[derive(Clone, Copy, Debug)]
pub struct RepEvaluator<'r, 'g> {
    rep: &'r RepContext<'g>,
    pub gamma: FieldElement,
    gamma_inv: FieldElement,
}

impl RepEvaluator<'_, '_> {
    pub fn eval(&self, g: GroupElement) -> Monomial {
        let moved = self.rep.group.aut_psi(self.gamma_inv, g).expect("γ^-1 is nonzero");
        self.rep.rep_pi(moved)
    }

    pub fn character(&self, g: GroupElement) -> GaussInt {
        self.eval(g).trace()
    }

    /// `tr(ρ(g) ρ(h)^*)` without materialising either matrix.
    pub fn hs_pair(&self, g: GroupElement, h: GroupElement) -> GaussInt {
        let group = self.rep.group;
        let f = group.field();
        let a = group.aut_psi(self.gamma_inv, g).expect("γ^-1 is nonzero");
        let b = group.aut_psi(self.gamma_inv, h).expect("γ^-1 is nonzero");
        let inner = self.rep.table[a.x.0 as usize].hs_inner(&self.rep.table[b.x.0 as usize]);
        if f.trace(a.y) == f.trace(b.y) {
            inner
        } else {
            -inner
        }
    }
}

/// `(1/|G|) Σ_g |tr ρ(g)|^2 == 1`, checked exactly.
pub fn is_irreducible<F: Fn(GroupElement) -> GaussInt>(group: &GroupContext, character: F) -> bool {
    let total: i64 = group.elements().map(|g| character(g).norm_sqr()).sum();
    total == group.order() as i64
}

pub fn minus_identity(dim: usize) -> Monomial {
    Monomial::scalar(dim, 2)
}
