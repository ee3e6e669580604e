//! B-product groups `F ×_B F` over GF(2^n), specialised to the Suzuki
//! 2-group with cocycle `B(a, b) = a b^2`.
//!
//! Elements are enumerated with `x` outer and `y` inner, both ascending; the
//! position of `(x, y)` in that order is `x * 2^n + y`. Every matrix in the
//! crate indexes its group-labelled rows and columns by this order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2n::{FieldContext, FieldElement};

/// Bilinear cocycle `B: F × F -> F`.
pub type Cocycle = fn(&FieldContext, FieldElement, FieldElement) -> FieldElement;

/// `B(a, b) = a b^2`.
pub fn suzuki_cocycle(f: &FieldContext, a: FieldElement, b: FieldElement) -> FieldElement {
    f.mul(a, f.square(b))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroupElement {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { x: FieldElement::ZERO, y: FieldElement::ZERO };

    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        GroupElement { x, y }
    }

    pub fn from_bits(x: u32, y: u32) -> Self {
        GroupElement { x: FieldElement(x), y: FieldElement(y) }
    }

    pub fn is_central_form(&self) -> bool {
        self.x.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub representative: GroupElement,
    pub members: Vec<GroupElement>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// The group `F ×_B F` together with its class partition.
#[derive(Clone, Debug)]
pub struct GroupContext {
    field: FieldContext,
    cocycle: Cocycle,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
}

impl GroupContext {
    /// The Suzuki 2-group over GF(2^n); requires odd `n >= 3`.
    pub fn suzuki(field: FieldContext) -> Result<Self> {
        if field.degree() < 3 {
            return Err(Error::InvalidDegree(field.degree(), "group requires n >= 3"));
        }
        Ok(Self::with_cocycle(field, suzuki_cocycle))
    }

    /// Any bilinear cocycle; only the Suzuki cocycle is exercised.
    pub fn with_cocycle(field: FieldContext, cocycle: Cocycle) -> Self {
        let mut ctx = GroupContext { field, cocycle, classes: Vec::new(), class_of: Vec::new() };
        ctx.build_classes();
        ctx
    }

    #[inline]
    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    /// `|G| = 2^(2n)`.
    #[inline]
    pub fn order(&self) -> usize {
        1usize << (2 * self.field.degree())
    }

    #[inline]
    pub fn index_of(&self, g: GroupElement) -> usize {
        ((g.x.0 as usize) << self.field.degree()) | g.y.0 as usize
    }

    #[inline]
    pub fn element_at(&self, idx: usize) -> GroupElement {
        let n = self.field.degree();
        GroupElement::from_bits((idx >> n) as u32, (idx & ((1 << n) - 1)) as u32)
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    #[inline]
    pub fn cocycle(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        (self.cocycle)(&self.field, a, b)
    }

    /// `B(u, v) - B(v, u)`.
    #[inline]
    pub fn commutator_form(&self, u: FieldElement, v: FieldElement) -> FieldElement {
        self.cocycle(u, v) + self.cocycle(v, u)
    }

    /// `(u, v)(x, y) = (u + x, v + y + B(u, x))`.
    #[inline]
    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement { x: a.x + b.x, y: a.y + b.y + self.cocycle(a.x, b.x) }
    }

    /// `(u, v)^-1 = (u, v + B(u, u))` in characteristic 2.
    #[inline]
    pub fn inv(&self, a: GroupElement) -> GroupElement {
        GroupElement { x: a.x, y: a.y + self.cocycle(a.x, a.x) }
    }

    pub fn conjugate(&self, g: GroupElement, by: GroupElement) -> GroupElement {
        self.mul(self.mul(self.inv(by), g), by)
    }

    pub fn commutator(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Range of `v -> B̂(u, v)` as a sorted element list.
    pub fn commutator_range(&self, u: FieldElement) -> Vec<FieldElement> {
        let n = self.field.degree();
        let gens: Vec<FieldElement> = (0..n).map(|j| self.commutator_form(u, FieldElement(1 << j))).collect();
        span(&gens)
    }

    fn build_classes(&mut self) {
        let order = self.order();
        let mut class_of = vec![u32::MAX; order];
        let mut classes = Vec::new();
        for idx in 0..order {
            if class_of[idx] != u32::MAX {
                continue;
            }
            let rep = self.element_at(idx);
            // (u, v)^G = {(u, v + B̂(u, w))}
            let mut members: Vec<GroupElement> =
                self.commutator_range(rep.x).into_iter().map(|h| GroupElement { x: rep.x, y: rep.y + h }).collect();
            members.sort();
            let cid = classes.len() as u32;
            for m in &members {
                class_of[self.index_of(*m)] = cid;
            }
            classes.push(ConjugacyClass { representative: rep, members });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    /// Classes ordered by their least member, which is the representative.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    #[inline]
    pub fn class_index(&self, g: GroupElement) -> usize {
        self.class_of[self.index_of(g)] as usize
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.size()).collect()
    }

    /// Center `(ker L) × F` and commutator subgroup `{0} × span B̂`.
    pub fn center_and_commutator(&self) -> (Vec<GroupElement>, Vec<GroupElement>) {
        let kernel: Vec<FieldElement> = self
            .field
            .elements()
            .filter(|&u| self.field.elements().all(|v| self.commutator_form(u, v).is_zero()))
            .collect();
        let mut center: Vec<GroupElement> =
            kernel.iter().flat_map(|&u| self.field.elements().map(move |v| GroupElement::new(u, v))).collect();
        center.sort();
        let n = self.field.degree();
        let gens: Vec<FieldElement> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (FieldElement(1 << i), FieldElement(1 << j))))
            .map(|(u, v)| self.commutator_form(u, v))
            .collect();
        let derived = span(&gens).into_iter().map(|y| GroupElement::new(FieldElement::ZERO, y)).collect();
        (center, derived)
    }

    /// `φ_γ(x, y) = (x, tr(γ^-3 y))`, onto `G_γ = F ×_{q_γ∘B} GF(2)`.
    pub fn epi_phi(&self, gamma: FieldElement, g: GroupElement) -> Result<(FieldElement, u8)> {
        Ok((g.x, self.field.hyperplane_quotient(gamma, g.y)?))
    }

    /// Multiplication in `G_γ`: `(x, e)(y, d) = (x + y, e + d + tr(γ^-3 x y^2))`.
    pub fn quotient_mul(
        &self,
        gamma: FieldElement,
        a: (FieldElement, u8),
        b: (FieldElement, u8),
    ) -> Result<(FieldElement, u8)> {
        let twist = self.field.hyperplane_quotient(gamma, self.cocycle(a.0, b.0))?;
        Ok((a.0 + b.0, a.1 ^ b.1 ^ twist))
    }

    /// `ψ_γ(x, y) = (γ x, γ^3 y)`.
    pub fn aut_psi(&self, gamma: FieldElement, g: GroupElement) -> Result<GroupElement> {
        if gamma.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let f = &self.field;
        Ok(GroupElement { x: f.mul(gamma, g.x), y: f.mul(f.cube(gamma), g.y) })
    }

    /// Class partition as `(representative, size)` pairs for export.
    pub fn class_summary(&self) -> Vec<ClassSummary> {
        self.classes
            .iter()
            .map(|c| ClassSummary { representative: [c.representative.x.0, c.representative.y.0], size: c.size() })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClassSummary {
    pub representative: [u32; 2],
    pub size: usize,
}

/// GF(2)-linear span of `gens`, sorted ascending.
pub fn span(gens: &[FieldElement]) -> Vec<FieldElement> {
    let mut basis: Vec<u32> = Vec::new();
    for g in gens {
        let mut v = g.0;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut out = vec![0u32];
    for b in basis {
        let len = out.len();
        for i in 0..len {
            out.push(out[i] ^ b);
        }
    }
    out.sort_unstable();
    out.into_iter().map(FieldElement).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g3() -> GroupContext {
        GroupContext::suzuki(FieldContext::new(3).unwrap()).unwrap()
    }

    fn lcg(state: &mut u64) -> u64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        *state >> 17
    }

    fn random_element(g: &GroupContext, state: &mut u64) -> GroupElement {
        g.element_at(lcg(state) as usize % g.order())
    }

    #[test]
    fn multiplication_examples() {
        let g = g3();
        let a = GroupElement::from_bits(0b010, 0);
        let b = GroupElement::from_bits(0b001, 0);
        assert_eq!(g.mul(a, b), GroupElement::from_bits(0b011, 0b010));
        for e in g.elements() {
            assert_eq!(g.mul(GroupElement::IDENTITY, e), e);
            assert_eq!(g.mul(e, GroupElement::IDENTITY), e);
            assert_eq!(g.mul(e, g.inv(e)), GroupElement::IDENTITY);
            assert_eq!(g.inv(g.inv(e)), e);
        }
    }

    #[test]
    fn inverse_examples() {
        let g = g3();
        let c = GroupElement::from_bits(0, 0b101);
        assert_eq!(g.inv(c), c);
        assert_eq!(g.inv(GroupElement::from_bits(0b010, 0)), GroupElement::from_bits(0b010, 0b011));
    }

    #[test]
    fn associativity_sampled() {
        for n in [3, 5] {
            let g = GroupContext::suzuki(FieldContext::new(n).unwrap()).unwrap();
            let mut s = 17;
            for _ in 0..10_000 {
                let (a, b, c) = (random_element(&g, &mut s), random_element(&g, &mut s), random_element(&g, &mut s));
                assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            }
        }
    }

    #[test]
    fn squares_are_central() {
        let g = g3();
        for e in g.elements() {
            let sq = g.mul(e, e);
            assert_eq!(sq, GroupElement::new(FieldElement::ZERO, g.field().cube(e.x)));
            assert_eq!(g.mul(sq, sq), GroupElement::IDENTITY);
        }
    }

    /// Orbit of each element under conjugation by every group element.
    fn brute_force_classes(g: &GroupContext) -> Vec<Vec<GroupElement>> {
        let mut seen = vec![false; g.order()];
        let mut out = Vec::new();
        for e in g.elements() {
            if seen[g.index_of(e)] {
                continue;
            }
            let mut orbit: Vec<GroupElement> = g.elements().map(|h| g.conjugate(e, h)).collect();
            orbit.sort();
            orbit.dedup();
            for m in &orbit {
                seen[g.index_of(*m)] = true;
            }
            out.push(orbit);
        }
        out
    }

    #[test]
    fn classes_match_brute_force() {
        let g = g3();
        let classes = g.conjugacy_classes();
        assert_eq!(classes.len(), 22);
        assert_eq!(classes.iter().filter(|c| c.size() == 1).count(), 8);
        assert_eq!(classes.iter().filter(|c| c.size() == 4).count(), 14);
        let brute = brute_force_classes(&g);
        let ours: Vec<Vec<GroupElement>> = classes.iter().map(|c| c.members.clone()).collect();
        assert_eq!(ours, brute);
        assert_eq!(classes[0].members, vec![GroupElement::IDENTITY]);
    }

    #[test]
    fn noncentral_class_is_hyperplane_coset() {
        let g = g3();
        let f = g.field();
        let rep = GroupElement::from_bits(0b010, 0);
        let class = &g.conjugacy_classes()[g.class_index(rep)];
        assert_eq!(class.size(), 4);
        let hyper: Vec<FieldElement> =
            f.elements().filter(|&v| f.hyperplane_quotient(rep.x, v).unwrap() == 0).collect();
        let ys: Vec<FieldElement> = class.members.iter().map(|m| m.y).collect();
        assert_eq!(ys, hyper);
    }

    #[test]
    fn class_equation() {
        for n in [3, 5, 7] {
            let g = GroupContext::suzuki(FieldContext::new(n).unwrap()).unwrap();
            let q = 1usize << n;
            assert_eq!(g.class_sizes().iter().sum::<usize>(), g.order());
            assert_eq!(g.conjugacy_classes().len(), q + 2 * (q - 1));
            for c in g.conjugacy_classes() {
                let expect = if c.representative.x.is_zero() { 1 } else { q / 2 };
                assert_eq!(c.size(), expect);
            }
        }
    }

    #[test]
    fn center_and_commutator_brute_force() {
        let g = g3();
        let (center, derived) = g.center_and_commutator();
        assert_eq!(center.len(), 8);
        assert_eq!(derived.len(), 8);
        let brute_center: Vec<GroupElement> =
            g.elements().filter(|&z| g.elements().all(|h| g.mul(z, h) == g.mul(h, z))).collect();
        assert_eq!(center, brute_center);
        let mut comms: Vec<GroupElement> =
            g.elements().flat_map(|a| g.elements().map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
        comms.sort();
        comms.dedup();
        // commutators already form the subgroup here
        assert_eq!(derived, comms);
        let singletons: Vec<GroupElement> =
            g.conjugacy_classes().iter().filter(|c| c.size() == 1).map(|c| c.representative).collect();
        assert_eq!(singletons, center);
        assert_eq!(g.order() / derived.len(), 8);
    }

    #[test]
    fn phi_is_a_homomorphism() {
        for n in [3, 5] {
            let g = GroupContext::suzuki(FieldContext::new(n).unwrap()).unwrap();
            let f = g.field();
            let mut s = 99;
            assert_eq!(g.epi_phi(FieldElement::ONE, GroupElement::IDENTITY).unwrap(), (FieldElement::ZERO, 0));
            for e in g.elements().step_by(7) {
                assert_eq!(g.epi_phi(FieldElement::ONE, e).unwrap(), (e.x, f.trace(e.y)));
            }
            for _ in 0..1000 {
                let gamma = FieldElement(1 + (lcg(&mut s) as u32 % (f.order() - 1)));
                let (a, b) = (random_element(&g, &mut s), random_element(&g, &mut s));
                let lhs = g.epi_phi(gamma, g.mul(a, b)).unwrap();
                let rhs = g.quotient_mul(gamma, g.epi_phi(gamma, a).unwrap(), g.epi_phi(gamma, b).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        let g = g3();
        assert_eq!(g.epi_phi(FieldElement::ZERO, GroupElement::IDENTITY), Err(Error::ZeroParameter));
    }

    #[test]
    fn psi_family() {
        let g = g3();
        let f = g.field();
        for e in g.elements() {
            assert_eq!(g.aut_psi(FieldElement::ONE, e).unwrap(), e);
        }
        let mut s = 5;
        for _ in 0..1000 {
            let gamma = FieldElement(1 + (lcg(&mut s) as u32 % 7));
            let (a, b) = (random_element(&g, &mut s), random_element(&g, &mut s));
            let lhs = g.aut_psi(gamma, g.mul(a, b)).unwrap();
            let rhs = g.mul(g.aut_psi(gamma, a).unwrap(), g.aut_psi(gamma, b).unwrap());
            assert_eq!(lhs, rhs);
        }
        // ψ is an injective homomorphism F^× -> Aut(G)
        let images: Vec<Vec<GroupElement>> =
            f.units().map(|gm| g.elements().map(|e| g.aut_psi(gm, e).unwrap()).collect()).collect();
        for i in 0..images.len() {
            let mut sorted = images[i].clone();
            sorted.sort();
            assert_eq!(sorted, g.elements().collect::<Vec<_>>());
            for j in 0..images.len() {
                if i != j {
                    assert_ne!(images[i], images[j]);
                }
            }
        }
        for a in f.units() {
            for b in f.units() {
                for e in g.elements() {
                    let lhs = g.aut_psi(a, g.aut_psi(b, e).unwrap()).unwrap();
                    assert_eq!(lhs, g.aut_psi(f.mul(a, b), e).unwrap());
                }
            }
        }
        assert_eq!(g.aut_psi(FieldElement::ZERO, GroupElement::IDENTITY), Err(Error::ZeroParameter));
    }

    #[test]
    fn psi_permutes_classes() {
        let g = g3();
        for gamma in g.field().units() {
            for c in g.conjugacy_classes() {
                let mut image: Vec<GroupElement> = c.members.iter().map(|&m| g.aut_psi(gamma, m).unwrap()).collect();
                image.sort();
                let target = &g.conjugacy_classes()[g.class_index(image[0])];
                assert_eq!(image, target.members);
                assert_eq!(c.representative.x.is_zero(), image[0].x.is_zero());
            }
        }
    }
}
