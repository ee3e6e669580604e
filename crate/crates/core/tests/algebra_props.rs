//! Field, group and representation laws on random inputs.

use std::sync::OnceLock;

use linepack_core::bgroup::{GroupContext, GroupElement};
use linepack_core::gf2n::{FieldContext, FieldElement};
use linepack_core::heis::{Monomial, RepContext};
use proptest::prelude::*;

fn group(n: u32) -> &'static GroupContext {
    static G: [OnceLock<GroupContext>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match n {
        3 => &G[0],
        5 => &G[1],
        7 => &G[2],
        _ => unreachable!(),
    };
    slot.get_or_init(|| GroupContext::suzuki(FieldContext::new(n).unwrap()).unwrap())
}

fn degree() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7])
}

/// `(n, a, b, c)` with `a, b, c` in GF(2^n).
fn triple() -> impl Strategy<Value = (u32, FieldElement, FieldElement, FieldElement)> {
    degree().prop_flat_map(|n| {
        let e = (0u32..1 << n).prop_map(FieldElement);
        (Just(n), e.clone(), e.clone(), e)
    })
}

fn elements() -> impl Strategy<Value = (u32, GroupElement, GroupElement, GroupElement)> {
    degree().prop_flat_map(|n| {
        let e = (0u32..1 << n, 0u32..1 << n).prop_map(|(x, y)| GroupElement::from_bits(x, y));
        (Just(n), e.clone(), e.clone(), e)
    })
}

proptest! {
    #[test]
    fn field_is_a_commutative_ring((n, a, b, c) in triple()) {
        let f = group(n).field();
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
        prop_assert_eq!(f.mul(a, FieldElement::ONE), a);
        prop_assert_eq!(a + a, FieldElement::ZERO);
    }

    #[test]
    fn nonzero_elements_invert((n, a, _b, _c) in triple()) {
        let f = group(n).field();
        prop_assume!(!a.is_zero());
        let inv = f.inv(a).unwrap();
        prop_assert_eq!(f.mul(a, inv), FieldElement::ONE);
        prop_assert_eq!(f.pow(a, (f.order() - 1) as u64), FieldElement::ONE);
    }

    #[test]
    fn frobenius_and_trace_are_additive((n, a, b, _c) in triple()) {
        let f = group(n).field();
        prop_assert_eq!(f.square(a + b), f.square(a) + f.square(b));
        prop_assert_eq!(f.trace(a + b), f.trace(a) ^ f.trace(b));
        prop_assert_eq!(f.trace(f.square(a)), f.trace(a));
        prop_assert_eq!(f.frobenius(a, n), a);
    }

    #[test]
    fn angle_form_is_alternating((n, a, b, c) in triple()) {
        let f = group(n).field();
        prop_assert_eq!(f.angle_form(a, a), 0);
        prop_assert_eq!(f.angle_form(a, b), f.angle_form(b, a));
        prop_assert_eq!(f.angle_form(a, b + c), f.angle_form(a, b) ^ f.angle_form(a, c));
    }

    #[test]
    fn group_law((n, g, h, k) in elements()) {
        let grp = group(n);
        prop_assert_eq!(grp.mul(grp.mul(g, h), k), grp.mul(g, grp.mul(h, k)));
        prop_assert_eq!(grp.mul(g, grp.inv(g)), GroupElement::IDENTITY);
        prop_assert_eq!(grp.mul(GroupElement::IDENTITY, g), g);
        // commutators are central
        let c = grp.commutator(g, h);
        prop_assert!(c.x.is_zero());
        prop_assert_eq!(grp.conjugate(c, k), c);
    }

    #[test]
    fn classes_are_conjugation_invariant((n, g, h, _k) in elements()) {
        let grp = group(n);
        prop_assert_eq!(grp.class_index(grp.conjugate(g, h)), grp.class_index(g));
        prop_assert_eq!(grp.element_at(grp.index_of(g)), g);
    }

    #[test]
    fn psi_is_an_automorphism((n, g, h, k) in elements()) {
        let grp = group(n);
        prop_assume!(!k.x.is_zero());
        let gamma = k.x;
        let psi = |e| grp.aut_psi(gamma, e).unwrap();
        prop_assert_eq!(psi(grp.mul(g, h)), grp.mul(psi(g), psi(h)));
    }

    #[test]
    fn pi_is_a_homomorphism((n, g, h, _k) in elements().prop_filter("n <= 5", |t| t.0 <= 5)) {
        let grp = group(n);
        let rep = RepContext::new(grp).unwrap();
        prop_assert_eq!(rep.rep_pi(grp.mul(g, h)), rep.rep_pi(g).mul(&rep.rep_pi(h)));
        prop_assert_eq!(rep.rep_pi(g).mul(&rep.rep_pi(grp.inv(g))), Monomial::identity(rep.dim()));
        let member = rep.family_member(FieldElement::ONE + FieldElement(2)).unwrap();
        prop_assert_eq!(member.eval(grp.mul(g, h)), member.eval(g).mul(&member.eval(h)));
    }
}
