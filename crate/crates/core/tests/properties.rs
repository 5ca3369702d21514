//! Property-based invariants: format round trips, algebraic symmetry laws
//! and norm homogeneity over randomized inputs.

use proptest::prelude::*;

use hodge_forms::exterior::{wedge_basis, FormIndex};
use hodge_forms::grid::{random_form, GridSpec};
use hodge_forms::poly::{random_polyform, PolyForm};
use hodge_forms::rng::SplitMix64;

fn index_from_mask(n: usize, mask: u8) -> FormIndex {
    let axes: Vec<usize> = (0..n).filter(|&a| mask & (1 << a) != 0).collect();
    FormIndex::new(n, &axes).unwrap()
}

proptest! {
    /// Printing then parsing a polynomial form is the identity, bit for bit.
    #[test]
    fn text_format_roundtrip(seed in any::<u64>(), n in 1usize..=4, k in 0usize..=4) {
        let k = k.min(n);
        let form = random_polyform(&mut SplitMix64::new(seed), n, k, 6, 4);
        let text = form.to_text();
        let back = PolyForm::parse_text(&text).expect("own output must parse");
        prop_assert_eq!(form, back);
    }

    /// The parser rejects or accepts arbitrary input without panicking.
    #[test]
    fn parser_never_panics(input in "\\PC{0,120}") {
        let _ = PolyForm::parse_text(&input);
    }

    /// Graded antisymmetry of the basis wedge: a∧b = (−1)^{|a||b|} b∧a.
    #[test]
    fn wedge_graded_antisymmetry(a_mask in 0u8..32, b_mask in 0u8..32) {
        let n = 5;
        let a = index_from_mask(n, a_mask);
        let b = index_from_mask(n, b_mask);
        let ab = wedge_basis(&a, &b).unwrap();
        let ba = wedge_basis(&b, &a).unwrap();
        let sign = if (a.degree() * b.degree()) % 2 == 0 { 1 } else { -1 };
        match (ab.into_parts(), ba.into_parts()) {
            (None, None) => {}
            (Some((sa, ia)), Some((sb, ib))) => {
                prop_assert_eq!(ia, ib);
                prop_assert_eq!(sa, sign * sb);
            }
            other => prop_assert!(false, "one-sided wedge: {:?}", other),
        }
    }

    /// ‖c·f‖_p = |c|·‖f‖_p for every p ≥ 1.
    #[test]
    fn lp_norm_homogeneity(seed in any::<u64>(), c in -8.0f64..8.0, p in 1.0f64..5.0) {
        let spec = GridSpec::new(2, 8, 3.0).unwrap();
        let f = random_form(&mut SplitMix64::new(seed), spec, 1);
        let lhs = f.scale(c).lp_norm(p).unwrap();
        let rhs = c.abs() * f.lp_norm(p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
    }
}
