use grassmann_core::complex::{c_inv, ComplexValue};
use grassmann_core::exterior::{anticommutator_g, grade_decompose, GrassmannElement, Monomial};
use grassmann_core::matrix::{
    build_nilpotent, phi, phi_inv_within, proportionality_witness_within,
};
use grassmann_core::moyal::{build_kernel, moyal_expand, moyal_star, MultiPoly, StarKernel};
use grassmann_core::star::{omega_within, star, star_commutator, OddFunctionSpec, ThetaLabel};
use grassmann_core::{Mat2, Tolerance};
use proptest::prelude::*;

fn int_complex() -> impl Strategy<Value = ComplexValue> {
    (-20i64..=20, -20i64..=20).prop_map(|(a, b)| ComplexValue::from_ints(a, b))
}

fn float_complex() -> impl Strategy<Value = ComplexValue> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| ComplexValue::new(a, b).unwrap())
}

fn monomial(max_gen: u32) -> impl Strategy<Value = Monomial> {
    proptest::collection::btree_set(1..=max_gen, 0..=max_gen as usize)
        .prop_map(|s| Monomial::from_indices(s.into_iter().collect()).unwrap())
}

fn element(max_gen: u32) -> impl Strategy<Value = GrassmannElement> {
    proptest::collection::vec((monomial(max_gen), int_complex()), 0..6)
        .prop_map(GrassmannElement::from_terms)
}

fn homogeneous(max_gen: u32, grade: usize) -> impl Strategy<Value = GrassmannElement> {
    proptest::collection::vec(
        (
            proptest::sample::subsequence((1..=max_gen).collect::<Vec<_>>(), grade),
            int_complex(),
        ),
        0..5,
    )
    .prop_map(|ts| {
        GrassmannElement::from_terms(
            ts.into_iter()
                .map(|(ix, c)| (Monomial::from_indices(ix).unwrap(), c)),
        )
    })
}

fn odd_element(max_gen: u32) -> impl Strategy<Value = GrassmannElement> {
    proptest::collection::vec((monomial(max_gen), int_complex()), 0..8).prop_map(|ts| {
        GrassmannElement::from_terms(ts.into_iter().filter(|(m, _)| m.grade() % 2 == 1))
    })
}

fn poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(
        (
            proptest::collection::vec(0u32..=2, nvars),
            -5i64..=5,
            -5i64..=5,
        ),
        1..5,
    )
    .prop_map(move |ts| {
        MultiPoly::from_terms(
            nvars,
            ts.into_iter()
                .map(|(e, re, im)| (e, ComplexValue::from_ints(re, im))),
        )
        .unwrap()
    })
}

fn registry_fn() -> impl Strategy<Value = OddFunctionSpec> {
    proptest::sample::select(OddFunctionSpec::registry())
}

// Complex field
// -------------

proptest! {
    #[test]
    fn complex_ring_laws_exact_on_integers(x in int_complex(), y in int_complex(), z in int_complex()) {
        prop_assert_eq!((x + y) + z, x + (y + z));
        prop_assert_eq!((x * y) * z, x * (y * z));
        prop_assert_eq!(x * y, y * x);
        prop_assert_eq!(x * (y + z), x * y + x * z);
    }

    #[test]
    fn complex_inverse(x in float_complex()) {
        prop_assume!(!x.is_zero_within(Tolerance::default()));
        let one = x * c_inv(x).unwrap();
        prop_assert!(one.approx_eq(ComplexValue::ONE, Tolerance::new(1e-9).unwrap()));
    }
}

// Matrix representation
// ---------------------

proptest! {
    #[test]
    fn phi_determinant_is_squared_modulus(z in int_complex()) {
        prop_assert_eq!(phi(z).to_mat2().det(), z.re * z.re + z.im * z.im);
    }

    #[test]
    fn phi_is_a_bijection_onto_its_image(z in float_complex()) {
        prop_assert_eq!(phi_inv_within(phi(z).to_mat2(), Tolerance::EXACT).unwrap(), z);
        let m = phi(z).to_mat2();
        let back = phi(phi_inv_within(m, Tolerance::EXACT).unwrap()).to_mat2();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn phi_preserves_operations_exactly_on_integers(x in int_complex(), y in int_complex()) {
        prop_assert_eq!(phi(x + y).to_mat2(), phi(x).to_mat2() + phi(y).to_mat2());
        prop_assert_eq!(phi(x * y).to_mat2(), phi(x).to_mat2() * phi(y).to_mat2());
    }

    #[test]
    fn nilpotent_family_squares_to_zero(a in -50i64..=50, b in -50i64..=50) {
        let n = build_nilpotent(a as f64, b as f64).to_mat2();
        prop_assert_eq!(n * n, Mat2::ZERO);
        prop_assert_eq!(n.trace(), 0.0);
        prop_assert_eq!(n.det(), 0.0);
    }

    #[test]
    fn witness_exists_exactly_when_ad_eq_bc(
        a in prop_oneof![-6i64..=-1, 1i64..=6],
        b in prop_oneof![-6i64..=-1, 1i64..=6],
        c in -6i64..=6,
        d in -6i64..=6,
    ) {
        let n1 = build_nilpotent(a as f64, b as f64);
        let n2 = build_nilpotent(c as f64, d as f64);
        let w = proportionality_witness_within(n1, n2, Tolerance::EXACT).unwrap();
        prop_assert_eq!(w.is_some(), a * d == b * c);
        if let Some(lambda) = w {
            let scaled = n1.to_mat2().scale(lambda);
            prop_assert!(scaled.approx_eq(n2.to_mat2(), Tolerance::new(1e-12).unwrap()));
        }
    }
}

// Exterior algebra
// ----------------

proptest! {
    #[test]
    fn exterior_product_is_associative(x in element(5), y in element(5), z in element(5)) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn exterior_product_is_bilinear(x in element(5), y in element(5), z in element(5)) {
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
    }

    #[test]
    fn graded_sign_rule(
        (p, q, x, y) in (0usize..=3, 0usize..=3).prop_flat_map(|(p, q)| {
            (Just(p), Just(q), homogeneous(6, p), homogeneous(6, q))
        })
    ) {
        let sign = if (p * q) % 2 == 1 { -ComplexValue::ONE } else { ComplexValue::ONE };
        prop_assert_eq!(&x * &y, (&y * &x).scale(sign));
    }

    #[test]
    fn odd_elements_square_to_zero_and_anticommute(x in odd_element(6), y in odd_element(6)) {
        prop_assert!((&x * &x).is_zero());
        prop_assert!(anticommutator_g(&x, &y).is_zero());
    }

    #[test]
    fn grade_parts_sum_back(x in element(6)) {
        let parts = grade_decompose(&x);
        let sum = parts.values().fold(GrassmannElement::zero(), |a, p| &a + p);
        prop_assert_eq!(sum, x);
        for (g, part) in parts {
            prop_assert_eq!(part.is_homogeneous(), Some(g));
        }
    }

    #[test]
    fn grassmann_json_round_trip(x in element(6)) {
        let js = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<GrassmannElement>(&js).unwrap(), x);
    }
}

// Star groupoid
// -------------

proptest! {
    #[test]
    fn star_anticommutes(f in registry_fn(), z1 in float_complex(), z2 in float_complex()) {
        let (t1, t2) = (ThetaLabel::new(z1), ThetaLabel::new(z2));
        prop_assert_eq!(star(&f, t1, t2) + star(&f, t2, t1), ComplexValue::ZERO);
        prop_assert_eq!(star(&f, t1, t1), ComplexValue::ZERO);
        let twice = f.eval(z1 - z2).scale(2.0);
        prop_assert!(star_commutator(&f, t1, t2).approx_eq(twice, Tolerance::default()));
    }

    #[test]
    fn omega_is_antisymmetric(f in registry_fn(), pts in proptest::collection::vec(float_complex(), 1..5)) {
        let w = omega_within(&f, &pts, Tolerance::default()).unwrap();
        for i in 0..pts.len() {
            prop_assert_eq!(w.get(i, i), ComplexValue::ZERO);
            for j in 0..pts.len() {
                prop_assert_eq!(w.get(i, j) + w.get(j, i), ComplexValue::ZERO);
            }
        }
    }
}

// Moyal product
// -------------

fn int_kernel3() -> impl Strategy<Value = StarKernel> {
    proptest::collection::vec(-3i64..=3, 3).prop_map(|p| {
        let pts: Vec<ComplexValue> = p
            .into_iter()
            .map(|v| ComplexValue::from_ints(v, 0))
            .collect();
        build_kernel(&OddFunctionSpec::Identity, &pts).unwrap()
    })
}

proptest! {
    #[test]
    fn moyal_zero_kernel_is_ordinary_product(f in poly(3), g in poly(3)) {
        prop_assert_eq!(moyal_star(&f, &g, &StarKernel::zero(3)).unwrap(), &f * &g);
    }

    #[test]
    fn moyal_is_bilinear(f in poly(3), g in poly(3), h in poly(3), k in int_kernel3()) {
        let left = moyal_star(&(&f + &g), &h, &k).unwrap();
        prop_assert_eq!(left, &moyal_star(&f, &h, &k).unwrap() + &moyal_star(&g, &h, &k).unwrap());
        let right = moyal_star(&f, &(&g + &h), &k).unwrap();
        prop_assert_eq!(right, &moyal_star(&f, &g, &k).unwrap() + &moyal_star(&f, &h, &k).unwrap());
    }

    #[test]
    fn moyal_is_associative(f in poly(3), g in poly(3), h in poly(3), k in int_kernel3()) {
        let left = moyal_star(&moyal_star(&f, &g, &k).unwrap(), &h, &k).unwrap();
        let right = moyal_star(&f, &moyal_star(&g, &h, &k).unwrap(), &k).unwrap();
        prop_assert!(left.deviation(&right) <= 1e-9);
    }

    #[test]
    fn moyal_series_terminates(f in poly(3), g in poly(3), k in int_kernel3()) {
        let e = moyal_expand(&f, &g, &k).unwrap();
        prop_assert!(e.orders.len() - 1 <= f.degree().min(g.degree()) as usize);
    }

    #[test]
    fn multipoly_json_round_trip(f in poly(3)) {
        let js = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<MultiPoly>(&js).unwrap(), f);
    }
}
