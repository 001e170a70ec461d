use getzler_core::getzler::{coupling_term, getzler_product, oscillator_apply};
use getzler_core::random::{self, SymbolShape};
use getzler_core::rational::{self, frac, int};
use getzler_core::taylor::taylor_product;
use getzler_core::{CurvatureModel, FormElement, GaussSymbol, TaylorSymbol, Q};
use proptest::prelude::*;

/// `exp(−½ K)` with `K = Σ κᵢⱼ ∂_{ξᵢ} ⊗ ∂_{ηⱼ}` applied to `a ⊗ b` one factor
/// of `K` at a time, then restricted to the diagonal.
fn doubled_variable_product(a: &GaussSymbol, b: &GaussSymbol, m: &CurvatureModel) -> GaussSymbol {
    let n = m.n();
    let mut layer = vec![(FormElement::one(n), a.clone(), b.clone())];
    let mut out = GaussSymbol::zero(n);
    let mut weight = Q::from_integer(1.into());
    let mut r = 0i64;
    while !layer.is_empty() {
        for (f, x, y) in &layer {
            let term = x.mul(y).unwrap().scale_form(f).unwrap().scale(&weight);
            out = out.add(&term).unwrap();
        }
        r += 1;
        weight = weight * frac(-1, 2) / int(r);
        let mut next = Vec::new();
        for (f, x, y) in &layer {
            for i in 1..=n {
                for j in 1..=n {
                    let k = m.kappa(i, j);
                    if k.is_zero() {
                        continue;
                    }
                    let g = f.wedge(k).unwrap();
                    let dx = x.partial_xi(i).unwrap();
                    let dy = y.partial_xi(j).unwrap();
                    if g.is_zero() || dx.is_zero() || dy.is_zero() {
                        continue;
                    }
                    next.push((g, dx, dy));
                }
            }
        }
        layer = next;
    }
    out
}

fn shape_for(n: usize) -> SymbolShape {
    if n == 6 {
        SymbolShape {
            max_terms: 2,
            max_form_terms: 1,
            ..SymbolShape::small()
        }
    } else {
        SymbolShape::small()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_matches_doubled_variable_oracle(seed in any::<u64>(), half in 1usize..=3) {
        let n = 2 * half;
        let mut r = random::rng(seed);
        let m = random::model(&mut r, n, 0.4);
        let shape = shape_for(n);
        let a = random::symbol(&mut r, n, &shape);
        let b = random::symbol(&mut r, n, &shape);
        prop_assert_eq!(getzler_product(&a, &b, &m).unwrap(), doubled_variable_product(&a, &b, &m));
    }

    #[test]
    fn product_is_associative_with_unit(seed in any::<u64>(), half in 1usize..=3) {
        let n = 2 * half;
        let mut r = random::rng(seed);
        let m = random::model(&mut r, n, 0.4);
        let shape = shape_for(n);
        let a = random::symbol(&mut r, n, &shape);
        let b = random::symbol(&mut r, n, &shape);
        let c = random::symbol(&mut r, n, &shape);
        let ab = getzler_product(&a, &b, &m).unwrap();
        let bc = getzler_product(&b, &c, &m).unwrap();
        prop_assert_eq!(getzler_product(&ab, &c, &m).unwrap(), getzler_product(&a, &bc, &m).unwrap());
        let one = GaussSymbol::one(n);
        prop_assert_eq!(getzler_product(&one, &a, &m).unwrap(), a.clone());
        prop_assert_eq!(getzler_product(&a, &one, &m).unwrap(), a);
    }

    #[test]
    fn coupling_terms_beyond_half_dimension_vanish(seed in any::<u64>(), half in 1usize..=3) {
        let n = 2 * half;
        let mut r = random::rng(seed);
        let m = random::model(&mut r, n, 1.0);
        let shape = shape_for(n);
        let a = random::symbol(&mut r, n, &shape);
        let b = random::symbol(&mut r, n, &shape);
        prop_assert!(coupling_term(&a, &b, &m, half + 1).unwrap().is_zero());
    }

    #[test]
    fn oscillator_is_minus_product_with_dirac_leading_symbol(seed in any::<u64>(), half in 1usize..=2) {
        let n = 2 * half;
        let mut r = random::rng(seed);
        let m = random::model(&mut r, n, 0.6);
        let a = random::symbol(&mut r, n, &SymbolShape::small());
        let lead = GaussSymbol::norm_sq(n).neg();
        prop_assert_eq!(oscillator_apply(&a, &m).unwrap(), getzler_product(&lead, &a, &m).unwrap().neg());
    }

    #[test]
    fn taylor_product_matches_power_series(seed in any::<u64>(), half in 1usize..=2, k in 0usize..=4) {
        let n = 2 * half;
        let mut r = random::rng(seed);
        let m = random::model(&mut r, n, 0.5);
        let a = random::taylor_symbol(&mut r, n, k, &SymbolShape::small());
        let b = random::taylor_symbol(&mut r, n, k, &SymbolShape::small());
        // Σ (aᵢ/i!) tⁱ · Σ (bⱼ/j!) tʲ, coefficient of tᵐ times m!
        let mut expected = Vec::new();
        for deg in 0..=k {
            let mut acc = GaussSymbol::zero(n);
            for i in 0..=deg {
                let x = a.coeff(i).scale(&rational::factorial(i).recip());
                let y = b.coeff(deg - i).scale(&rational::factorial(deg - i).recip());
                acc = acc.add(&doubled_variable_product(&x, &y, &m)).unwrap();
            }
            expected.push(acc.scale(&rational::factorial(deg)));
        }
        let expected = TaylorSymbol::new(n, 0, expected).unwrap();
        prop_assert_eq!(taylor_product(&a, &b, &m).unwrap(), expected);
    }

    #[test]
    fn taylor_product_is_associative(seed in any::<u64>(), k in 0usize..=3) {
        let mut r = random::rng(seed);
        let m = random::model(&mut r, 4, 0.5);
        let shape = SymbolShape { max_terms: 2, ..SymbolShape::small() };
        let a = random::taylor_symbol(&mut r, 4, k, &shape);
        let b = random::taylor_symbol(&mut r, 4, k, &shape);
        let c = random::taylor_symbol(&mut r, 4, k, &shape);
        let left = taylor_product(&taylor_product(&a, &b, &m).unwrap(), &c, &m).unwrap();
        let right = taylor_product(&a, &taylor_product(&b, &c, &m).unwrap(), &m).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn theta_model_example_against_oracle() {
    let theta = frac(3, 7);
    let e12 = FormElement::monomial(2, theta.clone(), &[1, 2]).unwrap();
    let m = CurvatureModel::build(
        2,
        int(0),
        &[getzler_core::getzler::KappaEntry::new(1, 2, e12)],
    )
    .unwrap();
    let x1 = GaussSymbol::xi(2, 1).unwrap();
    let x2 = GaussSymbol::xi(2, 2).unwrap();
    let p = getzler_product(&x1, &x2, &m).unwrap();
    assert_eq!(p, doubled_variable_product(&x1, &x2, &m));
    let expected = x1
        .mul(&x2)
        .unwrap()
        .add(&GaussSymbol::constant(
            FormElement::monomial(2, -theta / int(2), &[1, 2]).unwrap(),
        ))
        .unwrap();
    assert_eq!(p, expected);
}
