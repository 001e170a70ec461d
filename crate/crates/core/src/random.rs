//! Seeded generators for property checks.
//!
//! Everything is driven by a ChaCha stream so a seed reproduces the same
//! inputs on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::FormElement;
use crate::getzler::{CurvatureModel, KappaEntry};
use crate::rational::{self, Q};
use crate::symbolic::{GaussSymbol, Monomial};
use crate::taylor::TaylorSymbol;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ max_num` and `1 ≤ q ≤ max_den`.
pub fn rational(rng: &mut TestRng, max_num: i64, max_den: i64) -> Q {
    let p = rng.gen_range(-max_num..=max_num);
    let q = rng.gen_range(1..=max_den);
    rational::frac(p, q)
}

/// Nonzero `p/q`.
pub fn nonzero_rational(rng: &mut TestRng, max_num: i64, max_den: i64) -> Q {
    loop {
        let v = rational(rng, max_num, max_den);
        if v != rational::int(0) {
            return v;
        }
    }
}

fn random_blade(rng: &mut TestRng, n: usize, degree: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (1..=n).collect();
    idx.shuffle(rng);
    idx.truncate(degree);
    idx
}

/// A form with up to `max_terms` terms; degrees restricted to even ones when
/// `even_only` is set.
pub fn form(rng: &mut TestRng, n: usize, max_terms: usize, even_only: bool) -> FormElement {
    let mut out = FormElement::zero(n);
    let count = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..count {
        let degree = loop {
            let d = rng.gen_range(0..=n);
            if !even_only || d % 2 == 0 {
                break d;
            }
        };
        let idx = random_blade(rng, n, degree);
        let c = nonzero_rational(rng, 3, 3);
        out = out
            .add(&FormElement::monomial(n, c, &idx).expect("valid indices"))
            .expect("same dimension");
    }
    out
}

/// A homogeneous 2-form with up to `max_terms` terms.
pub fn two_form(rng: &mut TestRng, n: usize, max_terms: usize) -> FormElement {
    let mut out = FormElement::zero(n);
    while out.is_zero() {
        for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
            let idx = random_blade(rng, n, 2);
            let c = nonzero_rational(rng, 3, 2);
            out = out
                .add(&FormElement::monomial(n, c, &idx).expect("valid indices"))
                .expect("same dimension");
        }
    }
    out
}

/// Shape of random symbols.
#[derive(Clone, Debug)]
pub struct SymbolShape {
    pub max_terms: usize,
    pub max_xi_degree: u32,
    pub max_tau_degree: u32,
    /// Gaussian weights to draw strata from.
    pub weights: Vec<Q>,
    pub even_forms: bool,
    pub max_form_terms: usize,
}

impl SymbolShape {
    /// Small mixed polynomial/Gaussian symbols.
    pub fn small() -> Self {
        SymbolShape {
            max_terms: 3,
            max_xi_degree: 2,
            max_tau_degree: 1,
            weights: vec![rational::int(0), rational::frac(1, 2), rational::int(1)],
            even_forms: false,
            max_form_terms: 2,
        }
    }

    /// Polynomial symbols only (`q = 0`).
    pub fn polynomial() -> Self {
        SymbolShape {
            weights: vec![rational::int(0)],
            ..Self::small()
        }
    }
}

pub fn symbol(rng: &mut TestRng, n: usize, shape: &SymbolShape) -> GaussSymbol {
    let mut out = GaussSymbol::zero(n);
    for _ in 0..rng.gen_range(1..=shape.max_terms.max(1)) {
        let q = shape
            .weights
            .choose(rng)
            .cloned()
            .unwrap_or_else(|| rational::int(0));
        let mut xi = vec![0u32; n];
        let total = rng.gen_range(0..=shape.max_xi_degree);
        for _ in 0..total {
            xi[rng.gen_range(0..n)] += 1;
        }
        let tau = rng.gen_range(0..=shape.max_tau_degree);
        let f = form(rng, n, shape.max_form_terms, shape.even_forms);
        let t = GaussSymbol::monomial(n, q, Monomial::new(xi, tau), f).expect("valid term");
        out = out.add(&t).expect("same dimension");
    }
    out
}

pub fn taylor_symbol(
    rng: &mut TestRng,
    n: usize,
    truncation: usize,
    shape: &SymbolShape,
) -> TaylorSymbol {
    let coeffs = (0..=truncation)
        .map(|_| {
            if rng.gen_bool(0.2) {
                GaussSymbol::zero(n)
            } else {
                symbol(rng, n, shape)
            }
        })
        .collect();
    TaylorSymbol::new(n, 0, coeffs).expect("nonempty")
}

/// A curvature model whose upper entries are each present with probability
/// `density`, carrying 2-forms of up to two terms.
pub fn model(rng: &mut TestRng, n: usize, density: f64) -> CurvatureModel {
    let mut entries = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(density) {
                entries.push(KappaEntry::new(i, j, two_form(rng, n, 2)));
            }
        }
    }
    let s = rational(rng, 5, 3);
    CurvatureModel::build(n, s, &entries).expect("valid model")
}

/// The `n = 4` block-diagonal model `κ₁₂ = θ w`, `κ₃₄ = θ′ w` with
/// `w = e₁∧e₂ + e₃∧e₄`.
pub fn block_model(theta: Q, theta_prime: Q, s: Q) -> CurvatureModel {
    let w = FormElement::monomial(4, rational::int(1), &[1, 2])
        .and_then(|a| a.add(&FormElement::monomial(4, rational::int(1), &[3, 4])?))
        .expect("n = 4");
    CurvatureModel::build(
        4,
        s,
        &[
            KappaEntry::new(1, 2, w.scale(&theta)),
            KappaEntry::new(3, 4, w.scale(&theta_prime)),
        ],
    )
    .expect("valid block model")
}
