//! Acceptance criteria 1–10, one PASS/FAIL line each. Exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;

use getzler_core::borel::BorelSpec;
use getzler_core::getzler::{coupling_term, getzler_product};
use getzler_core::heat::{expected_source_factor, heat_residual, solve_expansion};
use getzler_core::index::{mckean_singer_check, supertrace_heat};
use getzler_core::random::{self, SymbolShape};
use getzler_core::rational::{self, frac, int};
use getzler_core::symbolic::HalfInt;
use getzler_core::taylor::taylor_product;
use getzler_core::{CurvatureModel, FormElement, GaussSymbol, TaylorSymbol, Q};

const SEED: u64 = 20_241_018;
const PRODUCT_TRIPLES: usize = 100;
const TAYLOR_PAIRS: usize = 100;
const HEAT_MODELS: usize = 12;
const PRODUCT_BUDGET: Duration = Duration::from_secs(30);
const HEAT_BUDGET: Duration = Duration::from_secs(60);
const BOREL_TOLERANCE: f64 = 1e-4;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            passed,
            detail: detail.into(),
        }
    }
}

/// Brute-force `a #₀ b`: repeated application of `κ(∂_ξ, ∂_η)` on `a ⊗ b`.
fn oracle_product(a: &GaussSymbol, b: &GaussSymbol, m: &CurvatureModel) -> GaussSymbol {
    let n = m.n();
    let mut layer = vec![(FormElement::one(n), a.clone(), b.clone())];
    let mut out = GaussSymbol::zero(n);
    let mut weight = int(1);
    let mut r = 0i64;
    while !layer.is_empty() {
        for (f, x, y) in &layer {
            out = out
                .add(&x.mul(y).unwrap().scale_form(f).unwrap().scale(&weight))
                .unwrap();
        }
        r += 1;
        weight = weight * frac(-1, 2) / int(r);
        let mut next = Vec::new();
        for (f, x, y) in &layer {
            for i in 1..=n {
                for j in 1..=n {
                    let g = f.wedge(m.kappa(i, j)).unwrap();
                    let (dx, dy) = (x.partial_xi(i).unwrap(), y.partial_xi(j).unwrap());
                    if !(g.is_zero() || dx.is_zero() || dy.is_zero()) {
                        next.push((g, dx, dy));
                    }
                }
            }
        }
        layer = next;
    }
    out
}

fn product_shape(n: usize) -> SymbolShape {
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

fn criterion_1_and_2() -> (Verdict, Verdict) {
    let start = Instant::now();
    let mut rng = random::rng(SEED);
    let mut failures: Vec<String> = Vec::new();
    let mut coupling_failures: Vec<String> = Vec::new();
    let mut coupling_checks = 0usize;
    for n in [2usize, 4, 6] {
        let shape = product_shape(n);
        for case in 0..PRODUCT_TRIPLES {
            let m = random::model(&mut rng, n, 0.4);
            let a = random::symbol(&mut rng, n, &shape);
            let b = random::symbol(&mut rng, n, &shape);
            let c = random::symbol(&mut rng, n, &shape);
            let p = |x: &GaussSymbol, y: &GaussSymbol| getzler_product(x, y, &m).unwrap();
            if p(&p(&a, &b), &c) != p(&a, &p(&b, &c)) {
                failures.push(format!("associativity n={n} case {case}"));
            }
            let lam = random::rational(&mut rng, 3, 3);
            if p(&a.scale(&lam).add(&b).unwrap(), &c)
                != p(&a, &c).scale(&lam).add(&p(&b, &c)).unwrap()
                || p(&c, &a.scale(&lam).add(&b).unwrap())
                    != p(&c, &a).scale(&lam).add(&p(&c, &b)).unwrap()
            {
                failures.push(format!("bilinearity n={n} case {case}"));
            }
            let one = GaussSymbol::one(n);
            if p(&one, &a) != a || p(&a, &one) != a {
                failures.push(format!("unit n={n} case {case}"));
            }
            let flat = CurvatureModel::flat(n, int(0)).unwrap();
            if getzler_product(&a, &b, &flat).unwrap() != a.mul(&b).unwrap() {
                failures.push(format!("flat reduction n={n} case {case}"));
            }
            for r in n / 2 + 1..=n {
                coupling_checks += 1;
                if !coupling_term(&a, &b, &m, r).unwrap().is_zero() {
                    coupling_failures.push(format!("r={r} n={n} case {case}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let mut detail = format!(
        "{} triples per n in {{2,4,6}}, {:.2} s (budget {} s)",
        PRODUCT_TRIPLES,
        elapsed.as_secs_f64(),
        PRODUCT_BUDGET.as_secs()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first failure: {f}"));
    }
    let c1 = Verdict::new(failures.is_empty() && elapsed < PRODUCT_BUDGET, detail);
    let mut detail2 = format!("{coupling_checks} coupling terms with r > n/2 checked");
    if let Some(f) = coupling_failures.first() {
        detail2.push_str(&format!("; nonzero at {f}"));
    }
    (c1, Verdict::new(coupling_failures.is_empty(), detail2))
}

fn criterion_3() -> Verdict {
    let mut rng = random::rng(SEED + 3);
    let mut failures = Vec::new();
    for case in 0..TAYLOR_PAIRS {
        let n = if case % 2 == 0 { 2 } else { 4 };
        let k = case % 5;
        let m = random::model(&mut rng, n, 0.5);
        let a = random::taylor_symbol(&mut rng, n, k, &SymbolShape::small());
        let b = random::taylor_symbol(&mut rng, n, k, &SymbolShape::small());
        let mut expected = Vec::new();
        for deg in 0..=k {
            let mut acc = GaussSymbol::zero(n);
            for i in 0..=deg {
                let x = a.coeff(i).scale(&rational::factorial(i).recip());
                let y = b
                    .coeff(deg - i)
                    .scale(&rational::factorial(deg - i).recip());
                acc = acc.add(&oracle_product(&x, &y, &m)).unwrap();
            }
            expected.push(acc.scale(&rational::factorial(deg)));
        }
        let expected = TaylorSymbol::new(n, 0, expected).unwrap();
        if taylor_product(&a, &b, &m).unwrap() != expected {
            failures.push(case);
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("{TAYLOR_PAIRS} pairs, K ≤ 4, n ≤ 4, mismatches: {failures:?}"),
    )
}

fn criterion_4() -> Verdict {
    let mut ok = true;
    for n in [2usize, 4] {
        let h = solve_expansion(&CurvatureModel::flat(n, int(0)).unwrap(), 6).unwrap();
        ok &= h.expansion.coeff(0) == GaussSymbol::gaussian(n, int(1)).unwrap();
        ok &= h.expansion.coeffs()[1..].iter().all(|c| c.is_zero());
    }
    Verdict::new(ok, "κ = 0, s = 0, K = 6, n in {2,4}")
}

fn heat_models() -> Vec<CurvatureModel> {
    let mut rng = random::rng(SEED + 5);
    let mut models: Vec<CurvatureModel> = (0..HEAT_MODELS)
        .map(|i| {
            let n = if i % 2 == 0 { 2 } else { 4 };
            random::model(&mut rng, n, 0.7)
        })
        .collect();
    models.push(random::block_model(frac(3, 2), frac(-2, 5), frac(7, 3)));
    models
}

fn criterion_5_and_6() -> (Verdict, Verdict) {
    let start = Instant::now();
    let models = heat_models();
    let mut residual_failures = Vec::new();
    let mut initial_failures = Vec::new();
    for (i, m) in models.iter().enumerate() {
        let h = solve_expansion(m, 6).unwrap();
        if !heat_residual(&h.expansion, m).unwrap().is_zero() {
            residual_failures.push(i);
        }
        let n = m.n();
        let at0: Vec<GaussSymbol> = h
            .expansion
            .coeffs()
            .iter()
            .map(|c| c.at_tau_zero())
            .collect();
        if at0[0] != GaussSymbol::one(n) || at0[1..].iter().any(|c| !c.is_zero()) {
            initial_failures.push(i);
        }
    }
    let elapsed = start.elapsed();
    (
        Verdict::new(
            residual_failures.is_empty() && elapsed < HEAT_BUDGET,
            format!(
                "{} models, K = 6, {:.2} s (budget {} s), nonzero residuals: {:?}",
                models.len(),
                elapsed.as_secs_f64(),
                HEAT_BUDGET.as_secs(),
                residual_failures
            ),
        ),
        Verdict::new(
            initial_failures.is_empty(),
            format!("{} models, failures: {:?}", models.len(), initial_failures),
        ),
    )
}

fn four_dimensional_models() -> Vec<CurvatureModel> {
    let mut rng = random::rng(SEED + 7);
    let mut models: Vec<CurvatureModel> = (0..8).map(|_| random::model(&mut rng, 4, 0.7)).collect();
    for theta in [frac(1, 2), int(1), int(2)] {
        models.push(random::block_model(theta.clone(), frac(1, 3), int(0)));
        models.push(random::block_model(theta, int(0), int(1)));
    }
    models
}

fn criterion_7() -> Verdict {
    let samples = [frac(1, 2), int(1), int(2)];
    let models = four_dimensional_models();
    let mut failures = Vec::new();
    for (i, m) in models.iter().enumerate() {
        let r = supertrace_heat(&solve_expansion(m, 0).unwrap()).unwrap();
        let leading = &r.per_order[0];
        let single = leading.is_zero()
            || (leading.terms().len() == 1 && leading.terms().contains_key(&HalfInt::ZERO));
        let ms = mckean_singer_check(m, 0, &samples).unwrap();
        if !single || !ms.consistent {
            failures.push(i);
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!(
            "{} models, τ ∈ {{1/2, 1, 2}}, failures: {:?}",
            models.len(),
            failures
        ),
    )
}

fn ratio(theta: &Q, theta_prime: &Q) -> Option<Q> {
    let m = random::block_model(theta.clone(), theta_prime.clone(), int(0));
    supertrace_heat(&solve_expansion(&m, 0).ok()?)
        .ok()?
        .match_ratio
}

fn criterion_8() -> Verdict {
    let thetas = [frac(1, 3), frac(1, 2), int(1), int(2), int(-3)];
    let mut one_param = Vec::new();
    for t in &thetas {
        one_param.push(ratio(t, &int(0)));
    }
    let mut two_param = Vec::new();
    for t in &thetas {
        for tp in [frac(-1, 2), int(1), frac(5, 4)] {
            two_param.push(ratio(t, &tp));
        }
    }
    let all: Vec<Option<Q>> = one_param.iter().chain(&two_param).cloned().collect();
    let constant = all[0].clone();
    let passed = constant.is_some() && all.iter().all(|r| *r == constant);
    let shown = constant
        .map(|c| rational::format(&c))
        .unwrap_or_else(|| "undefined".into());
    Verdict::new(
        passed,
        format!(
            "{} one-parameter and {} two-parameter models, recorded constant c = {}",
            one_param.len(),
            two_param.len(),
            shown
        ),
    )
}

fn criterion_9() -> Verdict {
    let mut rng = random::rng(SEED + 9);
    let shape = SymbolShape {
        weights: vec![int(0), int(1)],
        ..SymbolShape::small()
    };
    let mut worst = [0.0f64; 3];
    let mut count_mismatch = 0usize;
    let sets = 20;
    for _ in 0..sets {
        let n = 2;
        let coeffs: Vec<GaussSymbol> = (0..=3)
            .map(|_| random::symbol(&mut rng, n, &shape))
            .collect();
        let spec = BorelSpec::build(coeffs, None).unwrap();
        let points: Vec<Vec<f64>> = (0..4)
            .map(|i| vec![0.5 * i as f64 - 0.7, 0.3 * i as f64])
            .collect();
        for (k, w) in worst.iter_mut().enumerate() {
            let r = spec.taylor_check(k, &points, None).unwrap();
            *w = w.max(r.max_rel_error);
        }
        for xi in &points {
            for t in [1e-3, 1e-2, 0.05, 0.2, 0.5, 1.0, 3.0] {
                if spec.active_terms(xi, t).unwrap() != spec.predicted_active_terms(xi, t).unwrap()
                {
                    count_mismatch += 1;
                }
            }
        }
    }
    let passed = worst[0] == 0.0
        && worst[1] < BOREL_TOLERANCE
        && worst[2] < BOREL_TOLERANCE
        && count_mismatch == 0;
    Verdict::new(
        passed,
        format!(
            "{sets} coefficient sets, max rel. error a₀ {:.1e}, a₁ {:.1e}, a₂ {:.1e} (tol {BOREL_TOLERANCE:.0e}), count mismatches {count_mismatch}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn criterion_10() -> Verdict {
    let mut ok = true;
    let mut lines = Vec::new();
    let mut models = heat_models();
    models.retain(|m| !m.scalar_curvature().is_zero());
    for m in models.iter().take(4) {
        let s = m.scalar_curvature();
        let h = solve_expansion(m, 6).unwrap();
        ok &= h.expansion.coeff(1).is_zero();
        for sf in &h.sources {
            match &sf.factor {
                Some(c) if sf.order % 2 == 0 => {
                    ok &= *c == expected_source_factor(s, sf.order);
                }
                Some(c) => ok &= c.is_zero(),
                None => ok = false,
            }
        }
        let zero = solve_expansion(&m.with_scalar_curvature(int(0)), 6).unwrap();
        ok &= zero.expansion.coeffs()[1..].iter().all(|c| c.is_zero());
    }
    let sample = solve_expansion(&random::block_model(int(1), int(1), int(1)), 6).unwrap();
    for sf in sample.sources.iter().filter(|sf| sf.order % 2 == 0) {
        lines.push(format!(
            "k={}: {}·s",
            sf.order,
            sf.factor_over_s(&int(1))
                .map(|c| rational::format(&c))
                .unwrap_or_else(|| "-".into())
        ));
    }
    Verdict::new(
        ok,
        format!(
            "source_k = c_k·F_(k−2), derived c_k/s: {}; F_1 = {}",
            lines.join(", "),
            sample.expansion.coeff(1)
        ),
    )
}

fn main() -> ExitCode {
    let total = Instant::now();
    let (c1, c2) = criterion_1_and_2();
    let (c5, c6) = criterion_5_and_6();
    let verdicts = vec![
        (1, "twisted-product algebra", c1),
        (2, "exponential truncation", c2),
        (3, "taylor product oracle", criterion_3()),
        (4, "flat heat kernel", criterion_4()),
        (5, "heat residual", c5),
        (6, "initial conditions", c6),
        (7, "supertrace τ-independence", criterion_7()),
        (8, "Â-form ratio constancy", criterion_8()),
        (9, "borel recovery", criterion_9()),
        (10, "derived source audit", criterion_10()),
    ];
    let mut all = true;
    for (i, name, v) in &verdicts {
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {i:>2} ({name}): {}", v.detail);
        all &= v.passed;
    }
    println!(
        "acceptance finished in {:.2} s",
        total.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
