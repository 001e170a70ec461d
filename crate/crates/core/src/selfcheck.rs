//! A compact run of the library's invariants at a fixed seed, used by the
//! `selfcheck` command.

use crate::borel::BorelSpec;
use crate::error::Result;
use crate::getzler::{coupling_term, getzler_product, CurvatureModel};
use crate::heat::{heat_residual, solve_expansion};
use crate::index::{mckean_singer_check, supertrace_heat};
use crate::random::{self, SymbolShape};
use crate::rational::{self, Q};
use crate::symbolic::GaussSymbol;
use crate::taylor::{taylor_product, TaylorSymbol};

pub const DEFAULT_SEED: u64 = 0x6e7a_6c72;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfcheckReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SelfcheckReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn outcome(name: &'static str, cases: usize, failures: Vec<String>) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: failures.is_empty(),
        cases,
        detail: failures.into_iter().next().unwrap_or_default(),
    }
}

pub fn run_selfcheck(seed: u64) -> Result<SelfcheckReport> {
    let checks = vec![
        wedge_laws(seed)?,
        product_laws(seed.wrapping_add(1))?,
        coupling_truncation(seed.wrapping_add(2))?,
        taylor_oracle(seed.wrapping_add(3))?,
        heat_solution(seed.wrapping_add(4))?,
        supertrace_constancy()?,
        borel_recovery(seed.wrapping_add(5))?,
    ];
    Ok(SelfcheckReport { seed, checks })
}

fn wedge_laws(seed: u64) -> Result<CheckOutcome> {
    let mut rng = random::rng(seed);
    let mut failures = Vec::new();
    let cases = 30;
    for case in 0..cases {
        let a = random::form(&mut rng, 4, 3, false);
        let b = random::form(&mut rng, 4, 3, false);
        let c = random::form(&mut rng, 4, 3, false);
        if a.wedge(&b)?.wedge(&c)? != a.wedge(&b.wedge(&c)?)? {
            failures.push(format!("wedge associativity, case {case}"));
        }
        let e = random::form(&mut rng, 4, 3, true);
        if a.wedge(&e)? != e.wedge(&a)? {
            failures.push(format!("even forms not central, case {case}"));
        }
    }
    Ok(outcome("wedge", cases, failures))
}

fn product_laws(seed: u64) -> Result<CheckOutcome> {
    let mut rng = random::rng(seed);
    let shape = SymbolShape::small();
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in [2usize, 4] {
        for case in 0..10 {
            cases += 1;
            let m = random::model(&mut rng, n, 0.5);
            let a = random::symbol(&mut rng, n, &shape);
            let b = random::symbol(&mut rng, n, &shape);
            let c = random::symbol(&mut rng, n, &shape);
            let left = getzler_product(&getzler_product(&a, &b, &m)?, &c, &m)?;
            let right = getzler_product(&a, &getzler_product(&b, &c, &m)?, &m)?;
            if left != right {
                failures.push(format!("associativity, n = {n}, case {case}"));
            }
            let one = GaussSymbol::one(n);
            if getzler_product(&one, &a, &m)? != a || getzler_product(&a, &one, &m)? != a {
                failures.push(format!("unit, n = {n}, case {case}"));
            }
            let lam = random::rational(&mut rng, 3, 3);
            let lin = getzler_product(&a.scale(&lam).add(&b)?, &c, &m)?;
            let split = getzler_product(&a, &c, &m)?
                .scale(&lam)
                .add(&getzler_product(&b, &c, &m)?)?;
            if lin != split {
                failures.push(format!("bilinearity, n = {n}, case {case}"));
            }
            let flat = CurvatureModel::flat(n, rational::int(0))?;
            if getzler_product(&a, &b, &flat)? != a.mul(&b)? {
                failures.push(format!("flat reduction, n = {n}, case {case}"));
            }
        }
    }
    Ok(outcome("twisted product", cases, failures))
}

fn coupling_truncation(seed: u64) -> Result<CheckOutcome> {
    let mut rng = random::rng(seed);
    let shape = SymbolShape::small();
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in [2usize, 4] {
        for case in 0..5 {
            cases += 1;
            let m = random::model(&mut rng, n, 1.0);
            let a = random::symbol(&mut rng, n, &shape);
            let b = random::symbol(&mut rng, n, &shape);
            for r in n / 2 + 1..=n / 2 + 2 {
                if !coupling_term(&a, &b, &m, r)?.is_zero() {
                    failures.push(format!("coupling r = {r}, n = {n}, case {case}"));
                }
            }
        }
    }
    Ok(outcome("coupling truncation", cases, failures))
}

/// Coefficient `m` of `(Σ aₖ tᵏ/k!)(Σ bⱼ tʲ/j!)` times `m!`, multiplied
/// term by term in the power basis.
fn power_series_product(
    a: &TaylorSymbol,
    b: &TaylorSymbol,
    model: &CurvatureModel,
) -> Result<TaylorSymbol> {
    let pa = a.power_coefficients();
    let pb = b.power_coefficients();
    let trunc = a.truncation().min(b.truncation());
    let mut out = vec![GaussSymbol::zero(a.n()); trunc + 1];
    for (i, x) in pa.iter().enumerate() {
        for (j, y) in pb.iter().enumerate() {
            if i + j <= trunc {
                out[i + j] = out[i + j].add(&getzler_product(x, y, model)?)?;
            }
        }
    }
    TaylorSymbol::from_power_coefficients(a.n(), a.order() + b.order(), out)
}

fn taylor_oracle(seed: u64) -> Result<CheckOutcome> {
    let mut rng = random::rng(seed);
    let shape = SymbolShape::small();
    let mut failures = Vec::new();
    let cases = 10;
    for case in 0..cases {
        let n = if case % 2 == 0 { 2 } else { 4 };
        let m = random::model(&mut rng, n, 0.5);
        let a = random::taylor_symbol(&mut rng, n, 3, &shape);
        let b = random::taylor_symbol(&mut rng, n, 3, &shape);
        if taylor_product(&a, &b, &m)? != power_series_product(&a, &b, &m)? {
            failures.push(format!("taylor product, case {case}"));
        }
    }
    Ok(outcome("taylor product", cases, failures))
}

fn heat_solution(seed: u64) -> Result<CheckOutcome> {
    let mut rng = random::rng(seed);
    let mut failures = Vec::new();
    let cases = 4;
    for case in 0..cases {
        let n = if case % 2 == 0 { 2 } else { 4 };
        let m = random::model(&mut rng, n, 0.75);
        let h = solve_expansion(&m, 4)?;
        if !heat_residual(&h.expansion, &m)?.is_zero() {
            failures.push(format!("nonzero residual, case {case}"));
        }
        if !h.initial_conditions_hold() {
            failures.push(format!("initial conditions, case {case}"));
        }
    }
    let flat = solve_expansion(&CurvatureModel::flat(4, rational::int(0))?, 4)?;
    let gauss = GaussSymbol::gaussian(4, rational::int(1))?;
    if flat.expansion.coeff(0) != gauss || flat.expansion.coeffs()[1..].iter().any(|c| !c.is_zero())
    {
        failures.push("flat expansion".into());
    }
    Ok(outcome("heat equation", cases + 1, failures))
}

fn supertrace_constancy() -> Result<CheckOutcome> {
    let samples = [rational::frac(1, 2), rational::int(1), rational::int(2)];
    let params: [(Q, Q); 3] = [
        (rational::int(1), rational::int(1)),
        (rational::frac(1, 2), rational::int(0)),
        (rational::int(2), rational::frac(-1, 3)),
    ];
    let mut failures = Vec::new();
    let mut ratio: Option<Q> = None;
    for (theta, theta_prime) in &params {
        let m = random::block_model(theta.clone(), theta_prime.clone(), rational::int(0));
        if !mckean_singer_check(&m, 0, &samples)?.consistent {
            failures.push(format!(
                "supertrace depends on τ at θ = {theta}, θ′ = {theta_prime}"
            ));
        }
        let report = supertrace_heat(&solve_expansion(&m, 0)?)?;
        match (&ratio, report.match_ratio) {
            (_, None) => failures.push(format!("no ratio at θ = {theta}, θ′ = {theta_prime}")),
            (None, Some(r)) => ratio = Some(r),
            (Some(r0), Some(r)) if *r0 != r => {
                failures.push(format!("ratio {r} differs from {r0}"));
            }
            _ => {}
        }
    }
    Ok(outcome("supertrace", params.len(), failures))
}

fn borel_recovery(seed: u64) -> Result<CheckOutcome> {
    let mut rng = random::rng(seed);
    let shape = SymbolShape {
        max_form_terms: 1,
        ..SymbolShape::polynomial()
    };
    let mut failures = Vec::new();
    let cases = 3;
    let points = vec![vec![0.5, -0.25], vec![1.0, 0.0]];
    for case in 0..cases {
        let coeffs: Vec<GaussSymbol> = (0..3)
            .map(|_| random::symbol(&mut rng, 2, &shape))
            .collect();
        let spec = BorelSpec::build(coeffs, None)?;
        for k in 0..=2 {
            let r = spec.taylor_check(k, &points, None)?;
            let tol = if k == 0 { 0.0 } else { 1e-4 };
            if r.max_rel_error > tol {
                failures.push(format!("order {k}, case {case}: error {}", r.max_rel_error));
            }
        }
        let t = 0.3;
        for xi in &points {
            if spec.active_terms(xi, t)? != spec.predicted_active_terms(xi, t)? {
                failures.push(format!("active term count, case {case}"));
            }
        }
    }
    Ok(outcome("borel", cases, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_seed_passes() {
        let r = run_selfcheck(DEFAULT_SEED).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert!(r.all_passed());
        assert!(!r.checks.is_empty());
    }
}
