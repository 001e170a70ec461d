//! Supertraces of heat expansions and the Â-form oracle.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::FormElement;
use crate::getzler::CurvatureModel;
use crate::heat::{solve_expansion, HeatExpansion};
use crate::rational::{self, Q};
use crate::symbolic::ScalarResult;
use crate::taylor::taylor_supertrace;

/// Coefficients `c_m` of `log(x / sinh x) = Σ_{m≥1} c_m x^{2m}`, for
/// `m = 0..=max_m` (`c₀ = 0`).
pub fn log_x_over_sinh_coefficients(max_m: usize) -> Vec<Q> {
    // g(y) = sinh(√y)/√y = Σ y^k / (2k+1)!
    let g: Vec<Q> = (0..=max_m)
        .map(|k| rational::factorial(2 * k + 1).recip())
        .collect();
    let mut u = g.clone();
    u[0] = Q::zero();
    let mul = |a: &[Q], b: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::zero(); max_m + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j <= max_m {
                    out[i + j] += x * y;
                }
            }
        }
        out
    };
    let mut log_g = vec![Q::zero(); max_m + 1];
    let mut power = u.clone();
    for j in 1..=max_m.max(1) {
        let sign = if j % 2 == 1 { Q::one() } else { -Q::one() };
        let w = sign / rational::int(j as i64);
        for (acc, p) in log_g.iter_mut().zip(&power) {
            *acc += p * &w;
        }
        power = mul(&power, &u);
    }
    log_g.into_iter().map(|c| -c).collect()
}

fn matmul(a: &[Vec<FormElement>], b: &[Vec<FormElement>]) -> Vec<Vec<FormElement>> {
    let n = a.len();
    let dim = a[0][0].n();
    let mut out = vec![vec![FormElement::zero(dim); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for p in 0..n {
                if a[i][p].is_zero() || b[p][j].is_zero() {
                    continue;
                }
                cell.add_assign_unchecked(&a[i][p].wedge_unchecked(&b[p][j]));
            }
        }
    }
    out
}

fn trace(a: &[Vec<FormElement>]) -> FormElement {
    let mut t = FormElement::zero(a[0][0].n());
    for (i, row) in a.iter().enumerate() {
        t.add_assign_unchecked(&row[i]);
    }
    t
}

/// `det^{1/2}((κ/2) / sinh(κ/2)) = exp(½ tr log((κ/2)/sinh(κ/2)))`, truncated
/// at form degree `max_degree`.
pub fn a_hat_oracle(model: &CurvatureModel, max_degree: usize) -> Result<FormElement> {
    let n = model.n();
    if max_degree > n {
        return Err(Error::DegreeOutOfRange {
            degree: max_degree,
            n,
        });
    }
    // entries of X^{2m} have form degree 4m
    let max_m = n / 4;
    let coeffs = log_x_over_sinh_coefficients(max_m);
    let half = rational::frac(1, 2);
    let x: Vec<Vec<FormElement>> = (1..=n)
        .map(|i| (1..=n).map(|j| model.kappa(i, j).scale(&half)).collect())
        .collect();
    let x2 = matmul(&x, &x);
    let mut power = x2.clone();
    let mut exponent = FormElement::zero(n);
    for c in coeffs.iter().skip(1) {
        exponent.add_assign_unchecked(&trace(&power).scale(&(c * &half)));
        power = matmul(&power, &x2);
    }
    // exp of a nilpotent even form
    let mut total = FormElement::one(n);
    let mut term = FormElement::one(n);
    for j in 1.. {
        term = term
            .wedge_unchecked(&exponent)
            .scale(&rational::int(j).recip());
        if term.is_zero() {
            break;
        }
        total.add_assign_unchecked(&term);
    }
    let mut out = FormElement::zero(n);
    for d in 0..=max_degree {
        out.add_assign_unchecked(&total.degree_component(d));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexReport {
    pub model: CurvatureModel,
    /// Supertrace of `∂ₜᵏ a` for `k = 0..=K`.
    pub per_order: Vec<ScalarResult>,
    pub tau_independent: Vec<bool>,
    /// Top-degree coefficient of the Â-form.
    pub a_hat_top: Q,
    /// Rational part of the `k = 0` supertrace divided by `a_hat_top`, when
    /// both are defined and the latter is nonzero.
    pub match_ratio: Option<Q>,
}

pub fn supertrace_heat(heat: &HeatExpansion) -> Result<IndexReport> {
    let model = &heat.model;
    let per_order = taylor_supertrace(&heat.expansion, model)?;
    let tau_independent = per_order.iter().map(|s| s.is_tau_independent()).collect();
    let a_hat_top = a_hat_oracle(model, model.n())?.berezin_top();
    let match_ratio = match per_order.first().and_then(|s| s.tau_free_value()) {
        Some(v) if !a_hat_top.is_zero() => Some(v / &a_hat_top),
        _ => None,
    };
    Ok(IndexReport {
        model: model.clone(),
        per_order,
        tau_independent,
        a_hat_top,
        match_ratio,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct McKeanSingerReport {
    pub consistent: bool,
    pub tau_samples: Vec<Q>,
    /// `values[k][j]`: order-`k` supertrace at `tau_samples[j]`.
    pub values: Vec<Vec<ScalarResult>>,
}

/// Solves the heat expansion and checks every per-order supertrace takes the
/// same value at all `τ` samples.
pub fn mckean_singer_check(
    model: &CurvatureModel,
    truncation: usize,
    tau_samples: &[Q],
) -> Result<McKeanSingerReport> {
    let heat = solve_expansion(model, truncation)?;
    mckean_singer_check_expansion(&heat, tau_samples)
}

/// Same check on a given expansion.
pub fn mckean_singer_check_expansion(
    heat: &HeatExpansion,
    tau_samples: &[Q],
) -> Result<McKeanSingerReport> {
    if tau_samples.is_empty() {
        return Err(Error::InvalidArgument("no τ samples".into()));
    }
    let per_order = taylor_supertrace(&heat.expansion, &heat.model)?;
    let mut values = Vec::with_capacity(per_order.len());
    let mut consistent = true;
    for s in &per_order {
        let row: Vec<ScalarResult> = tau_samples
            .iter()
            .map(|t| s.substitute_tau(t))
            .collect::<Result<_>>()?;
        consistent &= row.windows(2).all(|w| w[0] == w[1]);
        values.push(row);
    }
    Ok(McKeanSingerReport {
        consistent,
        tau_samples: tau_samples.to_vec(),
        values,
    })
}
