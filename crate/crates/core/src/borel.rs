//! Numeric summation of an asymptotic series `Σ tᵏ aₖ(ξ)` into a genuine
//! symbol
//!
//! ```text
//! a(ξ, t) = Σₖ tᵏ φ(εₖ (t|ξ| + t)^{−2}) aₖ(ξ)
//! ```
//!
//! with `εₖ = min(εₖ₋₁, (k! 2ᵏ Cₖ)^{−2})` and the smooth step
//! `φ(x) = ψ(x−1) / (ψ(x−1) + ψ(2−x))`, `ψ(u) = e^{−1/u}` for `u > 0`.
//! For fixed `t ≠ 0` only the terms with `εₖ > (t|ξ| + t)²` contribute.
//!
//! This is the one floating-point module of the crate.

use crate::error::{Error, Result};
use crate::exterior::{same_dim, FloatForm};
use crate::symbolic::GaussSymbol;

/// Radii of the `ξ` sampling grid used to estimate `Cₖ`.
pub const SAMPLE_RADII: [f64; 6] = [0.0, 1.0, 2.0, 4.0, 8.0, 16.0];

fn psi(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// Smooth step: `0` for `x ≤ 1`, `1` for `x ≥ 2`.
pub fn smooth_step(x: f64) -> f64 {
    let a = psi(x - 1.0);
    if a == 0.0 {
        return 0.0;
    }
    let b = psi(2.0 - x);
    a / (a + b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BorelSpec {
    n: usize,
    /// Nominal symbol order `m` used by the bound estimate.
    order: i64,
    /// Value of `τ` at which `τ`-dependent coefficients are evaluated.
    tau: f64,
    coefficients: Vec<GaussSymbol>,
    bounds: Vec<f64>,
    epsilons: Vec<f64>,
}

impl BorelSpec {
    /// Builds with `m = 0` and `τ = 1`.
    pub fn build(coefficients: Vec<GaussSymbol>, bounds: Option<Vec<f64>>) -> Result<Self> {
        Self::build_with(coefficients, bounds, 0, 1.0)
    }

    /// Derives `εₖ` from supplied bounds, or estimates `Cₖ` on the sampling
    /// grid when `bounds` is `None`.
    pub fn build_with(
        coefficients: Vec<GaussSymbol>,
        bounds: Option<Vec<f64>>,
        order: i64,
        tau: f64,
    ) -> Result<Self> {
        let first = coefficients.first().ok_or(Error::EmptyCoefficients)?;
        let n = first.n();
        for c in &coefficients {
            same_dim(n, c.n())?;
        }
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "τ = {tau} must be finite and ≥ 0"
            )));
        }
        let bounds = match bounds {
            Some(b) => {
                if b.len() != coefficients.len() {
                    return Err(Error::LengthMismatch {
                        expected: coefficients.len(),
                        got: b.len(),
                    });
                }
                for (k, &v) in b.iter().enumerate() {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(Error::NonPositiveBound { k, value: v });
                    }
                }
                b
            }
            None => coefficients
                .iter()
                .enumerate()
                .map(|(k, a)| estimate_bound(a, k, order, tau))
                .collect::<Result<_>>()?,
        };
        let mut epsilons = Vec::with_capacity(bounds.len());
        let mut factorial = 1.0f64;
        for (k, c) in bounds.iter().enumerate() {
            if k > 0 {
                factorial *= k as f64;
            }
            let cap = (factorial * 2f64.powi(k as i32) * c).powi(-2);
            let prev = epsilons.last().copied().unwrap_or(f64::INFINITY);
            epsilons.push(cap.min(prev));
        }
        Ok(BorelSpec {
            n,
            order,
            tau,
            coefficients,
            bounds,
            epsilons,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn coefficients(&self) -> &[GaussSymbol] {
        &self.coefficients
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    fn check_xi(&self, xi: &[f64]) -> Result<f64> {
        if xi.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: xi.len(),
            });
        }
        Ok(xi.iter().map(|x| x * x).sum::<f64>().sqrt())
    }

    fn cutoff_argument(t: f64, norm: f64) -> f64 {
        let s = t * norm + t;
        1.0 / (s * s)
    }

    fn weighted_sum(&self, xi: &[f64], t: f64, weight: impl Fn(usize) -> f64) -> Result<FloatForm> {
        let mut out = FloatForm::zero(self.n);
        let mut tk = 1.0f64;
        for (k, a) in self.coefficients.iter().enumerate() {
            if k > 0 {
                tk *= t;
            }
            let w = weight(k);
            if w == 0.0 {
                continue;
            }
            let v = a.eval(xi, self.tau)?;
            out.add_assign_unchecked(&v.scale(&(tk * w)));
        }
        Ok(out)
    }

    /// `a(ξ, t)`; at `t = 0` this is `a₀(ξ)`.
    pub fn eval(&self, xi: &[f64], t: f64) -> Result<FloatForm> {
        let norm = self.check_xi(xi)?;
        if t == 0.0 {
            return self.coefficients[0].eval(xi, self.tau);
        }
        let x = Self::cutoff_argument(t, norm);
        self.weighted_sum(xi, t, |k| smooth_step(self.epsilons[k] * x))
    }

    /// Truncated Taylor sum `Σ tᵏ aₖ(ξ)`, evaluated with the same arithmetic as
    /// [`eval`](Self::eval).
    pub fn partial_sum(&self, xi: &[f64], t: f64) -> Result<FloatForm> {
        self.check_xi(xi)?;
        self.weighted_sum(xi, t, |_| 1.0)
    }

    /// Number of terms with a nonzero cutoff at `(ξ, t)`, `t ≠ 0`.
    pub fn active_terms(&self, xi: &[f64], t: f64) -> Result<usize> {
        let norm = self.check_xi(xi)?;
        if t == 0.0 {
            return Err(Error::InvalidArgument("t must be nonzero".into()));
        }
        let x = Self::cutoff_argument(t, norm);
        Ok(self
            .epsilons
            .iter()
            .filter(|e| smooth_step(*e * x) != 0.0)
            .count())
    }

    /// `#{k : εₖ > (t|ξ| + t)²}`.
    pub fn predicted_active_terms(&self, xi: &[f64], t: f64) -> Result<usize> {
        let norm = self.check_xi(xi)?;
        let s = t * norm + t;
        Ok(self.epsilons.iter().filter(|e| **e > s * s).count())
    }

    /// Largest `|t|` at which every cutoff equals 1.
    pub fn saturation_radius(&self, xi: &[f64]) -> Result<f64> {
        self.saturation_radius_through(xi, self.truncation())
    }

    /// Largest `|t|` at which the cutoffs of terms `0..=j` all equal 1.
    pub fn saturation_radius_through(&self, xi: &[f64], j: usize) -> Result<f64> {
        let norm = self.check_xi(xi)?;
        let eps = self.epsilons[j.min(self.truncation())];
        Ok((eps / 2.0).sqrt() / (1.0 + norm))
    }

    /// Estimates `∂ₜᵏ a(ξ, 0)` by Richardson-extrapolated central differences
    /// and compares it with `k! · aₖ(ξ)` at each point.
    ///
    /// When `steps` is `None`, three halving steps are used, the largest
    /// reaching 0.9 of the radius where terms `0..=k` and `k+2` are
    /// saturated.
    pub fn taylor_check(
        &self,
        k: usize,
        points: &[Vec<f64>],
        steps: Option<&[f64]>,
    ) -> Result<TaylorCheckReport> {
        if k > self.truncation() {
            return Err(Error::InvalidArgument(format!(
                "order {k} exceeds truncation {}",
                self.truncation()
            )));
        }
        let mut checks = Vec::with_capacity(points.len());
        let kfact: f64 = (1..=k).map(|j| j as f64).product();
        for xi in points {
            let expected = self.coefficients[k].eval(xi, self.tau)?.scale(&kfact);
            let estimate = if k == 0 {
                self.eval(xi, 0.0)?
            } else {
                let hs: Vec<f64> = match steps {
                    Some(s) => s.to_vec(),
                    None => {
                        // t^{k+1} φ cancels in a symmetric difference, so only
                        // terms through k and k + 2 need to stay saturated;
                        // later ones add O(h⁴)
                        let through = if k + 2 <= self.truncation() { k + 2 } else { k };
                        let r = self.saturation_radius_through(xi, through)?;
                        let h0 = 0.9 * r / (k as f64 / 2.0);
                        vec![h0, h0 / 2.0, h0 / 4.0]
                    }
                };
                if hs.is_empty() || hs.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
                    return Err(Error::InvalidArgument("steps must be positive".into()));
                }
                let diffs: Vec<FloatForm> = hs
                    .iter()
                    .map(|h| self.central_difference(xi, k, *h))
                    .collect::<Result<_>>()?;
                extrapolate_to_zero(&hs, &diffs)
            };
            let scale = expected.max_abs();
            let dist = estimate.distance(&expected);
            let rel_error = if scale > 0.0 { dist / scale } else { dist };
            checks.push(PointCheck {
                xi: xi.clone(),
                estimate,
                expected,
                rel_error,
            });
        }
        let max_rel_error = checks.iter().fold(0.0f64, |m, c| m.max(c.rel_error));
        Ok(TaylorCheckReport {
            k,
            points: checks,
            max_rel_error,
        })
    }

    /// `h^{−k} Σⱼ (−1)ʲ binom(k, j) a(ξ, (k/2 − j)h)`.
    fn central_difference(&self, xi: &[f64], k: usize, h: f64) -> Result<FloatForm> {
        let mut acc = FloatForm::zero(self.n);
        let mut binom = 1.0f64;
        for j in 0..=k {
            if j > 0 {
                binom = binom * (k + 1 - j) as f64 / j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let t = (k as f64 / 2.0 - j as f64) * h;
            acc.add_assign_unchecked(&self.eval(xi, t)?.scale(&(sign * binom)));
        }
        Ok(acc.scale(&h.powi(-(k as i32))))
    }
}

/// Neville extrapolation to `h = 0` in the variable `h²`.
fn extrapolate_to_zero(hs: &[f64], values: &[FloatForm]) -> FloatForm {
    let xs: Vec<f64> = hs.iter().map(|h| h * h).collect();
    let mut p: Vec<FloatForm> = values.to_vec();
    let m = p.len();
    for level in 1..m {
        for i in 0..m - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            // P = (xj·P_i − xi·P_{i+1}) / (xj − xi), evaluated at 0
            let a = p[i].scale(&(xj / (xj - xi)));
            let b = p[i + 1].scale(&(-xi / (xj - xi)));
            p[i] = a.add_unchecked(&b);
        }
    }
    p.swap_remove(0)
}

fn multi_indices(n: usize, max_total: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; n]];
    let mut frontier = out.clone();
    for _ in 0..max_total {
        let mut next = Vec::new();
        for m in &frontier {
            // extend only at or after the last nonzero axis to avoid repeats
            let start = m.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in start..n {
                let mut v = m.clone();
                v[i] += 1;
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `max_{|β| ≤ k} sup (1+|ξ|)^{|β|−m} |∂^β aₖ(ξ)|` over the sampling grid
/// (radii [`SAMPLE_RADII`] along `±` each axis), floored at 1.
pub fn estimate_bound(a: &GaussSymbol, k: usize, order: i64, tau: f64) -> Result<f64> {
    let n = a.n();
    let mut points: Vec<Vec<f64>> = vec![vec![0.0; n]];
    for &r in SAMPLE_RADII.iter().filter(|r| **r > 0.0) {
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut p = vec![0.0; n];
                p[i] = sign * r;
                points.push(p);
            }
        }
    }
    let mut sup = 0.0f64;
    for beta in multi_indices(n, k) {
        let d = a.partial_xi_multi(&beta)?;
        if d.is_zero() {
            continue;
        }
        let weight_exp = beta.iter().sum::<u32>() as i32 - order as i32;
        for p in &points {
            let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            let v = d.eval(p, tau)?.max_abs() * (1.0 + norm).powi(weight_exp);
            sup = sup.max(v);
        }
    }
    Ok(sup.max(1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointCheck {
    pub xi: Vec<f64>,
    pub estimate: FloatForm,
    pub expected: FloatForm,
    pub rel_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorCheckReport {
    pub k: usize,
    pub points: Vec<PointCheck>,
    pub max_rel_error: f64,
}
