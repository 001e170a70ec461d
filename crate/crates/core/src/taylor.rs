//! Truncated Taylor expansions in `t` of full symbols.
//!
//! `coeffs[k]` stores `∂ₜᵏ a(·, 0)`, the coefficient of `tᵏ/k!`. With this
//! convention the product is the Leibniz rule
//! `(AB)ₖ = Σⱼ binom(k, j) · Aⱼ #₀ B_{k−j}`.
//!
//! The nominal order `m` is bookkeeping only: coefficient `k` is declared of
//! order `m − k` and nothing checks it analytically.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::same_dim;
use crate::getzler::{getzler_product, CurvatureModel};
use crate::rational::{self, Q};
use crate::symbolic::{GaussSymbol, HalfInt, ScalarResult};

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSymbol {
    n: usize,
    order: i64,
    coeffs: Vec<GaussSymbol>,
}

impl TaylorSymbol {
    /// Truncation is `coeffs.len() − 1`; the list must be nonempty.
    pub fn new(n: usize, order: i64, coeffs: Vec<GaussSymbol>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        for c in &coeffs {
            same_dim(n, c.n())?;
        }
        Ok(TaylorSymbol { n, order, coeffs })
    }

    pub fn zero(n: usize, order: i64, truncation: usize) -> Self {
        TaylorSymbol {
            n,
            order,
            coeffs: vec![GaussSymbol::zero(n); truncation + 1],
        }
    }

    /// The constant series `1`.
    pub fn unit(n: usize, truncation: usize) -> Self {
        Self::from_leading(GaussSymbol::one(n), 0, truncation)
    }

    /// `a + 0·t + …` truncated at `truncation`.
    pub fn from_leading(a: GaussSymbol, order: i64, truncation: usize) -> Self {
        let n = a.n();
        let mut t = Self::zero(n, order, truncation);
        t.coeffs[0] = a;
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[GaussSymbol] {
        &self.coeffs
    }

    /// Coefficient of `tᵏ/k!`; zero beyond the truncation.
    pub fn coeff(&self, k: usize) -> GaussSymbol {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| GaussSymbol::zero(self.n))
    }

    pub fn set_coeff(&mut self, k: usize, a: GaussSymbol) -> Result<()> {
        same_dim(self.n, a.n())?;
        if k > self.truncation() {
            return Err(Error::InvalidArgument(format!(
                "coefficient {k} beyond truncation {}",
                self.truncation()
            )));
        }
        self.coeffs[k] = a;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Same series cut at `truncation` (which must not exceed the current one).
    pub fn truncate(&self, truncation: usize) -> Self {
        TaylorSymbol {
            n: self.n,
            order: self.order,
            coeffs: self.coeffs[..=truncation.min(self.truncation())].to_vec(),
        }
    }

    pub fn map(&self, f: impl Fn(&GaussSymbol) -> GaussSymbol) -> Self {
        TaylorSymbol {
            n: self.n,
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.n, other.n)?;
        let k = self.truncation().min(other.truncation());
        let coeffs = (0..=k)
            .map(|j| self.coeffs[j].add(&other.coeffs[j]))
            .collect::<Result<_>>()?;
        Ok(TaylorSymbol {
            n: self.n,
            order: self.order.max(other.order),
            coeffs,
        })
    }

    /// Converts to plain power-series coefficients (of `tᵏ`, divided by `k!`).
    pub fn power_coefficients(&self) -> Vec<GaussSymbol> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(&rational::factorial(k).recip()))
            .collect()
    }

    /// Inverse of [`power_coefficients`](Self::power_coefficients).
    pub fn from_power_coefficients(n: usize, order: i64, power: Vec<GaussSymbol>) -> Result<Self> {
        let coeffs = power
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(&rational::factorial(k)))
            .collect();
        Self::new(n, order, coeffs)
    }
}

/// `(AB)ₖ = Σⱼ binom(k, j) Aⱼ #₀ B_{k−j}`, truncated at `min(K_A, K_B)`.
pub fn taylor_product(
    a: &TaylorSymbol,
    b: &TaylorSymbol,
    model: &CurvatureModel,
) -> Result<TaylorSymbol> {
    same_dim(a.n, b.n)?;
    same_dim(a.n, model.n())?;
    let trunc = a.truncation().min(b.truncation());
    let coeffs = (0..=trunc)
        .into_par_iter()
        .map(|k| product_coeff(a, b, model, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(TaylorSymbol {
        n: a.n,
        order: a.order + b.order,
        coeffs,
    })
}

/// The single coefficient `(AB)ₖ` of [`taylor_product`].
pub fn product_coeff(
    a: &TaylorSymbol,
    b: &TaylorSymbol,
    model: &CurvatureModel,
    k: usize,
) -> Result<GaussSymbol> {
    same_dim(a.n, b.n)?;
    same_dim(a.n, model.n())?;
    let mut acc = GaussSymbol::zero(a.n);
    for j in 0..=k {
        let (x, y) = (a.coeff(j), b.coeff(k - j));
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let p = getzler_product(&x, &y, model)?;
        acc.add_assign_unchecked(&p.scale(&rational::binomial(k, j)));
    }
    Ok(acc)
}

/// Full symbol `−|ξ|² + (s/4)t²` of the rescaled Dirac square, order 2.
pub fn dirac_squared_symbol(model: &CurvatureModel, truncation: usize) -> TaylorSymbol {
    let n = model.n();
    let mut t = TaylorSymbol::zero(n, 2, truncation);
    t.coeffs[0] = GaussSymbol::norm_sq(n).neg();
    if truncation >= 2 {
        // ∂ₜ²[(s/4)t²] = s/2
        t.coeffs[2] = GaussSymbol::rational(n, model.scalar_curvature() * rational::frac(1, 2));
    }
    t
}

/// Supertrace prefactor `(2π)^{−n} (2/i)^{n/2} / k!` as a [`ScalarResult`].
pub fn supertrace_prefactor(n: usize, k: usize) -> Result<ScalarResult> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let half = (n / 2) as i64;
    let c = rational::powi(&rational::int(2), -(n as i64) + half) / rational::factorial(k);
    Ok(ScalarResult::monomial(
        c,
        HalfInt::ZERO,
        HalfInt::from_int(-(n as i64)),
        -half,
    ))
}

/// Per-order supertraces
/// `(2π)^{−n} (2/i)^{n/2} / k! · top(∫ ∂ₜᵏ a(ξ, 0) dξ)`.
pub fn taylor_supertrace(a: &TaylorSymbol, model: &CurvatureModel) -> Result<Vec<ScalarResult>> {
    same_dim(a.n, model.n())?;
    a.coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let top = c.integrate_xi()?.berezin_top();
            if top.is_zero() {
                return Ok(ScalarResult::zero());
            }
            Ok(supertrace_prefactor(a.n, k)?.mul(&top))
        })
        .collect()
}

impl TaylorSymbol {
    /// Coefficientwise `∂/∂τ`.
    pub fn partial_tau(&self) -> Self {
        self.map(|c| c.partial_tau())
    }

    /// Wedge-free rational scaling.
    pub fn scale(&self, c: &Q) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }
}

/// Rational `c` with `target = c · base`, if one exists. The zero base only
/// matches a zero target, with `c = 0`.
pub fn proportionality(target: &GaussSymbol, base: &GaussSymbol) -> Option<Q> {
    if base.is_zero() {
        return target.is_zero().then(Q::zero);
    }
    let (q, m, f) = base.terms().next()?;
    let (blade, v) = f.terms().next()?;
    let probe = target
        .terms()
        .find(|(tq, tm, _)| *tq == q && *tm == m)
        .map(|(_, _, tf)| tf.coeff(*blade))
        .unwrap_or_else(Q::zero);
    let c = probe / v.clone();
    if base.scale(&c) == *target {
        Some(c)
    } else {
        None
    }
}
