//! The symbol-level heat equation, solved order by order in `t` and in form
//! degree.
//!
//! The residual convention is `∂_τF − σ(𝔻²) ⋆ F` with
//! `σ(𝔻²) = −|ξ|² + (s/4)t²`; at `t⁰` this is
//! `∂_τ a₀ + (|ξ|² − κ(ξ,∂_ξ) − ¼κ∧κ(∂_ξ,∂_ξ)) a₀ = 0`, whose flat solution is
//! `e^{−τ|ξ|²}`.
//!
//! Each order is a transport equation `∂_τ a + L a = S` with `L` the
//! oscillator operator. Writing `a = e^{−τ|ξ|²} c`, the `|ξ|²` terms cancel
//! and `c` obeys `∂_τ c = e^{τ|ξ|²}(S + R(e^{−τ|ξ|²} c))`, where
//! `R = |ξ|² − L` raises form degree by 2 or 4. Solving degree by degree
//! leaves only polynomial τ-antiderivatives, and the recursion stops at
//! degree `n` because `κ` is nilpotent.
//!
//! The sources `S` are never written down by hand: order `k` takes the
//! `k`-th coefficient of `σ(𝔻²) ⋆ F` with `F_k` set to zero.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{same_dim, FormElement};
use crate::getzler::{oscillator_apply, CurvatureModel};
use crate::rational::{self, Q};
use crate::symbolic::GaussSymbol;
use crate::taylor::{
    dirac_squared_symbol, product_coeff, proportionality, taylor_product, TaylorSymbol,
};

/// How the order-`k` source relates to the coefficient two orders below.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceFactor {
    pub order: usize,
    pub previous_order: usize,
    /// `c` with `source_k = c · F_{k−2}`; `None` if the source is not a
    /// rational multiple of that coefficient.
    pub factor: Option<Q>,
    /// `F_{k−2}` vanished, so the factor is vacuous.
    pub previous_is_zero: bool,
}

impl SourceFactor {
    /// `c / s`, when `s ≠ 0`.
    pub fn factor_over_s(&self, s: &Q) -> Option<Q> {
        if s.is_zero() {
            return None;
        }
        self.factor.as_ref().map(|c| c / s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatExpansion {
    pub model: CurvatureModel,
    pub expansion: TaylorSymbol,
    pub sources: Vec<SourceFactor>,
}

impl HeatExpansion {
    pub fn truncation(&self) -> usize {
        self.expansion.truncation()
    }

    /// `F₀|_{τ=0} = 1` and `F_k|_{τ=0} = 0` for `k ≥ 1`.
    pub fn initial_conditions_hold(&self) -> bool {
        let n = self.model.n();
        self.expansion.coeffs().iter().enumerate().all(|(k, c)| {
            let at0 = c.at_tau_zero();
            if k == 0 {
                at0 == GaussSymbol::one(n)
            } else {
                at0.is_zero()
            }
        })
    }

    pub fn odd_orders_vanish(&self) -> bool {
        self.expansion
            .coeffs()
            .iter()
            .skip(1)
            .step_by(2)
            .all(|c| c.is_zero())
    }
}

/// Solves `∂_τ a + L a = source` with `a|_{τ=0} = initial`.
///
/// `source` must lie in the stratum `e^{−τ|ξ|²}` (or vanish) and `initial`
/// is a constant form.
pub fn solve_transport(
    model: &CurvatureModel,
    source: &GaussSymbol,
    initial: &FormElement,
) -> Result<GaussSymbol> {
    let n = model.n();
    same_dim(n, source.n())?;
    same_dim(n, initial.n())?;
    let one = Q::one();
    if source.weights().any(|q| *q != one) {
        return Err(Error::UnsupportedSource {
            expected: "1/1".into(),
        });
    }
    let norm = GaussSymbol::norm_sq(n);
    let mut c = GaussSymbol::zero(n);
    for d in 0..=n {
        let lifted = c.shift_weight(&one)?;
        let raised = norm.mul(&lifted)?.sub(&oscillator_apply(&lifted, model)?)?;
        let rhs = source.add(&raised)?.degree_component(d);
        let poly = rhs.shift_weight(&-one.clone())?;
        let cd = poly
            .antiderivative_tau()?
            .add(&GaussSymbol::constant(initial.degree_component(d)))?;
        c = c.add(&cd)?;
    }
    c.shift_weight(&one)
}

/// `a₀^τ`: the solution of the leading equation with `a₀|_{τ=0} = 1`.
pub fn solve_leading(model: &CurvatureModel) -> Result<GaussSymbol> {
    let n = model.n();
    solve_transport(model, &GaussSymbol::zero(n), &FormElement::one(n))
}

/// Heat expansion through `tᴷ`, with machine-derived per-order sources.
pub fn solve_expansion(model: &CurvatureModel, truncation: usize) -> Result<HeatExpansion> {
    let n = model.n();
    let dirac = dirac_squared_symbol(model, truncation);
    let mut f = TaylorSymbol::zero(n, 0, truncation);
    f.set_coeff(0, solve_leading(model)?)?;
    let mut sources = Vec::new();
    let zero_form = FormElement::zero(n);
    for k in 1..=truncation {
        // F_k is still zero, so this is exactly the inhomogeneous part
        let source = product_coeff(&dirac, &f, model, k)?;
        if k >= 2 {
            let prev = f.coeff(k - 2);
            sources.push(SourceFactor {
                order: k,
                previous_order: k - 2,
                factor: proportionality(&source, &prev),
                previous_is_zero: prev.is_zero(),
            });
        }
        f.set_coeff(k, solve_transport(model, &source, &zero_form)?)?;
    }
    Ok(HeatExpansion {
        model: model.clone(),
        expansion: f,
        sources,
    })
}

/// `∂_τF − σ(𝔻²) ⋆ F`, truncated at `F`'s truncation.
pub fn heat_residual(f: &TaylorSymbol, model: &CurvatureModel) -> Result<TaylorSymbol> {
    same_dim(f.n(), model.n())?;
    let dirac = dirac_squared_symbol(model, f.truncation());
    let product = taylor_product(&dirac, f, model)?;
    f.partial_tau().add(&product.neg())
}

/// The per-order source factor `binom(k, 2) · s/2` that `σ(𝔻²)`'s `t²` term
/// contributes, as a closed form in `k` (for cross-checking the derived one).
pub fn expected_source_factor(s: &Q, k: usize) -> Q {
    rational::binomial(k, 2) * s * rational::frac(1, 2)
}
