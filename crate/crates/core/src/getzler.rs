//! The frozen curvature model at a point and the twisted product
//!
//! ```text
//! a #₀ b = exp(−½ κ(∂_ξ, ∂_η)) a(ξ) ∧ b(η) |_{ξ=η},   κ(∂_ξ, ∂_η) = Σᵢⱼ κᵢⱼ ∂_{ξᵢ} ∂_{ηⱼ}.
//! ```
//!
//! Every `κᵢⱼ` is a 2-form, hence central in `Λℝⁿ`. The `r`-th power of the
//! coupling therefore factors as
//! `Σ_{α,β} C^{(r)}_{α,β} · ∂^α a(ξ) ⊗ ∂^β b(η)` with form coefficients
//! `C^{(r)}` of degree `2r`, which vanish for `r > n/2`. The product is the
//! substitution `ξ = η` of that doubled-variable expansion, i.e. a pointwise
//! product of the two derivative factors.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use crate::error::{Error, Result};
use crate::exterior::{check_dim, same_dim, FormElement};
use crate::rational::{self, Q};
use crate::symbolic::{GaussSymbol, Monomial};

/// Dimension, scalar curvature and the antisymmetric matrix of 2-forms `κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureModel {
    n: usize,
    s: Q,
    kappa: Vec<Vec<FormElement>>,
}

/// One `κ` entry as supplied by a caller, with one-based indices.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaEntry {
    pub i: usize,
    pub j: usize,
    pub form: FormElement,
}

impl KappaEntry {
    pub fn new(i: usize, j: usize, form: FormElement) -> Self {
        KappaEntry { i, j, form }
    }
}

impl CurvatureModel {
    /// Validates and completes a model from upper-triangle entries.
    ///
    /// Lower-triangle entries are accepted when they agree with the
    /// antisymmetric completion; diagonal entries must vanish.
    pub fn build(n: usize, s: Q, entries: &[KappaEntry]) -> Result<Self> {
        check_dim(n)?;
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        let mut explicit: BTreeMap<(usize, usize), FormElement> = BTreeMap::new();
        for e in entries {
            for idx in [e.i, e.j] {
                if idx == 0 || idx > n {
                    return Err(Error::IndexOutOfRange { index: idx, n });
                }
            }
            same_dim(n, e.form.n())?;
            if e.i == e.j {
                if !e.form.is_zero() {
                    return Err(Error::NonzeroDiagonal(e.i));
                }
                continue;
            }
            if !e.form.is_homogeneous(2) {
                return Err(Error::NonDegreeTwo { i: e.i, j: e.j });
            }
            // normalise to the upper triangle
            let (key, form) = if e.i < e.j {
                ((e.i, e.j), e.form.clone())
            } else {
                ((e.j, e.i), e.form.neg())
            };
            if let Some(prev) = explicit.get(&key) {
                if *prev != form {
                    return Err(Error::InconsistentAntisymmetry { i: key.0, j: key.1 });
                }
            }
            explicit.insert(key, form);
        }
        let mut kappa = vec![vec![FormElement::zero(n); n]; n];
        for ((i, j), f) in explicit {
            kappa[j - 1][i - 1] = f.neg();
            kappa[i - 1][j - 1] = f;
        }
        Ok(CurvatureModel { n, s, kappa })
    }

    /// `κ = 0` with the given scalar curvature.
    pub fn flat(n: usize, s: Q) -> Result<Self> {
        Self::build(n, s, &[])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scalar_curvature(&self) -> &Q {
        &self.s
    }

    /// `κᵢⱼ` (one-based).
    pub fn kappa(&self, i: usize, j: usize) -> &FormElement {
        &self.kappa[i - 1][j - 1]
    }

    pub fn is_flat(&self) -> bool {
        self.kappa.iter().flatten().all(|f| f.is_zero())
    }

    /// Nonzero strictly-upper-triangle entries, one-based.
    pub fn upper_entries(&self) -> Vec<KappaEntry> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                let f = self.kappa(i, j);
                if !f.is_zero() {
                    out.push(KappaEntry::new(i, j, f.clone()));
                }
            }
        }
        out
    }

    /// `(κ²)ᵢⱼ = Σ_p κᵢₚ ∧ κₚⱼ` (zero-based storage).
    pub fn kappa_squared(&self) -> Vec<Vec<FormElement>> {
        let n = self.n;
        let mut out = vec![vec![FormElement::zero(n); n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for p in 0..n {
                    let t = self.kappa[i][p].wedge_unchecked(&self.kappa[p][j]);
                    cell.add_assign_unchecked(&t);
                }
            }
        }
        out
    }

    /// Same model with a different scalar curvature.
    pub fn with_scalar_curvature(&self, s: Q) -> Self {
        CurvatureModel {
            n: self.n,
            s,
            kappa: self.kappa.clone(),
        }
    }
}

type Multi = Vec<u32>;

/// Form coefficients `C^{(r)}_{α,β}` of `κ(∂_ξ, ∂_η)^r = Σ C^{(r)}_{α,β} ∂_ξ^α ∂_η^β`.
pub fn coupling_table(model: &CurvatureModel, r: usize) -> BTreeMap<(Multi, Multi), FormElement> {
    let n = model.n;
    let mut table: BTreeMap<(Multi, Multi), FormElement> = BTreeMap::new();
    table.insert((vec![0; n], vec![0; n]), FormElement::one(n));
    for _ in 0..r {
        let mut next: BTreeMap<(Multi, Multi), FormElement> = BTreeMap::new();
        for ((alpha, beta), c) in &table {
            for i in 0..n {
                for j in 0..n {
                    let k = &model.kappa[i][j];
                    if k.is_zero() {
                        continue;
                    }
                    let v = c.wedge_unchecked(k);
                    if v.is_zero() {
                        continue;
                    }
                    let mut a = alpha.clone();
                    a[i] += 1;
                    let mut b = beta.clone();
                    b[j] += 1;
                    let slot = next.entry((a, b)).or_insert_with(|| FormElement::zero(n));
                    slot.add_assign_unchecked(&v);
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        table = next;
        if table.is_empty() {
            break;
        }
    }
    table
}

struct DerivativeCache<'a> {
    base: &'a GaussSymbol,
    cache: HashMap<Multi, GaussSymbol>,
}

impl<'a> DerivativeCache<'a> {
    fn new(base: &'a GaussSymbol) -> Self {
        DerivativeCache {
            base,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, alpha: &Multi) -> Result<&GaussSymbol> {
        if !self.cache.contains_key(alpha) {
            let d = self.base.partial_xi_multi(alpha)?;
            self.cache.insert(alpha.clone(), d);
        }
        Ok(&self.cache[alpha])
    }
}

fn coupling_term_with(
    a: &mut DerivativeCache<'_>,
    b: &mut DerivativeCache<'_>,
    table: &BTreeMap<(Multi, Multi), FormElement>,
    n: usize,
) -> Result<GaussSymbol> {
    let mut out = GaussSymbol::zero(n);
    for ((alpha, beta), c) in table {
        let da = a.get(alpha)?;
        let db = b.get(beta)?;
        if da.is_zero() || db.is_zero() {
            continue;
        }
        let prod = da.mul_unchecked(db).scale_form(c)?;
        out.add_assign_unchecked(&prod);
    }
    Ok(out)
}

/// The `r`-th coupling term `κ(∂_ξ, ∂_η)^r (a(ξ) ⊗ b(η))|_{ξ=η}`, without the
/// `(−½)^r / r!` weight.
pub fn coupling_term(
    a: &GaussSymbol,
    b: &GaussSymbol,
    model: &CurvatureModel,
    r: usize,
) -> Result<GaussSymbol> {
    same_dim(a.n(), b.n())?;
    same_dim(a.n(), model.n)?;
    let table = coupling_table(model, r);
    coupling_term_with(
        &mut DerivativeCache::new(a),
        &mut DerivativeCache::new(b),
        &table,
        model.n,
    )
}

/// `a #₀ b`.
pub fn getzler_product(
    a: &GaussSymbol,
    b: &GaussSymbol,
    model: &CurvatureModel,
) -> Result<GaussSymbol> {
    same_dim(a.n(), b.n())?;
    same_dim(a.n(), model.n)?;
    let n = model.n;
    let mut da = DerivativeCache::new(a);
    let mut db = DerivativeCache::new(b);
    let mut out = a.mul_unchecked(b);
    let mut weight = Q::one();
    for r in 1..=n / 2 {
        weight = weight * rational::frac(-1, 2) / rational::int(r as i64);
        let table = coupling_table(model, r);
        if table.is_empty() {
            break;
        }
        let term = coupling_term_with(&mut da, &mut db, &table, n)?;
        out.add_assign_unchecked(&term.scale(&weight));
    }
    debug_assert!(coupling_table(model, n / 2 + 1).is_empty());
    Ok(out)
}

/// The harmonic-oscillator operator
/// `L a = |ξ|² a − Σᵢⱼ κᵢⱼ ξᵢ ∂_{ξⱼ} a − ¼ Σᵢⱼ (κ²)ᵢⱼ ∂_{ξᵢ} ∂_{ξⱼ} a`.
///
/// Equals `−(−|ξ|²) #₀ a`.
pub fn oscillator_apply(a: &GaussSymbol, model: &CurvatureModel) -> Result<GaussSymbol> {
    same_dim(a.n(), model.n)?;
    let n = model.n;
    let mut out = GaussSymbol::norm_sq(n).mul_unchecked(a);
    let first: Vec<GaussSymbol> = (1..=n).map(|j| a.partial_xi(j)).collect::<Result<_>>()?;
    for i in 0..n {
        for (j, dj) in first.iter().enumerate() {
            let k = &model.kappa[i][j];
            if k.is_zero() || dj.is_zero() {
                continue;
            }
            let t = dj
                .mul_monomial(&Monomial::xi_axis(n, i + 1))
                .scale_form(k)?;
            out.add_assign_unchecked(&t.neg());
        }
    }
    let k2 = model.kappa_squared();
    let quarter = rational::frac(-1, 4);
    for i in 0..n {
        for j in 0..n {
            let k = &k2[i][j];
            if k.is_zero() {
                continue;
            }
            let d = first[j].partial_xi(i + 1)?;
            out.add_assign_unchecked(&d.scale_form(k)?.scale(&quarter));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn e(n: usize, idx: &[usize]) -> FormElement {
        FormElement::monomial(n, int(1), idx).unwrap()
    }

    fn theta_model(theta: Q) -> CurvatureModel {
        CurvatureModel::build(
            2,
            int(0),
            &[KappaEntry::new(1, 2, e(2, &[1, 2]).scale(&theta))],
        )
        .unwrap()
    }

    #[test]
    fn build_completes_antisymmetry() {
        let m = theta_model(frac(3, 2));
        assert_eq!(*m.kappa(2, 1), e(2, &[1, 2]).scale(&frac(-3, 2)));
        assert!(m.kappa(1, 1).is_zero());
    }

    #[test]
    fn build_rejects_bad_models() {
        assert!(matches!(
            CurvatureModel::build(2, int(0), &[KappaEntry::new(1, 2, e(2, &[1]))]),
            Err(Error::NonDegreeTwo { i: 1, j: 2 })
        ));
        assert!(matches!(
            CurvatureModel::build(3, int(0), &[]),
            Err(Error::OddDimension(3))
        ));
        let f = e(4, &[1, 2]);
        assert!(matches!(
            CurvatureModel::build(
                4,
                int(0),
                &[
                    KappaEntry::new(1, 2, f.clone()),
                    KappaEntry::new(2, 1, f.clone())
                ]
            ),
            Err(Error::InconsistentAntisymmetry { .. })
        ));
        // a consistent explicit pair is fine
        assert!(CurvatureModel::build(
            4,
            int(0),
            &[
                KappaEntry::new(1, 2, f.clone()),
                KappaEntry::new(2, 1, f.neg())
            ]
        )
        .is_ok());
        assert!(matches!(
            CurvatureModel::build(4, int(0), &[KappaEntry::new(1, 1, f.clone())]),
            Err(Error::NonzeroDiagonal(1))
        ));
        assert!(CurvatureModel::build(4, int(0), &[KappaEntry::new(1, 5, f)]).is_err());
    }

    #[test]
    fn flat_product_is_pointwise() {
        let m = CurvatureModel::flat(2, int(0)).unwrap();
        let x1 = GaussSymbol::xi(2, 1).unwrap();
        let x2 = GaussSymbol::xi(2, 2).unwrap();
        assert_eq!(getzler_product(&x1, &x2, &m).unwrap(), x1.mul(&x2).unwrap());
    }

    #[test]
    fn theta_product_of_linear_symbols() {
        // r=1: −½ (κ₁₂ ∂ξ₁ ∂η₂) ξ₁η₂ = −½ θ e₁∧e₂
        let theta = frac(5, 3);
        let m = theta_model(theta.clone());
        let x1 = GaussSymbol::xi(2, 1).unwrap();
        let x2 = GaussSymbol::xi(2, 2).unwrap();
        let expected = x1
            .mul(&x2)
            .unwrap()
            .add(&GaussSymbol::constant(
                e(2, &[1, 2]).scale(&(theta * frac(-1, 2))),
            ))
            .unwrap();
        assert_eq!(getzler_product(&x1, &x2, &m).unwrap(), expected);
    }

    #[test]
    fn theta_product_of_norms() {
        let m = theta_model(int(7));
        let a = GaussSymbol::norm_sq(2).neg();
        let p = getzler_product(&a, &a, &m).unwrap();
        assert_eq!(p, a.mul(&a).unwrap());
    }

    #[test]
    fn oscillator_examples() {
        let g = GaussSymbol::gaussian(2, int(1)).unwrap();
        let flat = CurvatureModel::flat(2, int(0)).unwrap();
        let expected = GaussSymbol::norm_sq(2).mul(&g).unwrap();
        assert_eq!(oscillator_apply(&g, &flat).unwrap(), expected);
        assert_eq!(
            oscillator_apply(&g, &theta_model(int(3))).unwrap(),
            expected
        );
    }

    #[test]
    fn oscillator_matches_product_with_negative_norm() {
        let m = CurvatureModel::build(
            4,
            int(1),
            &[
                KappaEntry::new(1, 2, e(4, &[1, 2]).add(&e(4, &[3, 4])).unwrap()),
                KappaEntry::new(3, 4, e(4, &[1, 2]).scale(&int(2))),
                KappaEntry::new(1, 3, e(4, &[2, 4])),
            ],
        )
        .unwrap();
        let a = GaussSymbol::gaussian(4, int(1))
            .unwrap()
            .mul(&GaussSymbol::xi(4, 2).unwrap())
            .unwrap()
            .add(
                &GaussSymbol::xi(4, 1)
                    .unwrap()
                    .mul(&GaussSymbol::xi(4, 3).unwrap())
                    .unwrap(),
            )
            .unwrap();
        let via_product = getzler_product(&GaussSymbol::norm_sq(4).neg(), &a, &m)
            .unwrap()
            .neg();
        assert_eq!(oscillator_apply(&a, &m).unwrap(), via_product);
    }

    #[test]
    fn coupling_vanishes_past_half_dimension() {
        let m = theta_model(int(1));
        assert!(coupling_table(&m, 2).is_empty());
        let a = GaussSymbol::gaussian(2, int(1)).unwrap();
        assert!(coupling_term(&a, &a, &m, 2).unwrap().is_zero());
    }

    #[test]
    fn dimension_mismatch() {
        let m = theta_model(int(1));
        let a = GaussSymbol::one(4);
        assert!(matches!(
            getzler_product(&a, &a, &m),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(oscillator_apply(&a, &m).is_err());
    }
}
