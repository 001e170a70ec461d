//! Form-valued Gaussian-polynomial symbols in the fiber variables `ξ₁..ξₙ`
//! and the heat parameter `τ`.
//!
//! A [`GaussSymbol`] is a finite sum of strata `p_q(ξ, τ)·e^{−qτ|ξ|²}`, one
//! per distinct weight `q ≥ 0`. The weight multiplies `τ|ξ|²`, so `∂_τ`,
//! `∂_ξ` and multiplication by polynomials all stay inside the class.
//!
//! Fiber integrals leave the ring: they produce [`ScalarResult`] values of the
//! shape `Σ c_b τ^{b/2} · π^{a/2} · i^c`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{check_dim, same_dim, Blade, FloatForm, FormElement};
use crate::rational::{self, Q};

/// `ξ^α τ^m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub xi: Vec<u32>,
    pub tau: u32,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            xi: vec![0; n],
            tau: 0,
        }
    }

    pub fn new(xi: Vec<u32>, tau: u32) -> Self {
        Monomial { xi, tau }
    }

    /// `ξ_axis` (one-based axis).
    pub fn xi_axis(n: usize, axis: usize) -> Self {
        let mut m = Self::one(n);
        m.xi[axis - 1] = 1;
        m
    }

    pub fn xi_degree(&self) -> u32 {
        self.xi.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| a + b).collect(),
            tau: self.tau + other.tau,
        }
    }

    fn eval(&self, xi: &[f64], tau: f64) -> f64 {
        let mut v = tau.powi(self.tau as i32);
        for (x, &e) in xi.iter().zip(&self.xi) {
            v *= x.powi(e as i32);
        }
        v
    }
}

type Poly = BTreeMap<Monomial, FormElement>;

fn poly_accumulate(p: &mut Poly, m: Monomial, f: FormElement) {
    if f.is_zero() {
        return;
    }
    match p.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(f);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            e.get_mut().add_assign_unchecked(&f);
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// `Σ_q p_q(ξ, τ) e^{−qτ|ξ|²}` with form-valued polynomial parts.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussSymbol {
    n: usize,
    strata: BTreeMap<Q, Poly>,
}

impl GaussSymbol {
    pub fn zero(n: usize) -> Self {
        GaussSymbol {
            n,
            strata: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(FormElement::one(n))
    }

    pub fn constant(f: FormElement) -> Self {
        let n = f.n();
        let mut s = Self::zero(n);
        s.push(Q::zero(), Monomial::one(n), f);
        s
    }

    pub fn rational(n: usize, c: Q) -> Self {
        Self::constant(FormElement::scalar(n, c))
    }

    /// `e^{−qτ|ξ|²}`.
    pub fn gaussian(n: usize, q: Q) -> Result<Self> {
        Self::monomial(n, q, Monomial::one(n), FormElement::one(n))
    }

    /// `ξ_axis` (one-based).
    pub fn xi(n: usize, axis: usize) -> Result<Self> {
        check_axis(n, axis)?;
        Self::monomial(
            n,
            Q::zero(),
            Monomial::xi_axis(n, axis),
            FormElement::one(n),
        )
    }

    pub fn tau(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.push(Q::zero(), Monomial::new(vec![0; n], 1), FormElement::one(n));
        s
    }

    /// `|ξ|² = Σ ξᵢ²`.
    pub fn norm_sq(n: usize) -> Self {
        let mut s = Self::zero(n);
        for i in 0..n {
            let mut m = Monomial::one(n);
            m.xi[i] = 2;
            s.push(Q::zero(), m, FormElement::one(n));
        }
        s
    }

    /// `f · ξ^α τ^m · e^{−qτ|ξ|²}`.
    pub fn monomial(n: usize, q: Q, m: Monomial, f: FormElement) -> Result<Self> {
        check_dim(n)?;
        same_dim(n, f.n())?;
        if m.xi.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: m.xi.len(),
            });
        }
        if q.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "negative Gaussian weight {}",
                rational::format(&q)
            )));
        }
        let mut s = Self::zero(n);
        s.push(q, m, f);
        Ok(s)
    }

    /// Builds a symbol from `(weight, monomial, coefficient)` triples.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Q, Monomial, FormElement)>,
    {
        check_dim(n)?;
        let mut s = Self::zero(n);
        for (q, m, f) in terms {
            let t = Self::monomial(n, q, m, f)?;
            s.add_assign_unchecked(&t);
        }
        Ok(s)
    }

    fn push(&mut self, q: Q, m: Monomial, f: FormElement) {
        if f.is_zero() {
            return;
        }
        let poly = self.strata.entry(q.clone()).or_default();
        poly_accumulate(poly, m, f);
        if poly.is_empty() {
            self.strata.remove(&q);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.strata.is_empty()
    }

    /// Distinct Gaussian weights with nonzero polynomial part.
    pub fn weights(&self) -> impl Iterator<Item = &Q> {
        self.strata.keys()
    }

    /// All `(weight, monomial, coefficient)` terms.
    pub fn terms(&self) -> impl Iterator<Item = (&Q, &Monomial, &FormElement)> {
        self.strata
            .iter()
            .flat_map(|(q, p)| p.iter().map(move |(m, f)| (q, m, f)))
    }

    pub fn term_count(&self) -> usize {
        self.strata.values().map(|p| p.len()).sum()
    }

    pub fn max_xi_degree(&self) -> u32 {
        self.terms()
            .map(|(_, m, _)| m.xi_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn max_tau_degree(&self) -> u32 {
        self.terms().map(|(_, m, _)| m.tau).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.n, other.n)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (q, p) in &other.strata {
            for (m, f) in p {
                self.push(q.clone(), m.clone(), f.clone());
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map_coeffs(|f| f.scale(c))
    }

    /// Left wedge-scaling `c ∧ a`.
    pub fn scale_form(&self, c: &FormElement) -> Result<Self> {
        same_dim(self.n, c.n())?;
        Ok(self.map_coeffs(|f| c.wedge_unchecked(f)))
    }

    fn map_coeffs(&self, g: impl Fn(&FormElement) -> FormElement) -> Self {
        let mut out = Self::zero(self.n);
        for (q, m, f) in self.terms() {
            out.push(q.clone(), m.clone(), g(f));
        }
        out
    }

    /// Projection of every coefficient onto form degree `d`.
    pub fn degree_component(&self, d: usize) -> Self {
        self.map_coeffs(|f| f.degree_component(d))
    }

    /// Pointwise product: weights add, polynomials multiply, coefficients wedge.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_dim(self.n, other.n)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (qa, pa) in &self.strata {
            for (qb, pb) in &other.strata {
                let q = qa + qb;
                let poly = out.strata.entry(q.clone()).or_default();
                for (ma, fa) in pa {
                    for (mb, fb) in pb {
                        poly_accumulate(poly, ma.mul(mb), fa.wedge_unchecked(fb));
                    }
                }
                if poly.is_empty() {
                    out.strata.remove(&q);
                }
            }
        }
        out
    }

    /// Multiplies by `ξ^α τ^m`.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero(self.n);
        for (q, mm, f) in self.terms() {
            out.push(q.clone(), mm.mul(m), f.clone());
        }
        out
    }

    /// `∂/∂ξ_axis` (one-based), with the chain rule on each Gaussian factor.
    pub fn partial_xi(&self, axis: usize) -> Result<Self> {
        check_axis(self.n, axis)?;
        let i = axis - 1;
        let mut out = Self::zero(self.n);
        for (q, m, f) in self.terms() {
            let a = m.xi[i];
            if a > 0 {
                let mut d = m.clone();
                d.xi[i] -= 1;
                out.push(q.clone(), d, f.scale(&rational::int(a as i64)));
            }
            if !q.is_zero() {
                let mut d = m.clone();
                d.xi[i] += 1;
                d.tau += 1;
                out.push(q.clone(), d, f.scale(&(q * rational::int(-2))));
            }
        }
        Ok(out)
    }

    /// `∂_ξ^α` for an exponent vector `α`.
    pub fn partial_xi_multi(&self, alpha: &[u32]) -> Result<Self> {
        let mut cur = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                cur = cur.partial_xi(i + 1)?;
            }
        }
        Ok(cur)
    }

    /// `∂/∂τ`; the Gaussian contributes `−q|ξ|²`.
    pub fn partial_tau(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (q, m, f) in self.terms() {
            if m.tau > 0 {
                let mut d = m.clone();
                d.tau -= 1;
                out.push(q.clone(), d, f.scale(&rational::int(m.tau as i64)));
            }
            if !q.is_zero() {
                let c = -q.clone();
                for j in 0..self.n {
                    let mut d = m.clone();
                    d.xi[j] += 2;
                    out.push(q.clone(), d, f.scale(&c));
                }
            }
        }
        out
    }

    /// `∫₀^τ · dτ′` on a pure polynomial (only the `q = 0` stratum allowed).
    pub fn antiderivative_tau(&self) -> Result<Self> {
        if let Some(q) = self.strata.keys().find(|q| !q.is_zero()) {
            return Err(Error::NonzeroWeight(rational::format(q)));
        }
        let mut out = Self::zero(self.n);
        for (q, m, f) in self.terms() {
            let mut d = m.clone();
            d.tau += 1;
            let c = Q::new(1.into(), (m.tau as i64 + 1).into());
            out.push(q.clone(), d, f.scale(&c));
        }
        Ok(out)
    }

    /// Multiplies by `e^{−dq·τ|ξ|²}` (shifts every weight by `dq`). A negative
    /// shift divides the Gaussian out and fails if a weight would go negative.
    pub fn shift_weight(&self, dq: &Q) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (q, p) in &self.strata {
            let w = q + dq;
            if w.is_negative() {
                return Err(Error::InvalidArgument(format!(
                    "weight shift by {} leaves stratum {} negative",
                    rational::format(dq),
                    rational::format(q)
                )));
            }
            out.strata.insert(w, p.clone());
        }
        Ok(out)
    }

    /// Symbolic substitution `τ = 0`: a pure polynomial in `ξ`.
    pub fn at_tau_zero(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (_, m, f) in self.terms() {
            if m.tau == 0 {
                out.push(Q::zero(), m.clone(), f.clone());
            }
        }
        out
    }

    /// Closed-form Gaussian fiber integral `∫ a(ξ, τ) dξ` over `ℝⁿ`.
    ///
    /// `∫ ξ^α τ^m e^{−qτ|ξ|²} dξ = ∏ᵢ (αᵢ−1)!! (2qτ)^{−αᵢ/2} · (π/(qτ))^{n/2} · τ^m`
    /// when every `αᵢ` is even, and zero otherwise.
    pub fn integrate_xi(&self) -> Result<IntegratedForm> {
        let n = self.n;
        let mut out = IntegratedForm::zero(n);
        for (q, poly) in &self.strata {
            if q.is_zero() {
                return Err(Error::NonIntegrable(rational::format(q)));
            }
            let norm = if n % 2 == 0 {
                rational::powi(q, -(n as i64) / 2)
            } else {
                let root = rational::sqrt_exact(q).ok_or_else(|| {
                    Error::Irrational(format!("q^(-{n}/2) with q = {}", rational::format(q)))
                })?;
                rational::powi(&root, -(n as i64))
            };
            let two_q = q * rational::int(2);
            for (m, f) in poly {
                if m.xi.iter().any(|a| a % 2 == 1) {
                    continue;
                }
                let total = m.xi_degree() as i64;
                let mut c = norm.clone() * rational::powi(&two_q, -total / 2);
                for &a in &m.xi {
                    c *= rational::double_factorial_odd(a);
                }
                let tau_halves = 2 * m.tau as i64 - total - n as i64;
                for (blade, v) in f.terms() {
                    let s = ScalarResult::monomial(
                        v.clone() * c.clone(),
                        HalfInt::from_halves(tau_halves),
                        HalfInt::from_halves(n as i64),
                        0,
                    );
                    out.accumulate(*blade, s)?;
                }
            }
        }
        Ok(out)
    }

    /// Double-precision evaluation at `(ξ, τ)`.
    pub fn eval(&self, xi: &[f64], tau: f64) -> Result<FloatForm> {
        if xi.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: xi.len(),
            });
        }
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let mut out = FloatForm::zero(self.n);
        for (q, poly) in &self.strata {
            let w = (-rational::to_f64(q) * tau * r2).exp();
            for (m, f) in poly {
                let v = m.eval(xi, tau) * w;
                out.add_assign_unchecked(&f.to_float().scale(&v));
            }
        }
        Ok(out)
    }
}

fn check_axis(n: usize, axis: usize) -> Result<()> {
    if axis == 0 || axis > n {
        Err(Error::AxisOutOfRange { axis, n })
    } else {
        Ok(())
    }
}

impl fmt::Display for GaussSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.strata.is_empty() {
            return write!(f, "0");
        }
        for (k, (q, poly)) in self.strata.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let body: Vec<String> = poly
                .iter()
                .map(|(m, c)| {
                    let mut factors = Vec::new();
                    for (i, &e) in m.xi.iter().enumerate() {
                        match e {
                            0 => {}
                            1 => factors.push(format!("ξ{}", i + 1)),
                            _ => factors.push(format!("ξ{}^{e}", i + 1)),
                        }
                    }
                    match m.tau {
                        0 => {}
                        1 => factors.push("τ".to_string()),
                        t => factors.push(format!("τ^{t}")),
                    }
                    if factors.is_empty() {
                        format!("[{c}]")
                    } else {
                        format!("[{c}]·{}", factors.join("·"))
                    }
                })
                .collect();
            if q.is_zero() {
                write!(f, "{}", body.join(" + "))?;
            } else {
                write!(f, "({})·exp(-{q}·τ|ξ|²)", body.join(" + "))?;
            }
        }
        Ok(())
    }
}

/// A half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_halves(h: i64) -> Self {
        HalfInt(h)
    }

    pub fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub fn halves(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `"b/2"` rendering.
    pub fn to_halves_string(self) -> String {
        format!("{}/2", self.0)
    }

    /// Parses any rational with denominator dividing 2, e.g. `"-3/2"`, `"-4/2"`, `"1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let q = rational::parse(s)?;
        let twice = q * rational::int(2);
        if !twice.is_integer() {
            return Err(Error::InvalidRational(s.to_string()));
        }
        let v: i64 = num_traits::ToPrimitive::to_i64(twice.numer())
            .ok_or_else(|| Error::InvalidRational(s.to_string()))?;
        Ok(HalfInt(v))
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `(Σ_b c_b τ^{b/2}) · π^{a/2} · i^c`, exact.
///
/// The zero value is canonical: no terms, `π⁰`, `i⁰`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarResult {
    terms: BTreeMap<HalfInt, Q>,
    pi_power: HalfInt,
    i_power: u8,
}

impl Default for ScalarResult {
    fn default() -> Self {
        Self::zero()
    }
}

impl ScalarResult {
    pub fn zero() -> Self {
        ScalarResult {
            terms: BTreeMap::new(),
            pi_power: HalfInt::ZERO,
            i_power: 0,
        }
    }

    pub fn new(terms: BTreeMap<HalfInt, Q>, pi_power: HalfInt, i_power: i64) -> Self {
        let mut s = ScalarResult {
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            pi_power,
            i_power: i_power.rem_euclid(4) as u8,
        };
        s.normalize();
        s
    }

    pub fn monomial(c: Q, tau: HalfInt, pi_power: HalfInt, i_power: i64) -> Self {
        Self::new(BTreeMap::from([(tau, c)]), pi_power, i_power)
    }

    pub fn rational(c: Q) -> Self {
        Self::monomial(c, HalfInt::ZERO, HalfInt::ZERO, 0)
    }

    fn normalize(&mut self) {
        if self.terms.is_empty() {
            self.pi_power = HalfInt::ZERO;
            self.i_power = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<HalfInt, Q> {
        &self.terms
    }

    pub fn pi_power(&self) -> HalfInt {
        self.pi_power
    }

    pub fn i_power(&self) -> u8 {
        self.i_power
    }

    /// Sum of two values with the same `π` power; `i`-powers may differ by 0
    /// or 2 (the latter via `i² = −1`).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let incompatible = || Error::IncompatibleScalars {
            left_pi: self.pi_power.to_string(),
            left_i: self.i_power,
            right_pi: other.pi_power.to_string(),
            right_i: other.i_power,
        };
        if self.pi_power != other.pi_power {
            return Err(incompatible());
        }
        let sign = match (other.i_power + 4 - self.i_power) % 4 {
            0 => Q::one(),
            2 => -Q::one(),
            _ => return Err(incompatible()),
        };
        let mut terms = self.terms.clone();
        for (b, c) in &other.terms {
            let e = terms.entry(*b).or_insert_with(Q::zero);
            *e += c.clone() * sign.clone();
        }
        Ok(Self::new(terms, self.pi_power, self.i_power as i64))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|(b, v)| (*b, v.clone() * c.clone()))
                .collect(),
            self.pi_power,
            self.i_power as i64,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<HalfInt, Q> = BTreeMap::new();
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                *terms.entry(*ba + *bb).or_insert_with(Q::zero) += ca.clone() * cb.clone();
            }
        }
        Self::new(
            terms,
            self.pi_power + other.pi_power,
            self.i_power as i64 + other.i_power as i64,
        )
    }

    /// True when only the `τ⁰` term is present (or the value is zero).
    pub fn is_tau_independent(&self) -> bool {
        self.terms.keys().all(|b| *b == HalfInt::ZERO)
    }

    /// The rational part of a `τ`-independent value (zero for the zero value).
    pub fn tau_free_value(&self) -> Option<Q> {
        if self.is_tau_independent() {
            Some(
                self.terms
                    .get(&HalfInt::ZERO)
                    .cloned()
                    .unwrap_or_else(Q::zero),
            )
        } else {
            None
        }
    }

    /// Exact substitution of a positive rational `τ`; half-integer powers need
    /// `τ` to be a rational square.
    pub fn substitute_tau(&self, tau: &Q) -> Result<Self> {
        if !tau.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "τ = {} must be positive",
                rational::format(tau)
            )));
        }
        let root = rational::sqrt_exact(tau);
        let mut total = Q::zero();
        for (b, c) in &self.terms {
            let v = if b.is_integer() {
                rational::powi(tau, b.halves() / 2)
            } else {
                let r = root.as_ref().ok_or_else(|| {
                    Error::Irrational(format!("τ^({b}) at τ = {}", rational::format(tau)))
                })?;
                rational::powi(r, b.halves())
            };
            total += c.clone() * v;
        }
        Ok(Self::monomial(
            total,
            HalfInt::ZERO,
            self.pi_power,
            self.i_power as i64,
        ))
    }

    pub fn to_f64_parts(&self) -> Vec<(f64, f64)> {
        self.terms
            .iter()
            .map(|(b, c)| (b.halves() as f64 / 2.0, rational::to_f64(c)))
            .collect()
    }
}

impl fmt::Display for ScalarResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let body: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                if *b == HalfInt::ZERO {
                    format!("{c}")
                } else {
                    format!("{c}·τ^{b}")
                }
            })
            .collect();
        write!(f, "({})", body.join(" + "))?;
        if self.pi_power != HalfInt::ZERO {
            write!(f, "·π^{}", self.pi_power)?;
        }
        if self.i_power != 0 {
            write!(f, "·i^{}", self.i_power)?;
        }
        Ok(())
    }
}

/// A form whose coefficients are [`ScalarResult`] values: the output of a
/// fiber integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegratedForm {
    n: usize,
    terms: BTreeMap<Blade, ScalarResult>,
}

impl IntegratedForm {
    pub fn zero(n: usize) -> Self {
        IntegratedForm {
            n,
            terms: BTreeMap::new(),
        }
    }

    fn accumulate(&mut self, blade: Blade, s: ScalarResult) -> Result<()> {
        let cur = self.terms.remove(&blade).unwrap_or_default();
        let next = cur.add(&s)?;
        if !next.is_zero() {
            self.terms.insert(blade, next);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, blade: Blade) -> ScalarResult {
        self.terms.get(&blade).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &ScalarResult)> {
        self.terms.iter()
    }

    /// Coefficient of the top blade `e₁∧…∧eₙ`.
    pub fn berezin_top(&self) -> ScalarResult {
        self.get(Blade::top(self.n))
    }
}
