//! Exterior algebra `Λℝⁿ` with sparse coefficients.
//!
//! A basis element `e_{i₁}∧…∧e_{i_k}` with `i₁ < … < i_k` is stored as a
//! [`Blade`] bitmask (bit `i-1` set for `e_i`). The Koszul sign of a product
//! of two blades is the parity of the number of transpositions needed to
//! merge the two sorted index lists.
//!
//! Invariants of [`Form`]:
//! - every blade fits in `{1..n}`;
//! - no stored coefficient is zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// Largest supported dimension (blades are `u32` bitmasks).
pub const MAX_DIM: usize = 32;

/// Coefficient ring of a form. Implemented for [`Q`] and `f64`.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + Send
    + Sync
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + AddAssign
        + Send
        + Sync
{
}

/// A basis multi-index of the exterior algebra, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_bits(bits: u32) -> Self {
        Blade(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// The top blade `e₁∧…∧eₙ`.
    pub fn top(n: usize) -> Self {
        if n >= 32 {
            Blade(u32::MAX)
        } else {
            Blade((1u32 << n) - 1)
        }
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// One-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.0 & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }

    fn fits(self, n: usize) -> bool {
        n >= 32 || self.0 >> n == 0
    }

    /// Sign and blade of `self ∧ other`, or `None` if they share an index.
    pub fn wedge(self, other: Blade) -> Option<(bool, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (i in self, j in other) with i > j
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            let above = if j >= 31 { 0 } else { self.0 >> (j + 1) };
            swaps += above.count_ones();
        }
        Some((swaps % 2 == 1, Blade(self.0 | other.0)))
    }

    /// Sorts an arbitrary index list into a blade, returning the permutation
    /// sign, or `None` when an index repeats.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Option<(bool, Blade)>> {
        let mut acc = (false, Blade::SCALAR);
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            match acc.1.wedge(Blade(1 << (i - 1))) {
                Some((s, b)) => acc = (acc.0 ^ s, b),
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }
}

/// Total order used for presentation: by degree, then lexicographically on
/// the index list.
pub fn display_order(a: &Blade, b: &Blade) -> std::cmp::Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.indices().cmp(&b.indices()))
}

/// An element of `Λℝⁿ` with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<C> {
    n: usize,
    terms: BTreeMap<Blade, C>,
}

/// Exact rational forms.
pub type FormElement = Form<Q>;
/// Double-precision forms, produced by numeric evaluation.
pub type FloatForm = Form<f64>;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        Err(Error::UnsupportedDimension(n))
    } else {
        Ok(())
    }
}

pub(crate) fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        Err(Error::DimensionMismatch { left: a, right: b })
    } else {
        Ok(())
    }
}

fn accumulate<C: Scalar>(terms: &mut BTreeMap<Blade, C>, blade: Blade, value: C) {
    if value.is_zero() {
        return;
    }
    match terms.entry(blade) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += value;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl<C: Scalar> Form<C> {
    pub fn zero(n: usize) -> Self {
        Form {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, c: C) -> Self {
        let mut f = Self::zero(n);
        accumulate(&mut f.terms, Blade::SCALAR, c);
        f
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, C::one())
    }

    /// `c · e_{i₁}∧…∧e_{i_k}` for arbitrary (unsorted) one-based indices.
    pub fn monomial(n: usize, c: C, indices: &[usize]) -> Result<Self> {
        check_dim(n)?;
        let mut f = Self::zero(n);
        if let Some((neg, blade)) = Blade::from_indices(indices, n)? {
            accumulate(&mut f.terms, blade, if neg { -c } else { c });
        }
        Ok(f)
    }

    /// Basis vector `e_i`.
    pub fn basis(n: usize, i: usize) -> Result<Self> {
        Self::monomial(n, C::one(), &[i])
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, C)>,
    {
        check_dim(n)?;
        let mut f = Self::zero(n);
        for (idx, c) in terms {
            if let Some((neg, blade)) = Blade::from_indices(&idx, n)? {
                accumulate(&mut f.terms, blade, if neg { -c } else { c });
            }
        }
        Ok(f)
    }

    pub fn from_blades<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Blade, C)>,
    {
        check_dim(n)?;
        let mut f = Self::zero(n);
        for (blade, c) in terms {
            if !blade.fits(n) {
                return Err(Error::IndexOutOfRange {
                    index: 32 - blade.0.leading_zeros() as usize,
                    n,
                });
            }
            accumulate(&mut f.terms, blade, c);
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, blade: Blade) -> C {
        self.terms.get(&blade).cloned().unwrap_or_else(C::zero)
    }

    /// Scalar (degree-0) part.
    pub fn scalar_part(&self) -> C {
        self.coeff(Blade::SCALAR)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.n, other.n)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        out
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (b, c) in &other.terms {
            accumulate(&mut self.terms, *b, c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_dim(self.n, other.n)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn neg(&self) -> Self {
        Form {
            n: self.n,
            terms: self.terms.iter().map(|(b, c)| (*b, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        let mut out = Self::zero(self.n);
        for (b, v) in &self.terms {
            accumulate(&mut out.terms, *b, v.clone() * c.clone());
        }
        out
    }

    /// Exterior product with Koszul signs.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        same_dim(self.n, other.n)?;
        Ok(self.wedge_unchecked(other))
    }

    pub(crate) fn wedge_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                if let Some((neg, blade)) = ba.wedge(*bb) {
                    let v = ca.clone() * cb.clone();
                    accumulate(&mut out.terms, blade, if neg { -v } else { v });
                }
            }
        }
        out
    }

    /// Projection onto the degree-`d` component.
    pub fn degree_component(&self, d: usize) -> Self {
        Form {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.degree() == d)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `e₁∧…∧eₙ`.
    pub fn berezin_top(&self) -> C {
        self.coeff(Blade::top(self.n))
    }

    /// True when every term has degree `d` (the zero form is homogeneous of
    /// every degree).
    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|b| b.degree() == d)
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|b| b.degree() % 2 == 0)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|b| b.degree()).max()
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.n);
        for (b, c) in &self.terms {
            accumulate(&mut out.terms, *b, f(c));
        }
        out
    }

    /// Terms sorted by degree, then by index list.
    pub fn sorted_terms(&self) -> Vec<(Blade, C)> {
        let mut v: Vec<_> = self.terms.iter().map(|(b, c)| (*b, c.clone())).collect();
        v.sort_by(|a, b| display_order(&a.0, &b.0));
        v
    }
}

impl FormElement {
    pub fn to_float(&self) -> FloatForm {
        self.map(rational::to_f64)
    }
}

impl FloatForm {
    /// Largest absolute coefficient (sup norm over the basis).
    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Sup-norm distance between two float forms.
    pub fn distance(&self, other: &FloatForm) -> f64 {
        let mut d: f64 = 0.0;
        for (b, c) in &self.terms {
            d = d.max((c - other.coeff(*b)).abs());
        }
        for (b, c) in &other.terms {
            if !self.terms.contains_key(b) {
                d = d.max(c.abs());
            }
        }
        d
    }
}

impl<C: Scalar + fmt::Display> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.sorted_terms().iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if b.degree() == 0 {
                write!(f, "{c}")?;
            } else {
                let idx: Vec<String> = b.indices().iter().map(|i| format!("e{i}")).collect();
                write!(f, "({c})·{}", idx.join("∧"))?;
            }
        }
        Ok(())
    }
}
