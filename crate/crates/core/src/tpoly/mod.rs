//! Sparse trigonometric polynomials on the torus 𝕋ⁿ.
//!
//! A [`TrigPoly`] is a finite Laurent polynomial `Σ a_k z^k` with `k ∈ ℤⁿ`. On the
//! torus `z̄_i = 1/z_i`, so conjugation, products and L² inner products are all
//! exact coefficient operations. L¹ and sup norms have no closed form and are
//! estimated on a [`TorusGrid`].

mod grid;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use grid::{GridNorms, TorusGrid};
pub(crate) use grid::{forward_dft_in_place, inverse_dft_in_place};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrigPolyError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("pole at zero: coordinate {axis} vanishes but a negative exponent is present")]
    PoleAtZero { axis: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("grid needs at least one point per axis")]
    EmptyGrid,
    #[error("grid with {points_per_axis} points per axis in {dim} dimensions is too large")]
    GridTooLarge { dim: usize, points_per_axis: usize },
    #[error("multi-index {index:?} has length {found}, expected {expected}")]
    IndexLength {
        index: Vec<i32>,
        found: usize,
        expected: usize,
    },
}

fn check_dims(left: usize, right: usize) -> Result<(), TrigPolyError> {
    if left != right {
        return Err(TrigPolyError::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Fourier exponent `k ∈ ℤⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<i32>);

impl MultiIndex {
    pub fn new(exponents: Vec<i32>) -> Self {
        Self(exponents)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// The exponent of the coordinate function `z_axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut k = vec![0; dim];
        k[axis] = 1;
        Self(k)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// `Σ |k_i|`.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|k| k.unsigned_abs()).sum()
    }

    pub fn max_abs(&self) -> u32 {
        self.0.iter().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    /// True when every exponent is non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&k| k >= 0)
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn classify(&self) -> ComponentLabel {
        classify_index(self)
    }

    pub fn neg(&self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|k| -k).collect())
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<i32>> for MultiIndex {
    fn from(v: Vec<i32>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[i32; N]> for MultiIndex {
    fn from(v: [i32; N]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Which summand of `L² = H²̄ + H² + M_n` a Fourier mode belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentLabel {
    Constant,
    Analytic,
    Coanalytic,
    Mixed,
}

pub fn classify_index(k: &MultiIndex) -> ComponentLabel {
    let has_pos = k.0.iter().any(|&x| x > 0);
    let has_neg = k.0.iter().any(|&x| x < 0);
    match (has_pos, has_neg) {
        (false, false) => ComponentLabel::Constant,
        (true, false) => ComponentLabel::Analytic,
        (false, true) => ComponentLabel::Coanalytic,
        (true, true) => ComponentLabel::Mixed,
    }
}

/// Projection targets for [`TrigPoly::component_project`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// Constant ∪ Analytic.
    H2,
    /// Analytic only (functions vanishing at the origin).
    H2Zero,
    /// Constant ∪ Coanalytic.
    H2Conj,
    Mixed,
    Constant,
}

impl Component {
    pub fn contains(self, label: ComponentLabel) -> bool {
        use ComponentLabel as L;
        match self {
            Component::H2 => matches!(label, L::Constant | L::Analytic),
            Component::H2Zero => label == L::Analytic,
            Component::H2Conj => matches!(label, L::Constant | L::Coanalytic),
            Component::Mixed => label == L::Mixed,
            Component::Constant => label == L::Constant,
        }
    }
}

/// A finite Laurent polynomial on 𝕋ⁿ with double-precision complex coefficients.
///
/// Coefficients equal to exactly zero are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::monomial(MultiIndex::zero(dim), c)
    }

    pub fn monomial(k: MultiIndex, c: Complex64) -> Self {
        let mut p = Self::zero(k.dim());
        p.accumulate(k, c);
        p
    }

    /// The coordinate function `z_axis`.
    pub fn coordinate(dim: usize, axis: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, axis), Complex64::new(1.0, 0.0))
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, TrigPolyError>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        if dim == 0 {
            return Err(TrigPolyError::ZeroDimension);
        }
        let mut p = Self::zero(dim);
        for (k, c) in terms {
            if k.dim() != dim {
                return Err(TrigPolyError::IndexLength {
                    found: k.dim(),
                    index: k.0,
                    expected: dim,
                });
            }
            p.accumulate(k, c);
        }
        Ok(p)
    }

    fn accumulate(&mut self, k: MultiIndex, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(k) {
            Entry::Vacant(v) => {
                if c != Complex64::new(0.0, 0.0) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: &MultiIndex) -> Complex64 {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Terms in lexicographic order of the exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::total_degree).max().unwrap_or(0)
    }

    pub fn max_abs_exponent(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::max_abs).max().unwrap_or(0)
    }

    /// Support lies in `ℤ₊ⁿ`.
    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(MultiIndex::is_nonnegative)
    }

    /// `Σ |a_k|`, an upper bound for the sup norm on the closed polydisc/torus.
    pub fn coefficient_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Exact `‖p‖₂` by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn try_add(&self, other: &TrigPoly) -> Result<TrigPoly, TrigPolyError> {
        check_dims(self.dim, other.dim)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.accumulate(k.clone(), *c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TrigPoly) -> Result<TrigPoly, TrigPolyError> {
        check_dims(self.dim, other.dim)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.accumulate(k.clone(), -*c);
        }
        Ok(out)
    }

    /// Full convolution of supports.
    pub fn try_mul(&self, other: &TrigPoly) -> Result<TrigPoly, TrigPolyError> {
        check_dims(self.dim, other.dim)?;
        let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                *acc.entry(k1.plus(k2)).or_insert(Complex64::new(0.0, 0.0)) += c1 * c2;
            }
        }
        acc.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(TrigPoly {
            dim: self.dim,
            coeffs: acc,
        })
    }

    pub fn scale(&self, s: Complex64) -> TrigPoly {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            let v = c * s;
            if v != Complex64::new(0.0, 0.0) {
                coeffs.insert(k.clone(), v);
            }
        }
        TrigPoly {
            dim: self.dim,
            coeffs,
        }
    }

    /// Multiplication by the monomial `z^k`.
    pub fn shift(&self, k: &MultiIndex) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(j, c)| (j.plus(k), *c)).collect(),
        }
    }

    /// Pointwise conjugate on the torus: `a_k z^k ↦ ā_k z^{-k}`.
    pub fn conjugate(&self) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.neg(), c.conj())).collect(),
        }
    }

    /// `⟨p, q⟩_{L²} = Σ p_k q̄_k`.
    pub fn inner_l2(&self, other: &TrigPoly) -> Result<Complex64, TrigPolyError> {
        check_dims(self.dim, other.dim)?;
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &small.coeffs {
            if let Some(d) = large.coeffs.get(k) {
                acc += if flip { d * c.conj() } else { c * d.conj() };
            }
        }
        Ok(acc)
    }

    /// `∫_{𝕋ⁿ} p q dμ = Σ_k p_k q_{-k}`.
    pub fn integrate_product(&self, other: &TrigPoly) -> Result<Complex64, TrigPolyError> {
        check_dims(self.dim, other.dim)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.coeffs {
            if let Some(d) = other.coeffs.get(&k.neg()) {
                acc += c * d;
            }
        }
        Ok(acc)
    }

    /// Point evaluation. Negative powers use `z̄_i` when `|z_i| = 1` and `1/z_i`
    /// otherwise.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64, TrigPolyError> {
        check_dims(self.dim, z.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.coeffs {
            let mut term = *c;
            for (axis, (&e, &zi)) in k.0.iter().zip(z).enumerate() {
                if e >= 0 {
                    term *= zi.powi(e);
                } else {
                    if zi == Complex64::new(0.0, 0.0) {
                        return Err(TrigPolyError::PoleAtZero { axis });
                    }
                    let inv = if zi.norm() == 1.0 { zi.conj() } else { zi.inv() };
                    term *= inv.powi(-e);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Keeps exactly the coefficients whose index lies in `target`.
    pub fn component_project(&self, target: Component) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| target.contains(classify_index(k)))
                .map(|(k, c)| (k.clone(), *c))
                .collect(),
        }
    }

    /// Values at every grid node, in the grid's enumeration order.
    pub fn evaluate_on_grid(&self, grid: &TorusGrid) -> Result<Vec<Complex64>, TrigPolyError> {
        check_dims(self.dim, grid.dim())?;
        Ok(grid::evaluate_terms(
            grid,
            self.coeffs.iter().map(|(k, c)| (k.as_slice(), *c)),
            self.coeffs.len(),
        ))
    }

    pub fn grid_norms(&self, grid: &TorusGrid) -> Result<GridNorms, TrigPolyError> {
        Ok(GridNorms::from_values(&self.evaluate_on_grid(grid)?, grid))
    }
}

impl Serialize for TrigPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TrigPolyJson {
            dim: self.dim,
            terms: self
                .coeffs
                .iter()
                .map(|(k, c)| TermJson {
                    k: k.0.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = TrigPolyJson::deserialize(deserializer)?;
        TrigPoly::from_terms(
            raw.dim,
            raw.terms
                .into_iter()
                .map(|t| (MultiIndex(t.k), Complex64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct TrigPolyJson {
    dim: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    k: Vec<i32>,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)·z^{}", c.re, c.im, k)?;
        }
        Ok(())
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        self.try_add(rhs).expect("trigonometric polynomial dimension mismatch")
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self.try_sub(rhs).expect("trigonometric polynomial dimension mismatch")
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        self.try_mul(rhs).expect("trigonometric polynomial dimension mismatch")
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// All multi-indices `k ≥ 0` with `Σk_i ≤ degree`, in graded order.
pub fn analytic_indices(dim: usize, degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for d in 0..=degree {
        homogeneous_indices(dim, d, &mut out);
    }
    out
}

/// Appends all `k ≥ 0` with `Σk_i = degree`, first coordinate descending.
pub fn homogeneous_indices(dim: usize, degree: u32, out: &mut Vec<MultiIndex>) {
    fn rec(prefix: &mut Vec<i32>, remaining: u32, slots: usize, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            prefix.push(remaining as i32);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first as i32);
            rec(prefix, remaining - first, slots - 1, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::with_capacity(dim), degree, dim, out);
}

/// Every `k ∈ ℤⁿ` with `Σ|k_i| ≤ degree` carrying the given label.
pub fn indices_with_label(dim: usize, degree: u32, label: ComponentLabel) -> Vec<MultiIndex> {
    let d = degree as i32;
    let mut out = Vec::new();
    let mut cur = vec![-d; dim];
    loop {
        let k = MultiIndex(cur.clone());
        if k.total_degree() <= degree && classify_index(&k) == label {
            out.push(k);
        }
        let mut axis = dim;
        loop {
            if axis == 0 {
                // graded order for reproducible generator lists
                out.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then(b.cmp(a)));
                return out;
            }
            axis -= 1;
            if cur[axis] < d {
                cur[axis] += 1;
                break;
            }
            cur[axis] = -d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mono(k: &[i32], a: Complex64) -> TrigPoly {
        TrigPoly::monomial(MultiIndex::new(k.to_vec()), a)
    }

    fn p_diag() -> TrigPoly {
        &mono(&[1, 0], c(FRAC_1_SQRT_2, 0.0)) + &mono(&[0, 1], c(FRAC_1_SQRT_2, 0.0))
    }

    #[test]
    fn products_on_the_torus() {
        let z1 = TrigPoly::coordinate(1, 0);
        assert_eq!(&z1 * &z1.conjugate(), TrigPoly::constant(1, c(1.0, 0.0)));

        let one = TrigPoly::constant(1, c(1.0, 0.0));
        let prod = &(&one + &z1) * &(&one - &z1);
        let expected = &one - &mono(&[2], c(1.0, 0.0));
        assert_eq!(prod, expected);

        let p = p_diag();
        let sq = &p * &p.conjugate();
        assert!((sq.coeff(&[0, 0].into()) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((sq.coeff(&[1, -1].into()) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((sq.coeff(&[-1, 1].into()) - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(sq.len(), 3);
    }

    #[test]
    fn cancellation_prunes_exact_zeros() {
        let z = TrigPoly::coordinate(2, 0);
        assert!((&z - &z).is_zero());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = TrigPoly::coordinate(1, 0);
        let b = TrigPoly::coordinate(2, 0);
        assert_eq!(
            a.try_mul(&b),
            Err(TrigPolyError::DimensionMismatch { left: 1, right: 2 })
        );
        assert!(a.inner_l2(&b).is_err());
    }

    #[test]
    fn conjugation() {
        let z1 = TrigPoly::coordinate(1, 0);
        assert_eq!(z1.conjugate(), mono(&[-1], c(1.0, 0.0)));
        let q = mono(&[1, -1], c(2.0, 3.0));
        assert_eq!(q.conjugate(), mono(&[-1, 1], c(2.0, -3.0)));
        assert_eq!(q.conjugate().conjugate(), q);
    }

    #[test]
    fn inner_products() {
        let z1 = TrigPoly::coordinate(2, 0);
        let z2 = TrigPoly::coordinate(2, 1);
        assert_eq!(z1.inner_l2(&z1).unwrap(), c(1.0, 0.0));
        assert_eq!(z1.inner_l2(&z2).unwrap(), c(0.0, 0.0));
        let s = c(FRAC_1_SQRT_2, 0.0);
        let a = &z1.scale(s) + &z2.scale(s);
        let b = &z1.scale(s) - &z2.scale(s);
        assert!(a.inner_l2(&b).unwrap().norm() < 1e-16);
    }

    #[test]
    fn point_evaluation() {
        let z1z2 = mono(&[1, 1], c(1.0, 0.0));
        assert!((z1z2.evaluate(&[c(0.5, 0.0), c(0.5, 0.0)]).unwrap() - c(0.25, 0.0)).norm() < 1e-16);

        let one_plus = &TrigPoly::constant(2, c(1.0, 0.0)) + &TrigPoly::coordinate(2, 0);
        let v = one_plus.evaluate(&[c(0.0, 0.5), c(7.0, -3.0)]).unwrap();
        assert!((v - c(1.0, 0.5)).norm() < 1e-16);

        let v = p_diag().evaluate(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((v - c(2f64.sqrt(), 0.0)).norm() < 1e-15);

        let inv = mono(&[-1, 0], c(1.0, 0.0));
        assert_eq!(
            inv.evaluate(&[c(0.0, 0.0), c(1.0, 0.0)]),
            Err(TrigPolyError::PoleAtZero { axis: 0 })
        );
        let v = inv.evaluate(&[c(0.5, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn grid_norm_examples() {
        let z3 = mono(&[3], c(1.0, 0.0));
        for n in [1, 2, 5, 64] {
            let norms = z3.grid_norms(&TorusGrid::new(1, n).unwrap()).unwrap();
            assert!((norms.l1 - 1.0).abs() < 1e-14, "N = {n}");
        }

        // oracle: (1/2π)∫|1+e^{iθ}|dθ = 4/π by midpoint quadrature, scaled by 1/√2
        let m = 200_000;
        let oracle: f64 = (0..m)
            .map(|j| {
                let t = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                c(1.0 + t.cos(), t.sin()).norm()
            })
            .sum::<f64>()
            / m as f64
            * FRAC_1_SQRT_2;
        assert!((oracle - 4.0 / PI * FRAC_1_SQRT_2).abs() < 1e-8);
        let norms = p_diag().grid_norms(&TorusGrid::new(2, 512).unwrap()).unwrap();
        assert!((norms.l1 - oracle).abs() < 2e-3);
        assert!((norms.l1 - 0.9003).abs() < 2e-3);

        let one_plus = &TrigPoly::constant(1, c(1.0, 0.0)) + &TrigPoly::coordinate(1, 0);
        let norms = one_plus.grid_norms(&TorusGrid::new(1, 512).unwrap()).unwrap();
        assert!((norms.sup - 2.0).abs() < 1e-4);
    }

    #[test]
    fn index_classification() {
        assert_eq!(classify_index(&[2, 0].into()), ComponentLabel::Analytic);
        assert_eq!(classify_index(&[0, -3].into()), ComponentLabel::Coanalytic);
        assert_eq!(classify_index(&[1, -1].into()), ComponentLabel::Mixed);
        assert_eq!(classify_index(&[0, 0].into()), ComponentLabel::Constant);
    }

    #[test]
    fn component_projection_examples() {
        let q = mono(&[1, -1], c(1.0, 0.0));
        assert_eq!(q.component_project(Component::Mixed), q);
        assert!(q.component_project(Component::H2).is_zero());

        let p = &(&TrigPoly::constant(2, c(1.0, 0.0)) + &TrigPoly::coordinate(2, 0))
            + &mono(&[-1, 1], c(1.0, 0.0));
        assert_eq!(p.component_project(Component::H2Zero), TrigPoly::coordinate(2, 0));

        let r = &TrigPoly::constant(2, c(2.0, 0.0)) + &TrigPoly::coordinate(2, 0);
        assert_eq!(r.component_project(Component::Constant), TrigPoly::constant(2, c(2.0, 0.0)));
    }

    #[test]
    fn json_round_trip_is_sorted() {
        let p = &mono(&[1, -1], c(2.0, 3.0)) + &mono(&[0, 2], c(-1.0, 0.0));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"dim":2,"terms":[{"k":[0,2],"re":-1.0,"im":0.0},{"k":[1,-1],"re":2.0,"im":3.0}]}"#
        );
        let back: TrigPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<TrigPoly>(r#"{"dim":2,"terms":[{"k":[1],"re":1.0}]}"#).is_err());
    }

    #[test]
    fn index_enumeration() {
        assert_eq!(analytic_indices(2, 2).len(), 6);
        assert_eq!(analytic_indices(3, 1).len(), 4);
        let mixed = indices_with_label(2, 2, ComponentLabel::Mixed);
        assert_eq!(mixed.len(), 2);
        assert!(mixed.contains(&[1, -1].into()));
        assert_eq!(indices_with_label(1, 5, ComponentLabel::Mixed).len(), 0);
        assert_eq!(indices_with_label(2, 3, ComponentLabel::Analytic).len(), 9);
    }
}
