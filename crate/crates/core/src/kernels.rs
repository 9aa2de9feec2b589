//! Szegő kernels of H²(𝕋ⁿ), their Gram matrices and finite combinations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::json::ComplexJson;
use crate::linalg::{self, CMatrix, CVector, LinalgError, CONDITION_LIMIT};
use crate::tpoly::{analytic_indices, MultiIndex, TrigPoly, TrigPolyError};

/// Modulus tolerance for the single coefficient of an inner monomial.
pub const INNER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("point has no coordinates")]
    EmptyPoint,
    #[error("coordinate {axis} has modulus {modulus} (must be < 1)")]
    OutsideDisc { axis: usize, modulus: f64 },
    #[error("coordinate {axis} is not finite")]
    NotFinite { axis: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("points {first} and {second} coincide")]
    DuplicatePoints { first: usize, second: usize },
    #[error("no points given")]
    NoPoints,
    #[error("{points} points but {coeffs} coefficients")]
    LengthMismatch { points: usize, coeffs: usize },
    #[error("Gram matrix condition number {condition:.3e} exceeds {limit:.1e}")]
    IllConditioned { condition: f64, limit: f64 },
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("polynomial has non-analytic exponent {0}")]
    NotAnalytic(MultiIndex),
    #[error(transparent)]
    Poly(#[from] TrigPolyError),
}

impl From<LinalgError> for KernelError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::IllConditioned { condition, limit } => KernelError::IllConditioned { condition, limit },
            _ => KernelError::NotPositiveDefinite,
        }
    }
}

/// A point of the open polydisc 𝔻ⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ComplexJson>", into = "Vec<ComplexJson>")]
pub struct Point {
    z: Vec<Complex64>,
}

impl Point {
    pub fn new(z: Vec<Complex64>) -> Result<Self, KernelError> {
        if z.is_empty() {
            return Err(KernelError::EmptyPoint);
        }
        for (axis, zi) in z.iter().enumerate() {
            if !zi.is_finite() {
                return Err(KernelError::NotFinite { axis });
            }
            let modulus = zi.norm();
            if modulus >= 1.0 {
                return Err(KernelError::OutsideDisc { axis, modulus });
            }
        }
        Ok(Self { z })
    }

    /// Real coordinates, for quick construction in tests and demos.
    pub fn real(coords: &[f64]) -> Result<Self, KernelError> {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Self {
            z: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.z
    }

    pub fn conj(&self) -> Vec<Complex64> {
        self.z.iter().map(|v| v.conj()).collect()
    }
}

impl TryFrom<Vec<ComplexJson>> for Point {
    type Error = KernelError;
    fn try_from(v: Vec<ComplexJson>) -> Result<Self, Self::Error> {
        Point::new(v.into_iter().map(Complex64::from).collect())
    }
}

impl From<Point> for Vec<ComplexJson> {
    fn from(p: Point) -> Self {
        p.z.into_iter().map(ComplexJson::from).collect()
    }
}

/// `𝕊(z, w) = ∏ 1/(1 − z_i w̄_i)`; `z` may lie on the closed polydisc.
pub fn szego_value(z: &[Complex64], w: &Point) -> Complex64 {
    debug_assert_eq!(z.len(), w.dim());
    z.iter()
        .zip(&w.z)
        .map(|(zi, wi)| (Complex64::new(1.0, 0.0) - zi * wi.conj()).inv())
        .product()
}

/// Total-degree truncation `Σ_{|k| ≤ d} w̄^k z^k` of `𝕊(·, w)`.
pub fn szego_series(w: &Point, degree: u32) -> TrigPoly {
    let wc = w.conj();
    let terms = analytic_indices(w.dim(), degree).into_iter().map(|k| {
        let v: Complex64 = k.as_slice().iter().zip(&wc).map(|(&e, x)| x.powi(e)).product();
        (k, v)
    });
    TrigPoly::from_terms(w.dim(), terms).expect("kernel series indices match the point dimension")
}

fn check_points(points: &[Point]) -> Result<usize, KernelError> {
    let first = points.first().ok_or(KernelError::NoPoints)?;
    let dim = first.dim();
    for (i, p) in points.iter().enumerate() {
        if p.dim() != dim {
            return Err(KernelError::DimensionMismatch { left: dim, right: p.dim() });
        }
        for (j, q) in points[..i].iter().enumerate() {
            if p == q {
                return Err(KernelError::DuplicatePoints { first: j, second: i });
            }
        }
    }
    Ok(dim)
}

/// Unchecked Gram matrix `G[j][i] = 𝕊(z_j, z_i) = ⟨𝕊(·,z_i), 𝕊(·,z_j)⟩`.
pub(crate) fn raw_gram(points: &[Point]) -> CMatrix {
    let m = points.len();
    CMatrix::from_fn(m, m, |j, i| szego_value(points[j].coords(), &points[i]))
}

/// Gram matrix of the kernel functions at distinct points, rejecting condition numbers above 1e12.
pub fn gram_matrix(points: &[Point]) -> Result<CMatrix, KernelError> {
    check_points(points)?;
    let g = raw_gram(points);
    let condition = linalg::hpd_condition(&g)?;
    if condition > CONDITION_LIMIT {
        return Err(KernelError::IllConditioned {
            condition,
            limit: CONDITION_LIMIT,
        });
    }
    Ok(g)
}

/// True iff `p` is a unimodular constant times a monomial.
pub fn is_inner_poly(p: &TrigPoly) -> Result<bool, KernelError> {
    if let Some((k, _)) = p.terms().find(|(k, _)| !k.is_nonnegative()) {
        return Err(KernelError::NotAnalytic(k.clone()));
    }
    if p.len() != 1 {
        return Ok(false);
    }
    let (_, a) = p.terms().next().expect("one term");
    Ok((a.norm() - 1.0).abs() <= INNER_TOL)
}

/// `Σ c_i 𝕊(·, z_i)` over distinct points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelComboJson", into = "KernelComboJson")]
pub struct KernelCombo {
    dim: usize,
    points: Vec<Point>,
    coeffs: Vec<Complex64>,
}

impl KernelCombo {
    pub fn new(points: Vec<Point>, coeffs: Vec<Complex64>) -> Result<Self, KernelError> {
        let dim = check_points(&points)?;
        if points.len() != coeffs.len() {
            return Err(KernelError::LengthMismatch {
                points: points.len(),
                coeffs: coeffs.len(),
            });
        }
        Ok(Self { dim, points, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Exact value from the rational kernel formula; `|z_i| ≤ 1` allowed.
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.points
            .iter()
            .zip(&self.coeffs)
            .map(|(p, c)| c * szego_value(z, p))
            .sum()
    }

    /// `Σ c_i · szego_series(z_i, d)`.
    pub fn truncate(&self, degree: u32) -> TrigPoly {
        let mut acc = TrigPoly::zero(self.dim);
        for (p, c) in self.points.iter().zip(&self.coeffs) {
            acc = &acc + &szego_series(p, degree).scale(*c);
        }
        acc
    }

    /// `‖Σ c_i 𝕊(·,z_i)‖²₂ = cᴴ G c`.
    pub fn norm_sqr(&self) -> f64 {
        let c = CVector::from_column_slice(&self.coeffs);
        (c.adjoint() * raw_gram(&self.points) * &c)[(0, 0)].re.max(0.0)
    }

    /// Coefficient of `z^k` (`k ≥ 0`) in the power series: `Σ c_i z̄_i^k`.
    pub fn coefficient(&self, k: &MultiIndex) -> Complex64 {
        if !k.is_nonnegative() {
            return Complex64::new(0.0, 0.0);
        }
        self.points
            .iter()
            .zip(&self.coeffs)
            .map(|(p, c)| {
                c * p
                    .coords()
                    .iter()
                    .zip(k.as_slice())
                    .map(|(zi, &e)| zi.conj().powi(e))
                    .product::<Complex64>()
            })
            .sum()
    }

    /// `∫ (Σ c_i 𝕊(·,z_i)) f dμ`, exact for a trigonometric polynomial `f`.
    pub fn integrate_against(&self, f: &TrigPoly) -> Result<Complex64, KernelError> {
        if f.dim() != self.dim {
            return Err(KernelError::DimensionMismatch { left: self.dim, right: f.dim() });
        }
        Ok(f.terms()
            .filter(|(k, _)| k.as_slice().iter().all(|&e| e <= 0))
            .map(|(k, a)| a * self.coefficient(&k.neg()))
            .sum())
    }
}

/// `Σ c_i 𝕊(z, z_i)`.
pub fn evaluate_combo(combo: &KernelCombo, z: &[Complex64]) -> Complex64 {
    combo.evaluate(z)
}

#[derive(Serialize, Deserialize)]
struct KernelComboJson {
    points: Vec<Point>,
    coeffs: Vec<ComplexJson>,
}

impl TryFrom<KernelComboJson> for KernelCombo {
    type Error = KernelError;
    fn try_from(v: KernelComboJson) -> Result<Self, Self::Error> {
        KernelCombo::new(v.points, v.coeffs.into_iter().map(Complex64::from).collect())
    }
}

impl From<KernelCombo> for KernelComboJson {
    fn from(k: KernelCombo) -> Self {
        Self {
            points: k.points,
            coeffs: k.coeffs.into_iter().map(ComplexJson::from).collect(),
        }
    }
}

/// An analytic function carried either as a polynomial or as an exact kernel combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticSymbol {
    Poly { poly: TrigPoly },
    Combo { combo: KernelCombo },
}

impl From<TrigPoly> for AnalyticSymbol {
    fn from(poly: TrigPoly) -> Self {
        AnalyticSymbol::Poly { poly }
    }
}

impl From<KernelCombo> for AnalyticSymbol {
    fn from(combo: KernelCombo) -> Self {
        AnalyticSymbol::Combo { combo }
    }
}

impl AnalyticSymbol {
    pub fn dim(&self) -> usize {
        match self {
            AnalyticSymbol::Poly { poly } => poly.dim(),
            AnalyticSymbol::Combo { combo } => combo.dim(),
        }
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64, KernelError> {
        match self {
            AnalyticSymbol::Poly { poly } => Ok(poly.evaluate(z)?),
            AnalyticSymbol::Combo { combo } => {
                if z.len() != combo.dim() {
                    return Err(KernelError::DimensionMismatch { left: combo.dim(), right: z.len() });
                }
                Ok(combo.evaluate(z))
            }
        }
    }

    /// `∫ ψ f dμ`.
    pub fn integrate_against(&self, f: &TrigPoly) -> Result<Complex64, KernelError> {
        match self {
            AnalyticSymbol::Poly { poly } => Ok(poly.integrate_product(f)?),
            AnalyticSymbol::Combo { combo } => combo.integrate_against(f),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            AnalyticSymbol::Poly { poly } => poly.l2_norm().powi(2),
            AnalyticSymbol::Combo { combo } => combo.norm_sqr(),
        }
    }

    /// Polynomial representative of total degree ≤ `degree` (exact for polynomials of that degree).
    pub fn truncate(&self, degree: u32) -> TrigPoly {
        match self {
            AnalyticSymbol::Poly { poly } => TrigPoly::from_terms(
                poly.dim(),
                poly.terms()
                    .filter(|(k, _)| k.total_degree() <= degree)
                    .map(|(k, c)| (k.clone(), *c)),
            )
            .expect("dimension preserved"),
            AnalyticSymbol::Combo { combo } => combo.truncate(degree),
        }
    }

    /// Power-series coefficient of `z^k`.
    pub fn coefficient(&self, k: &MultiIndex) -> Complex64 {
        match self {
            AnalyticSymbol::Poly { poly } => poly.coeff(k),
            AnalyticSymbol::Combo { combo } => combo.coefficient(k),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AnalyticSymbol::Poly { poly } => poly.is_zero(),
            AnalyticSymbol::Combo { combo } => combo.coeffs().iter().all(|c| c.norm() == 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn pt(x: &[f64]) -> Point {
        Point::real(x).unwrap()
    }

    #[test]
    fn kernel_values() {
        let w = Point::new(vec![c(0.3, 0.2), c(-0.1, 0.5)]).unwrap();
        assert_eq!(szego_value(&[c(0.0, 0.0), c(0.0, 0.0)], &w), c(1.0, 0.0));
        let z = pt(&[0.5, 0.0]);
        assert!((szego_value(z.coords(), &z) - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((szego_value(pt(&[0.5, 0.5]).coords(), &z) - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_series() {
        let s = szego_series(&Point::origin(2), 5);
        assert_eq!(s, TrigPoly::constant(2, c(1.0, 0.0)));

        let s = szego_series(&pt(&[0.5, 0.0]), 2);
        let expected = TrigPoly::from_terms(
            2,
            [
                (MultiIndex::from([0, 0]), c(1.0, 0.0)),
                (MultiIndex::from([1, 0]), c(0.5, 0.0)),
                (MultiIndex::from([2, 0]), c(0.25, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(s, expected);

        let w = Point::new(vec![c(0.3, -0.4), c(0.2, 0.1)]).unwrap();
        let z1sq = TrigPoly::monomial([2, 0].into(), c(1.0, 0.0));
        let v = z1sq.inner_l2(&szego_series(&w, 3)).unwrap();
        assert!((v - w.coords()[0].powi(2)).norm() < 1e-15);
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(&[Point::origin(2)]).unwrap();
        assert_eq!(g[(0, 0)], c(1.0, 0.0));

        let g = gram_matrix(&[Point::origin(2), pt(&[0.5, 0.0])]).unwrap();
        let expected = [1.0, 1.0, 1.0, 4.0 / 3.0];
        for (v, e) in g.iter().zip(expected) {
            assert!((v - c(e, 0.0)).norm() < 1e-15);
        }
        // 2×2 oracle: trace and determinant both positive
        let tr: f64 = 1.0 + 4.0 / 3.0;
        let det = 4.0 / 3.0 - 1.0;
        let disc = (tr * tr - 4.0 * det).sqrt();
        let lo = (tr - disc) / 2.0;
        assert!(lo > 0.0);
        assert!((linalg::hermitian_eigenvalues(&g)[0] - lo).abs() < 1e-14);

        assert_eq!(
            gram_matrix(&[pt(&[0.1, 0.2]), pt(&[0.1, 0.2])]).unwrap_err(),
            KernelError::DuplicatePoints { first: 0, second: 1 }
        );
        let near = [pt(&[0.1, 0.2]), pt(&[0.1, 0.2 + 1e-9])];
        assert!(matches!(gram_matrix(&near), Err(KernelError::IllConditioned { .. })));
    }

    #[test]
    fn inner_polynomials() {
        let m = TrigPoly::monomial([1, 2].into(), c(1.0, 0.0));
        assert!(is_inner_poly(&m).unwrap());
        let rotated = TrigPoly::monomial([1, 2].into(), Complex64::from_polar(1.0, 0.7));
        assert!(is_inner_poly(&rotated).unwrap());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = &TrigPoly::coordinate(2, 0).scale(c(s, 0.0)) + &TrigPoly::coordinate(2, 1).scale(c(s, 0.0));
        assert!(!is_inner_poly(&p).unwrap());
        assert!(!is_inner_poly(&TrigPoly::coordinate(2, 0).scale(c(0.5, 0.0))).unwrap());
        assert!(matches!(
            is_inner_poly(&TrigPoly::monomial([1, -1].into(), c(1.0, 0.0))),
            Err(KernelError::NotAnalytic(_))
        ));
    }

    #[test]
    fn combo_evaluation() {
        let one = KernelCombo::new(vec![Point::origin(2)], vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(one.evaluate(&[c(0.3, 0.1), c(1.0, 0.0)]), c(1.0, 0.0));

        let combo = KernelCombo::new(vec![Point::origin(2), pt(&[0.5, 0.0])], vec![c(-1.5, 0.0), c(1.5, 0.0)]).unwrap();
        assert!(combo.evaluate(&[c(0.0, 0.0), c(0.0, 0.0)]).norm() < 1e-15);
        assert!((evaluate_combo(&combo, &[c(0.5, 0.0), c(0.0, 0.0)]) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn combo_pairings_are_exact() {
        let combo = KernelCombo::new(
            vec![pt(&[0.2, -0.3]), Point::new(vec![c(0.1, 0.4), c(0.0, -0.5)]).unwrap()],
            vec![c(0.7, -0.2), c(-0.4, 0.9)],
        )
        .unwrap();
        // ‖ψ‖² from the Gram form agrees with a long truncation
        let t = combo.truncate(60);
        assert!((combo.norm_sqr() - t.l2_norm().powi(2)).abs() < 1e-12);
        let f = TrigPoly::from_terms(
            2,
            [
                (MultiIndex::from([-1, -2]), c(0.5, 0.5)),
                (MultiIndex::from([0, 0]), c(1.0, 0.0)),
                (MultiIndex::from([1, -1]), c(2.0, 0.0)),
            ],
        )
        .unwrap();
        let exact = combo.integrate_against(&f).unwrap();
        let approx = t.integrate_product(&f).unwrap();
        assert!((exact - approx).norm() < 1e-14);
    }

    #[test]
    fn point_validation_and_json() {
        assert!(matches!(Point::real(&[0.5, 1.0]), Err(KernelError::OutsideDisc { axis: 1, .. })));
        let p: Point = serde_json::from_str(r#"[{"re":0.5,"im":0.0},{"re":0.0}]"#).unwrap();
        assert_eq!(p, pt(&[0.5, 0.0]));
        assert!(serde_json::from_str::<Point>(r#"[{"re":1.5,"im":0.0}]"#).is_err());
    }
}
