//! Functions on 𝕋ⁿ of the form `conj(Σ c_i 𝕊(·, z_i)) + p` with `p` a trigonometric polynomial.

use num_complex::Complex64;
use serde::Serialize;

use crate::kernels::{AnalyticSymbol, KernelCombo, KernelError};
use crate::tpoly::{Component, TorusGrid, TrigPoly};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusFn {
    poly: TrigPoly,
    #[serde(skip_serializing_if = "Option::is_none")]
    conj_combo: Option<KernelCombo>,
}

impl From<TrigPoly> for TorusFn {
    fn from(poly: TrigPoly) -> Self {
        Self { poly, conj_combo: None }
    }
}

impl TorusFn {
    pub fn zero(dim: usize) -> Self {
        TrigPoly::zero(dim).into()
    }

    /// Boundary conjugate `ψ̄` of an analytic symbol.
    pub fn conj_of(symbol: &AnalyticSymbol) -> Self {
        match symbol {
            AnalyticSymbol::Poly { poly } => poly.conjugate().into(),
            AnalyticSymbol::Combo { combo } => Self {
                poly: TrigPoly::zero(combo.dim()),
                conj_combo: Some(combo.clone()),
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn poly(&self) -> &TrigPoly {
        &self.poly
    }

    pub fn conj_combo(&self) -> Option<&KernelCombo> {
        self.conj_combo.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
            && self
                .conj_combo
                .as_ref()
                .is_none_or(|c| c.coeffs().iter().all(|v| v.norm() == 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            poly: self.poly.scale(s),
            // s·conj(C) = conj(s̄·C)
            conj_combo: self.conj_combo.as_ref().map(|c| scale_combo(c, s.conj())),
        }
    }

    pub fn add(&self, other: &TorusFn) -> TorusFn {
        let conj_combo = match (&self.conj_combo, &other.conj_combo) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => Some(merge_combos(a, b)),
        };
        TorusFn {
            poly: &self.poly + &other.poly,
            conj_combo,
        }
    }

    /// Values at the grid nodes, in grid order.
    pub fn evaluate_on_grid(&self, grid: &TorusGrid) -> Vec<Complex64> {
        let mut values = self.poly.evaluate_on_grid(grid).expect("grid dimension matches");
        if let Some(combo) = &self.conj_combo {
            for (v, k) in values.iter_mut().zip(combo_on_grid(combo, grid)) {
                *v += k.conj();
            }
        }
        values
    }

    /// Grid average of `|f|`.
    pub fn grid_l1(&self, grid: &TorusGrid) -> f64 {
        let values = self.evaluate_on_grid(grid);
        values.iter().map(|v| v.norm()).sum::<f64>() / values.len() as f64
    }

    /// `∫ a f dμ` for a trigonometric polynomial `a`; exact.
    pub fn pair_poly(&self, a: &TrigPoly) -> Complex64 {
        let mut acc = a.integrate_product(&self.poly).expect("dimension matches");
        if let Some(combo) = &self.conj_combo {
            // ∫ a·conj(K_i) = ⟨P_{H²} a, K_i⟩ = (P_{H²} a)(z_i)
            let analytic = a.component_project(Component::H2);
            for (p, c) in combo.points().iter().zip(combo.coeffs()) {
                acc += c.conj() * analytic.evaluate(p.coords()).expect("dimension matches");
            }
        }
        acc
    }

    /// `∫ ψ f dμ` for an analytic symbol `ψ`; exact.
    pub fn pair_symbol(&self, psi: &AnalyticSymbol) -> Result<Complex64, KernelError> {
        match psi {
            AnalyticSymbol::Poly { poly } => Ok(self.pair_poly(poly)),
            AnalyticSymbol::Combo { combo } => {
                let mut acc = combo.integrate_against(&self.poly)?;
                if let Some(cc) = &self.conj_combo {
                    for (p, c) in cc.points().iter().zip(cc.coeffs()) {
                        acc += c.conj() * combo.evaluate(p.coords());
                    }
                }
                Ok(acc)
            }
        }
    }
}

fn scale_combo(c: &KernelCombo, s: Complex64) -> KernelCombo {
    KernelCombo::new(c.points().to_vec(), c.coeffs().iter().map(|v| v * s).collect()).expect("same points")
}

fn merge_combos(a: &KernelCombo, b: &KernelCombo) -> KernelCombo {
    let mut points = a.points().to_vec();
    let mut coeffs = a.coeffs().to_vec();
    for (p, c) in b.points().iter().zip(b.coeffs()) {
        match points.iter().position(|q| q == p) {
            Some(i) => coeffs[i] += c,
            None => {
                points.push(p.clone());
                coeffs.push(*c);
            }
        }
    }
    KernelCombo::new(points, coeffs).expect("merged points are distinct")
}

/// `Σ c_i 𝕊(node, z_i)` at every grid node, via per-axis factor tables.
pub(crate) fn combo_on_grid(combo: &KernelCombo, grid: &TorusGrid) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let roots: Vec<Complex64> = (0..n)
        .map(|t| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / n as f64))
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (p, c) in combo.points().iter().zip(combo.coeffs()) {
        let tables: Vec<Vec<Complex64>> = p
            .coords()
            .iter()
            .map(|zi| roots.iter().map(|w| (Complex64::new(1.0, 0.0) - w * zi.conj()).inv()).collect())
            .collect();
        for (idx, slot) in out.iter_mut().enumerate() {
            let mut rest = idx;
            let mut v = *c;
            for axis in (0..dim).rev() {
                v *= tables[axis][rest % n];
                rest /= n;
            }
            *slot += v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Point;
    use crate::linalg::c;

    #[test]
    fn grid_values_match_pointwise_evaluation() {
        let combo = KernelCombo::new(
            vec![Point::real(&[0.3, -0.2]).unwrap(), Point::new(vec![c(0.1, 0.5), c(0.0, 0.2)]).unwrap()],
            vec![c(1.0, -0.5), c(0.25, 0.75)],
        )
        .unwrap();
        let f = TorusFn::conj_of(&combo.clone().into()).add(&TrigPoly::coordinate(2, 1).into());
        let grid = TorusGrid::new(2, 6).unwrap();
        let values = f.evaluate_on_grid(&grid);
        for (i, v) in values.iter().enumerate() {
            let z = grid.node(i);
            let expected = combo.evaluate(&z).conj() + z[1];
            assert!((v - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn pairings_agree_with_truncated_series() {
        let combo = KernelCombo::new(
            vec![Point::real(&[0.3, -0.2]).unwrap(), Point::real(&[-0.4, 0.1]).unwrap()],
            vec![c(1.0, -0.5), c(0.25, 0.75)],
        )
        .unwrap();
        let f = TorusFn::conj_of(&combo.clone().into()).scale(c(0.3, 0.2));
        let series = TorusFn::from(combo.truncate(60).conjugate()).scale(c(0.3, 0.2));
        let a = TrigPoly::from_terms(
            2,
            [
                ([0, 0].into(), c(0.5, 0.0)),
                ([2, 1].into(), c(0.1, -0.3)),
                ([-1, 2].into(), c(1.0, 1.0)),
            ],
        )
        .unwrap();
        assert!((f.pair_poly(&a) - series.pair_poly(&a)).norm() < 1e-14);
        let psi: AnalyticSymbol = KernelCombo::new(vec![Point::real(&[0.5, 0.5]).unwrap()], vec![c(0.7, 0.0)])
            .unwrap()
            .into();
        let exact = f.pair_symbol(&psi).unwrap();
        let approx = series.pair_poly(&psi.truncate(60));
        assert!((exact - approx).norm() < 1e-12);
    }
}
