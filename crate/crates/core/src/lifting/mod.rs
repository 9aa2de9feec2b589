//! Lifting criteria as a certificate engine.
//!
//! For a module map `X` on `Q` with `ψ = X(P_Q 1)`, liftability is decided through
//! `dist_{L¹}(ψ̄/‖ψ‖², M̃) ≥ 1` where `M̃ = (Q^conj ⊖ ψ̄) ∔ M_n ∔ H²₀`. The distance
//! is bracketed from below by dual certificates (bounded analytic symbols that
//! annihilate `M̃`) and from above by achieved `L¹` values of `ψ̄/‖ψ‖² + h`,
//! `h` in a truncation of `M̃`. A separate search looks for `f ∈ M_Q` with
//! `|∫ψ f| > ‖f‖₁`, which refutes contractivity of the functional directly.

mod dual;
mod irls;
mod refute;
mod torus_fn;

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::kernels::{AnalyticSymbol, KernelError};
use crate::linalg::{self, CMatrix, CVector};
use crate::quotient::{self, ModuleMap, QuotientError, QuotientModule, MODULE_MAP_TOL};
use crate::tpoly::{indices_with_label, ComponentLabel, MultiIndex, TorusGrid, TrigPoly, TrigPolyError};

pub use dual::{default_dictionary, dual_lower_bound, DualCertificate};
pub use irls::{upper_bound_min, UpperBound};
pub use refute::{refute_contractivity, RefuteBudget, Refutation};
pub use torus_fn::TorusFn;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LiftError {
    #[error("operator is not a module map (commutator {commutator:.3e})")]
    NotAModuleMap { commutator: f64 },
    #[error("operator norm {norm:.12} exceeds 1")]
    NotAContraction { norm: f64 },
    #[error("the zero function has no normalized conjugate")]
    ZeroFunction,
    #[error("symbol has total degree {degree} > {max}")]
    DegreeTooHigh { degree: u32, max: u32 },
    #[error("function has non-analytic exponent {0}")]
    NotAnalytic(MultiIndex),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Poly(#[from] TrigPolyError),
}

/// Numerical knobs shared by every verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftConfig {
    /// Grid points per axis; `None` picks 256 for n ≤ 2 and 64 for n = 3.
    pub grid_points: Option<usize>,
    pub seed: u64,
    /// IRLS iterations and refutation sweeps.
    pub budget_iters: usize,
    pub yes_tol: f64,
    pub no_margin: f64,
    pub refute_margin: f64,
    pub ortho_tol: f64,
    pub eps_irls: f64,
    /// Overrides the per-dimension cap on the degree of `M_n`/`H²₀` generators.
    pub max_generator_degree: Option<u32>,
}

impl Default for LiftConfig {
    fn default() -> Self {
        Self {
            grid_points: None,
            seed: 0,
            budget_iters: 40,
            yes_tol: 1e-6,
            no_margin: 1e-3,
            refute_margin: 1e-4,
            ortho_tol: 1e-10,
            eps_irls: 1e-8,
            max_generator_degree: None,
        }
    }
}

impl LiftConfig {
    pub fn grid(&self, dim: usize) -> Result<TorusGrid, TrigPolyError> {
        TorusGrid::new(dim, self.grid_points.unwrap_or_else(|| TorusGrid::default_points(dim)))
    }

    /// Degree used for `M_n` and `H²₀` generators given the module truncation.
    pub fn generator_degree(&self, dim: usize, requested: u32, grid: &TorusGrid) -> u32 {
        let alias_free = (grid.points_per_axis() as u32).saturating_sub(1) / 2;
        let cap = self.max_generator_degree.unwrap_or(match dim {
            1 => u32::MAX,
            2 => 16,
            _ => 8,
        });
        requested.min(alias_free).min(cap)
    }
}

/// Generators of a truncated `(Q^conj ⊖ ψ̄) ∔ M_n ∔ H²₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceSpec {
    dim: usize,
    qconj_basis: Vec<TorusFn>,
    include_mixed_to_degree: u32,
    include_h2zero_to_degree: u32,
}

impl SubspaceSpec {
    pub fn new(dim: usize, qconj_basis: Vec<TorusFn>, mixed_degree: u32, h2zero_degree: u32) -> Self {
        Self {
            dim,
            qconj_basis,
            include_mixed_to_degree: mixed_degree,
            include_h2zero_to_degree: h2zero_degree,
        }
    }

    /// `L_n = M_n ⊕ H²₀` truncated at `degree`.
    pub fn l_n(dim: usize, degree: u32) -> Self {
        Self::new(dim, Vec::new(), degree, degree)
    }

    pub fn empty(dim: usize) -> Self {
        Self::new(dim, Vec::new(), 0, 0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn qconj_basis(&self) -> &[TorusFn] {
        &self.qconj_basis
    }

    pub fn mixed_degree(&self) -> u32 {
        self.include_mixed_to_degree
    }

    pub fn h2zero_degree(&self) -> u32 {
        self.include_h2zero_to_degree
    }

    /// Mixed exponents followed by non-constant analytic exponents, each in graded order.
    pub fn monomials(&self) -> Vec<MultiIndex> {
        let mut out = indices_with_label(self.dim, self.include_mixed_to_degree, ComponentLabel::Mixed);
        out.extend(indices_with_label(self.dim, self.include_h2zero_to_degree, ComponentLabel::Analytic));
        out
    }

    pub fn generator_count(&self) -> usize {
        self.qconj_basis.len() + self.monomials().len()
    }

    /// True when `k` is the exponent of some monomial generator.
    pub(crate) fn has_monomial(&self, k: &MultiIndex) -> bool {
        match k.classify() {
            ComponentLabel::Mixed => k.total_degree() <= self.include_mixed_to_degree,
            ComponentLabel::Analytic => k.total_degree() <= self.include_h2zero_to_degree,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    CertifiedYes,
    CertifiedNo,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::CertifiedYes => "CertifiedYes",
            Outcome::CertifiedNo => "CertifiedNo",
            Outcome::Inconclusive => "Inconclusive",
        }
    }
}

/// Two-sided bounds on the `L¹` distance with their witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceEstimate {
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Option<DualCertificate>,
    pub upper_witness: Option<TorusFn>,
    /// Grid on which `upper` was measured.
    pub upper_grid: Option<usize>,
    /// Every valid certificate with positive value, best first.
    pub certificates: Vec<DualCertificate>,
}

impl DistanceEstimate {
    pub fn certificate_for(&self, symbol: &TrigPoly) -> Option<&DualCertificate> {
        self.certificates.iter().find(|c| c.same_symbol_up_to_rotation(symbol))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub estimate: DistanceEstimate,
    pub refutation: Option<Refutation>,
    /// `ψ = X(P_Q 1)` (or `f` for the perturbation problem).
    pub psi: Option<AnalyticSymbol>,
    pub operator_norm: Option<f64>,
    pub generator_degree: u32,
    pub grid_points: usize,
    pub diagnostics: Vec<String>,
}

/// `∫ ψ f dμ`, exact by coefficient pairing.
pub fn functional_value(psi: &AnalyticSymbol, f: &TrigPoly) -> Result<Complex64, LiftError> {
    if psi.dim() != f.dim() {
        return Err(TrigPolyError::DimensionMismatch {
            left: psi.dim(),
            right: f.dim(),
        }
        .into());
    }
    if let AnalyticSymbol::Poly { poly } = psi {
        if let Some((k, _)) = poly.terms().find(|(k, _)| !k.is_nonnegative()) {
            return Err(LiftError::NotAnalytic(k.clone()));
        }
    }
    Ok(psi.integrate_against(f)?)
}

/// A finite-dimensional `Q` seen through its basis: conjugated basis functions, Gram
/// matrix, and the coefficients of `ψ`.
struct ModuleSide {
    conj_basis: Vec<TorusFn>,
    gram: CMatrix,
    psi_coeffs: CVector,
}

impl ModuleSide {
    fn from_module(q: &QuotientModule, psi_coeffs: CVector) -> Self {
        let conj_basis = (0..q.size())
            .map(|i| {
                let mut e = CVector::zeros(q.size());
                e[i] = Complex64::new(1.0, 0.0);
                TorusFn::conj_of(&q.element(&e))
            })
            .collect();
        Self {
            conj_basis,
            gram: q.gram().clone(),
            psi_coeffs,
        }
    }

    fn conj_element(&self, a: &CVector) -> TorusFn {
        let dim = self.conj_basis[0].dim();
        self.conj_basis
            .iter()
            .zip(a.iter())
            .filter(|(_, c)| c.norm() > 0.0)
            .fold(TorusFn::zero(dim), |acc, (f, c)| acc.add(&f.scale(c.conj())))
    }

    /// Conjugates of a `G`-orthonormal basis of `{a ∈ Q : ⟨a, ψ⟩ = 0}`.
    fn qconj_minus_psi(&self) -> Result<Vec<TorusFn>, LiftError> {
        let m = self.gram.nrows();
        if m <= 1 {
            return Ok(Vec::new());
        }
        let chol = linalg::guarded_cholesky(&self.gram).map_err(QuotientError::from)?;
        let l = chol.l();
        // b = Lᴴ a is orthonormal coordinates; constraint is b ⊥ u with u = Lᴴ ψ_c
        let u = l.adjoint() * &self.psi_coeffs;
        let mut frame: Vec<CVector> = vec![u.normalize()];
        for i in 0..m {
            let mut v = CVector::zeros(m);
            v[i] = Complex64::new(1.0, 0.0);
            for f in &frame {
                let proj = f.dotc(&v);
                v -= f * proj;
            }
            let norm = v.norm();
            if norm > 1e-8 {
                frame.push(v / Complex64::new(norm, 0.0));
            }
            if frame.len() == m {
                break;
            }
        }
        let lh = l.adjoint();
        frame[1..]
            .iter()
            .map(|b| {
                let a = lh
                    .solve_upper_triangular(b)
                    .ok_or(LiftError::Quotient(QuotientError::NotPositiveDefinite))?;
                Ok(self.conj_element(&a))
            })
            .collect()
    }
}

/// The common certification pipeline given `ψ`, the module side and generator degree.
fn certify(
    psi: AnalyticSymbol,
    side: &ModuleSide,
    degree: u32,
    grid: &TorusGrid,
    config: &LiftConfig,
    extra_dictionary: &[TrigPoly],
    mut diagnostics: Vec<String>,
) -> Result<Verdict, LiftError> {
    let dim = psi.dim();
    let norm_sqr = psi.norm_sqr();
    if norm_sqr <= 1e-28 {
        diagnostics.push("ψ vanishes, so the functional is zero and trivially contractive".into());
        return Ok(Verdict {
            outcome: Outcome::CertifiedYes,
            estimate: DistanceEstimate {
                lower: f64::INFINITY,
                upper: f64::INFINITY,
                lower_witness: None,
                upper_witness: None,
                upper_grid: None,
                certificates: Vec::new(),
            },
            refutation: None,
            psi: Some(psi),
            operator_norm: None,
            generator_degree: degree,
            grid_points: grid.points_per_axis(),
            diagnostics,
        });
    }
    let target = TorusFn::conj_of(&psi).scale(Complex64::new(1.0 / norm_sqr, 0.0));
    let spec = SubspaceSpec::new(dim, side.qconj_minus_psi()?, degree, degree);

    let mut dictionary = default_dictionary(dim, degree);
    dictionary.extend(extra_dictionary.iter().cloned());
    let mut estimate = dual_lower_bound(&target, &spec, &dictionary, config.ortho_tol);

    let upper = upper_bound_min(&target, &spec, grid, config.budget_iters, config.eps_irls);
    estimate.upper = upper.value;
    estimate.upper_witness = Some(upper.h.clone());
    estimate.upper_grid = Some(upper.verify_points);

    // M_Q generators for the direct search: the full Q^conj plus low-degree M_n, H²₀ monomials
    let mut starts = vec![TorusFn::conj_of(&psi)];
    if let Some(best) = upper.best_residual_fn(&target) {
        starts.push(best);
    }
    let refute_spec = SubspaceSpec::new(dim, side.conj_basis.clone(), degree, degree);
    let search_grid = refute::search_grid(grid)?;
    let refutation = refute_contractivity(
        &psi,
        &refute_spec,
        &starts,
        &RefuteBudget {
            seed: config.seed,
            iterations: config.budget_iters,
            refute_margin: config.refute_margin,
        },
        &search_grid,
    )?;

    if estimate.lower > estimate.upper + 1e-9 {
        diagnostics.push(format!(
            "weak duality violated on the grid: lower {} > upper {}",
            estimate.lower, estimate.upper
        ));
    }

    let yes = estimate.lower >= 1.0 - config.yes_tol;
    let no_by_upper = estimate.upper <= 1.0 - config.no_margin;
    let outcome = match (yes, refutation.is_some() || no_by_upper) {
        (true, true) => {
            diagnostics.push("certificate and refutation disagree; reporting inconclusive".into());
            Outcome::Inconclusive
        }
        (true, false) => Outcome::CertifiedYes,
        (false, true) => Outcome::CertifiedNo,
        (false, false) => {
            diagnostics.push(format!(
                "gap: lower {:.6} < 1 − yes_tol and upper {:.6} > 1 − no_margin",
                estimate.lower, estimate.upper
            ));
            Outcome::Inconclusive
        }
    };
    if refutation.is_some() {
        diagnostics.push("contractivity refuted by an explicit witness".into());
    }
    Ok(Verdict {
        outcome,
        estimate,
        refutation,
        psi: Some(psi),
        operator_norm: None,
        generator_degree: degree,
        grid_points: grid.points_per_axis(),
        diagnostics,
    })
}

/// Verdict on whether a contractive module map `X` on `Q` lifts to a Schur symbol.
pub fn lift_verdict(q: &Arc<QuotientModule>, x: &ModuleMap, config: &LiftConfig) -> Result<Verdict, LiftError> {
    lift_verdict_with(q, x, config, &[])
}

/// [`lift_verdict`] with extra candidate certificate symbols.
pub fn lift_verdict_with(
    q: &Arc<QuotientModule>,
    x: &ModuleMap,
    config: &LiftConfig,
    extra_dictionary: &[TrigPoly],
) -> Result<Verdict, LiftError> {
    let commutator = x.commutator_norm()?;
    if commutator > MODULE_MAP_TOL {
        return Err(LiftError::NotAModuleMap { commutator });
    }
    let norm = quotient::operator_norm(x)?;
    if norm > 1.0 + 1e-8 {
        return Err(LiftError::NotAContraction { norm });
    }
    let one = q.project(&TrigPoly::constant(q.dim(), Complex64::new(1.0, 0.0)))?;
    let psi_coeffs = x.matrix() * one;
    let psi = q.element(&psi_coeffs);
    let side = ModuleSide::from_module(q, psi_coeffs);
    let grid = config.grid(q.dim())?;
    let degree = config.generator_degree(q.dim(), 2 * q.trunc_degree().max(1), &grid);
    let mut verdict = certify(psi, &side, degree, &grid, config, extra_dictionary, Vec::new())?;
    verdict.operator_norm = Some(norm);
    Ok(verdict)
}

/// Can `f` be perturbed by some `g ⊥ f` into a Schur function?
pub fn perturb_verdict(f: &TrigPoly, config: &LiftConfig) -> Result<Verdict, LiftError> {
    if let Some((k, _)) = f.terms().find(|(k, _)| !k.is_nonnegative()) {
        return Err(LiftError::NotAnalytic(k.clone()));
    }
    if f.is_zero() {
        return Err(LiftError::ZeroFunction);
    }
    let grid = config.grid(f.dim())?;
    let degree = config.generator_degree(f.dim(), 2 * f.total_degree().max(1), &grid);
    let psi: AnalyticSymbol = f.clone().into();
    let side = ModuleSide {
        conj_basis: vec![TorusFn::conj_of(&psi)],
        gram: CMatrix::from_element(1, 1, Complex64::new(psi.norm_sqr(), 0.0)),
        psi_coeffs: CVector::from_element(1, Complex64::new(1.0, 0.0)),
    };
    certify(psi, &side, degree, &grid, config, &[], Vec::new())
}

/// Carathéodory–Fejér: does `p` extend by terms of degree > m to a Schur function?
pub fn cf_verdict(p: &TrigPoly, m: u32, config: &LiftConfig) -> Result<Verdict, LiftError> {
    if let Some((k, _)) = p.terms().find(|(k, _)| !k.is_nonnegative()) {
        return Err(LiftError::NotAnalytic(k.clone()));
    }
    let degree = p.total_degree();
    if degree > m {
        return Err(LiftError::DegreeTooHigh { degree, max: m });
    }
    let q = QuotientModule::homogeneous(m, p.dim())?;
    let x = quotient::compress(&q, p)?;
    let norm = quotient::operator_norm(&x)?;
    if norm > 1.0 + 1e-8 {
        let grid = config.grid(p.dim())?;
        let h0 = TorusFn::conj_of(&p.clone().into());
        let upper = if p.is_zero() { f64::INFINITY } else { h0.grid_l1(&grid) / p.l2_norm().powi(2) };
        return Ok(Verdict {
            outcome: Outcome::CertifiedNo,
            estimate: DistanceEstimate {
                lower: 0.0,
                upper,
                lower_witness: None,
                upper_witness: Some(TorusFn::zero(p.dim())),
                upper_grid: Some(grid.points_per_axis()),
                certificates: Vec::new(),
            },
            refutation: None,
            psi: Some(p.clone().into()),
            operator_norm: Some(norm),
            generator_degree: 0,
            grid_points: grid.points_per_axis(),
            diagnostics: vec![format!(
                "‖S_p‖ = {norm:.12} > 1, so no extension can have sup-norm ≤ 1"
            )],
        });
    }
    lift_verdict(&q, &x, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn p_diag() -> TrigPoly {
        &TrigPoly::coordinate(2, 0).scale(c(FRAC_1_SQRT_2, 0.0)) + &TrigPoly::coordinate(2, 1).scale(c(FRAC_1_SQRT_2, 0.0))
    }

    #[test]
    fn functional_value_examples() {
        let p = p_diag();
        let psi: AnalyticSymbol = p.clone().into();
        assert!((functional_value(&psi, &p.conjugate()).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        let mixed = TrigPoly::monomial([1, -1].into(), c(1.0, 0.0));
        assert_eq!(functional_value(&psi, &mixed).unwrap(), c(0.0, 0.0));
        assert_eq!(functional_value(&psi, &TrigPoly::coordinate(2, 0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn qconj_complement_is_orthogonal_to_psi() {
        let q = QuotientModule::homogeneous(2, 2).unwrap();
        let x = quotient::compress(&q, &p_diag().scale(c(0.5, 0.0))).unwrap();
        let one = q.project(&TrigPoly::constant(2, c(1.0, 0.0))).unwrap();
        let psi_c = x.matrix() * one;
        let psi = q.element(&psi_c);
        let side = ModuleSide::from_module(&q, psi_c);
        let basis = side.qconj_minus_psi().unwrap();
        assert_eq!(basis.len(), q.size() - 1);
        for f in &basis {
            // ∫ψ f = ⟨ψ, a⟩ must vanish
            assert!(f.pair_symbol(&psi).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn homogeneous_non_inner_symbol_is_refuted() {
        let q = QuotientModule::homogeneous(1, 2).unwrap();
        let x = quotient::compress(&q, &p_diag()).unwrap();
        let v = lift_verdict(&q, &x, &LiftConfig::default()).unwrap();
        assert_eq!(v.outcome, Outcome::CertifiedNo, "{:?}", v.diagnostics);
    }

    #[test]
    fn perturbation_examples() {
        let f = &TrigPoly::coordinate(2, 0).scale(c(0.3, 0.0)) + &TrigPoly::coordinate(2, 1).scale(c(0.4, 0.0));
        let v = perturb_verdict(&f, &LiftConfig::default()).unwrap();
        assert_eq!(v.outcome, Outcome::CertifiedYes, "{:?}", v.diagnostics);
        let z1 = v.estimate.certificate_for(&TrigPoly::coordinate(2, 0)).unwrap();
        assert!((z1.value - 1.2).abs() < 1e-12);

        let v = perturb_verdict(&TrigPoly::constant(2, c(2.0, 0.0)), &LiftConfig::default()).unwrap();
        assert_eq!(v.outcome, Outcome::CertifiedNo, "{:?}", v.diagnostics);
        assert!((v.estimate.upper - 0.5).abs() < 1e-3);
    }

    #[test]
    fn cf_constant_extends() {
        let v = cf_verdict(&TrigPoly::constant(1, c(0.5, 0.0)), 1, &LiftConfig::default()).unwrap();
        assert_eq!(v.outcome, Outcome::CertifiedYes, "{:?}", v.diagnostics);
        assert!((v.estimate.lower - 2.0).abs() < 1e-12);
        let v = cf_verdict(&TrigPoly::constant(1, c(1.5, 0.0)), 1, &LiftConfig::default()).unwrap();
        assert_eq!(v.outcome, Outcome::CertifiedNo);
    }
}
