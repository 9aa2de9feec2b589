//! Interpolation on the polydisc: Pick matrices, the kernel solve for `ψ`, verdicts,
//! an explicit polynomial construction, and two-variable Agler feasibility.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::json::{decode_vec, encode_vec, ComplexJson};
use crate::kernels::{self, szego_value, KernelCombo, KernelError, Point};
use crate::lifting::{
    self, DistanceEstimate, LiftConfig, LiftError, Outcome, Verdict,
};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::quotient::{self, QuotientError, QuotientModule};
use crate::tpoly::{MultiIndex, TrigPoly};

/// Pick matrices count as PSD down to this eigenvalue.
pub const PICK_TOL: f64 = 1e-10;
/// Tolerance for orthogonality and coordinate matching in [`eg_construct`].
pub const EG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InterpError {
    #[error("nodes {first} and {second} coincide")]
    DuplicateNodes { first: usize, second: usize },
    #[error("target {index} has modulus {modulus} (must be < 1)")]
    TargetOutsideDisc { index: usize, modulus: f64 },
    #[error("{nodes} nodes but {targets} targets")]
    LengthMismatch { nodes: usize, targets: usize },
    #[error("node {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, found: usize, expected: usize },
    #[error("problem has no nodes")]
    Empty,
    #[error("expected a two-variable problem, found n = {found}")]
    WrongDimension { found: usize },
    #[error("hypothesis {hypothesis} fails: measured {measured:.6e}, bound {bound:.6e}{}", index.map(|i| format!(" (index {i})")).unwrap_or_default())]
    HypothesisFailed {
        hypothesis: Hypothesis,
        index: Option<usize>,
        measured: f64,
        bound: f64,
    },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

/// Nodes `z_i ∈ 𝔻ⁿ` and targets `w_i ∈ 𝔻`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemFile", into = "ProblemFile")]
pub struct InterpolationProblem {
    n: usize,
    nodes: Vec<Point>,
    targets: Vec<Complex64>,
}

/// The on-disk shape of a problem, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub n: usize,
    pub nodes: Vec<Vec<ComplexJson>>,
    pub targets: Vec<ComplexJson>,
}

impl ProblemFile {
    /// Every violated invariant, in input order.
    pub fn issues(&self) -> Vec<InterpError> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            out.push(InterpError::Empty);
        }
        if self.nodes.len() != self.targets.len() {
            out.push(InterpError::LengthMismatch {
                nodes: self.nodes.len(),
                targets: self.targets.len(),
            });
        }
        let mut points = Vec::new();
        for (index, node) in self.nodes.iter().enumerate() {
            if node.len() != self.n {
                out.push(InterpError::DimensionMismatch {
                    index,
                    found: node.len(),
                    expected: self.n,
                });
                continue;
            }
            match Point::new(decode_vec(node)) {
                Ok(p) => points.push((index, p)),
                Err(e) => out.push(e.into()),
            }
        }
        for (a, (i, p)) in points.iter().enumerate() {
            for (j, q) in points[a + 1..].iter() {
                if p == q {
                    out.push(InterpError::DuplicateNodes { first: *i, second: *j });
                }
            }
        }
        for (index, t) in self.targets.iter().enumerate() {
            let modulus = Complex64::from(*t).norm();
            // NaN fails too
            if modulus.is_nan() || modulus >= 1.0 {
                out.push(InterpError::TargetOutsideDisc { index, modulus });
            }
        }
        out
    }
}

impl TryFrom<ProblemFile> for InterpolationProblem {
    type Error = InterpError;

    fn try_from(file: ProblemFile) -> Result<Self, Self::Error> {
        if let Some(e) = file.issues().into_iter().next() {
            return Err(e);
        }
        let nodes = file
            .nodes
            .iter()
            .map(|z| Point::new(decode_vec(z)))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            n: file.n,
            nodes,
            targets: decode_vec(&file.targets),
        })
    }
}

impl From<InterpolationProblem> for ProblemFile {
    fn from(p: InterpolationProblem) -> Self {
        Self {
            n: p.n,
            nodes: p.nodes.iter().map(|z| encode_vec(z.coords())).collect(),
            targets: encode_vec(&p.targets),
        }
    }
}

impl fmt::Display for InterpolationProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nodes in 𝔻^{}", self.nodes.len(), self.n)
    }
}

impl InterpolationProblem {
    pub fn new(nodes: Vec<Point>, targets: Vec<Complex64>) -> Result<Self, InterpError> {
        let n = nodes.first().map_or(0, Point::dim);
        ProblemFile {
            n,
            nodes: nodes.iter().map(|z| encode_vec(z.coords())).collect(),
            targets: encode_vec(&targets),
        }
        .try_into()
    }

    /// Convenience constructor from real coordinates and real targets.
    pub fn real(nodes: &[&[f64]], targets: &[f64]) -> Result<Self, InterpError> {
        let points = nodes.iter().map(|z| Point::real(z)).collect::<Result<_, _>>()?;
        Self::new(points, targets.iter().map(|&t| c(t, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn targets(&self) -> &[Complex64] {
        &self.targets
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PickCheck {
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: CMatrix,
    pub min_eigenvalue: f64,
    pub psd: bool,
}

pub(crate) fn serialize_matrix<S: serde::Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<ComplexJson>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect();
    rows.serialize(s)
}

fn pick_from_matrix(matrix: CMatrix) -> PickCheck {
    let min_eigenvalue = linalg::hermitian_eigenvalues(&matrix)[0];
    PickCheck {
        matrix,
        min_eigenvalue,
        psd: min_eigenvalue >= -PICK_TOL,
    }
}

/// `P[i][j] = (1 − w_i w̄_j) 𝕊(z_i, z_j)` and its smallest eigenvalue.
pub fn pick_matrix_check(prob: &InterpolationProblem) -> PickCheck {
    let (z, w) = (&prob.nodes, &prob.targets);
    let m = z.len();
    pick_from_matrix(CMatrix::from_fn(m, m, |i, j| {
        (c(1.0, 0.0) - w[i] * w[j].conj()) * szego_value(z[i].coords(), &z[j])
    }))
}

/// `ψ = Σ c_i 𝕊(·, z_i)` with `G c = w`, so that `ψ(z_j) = w_j`.
pub fn solve_psi(prob: &InterpolationProblem) -> Result<KernelCombo, InterpError> {
    let g = kernels::gram_matrix(&prob.nodes)?;
    let chol = linalg::guarded_cholesky(&g).map_err(KernelError::from)?;
    let coeffs = chol.solve(&CVector::from_column_slice(&prob.targets));
    Ok(KernelCombo::new(prob.nodes.clone(), coeffs.iter().copied().collect())?)
}

/// Knobs for [`interpolation_verdict`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpConfig {
    pub lift: LiftConfig,
    /// Kernel-series truncation of `Q_Z`.
    pub degree: u32,
}

impl Default for InterpConfig {
    fn default() -> Self {
        Self {
            lift: LiftConfig::default(),
            degree: 12,
        }
    }
}

/// Result of [`interpolation_verdict`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationReport {
    pub verdict: Verdict,
    pub pick: PickCheck,
    /// The minimal-norm interpolant `P_{Q_Z}φ`; interpolates but need not be Schur.
    pub psi: KernelCombo,
    /// An explicit Schur interpolant, when one is known.
    pub interpolant: Option<TrigPoly>,
    pub construction: Option<EgReport>,
}

/// Decides Schur-class solvability through the lifting criterion on `Q_Z`.
pub fn interpolation_verdict(prob: &InterpolationProblem, config: &InterpConfig) -> Result<InterpolationReport, InterpError> {
    let pick = pick_matrix_check(prob);
    let psi = solve_psi(prob)?;
    let q = QuotientModule::zero_based(prob.nodes.clone(), Some(config.degree))?;
    let x = quotient::diagonal_map(&q, &prob.targets)?;
    let norm = quotient::operator_norm(&x)?;

    if norm > 1.0 + 1e-8 {
        let grid = config.lift.grid(prob.n).map_err(LiftError::from)?;
        let verdict = Verdict {
            outcome: Outcome::CertifiedNo,
            estimate: DistanceEstimate {
                lower: 0.0,
                upper: f64::INFINITY,
                lower_witness: None,
                upper_witness: None,
                upper_grid: None,
                certificates: Vec::new(),
            },
            refutation: None,
            psi: Some(psi.clone().into()),
            operator_norm: Some(norm),
            generator_degree: 0,
            grid_points: grid.points_per_axis(),
            diagnostics: vec![format!(
                "‖X‖ = {norm:.12} > 1 (Pick minimum eigenvalue {:.6e}); no contractive interpolant exists",
                pick.min_eigenvalue
            )],
        };
        return Ok(InterpolationReport {
            verdict,
            pick,
            psi,
            interpolant: None,
            construction: None,
        });
    }

    let mut interpolant = None;
    let mut construction = None;
    if prob.len() == 1 {
        interpolant = Some(TrigPoly::constant(prob.n, prob.targets[0]));
    } else if let Some(basis) = coordinate_basis(prob) {
        if let Ok(eg) = eg_construct(&prob.nodes, &prob.targets, &basis) {
            if eg.report.coefficient_l1 <= 1.0 + 1e-12 {
                interpolant = Some(eg.phi.clone());
            }
            construction = Some(eg.report);
        }
    }
    let extra: Vec<TrigPoly> = interpolant.iter().cloned().collect();
    let mut verdict = lifting::lift_verdict_with(&q, &x, &config.lift, &extra)?;
    if verdict.outcome != Outcome::CertifiedYes {
        interpolant = None;
    }
    if verdict.outcome == Outcome::Inconclusive && !pick.psd {
        verdict
            .diagnostics
            .push("budget insufficient: the Pick matrix is not PSD but no refutation was found".into());
    }
    Ok(InterpolationReport {
        verdict,
        pick,
        psi,
        interpolant,
        construction,
    })
}

/// Columns `b_i = (z_j[i−1])_j`, `i = 1..m−1`, when the node count allows.
fn coordinate_basis(prob: &InterpolationProblem) -> Option<Vec<Vec<Complex64>>> {
    let m = prob.len();
    if m < 2 || m - 1 > prob.n {
        return None;
    }
    Some(
        (0..m - 1)
            .map(|i| prob.nodes.iter().map(|z| z.coords()[i]).collect())
            .collect(),
    )
}

/// Hypotheses of the explicit three-or-more-point construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    /// One basis vector per node beyond the first, of length m.
    Shape,
    /// Basis vectors orthogonal to each other and to the all-ones vector.
    Orthogonality,
    /// `‖b_i‖ ≥ 1`.
    BasisNorm,
    /// Node coordinates equal the basis columns.
    NodeCoordinates,
    /// `‖w‖ ≤ 1/√n`.
    TargetNorm,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::Shape => "shape",
            Hypothesis::Orthogonality => "orthogonality",
            Hypothesis::BasisNorm => "basis norm",
            Hypothesis::NodeCoordinates => "node coordinates",
            Hypothesis::TargetNorm => "target norm",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EgReport {
    /// `α_i = ⟨w, b_i⟩ / ‖b_i‖` with `b_0` the all-ones vector.
    pub alpha: Vec<ComplexJson>,
    pub alpha_l1: f64,
    /// `Σ |φ_k|`, which bounds the sup norm of `φ`.
    pub coefficient_l1: f64,
    pub target_norm: f64,
    /// `1/√n`, the enforced target bound.
    pub target_bound: f64,
    /// Whether `‖w‖ ≤ 1/√m` also holds, which is what bounds `Σ|α_i|` by Cauchy–Schwarz.
    pub within_point_count_bound: bool,
    pub interpolation_error: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EgConstruction {
    pub phi: TrigPoly,
    pub report: EgReport,
}

fn dotc(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn vnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Linear interpolant `φ = α_0/√m + Σ_{i≥1} (α_i/‖b_i‖) Z_i` from an orthogonal frame
/// `b_1, …, b_{m−1}` that extends the all-ones vector.
pub fn eg_construct(nodes: &[Point], targets: &[Complex64], basis_vectors: &[Vec<Complex64>]) -> Result<EgConstruction, InterpError> {
    let m = nodes.len();
    let fail = |hypothesis, index, measured, bound| InterpError::HypothesisFailed {
        hypothesis,
        index,
        measured,
        bound,
    };
    if m == 0 {
        return Err(InterpError::Empty);
    }
    if targets.len() != m {
        return Err(InterpError::LengthMismatch { nodes: m, targets: targets.len() });
    }
    let n = nodes[0].dim();
    if basis_vectors.len() + 1 != m {
        return Err(fail(Hypothesis::Shape, None, basis_vectors.len() as f64, (m - 1) as f64));
    }
    if m - 1 > n {
        return Err(fail(Hypothesis::Shape, None, (m - 1) as f64, n as f64));
    }
    if let Some(i) = basis_vectors.iter().position(|b| b.len() != m) {
        return Err(fail(Hypothesis::Shape, Some(i + 1), basis_vectors[i].len() as f64, m as f64));
    }

    let mut frame = vec![vec![c(1.0, 0.0); m]];
    frame.extend(basis_vectors.iter().cloned());
    for i in 0..m {
        for j in i + 1..m {
            let scale = vnorm(&frame[i]) * vnorm(&frame[j]);
            let cosine = dotc(&frame[i], &frame[j]).norm() / scale.max(1e-300);
            if cosine > EG_TOL {
                return Err(fail(Hypothesis::Orthogonality, Some(j), cosine, EG_TOL));
            }
        }
    }
    for (i, b) in frame.iter().enumerate().skip(1) {
        let norm = vnorm(b);
        if norm < 1.0 {
            return Err(fail(Hypothesis::BasisNorm, Some(i), norm, 1.0));
        }
    }
    for (j, z) in nodes.iter().enumerate() {
        if z.dim() != n {
            return Err(InterpError::DimensionMismatch { index: j, found: z.dim(), expected: n });
        }
        for (i, b) in frame.iter().enumerate().skip(1) {
            let gap = (z.coords()[i - 1] - b[j]).norm();
            if gap > EG_TOL {
                return Err(fail(Hypothesis::NodeCoordinates, Some(j), gap, EG_TOL));
            }
        }
    }
    let target_norm = vnorm(targets);
    let target_bound = 1.0 / (n as f64).sqrt();
    if target_norm > target_bound {
        return Err(fail(Hypothesis::TargetNorm, None, target_norm, target_bound));
    }

    let norms: Vec<f64> = frame.iter().map(|b| vnorm(b)).collect();
    let alpha: Vec<Complex64> = frame.iter().zip(&norms).map(|(b, nb)| dotc(targets, b) / *nb).collect();
    let mut terms = vec![(MultiIndex::zero(n), alpha[0] / norms[0])];
    for i in 1..m {
        terms.push((MultiIndex::unit(n, i - 1), alpha[i] / norms[i]));
    }
    let phi = TrigPoly::from_terms(n, terms).map_err(KernelError::from)?;
    let interpolation_error = nodes
        .iter()
        .zip(targets)
        .map(|(z, w)| (phi.evaluate(z.coords()).expect("dimension checked") - w).norm())
        .fold(0.0, f64::max);
    let within_point_count_bound = target_norm <= 1.0 / (m as f64).sqrt();
    let mut notes = Vec::new();
    if !within_point_count_bound {
        notes.push(format!(
            "‖w‖ = {target_norm:.6} ≤ 1/√n holds but exceeds 1/√m = {:.6}; Σ|α_i| ≤ 1 is not guaranteed",
            1.0 / (m as f64).sqrt()
        ));
    }
    let alpha_l1 = alpha.iter().map(|a| a.norm()).sum();
    let coefficient_l1 = phi.coefficient_l1();
    if coefficient_l1 > 1.0 {
        notes.push(format!("Σ|φ_k| = {coefficient_l1:.6} > 1"));
    }
    Ok(EgConstruction {
        phi,
        report: EgReport {
            alpha: encode_vec(&alpha),
            alpha_l1,
            coefficient_l1,
            target_norm,
            target_bound,
            within_point_count_bound,
            interpolation_error,
            notes,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AglerConfig {
    pub max_iters: usize,
    pub psd_tol: f64,
}

impl Default for AglerConfig {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            psd_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AglerWitness {
    #[serde(serialize_with = "serialize_matrix")]
    pub gamma: CMatrix,
    #[serde(serialize_with = "serialize_matrix")]
    pub delta: CMatrix,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    Feasible,
    Infeasible,
    Unknown,
}

/// A one-variable slice of the data on which a Schur interpolant restricts to a one-variable one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictionTest {
    /// Axis held fixed.
    pub fixed_axis: usize,
    pub nodes: Vec<usize>,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AglerResult {
    pub feasible: Feasibility,
    pub witness: Option<AglerWitness>,
    /// Failed slice Pick tests.
    pub restriction_failures: Vec<RestrictionTest>,
    /// Smallest eigenvalue of the two-variable Szegő Pick matrix, a necessary condition.
    pub pick_min_eigenvalue: f64,
    /// Distance between the affine and PSD iterates at exit.
    pub final_gap: f64,
    pub iterations: usize,
    pub diagnostics: Vec<String>,
}

struct AglerData {
    a: CMatrix,
    b: CMatrix,
    rhs: CMatrix,
}

impl AglerData {
    fn new(prob: &InterpolationProblem) -> Self {
        let m = prob.len();
        let one = c(1.0, 0.0);
        let coord = |axis: usize| -> CMatrix {
            CMatrix::from_fn(m, m, |i, j| {
                one - prob.nodes[i].coords()[axis].conj() * prob.nodes[j].coords()[axis]
            })
        };
        let w = &prob.targets;
        Self {
            a: coord(0),
            b: coord(1),
            rhs: CMatrix::from_fn(m, m, |i, j| one - w[i].conj() * w[j]),
        }
    }

    fn residual(&self, gamma: &CMatrix, delta: &CMatrix) -> f64 {
        let r = &self.rhs - self.a.component_mul(gamma) - self.b.component_mul(delta);
        r.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Nearest pair satisfying the entrywise equation.
    fn project_affine(&self, gamma: &CMatrix, delta: &CMatrix) -> (CMatrix, CMatrix) {
        let mut g = gamma.clone();
        let mut d = delta.clone();
        for ((gi, di), ((a, b), r)) in g
            .iter_mut()
            .zip(d.iter_mut())
            .zip(self.a.iter().zip(self.b.iter()).zip(self.rhs.iter()))
        {
            let t = (r - a * *gi - b * *di) / (a.norm_sqr() + b.norm_sqr());
            *gi += a.conj() * t;
            *di += b.conj() * t;
        }
        (g, d)
    }

    fn witness(&self, gamma: CMatrix, delta: CMatrix, psd_tol: f64) -> Option<AglerWitness> {
        let ok = |m: &CMatrix| linalg::hermitian_eigenvalues(m)[0] >= -psd_tol;
        let residual = self.residual(&gamma, &delta);
        (ok(&gamma) && ok(&delta) && residual <= psd_tol).then_some(AglerWitness { gamma, delta, residual })
    }
}

/// Pick tests on slices where one coordinate is constant.
fn restriction_failures(prob: &InterpolationProblem, psd_tol: f64) -> Vec<RestrictionTest> {
    let mut out = Vec::new();
    for fixed_axis in 0..2 {
        let free = 1 - fixed_axis;
        let mut seen = vec![false; prob.len()];
        for i in 0..prob.len() {
            if seen[i] {
                continue;
            }
            let key = prob.nodes[i].coords()[fixed_axis];
            let group: Vec<usize> = (i..prob.len())
                .filter(|&j| prob.nodes[j].coords()[fixed_axis] == key)
                .collect();
            for &j in &group {
                seen[j] = true;
            }
            if group.len() < 2 {
                continue;
            }
            let sub = CMatrix::from_fn(group.len(), group.len(), |r, s| {
                let (zi, zj) = (prob.nodes[group[r]].coords()[free], prob.nodes[group[s]].coords()[free]);
                let (wi, wj) = (prob.targets[group[r]], prob.targets[group[s]]);
                (c(1.0, 0.0) - wi * wj.conj()) / (c(1.0, 0.0) - zi * zj.conj())
            });
            let min_eigenvalue = linalg::hermitian_eigenvalues(&sub)[0];
            if min_eigenvalue < -psd_tol {
                out.push(RestrictionTest {
                    fixed_axis,
                    nodes: group,
                    min_eigenvalue,
                });
            }
        }
    }
    out
}

/// Searches for PSD `Γ, Δ` with `1 − w̄_i w_j = (1 − ᾱ_i α_j)Γ_ij + (1 − β̄_i β_j)Δ_ij`.
///
/// Explicit slice candidates are tried first, then Dykstra's alternating projections.
/// Infeasibility is reported only when a necessary Pick test fails: the Szegő Pick
/// matrix, or a one-variable slice.
pub fn agler_feasibility(prob: &InterpolationProblem, config: &AglerConfig) -> Result<AglerResult, InterpError> {
    if prob.n != 2 {
        return Err(InterpError::WrongDimension { found: prob.n });
    }
    let data = AglerData::new(prob);
    let m = prob.len();
    let zero = CMatrix::zeros(m, m);
    let restriction = restriction_failures(prob, config.psd_tol);
    let pick_min_eigenvalue = pick_matrix_check(prob).min_eigenvalue;
    let mut diagnostics = Vec::new();

    // Γ carries everything when Δ = 0, and vice versa
    let only_gamma = data.rhs.component_div(&data.a);
    let only_delta = data.rhs.component_div(&data.b);
    let half = data.project_affine(&zero, &zero);
    for (g, d) in [(only_gamma, zero.clone()), (zero.clone(), only_delta), half] {
        if let Some(w) = data.witness(g, d, config.psd_tol) {
            diagnostics.push("explicit witness".into());
            return Ok(AglerResult {
                feasible: Feasibility::Feasible,
                witness: Some(w),
                restriction_failures: restriction,
                pick_min_eigenvalue,
                final_gap: 0.0,
                iterations: 0,
                diagnostics,
            });
        }
    }

    let (mut g, mut d) = (zero.clone(), zero.clone());
    let (mut pg, mut pd) = (zero.clone(), zero.clone());
    let mut gap = f64::INFINITY;
    let mut iterations = 0;
    for it in 0..config.max_iters {
        iterations = it + 1;
        let (ag, ad) = data.project_affine(&g, &d);
        let ng = linalg::psd_projection(&(&ag + &pg));
        let nd = linalg::psd_projection(&(&ad + &pd));
        pg = &ag + &pg - &ng;
        pd = &ad + &pd - &nd;
        g = ng;
        d = nd;
        gap = ((&ag - &g).norm_squared() + (&ad - &d).norm_squared()).sqrt();
        if it % 10 == 0 || it + 1 == config.max_iters {
            // polish: the affine projection of the PSD iterate, when itself PSD
            let (fg, fd) = data.project_affine(&g, &d);
            if let Some(w) = data.witness(fg, fd, config.psd_tol) {
                return Ok(AglerResult {
                    feasible: Feasibility::Feasible,
                    witness: Some(w),
                    restriction_failures: restriction,
                    pick_min_eigenvalue,
                    final_gap: gap,
                    iterations,
                    diagnostics,
                });
            }
        }
    }
    let pick_fails = pick_min_eigenvalue < -config.psd_tol;
    if pick_fails {
        diagnostics.push(format!("Szegő Pick matrix has eigenvalue {pick_min_eigenvalue:.6e}"));
    }
    if !restriction.is_empty() {
        diagnostics.push("a one-variable slice violates the Pick condition".into());
    }
    let feasible = if pick_fails || !restriction.is_empty() {
        diagnostics.push(format!("projection gap {gap:.3e} after {iterations} iterations"));
        Feasibility::Infeasible
    } else {
        diagnostics.push(format!(
            "no witness after {iterations} projections (gap {gap:.3e}) and no necessary test fails"
        ));
        Feasibility::Unknown
    };
    Ok(AglerResult {
        feasible,
        witness: None,
        restriction_failures: restriction,
        pick_min_eigenvalue,
        final_gap: gap,
        iterations,
        diagnostics,
    })
}

/// Independent re-check of a witness against the problem.
pub fn verify_agler_witness(prob: &InterpolationProblem, witness: &AglerWitness, psd_tol: f64) -> bool {
    let data = AglerData::new(prob);
    let residual = data.residual(&witness.gamma, &witness.delta);
    residual <= psd_tol
        && linalg::hermitian_eigenvalues(&witness.gamma)[0] >= -psd_tol
        && linalg::hermitian_eigenvalues(&witness.delta)[0] >= -psd_tol
}

/// Upper bound on `sup |φ|` over the torus grid, for reports.
pub fn grid_sup(phi: &TrigPoly, points_per_axis: usize) -> Result<f64, InterpError> {
    let grid = crate::tpoly::TorusGrid::new(phi.dim(), points_per_axis).map_err(KernelError::from)?;
    Ok(phi.grid_norms(&grid).map_err(KernelError::from)?.sup)
}
