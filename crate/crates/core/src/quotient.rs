//! Finite-dimensional quotient modules of H²(𝕋ⁿ) and operators on them.
//!
//! Matrices act on coefficient vectors in the module's declared basis: column `i`
//! holds the expansion of the image of basis element `i`. The inner product of
//! two coefficient vectors is `⟨a, b⟩ = bᴴ G a` with `G[j][i] = ⟨e_i, e_j⟩`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::kernels::{self, AnalyticSymbol, KernelCombo, KernelError, Point};
use crate::linalg::{self, CMatrix, CVector, LinalgError};
use crate::tpoly::{analytic_indices, MultiIndex, TrigPoly};

/// Frobenius tolerance for the commutation test.
pub const MODULE_MAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuotientError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("Gram matrix condition number {condition:.3e} exceeds {limit:.1e}")]
    IllConditioned { condition: f64, limit: f64 },
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("operator does not commute with the compressed shifts (commutator {commutator:.3e})")]
    NotAModuleMap { commutator: f64 },
    #[error("expected a single analytic monomial with unimodular coefficient")]
    NotInnerMonomial,
    #[error("function has non-analytic exponent {0}")]
    NotAnalytic(MultiIndex),
    #[error("dimension mismatch: module has {module} variables, function has {function}")]
    DimensionMismatch { module: usize, function: usize },
    #[error("operation needs a {expected} module")]
    WrongVariant { expected: &'static str },
    #[error("invalid module parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is {rows}x{cols}, module has dimension {expected}")]
    MatrixSize { expected: usize, rows: usize, cols: usize },
}

impl From<LinalgError> for QuotientError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::IllConditioned { condition, limit } => QuotientError::IllConditioned { condition, limit },
            _ => QuotientError::NotPositiveDefinite,
        }
    }
}

/// Which family a module belongs to, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ModuleKind {
    /// `span{𝕊(·, z_j)}`; `trunc` is the series degree used when a polynomial stand-in is needed.
    ZeroBased { points: Vec<Point>, trunc: u32 },
    /// All monomials of total degree ≤ m in n variables.
    Homogeneous { m: u32, n: usize },
    /// Monomials of degree ≤ trunc with some zero exponent; a truncation of `ker ∏ T*_{z_i}`.
    CorankMonomial { n: usize, trunc: u32 },
    /// `{1, z, …, z^{d−1}}`, the model space of `z^d`.
    OneVarModel { d: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasisElement {
    Kernel(Point),
    Monomial(MultiIndex),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientModule {
    kind: ModuleKind,
    dim: usize,
    basis: Vec<BasisElement>,
    gram: CMatrix,
}

/// JSON descriptor, tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDescriptor {
    ZeroBased {
        points: Vec<Point>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trunc: Option<u32>,
    },
    Homogeneous { m: u32, n: usize },
    Corank { n: usize, trunc: u32 },
    Onevar { d: u32 },
}

/// Series truncation used for zero-based modules when none is given.
pub fn default_zero_based_trunc(dim: usize) -> u32 {
    if dim <= 2 {
        24
    } else {
        12
    }
}

impl QuotientModule {
    pub fn zero_based(points: Vec<Point>, trunc: Option<u32>) -> Result<Arc<Self>, QuotientError> {
        let gram = kernels::gram_matrix(&points)?;
        let dim = points[0].dim();
        let trunc = trunc.unwrap_or_else(|| default_zero_based_trunc(dim));
        Ok(Arc::new(Self {
            dim,
            basis: points.iter().cloned().map(BasisElement::Kernel).collect(),
            gram,
            kind: ModuleKind::ZeroBased { points, trunc },
        }))
    }

    pub fn homogeneous(m: u32, n: usize) -> Result<Arc<Self>, QuotientError> {
        if n == 0 {
            return Err(QuotientError::InvalidParameter("n must be at least 1".into()));
        }
        Ok(Self::monomial_module(ModuleKind::Homogeneous { m, n }, n, analytic_indices(n, m)))
    }

    pub fn corank_monomial(n: usize, trunc: u32) -> Result<Arc<Self>, QuotientError> {
        if n == 0 {
            return Err(QuotientError::InvalidParameter("n must be at least 1".into()));
        }
        let indices = analytic_indices(n, trunc)
            .into_iter()
            .filter(|k| k.as_slice().contains(&0))
            .collect();
        Ok(Self::monomial_module(ModuleKind::CorankMonomial { n, trunc }, n, indices))
    }

    pub fn one_var_model(d: u32) -> Result<Arc<Self>, QuotientError> {
        if d == 0 {
            return Err(QuotientError::InvalidParameter("d must be at least 1".into()));
        }
        let indices = (0..d as i32).map(|j| MultiIndex::new(vec![j])).collect();
        Ok(Self::monomial_module(ModuleKind::OneVarModel { d }, 1, indices))
    }

    fn monomial_module(kind: ModuleKind, dim: usize, indices: Vec<MultiIndex>) -> Arc<Self> {
        let size = indices.len();
        Arc::new(Self {
            kind,
            dim,
            basis: indices.into_iter().map(BasisElement::Monomial).collect(),
            gram: CMatrix::identity(size, size),
        })
    }

    pub fn from_descriptor(desc: &ModuleDescriptor) -> Result<Arc<Self>, QuotientError> {
        match desc {
            ModuleDescriptor::ZeroBased { points, trunc } => Self::zero_based(points.clone(), *trunc),
            ModuleDescriptor::Homogeneous { m, n } => Self::homogeneous(*m, *n),
            ModuleDescriptor::Corank { n, trunc } => Self::corank_monomial(*n, *trunc),
            ModuleDescriptor::Onevar { d } => Self::one_var_model(*d),
        }
    }

    pub fn descriptor(&self) -> ModuleDescriptor {
        match &self.kind {
            ModuleKind::ZeroBased { points, trunc } => ModuleDescriptor::ZeroBased {
                points: points.clone(),
                trunc: Some(*trunc),
            },
            ModuleKind::Homogeneous { m, n } => ModuleDescriptor::Homogeneous { m: *m, n: *n },
            ModuleKind::CorankMonomial { n, trunc } => ModuleDescriptor::Corank { n: *n, trunc: *trunc },
            ModuleKind::OneVarModel { d } => ModuleDescriptor::Onevar { d: *d },
        }
    }

    pub fn kind(&self) -> &ModuleKind {
        &self.kind
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    pub fn points(&self) -> Option<&[Point]> {
        match &self.kind {
            ModuleKind::ZeroBased { points, .. } => Some(points),
            _ => None,
        }
    }

    /// Monomial exponents of the basis, for the monomial families.
    pub fn monomial_indices(&self) -> Option<Vec<MultiIndex>> {
        self.basis
            .iter()
            .map(|b| match b {
                BasisElement::Monomial(k) => Some(k.clone()),
                BasisElement::Kernel(_) => None,
            })
            .collect()
    }

    /// Largest total degree a polynomial representative of a module element needs.
    pub fn trunc_degree(&self) -> u32 {
        match &self.kind {
            ModuleKind::ZeroBased { trunc, .. } => *trunc,
            ModuleKind::Homogeneous { m, .. } => *m,
            ModuleKind::CorankMonomial { trunc, .. } => *trunc,
            ModuleKind::OneVarModel { d } => d - 1,
        }
    }

    fn check_analytic(&self, f: &TrigPoly) -> Result<(), QuotientError> {
        if f.dim() != self.dim {
            return Err(QuotientError::DimensionMismatch {
                module: self.dim,
                function: f.dim(),
            });
        }
        if let Some((k, _)) = f.terms().find(|(k, _)| !k.is_nonnegative()) {
            return Err(QuotientError::NotAnalytic(k.clone()));
        }
        Ok(())
    }

    fn solve_gram(&self, rhs: &CVector) -> Result<CVector, QuotientError> {
        Ok(linalg::guarded_cholesky(&self.gram)?.solve(rhs))
    }

    /// Expansion of `P_Q f` in the module basis.
    pub fn project(&self, f: &TrigPoly) -> Result<CVector, QuotientError> {
        self.check_analytic(f)?;
        match &self.kind {
            ModuleKind::ZeroBased { points, .. } => {
                let rhs = CVector::from_iterator(
                    points.len(),
                    points.iter().map(|p| f.evaluate(p.coords()).expect("dimension checked")),
                );
                self.solve_gram(&rhs)
            }
            _ => Ok(CVector::from_iterator(
                self.size(),
                self.basis.iter().map(|b| match b {
                    BasisElement::Monomial(k) => f.coeff(k),
                    BasisElement::Kernel(_) => unreachable!("monomial module"),
                }),
            )),
        }
    }

    /// The function with the given basis coefficients.
    pub fn element(&self, coeffs: &CVector) -> AnalyticSymbol {
        match &self.kind {
            ModuleKind::ZeroBased { points, .. } => KernelCombo::new(points.clone(), coeffs.iter().copied().collect())
                .expect("module points are valid")
                .into(),
            _ => {
                let terms = self.basis.iter().zip(coeffs.iter()).map(|(b, c)| match b {
                    BasisElement::Monomial(k) => (k.clone(), *c),
                    BasisElement::Kernel(_) => unreachable!("monomial module"),
                });
                TrigPoly::from_terms(self.dim, terms).expect("basis dimension").into()
            }
        }
    }

    /// Matrix of `S_φ = P_Q T_φ|_Q`.
    pub fn compress_matrix(&self, phi: &AnalyticSymbol) -> Result<CMatrix, QuotientError> {
        if phi.dim() != self.dim {
            return Err(QuotientError::DimensionMismatch {
                module: self.dim,
                function: phi.dim(),
            });
        }
        if let AnalyticSymbol::Poly { poly } = phi {
            self.check_analytic(poly)?;
        }
        match &self.kind {
            ModuleKind::ZeroBased { points, .. } => {
                let w: Vec<Complex64> = points
                    .iter()
                    .map(|p| phi.evaluate(p.coords()))
                    .collect::<Result<_, _>>()?;
                self.kernel_diagonal_matrix(&w)
            }
            _ => {
                let idx = self.monomial_indices().expect("monomial module");
                let m = idx.len();
                Ok(CMatrix::from_fn(m, m, |b, a| {
                    let diff = idx[b].minus(&idx[a]);
                    phi.coefficient(&diff)
                }))
            }
        }
    }

    /// `G⁻¹ diag(w) G`: the operator whose adjoint scales `𝕊(·,z_j)` by `w̄_j`.
    fn kernel_diagonal_matrix(&self, w: &[Complex64]) -> Result<CMatrix, QuotientError> {
        let chol = linalg::guarded_cholesky(&self.gram)?;
        let d = CMatrix::from_diagonal(&CVector::from_column_slice(w));
        Ok(chol.solve(&(d * &self.gram)))
    }

    /// Matrices of the compressed coordinate shifts `S_{z_i}`.
    pub fn model_shifts(&self) -> Result<Vec<CMatrix>, QuotientError> {
        (0..self.dim)
            .map(|i| self.compress_matrix(&TrigPoly::coordinate(self.dim, i).into()))
            .collect()
    }
}

/// An operator on a quotient module, as a matrix in the module basis.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    module: Arc<QuotientModule>,
    matrix: CMatrix,
}

impl ModuleMap {
    pub fn new(module: Arc<QuotientModule>, matrix: CMatrix) -> Result<Self, QuotientError> {
        let expected = module.size();
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(QuotientError::MatrixSize {
                expected,
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        Ok(Self { module, matrix })
    }

    pub fn module(&self) -> &Arc<QuotientModule> {
        &self.module
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `max_i ‖X S_{z_i} − S_{z_i} X‖_F`.
    ///
    /// Each commutator is divided by `max(1, ‖X‖_F ‖S_{z_i}‖_F)`: kernel bases at nearby points
    /// have large matrix entries, and roundoff in `X S − S X` scales with them.
    pub fn commutator_norm(&self) -> Result<f64, QuotientError> {
        let xn = self.matrix.norm();
        Ok(self
            .module
            .model_shifts()?
            .iter()
            .map(|s| (&self.matrix * s - s * &self.matrix).norm() / (xn * s.norm()).max(1.0))
            .fold(0.0, f64::max))
    }

    /// `ψ = X(P_Q 1)`, the symbol of the functional attached to `X`.
    pub fn functional_symbol(&self) -> Result<AnalyticSymbol, QuotientError> {
        let one = self.module.project(&TrigPoly::constant(self.module.dim(), Complex64::new(1.0, 0.0)))?;
        Ok(self.module.element(&(&self.matrix * one)))
    }
}

pub fn compress(q: &Arc<QuotientModule>, phi: &TrigPoly) -> Result<ModuleMap, QuotientError> {
    ModuleMap::new(q.clone(), q.compress_matrix(&phi.clone().into())?)
}

pub fn compress_symbol(q: &Arc<QuotientModule>, phi: &AnalyticSymbol) -> Result<ModuleMap, QuotientError> {
    ModuleMap::new(q.clone(), q.compress_matrix(phi)?)
}

pub fn project(q: &QuotientModule, f: &TrigPoly) -> Result<CVector, QuotientError> {
    q.project(f)
}

pub fn model_shifts(q: &QuotientModule) -> Result<Vec<CMatrix>, QuotientError> {
    q.model_shifts()
}

pub fn is_module_map(x: &ModuleMap, tol: f64) -> Result<bool, QuotientError> {
    Ok(x.commutator_norm()? <= tol)
}

/// Operator norm in `B(Q)`: `‖Lᴴ M L⁻ᴴ‖₂` with `G = L Lᴴ`.
pub fn operator_norm(x: &ModuleMap) -> Result<f64, QuotientError> {
    let g = x.module.gram();
    let chol = linalg::guarded_cholesky(g)?;
    let l = chol.l();
    // Y = Lᴴ M L⁻ᴴ  ⇔  Y Lᴴ = Lᴴ M  ⇔  L Yᴴ = Mᴴ L
    let rhs = x.matrix.adjoint() * &l;
    let yh = l
        .solve_lower_triangular(&rhs)
        .ok_or(QuotientError::NotPositiveDefinite)?;
    Ok(linalg::spectral_norm(&yh.adjoint()))
}

/// The module map on a zero-based module whose adjoint has kernel-basis eigenvalues `w̄_j`.
pub fn diagonal_map(q: &Arc<QuotientModule>, w: &[Complex64]) -> Result<ModuleMap, QuotientError> {
    let points = q.points().ok_or(QuotientError::WrongVariant { expected: "zero-based" })?;
    if w.len() != points.len() {
        return Err(QuotientError::MatrixSize {
            expected: points.len(),
            rows: w.len(),
            cols: 1,
        });
    }
    ModuleMap::new(q.clone(), q.kernel_diagonal_matrix(w)?)
}

/// `ψ = X(P_{Q_Z} 1)` as an exact kernel combination.
pub fn weak_lift_symbol(x: &ModuleMap) -> Result<KernelCombo, QuotientError> {
    if x.module.points().is_none() {
        return Err(QuotientError::WrongVariant { expected: "zero-based" });
    }
    let commutator = x.commutator_norm()?;
    if commutator > MODULE_MAP_TOL {
        return Err(QuotientError::NotAModuleMap { commutator });
    }
    match x.functional_symbol()? {
        AnalyticSymbol::Combo { combo } => Ok(combo),
        AnalyticSymbol::Poly { .. } => unreachable!("zero-based elements are kernel combinations"),
    }
}

/// Splits `p = f + g` with `f ∈ θH²` and `g ⊥ θH²` for an inner monomial `θ`.
pub fn poly_decompose(theta: &TrigPoly, p: &TrigPoly) -> Result<(TrigPoly, TrigPoly), QuotientError> {
    if !kernels::is_inner_poly(theta).unwrap_or(false) {
        return Err(QuotientError::NotInnerMonomial);
    }
    let (k, _) = theta.terms().next().expect("inner monomial has one term");
    if p.dim() != theta.dim() {
        return Err(QuotientError::DimensionMismatch {
            module: theta.dim(),
            function: p.dim(),
        });
    }
    if let Some((j, _)) = p.terms().find(|(j, _)| !j.is_nonnegative()) {
        return Err(QuotientError::NotAnalytic(j.clone()));
    }
    let (inside, outside): (Vec<_>, Vec<_>) = p
        .terms()
        .map(|(j, c)| (j.clone(), *c))
        .partition(|(j, _)| j.dominates(k));
    Ok((
        TrigPoly::from_terms(p.dim(), inside).expect("dimension preserved"),
        TrigPoly::from_terms(p.dim(), outside).expect("dimension preserved"),
    ))
}

/// Both sides of `Q_θ^conj ⊕ zH² = θ̄ zH²` for `θ = z^d`, as exponent sets restricted to
/// the window `{−d, …, D−d}` with `zH²` truncated at degree `D`.
pub fn onevar_identity_supports(d: u32, big_d: u32) -> Result<(BTreeSet<i32>, BTreeSet<i32>), QuotientError> {
    let q = QuotientModule::one_var_model(d)?;
    let window = -(d as i32)..=(big_d as i32 - d as i32);
    let mut lhs = BTreeSet::new();
    for b in q.basis() {
        if let BasisElement::Monomial(k) = b {
            let conj = TrigPoly::monomial(k.clone(), Complex64::new(1.0, 0.0)).conjugate();
            lhs.extend(conj.terms().map(|(j, _)| j.as_slice()[0]));
        }
    }
    lhs.extend(1..=big_d as i32);
    let theta_bar = TrigPoly::monomial(MultiIndex::new(vec![d as i32]), Complex64::new(1.0, 0.0)).conjugate();
    let mut rhs = BTreeSet::new();
    for j in 1..=big_d as i32 {
        let prod = &theta_bar * &TrigPoly::monomial(MultiIndex::new(vec![j]), Complex64::new(1.0, 0.0));
        rhs.extend(prod.terms().map(|(k, _)| k.as_slice()[0]));
    }
    lhs.retain(|k| window.contains(k));
    rhs.retain(|k| window.contains(k));
    Ok((lhs, rhs))
}
