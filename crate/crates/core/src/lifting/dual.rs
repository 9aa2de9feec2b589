//! Lower bounds on `L¹` distances from bounded analytic symbols.

use num_complex::Complex64;
use serde::Serialize;

use super::{DistanceEstimate, SubspaceSpec, TorusFn};
use crate::tpoly::{analytic_indices, TrigPoly};

/// A symbol `φ` with `‖φ‖_∞ ≤ sup_bound` annihilating the subspace; `value = |∫φg| / max(1, sup_bound)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualCertificate {
    /// Rotated so that `∫ φ g dμ` is real and non-negative.
    pub symbol: TrigPoly,
    pub value: f64,
    /// `|∫ φ g dμ|` before normalization.
    pub pairing: f64,
    /// `Σ |φ_k|`, an upper bound for the sup norm.
    pub sup_bound: f64,
    pub orthogonality_residual: f64,
}

impl DualCertificate {
    /// Same support, coefficients equal up to one unimodular factor.
    pub fn same_symbol_up_to_rotation(&self, other: &TrigPoly) -> bool {
        if self.symbol.len() != other.len() || other.is_zero() {
            return false;
        }
        let mut rotation: Option<Complex64> = None;
        for ((k1, a), (k2, b)) in self.symbol.terms().zip(other.terms()) {
            if k1 != k2 {
                return false;
            }
            let r = a / b;
            if (r.norm() - 1.0).abs() > 1e-9 {
                return false;
            }
            match rotation {
                None => rotation = Some(r),
                Some(r0) if (r0 - r).norm() > 1e-9 => return false,
                _ => {}
            }
        }
        true
    }
}

/// Analytic monomials `z^k` and their conjugates `z̄^k` with `|k| ≤ degree`.
pub fn default_dictionary(dim: usize, degree: u32) -> Vec<TrigPoly> {
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for k in analytic_indices(dim, degree) {
        let m = TrigPoly::monomial(k.clone(), one);
        if !k.is_zero() {
            out.push(m.conjugate());
        }
        out.push(m);
    }
    out
}

/// Largest `|∫φh|` over the generators of `spec`, or infinity when `φ` cannot annihilate the
/// untruncated subspace.
fn orthogonality_residual(phi: &TrigPoly, spec: &SubspaceSpec) -> f64 {
    let mut residual: f64 = 0.0;
    for (k, a) in phi.terms() {
        if spec.has_monomial(&k.neg()) {
            residual = residual.max(a.norm());
        }
    }
    for h in spec.qconj_basis() {
        residual = residual.max(h.pair_poly(phi).norm());
    }
    residual
}

/// Best certificate value over `dictionary`; only symbols orthogonal to every generator
/// within `ortho_tol` count.
pub fn dual_lower_bound(g: &TorusFn, spec: &SubspaceSpec, dictionary: &[TrigPoly], ortho_tol: f64) -> DistanceEstimate {
    let mut certificates = Vec::new();
    for phi in dictionary {
        if phi.dim() != spec.dim() || phi.is_zero() {
            continue;
        }
        let mut residual = orthogonality_residual(phi, spec);
        // Non-analytic terms pair with M_n or H²₀ at some degree beyond the truncation.
        if !phi.is_analytic() {
            residual = f64::INFINITY;
        }
        if residual > ortho_tol {
            continue;
        }
        let pairing = g.pair_poly(phi);
        let modulus = pairing.norm();
        if modulus == 0.0 {
            continue;
        }
        let sup_bound = phi.coefficient_l1();
        certificates.push(DualCertificate {
            symbol: phi.scale(pairing.conj() / modulus),
            value: modulus / sup_bound.max(1.0),
            pairing: modulus,
            sup_bound,
            orthogonality_residual: residual,
        });
    }
    certificates.sort_by(|a, b| b.value.total_cmp(&a.value));
    let lower = certificates.first().map_or(0.0, |c| c.value);
    DistanceEstimate {
        lower,
        upper: f64::INFINITY,
        lower_witness: certificates.first().cloned(),
        upper_witness: None,
        upper_grid: None,
        certificates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn perturbation_certificates() {
        let f = &TrigPoly::coordinate(2, 0).scale(c(0.3, 0.0)) + &TrigPoly::coordinate(2, 1).scale(c(0.4, 0.0));
        let g = TorusFn::from(f.conjugate().scale(c(4.0, 0.0)));
        let spec = SubspaceSpec::l_n(2, 2);
        let est = dual_lower_bound(&g, &spec, &default_dictionary(2, 2), 1e-10);
        let z1 = est.certificate_for(&TrigPoly::coordinate(2, 0)).unwrap();
        assert!((z1.value - 1.2).abs() < 1e-12);
        assert!((est.lower - 1.6).abs() < 1e-12);
    }

    #[test]
    fn constant_certificate_against_zh2() {
        let g = TorusFn::from(TrigPoly::constant(1, c(1.0, 0.0)));
        let spec = SubspaceSpec::new(1, Vec::new(), 0, 4);
        let est = dual_lower_bound(&g, &spec, &default_dictionary(1, 4), 1e-10);
        assert_eq!(est.lower, 1.0);
        assert!(est.lower_witness.unwrap().same_symbol_up_to_rotation(&TrigPoly::constant(1, c(1.0, 0.0))));
    }

    #[test]
    fn orthogonality_filter_excludes_paired_symbols() {
        let g = TorusFn::from(TrigPoly::coordinate(1, 0).conjugate());
        let spec = SubspaceSpec::new(1, vec![TrigPoly::coordinate(1, 0).conjugate().into()], 0, 0);
        let est = dual_lower_bound(&g, &spec, &[TrigPoly::coordinate(1, 0)], 1e-10);
        assert!(est.certificates.is_empty());
        assert_eq!(est.lower, 0.0);
    }
}
