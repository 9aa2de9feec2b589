//! Equispaced tensor grids on 𝕋ⁿ and the discrete transforms used to sample on them.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::TrigPolyError;

/// `N^n` nodes `(e^{2πi j_1/N}, …, e^{2πi j_n/N})`, enumerated row-major with the
/// first axis varying slowest.
#[derive(Clone)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid")
            .field("dim", &self.dim)
            .field("points_per_axis", &self.n)
            .finish()
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n
    }
}

impl TorusGrid {
    pub fn new(dim: usize, points_per_axis: usize) -> Result<Self, TrigPolyError> {
        if dim == 0 {
            return Err(TrigPolyError::ZeroDimension);
        }
        if points_per_axis == 0 {
            return Err(TrigPolyError::EmptyGrid);
        }
        points_per_axis
            .checked_pow(dim as u32)
            .filter(|&t| t <= 1 << 28)
            .ok_or(TrigPolyError::GridTooLarge {
                dim,
                points_per_axis,
            })?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            dim,
            n: points_per_axis,
            forward: planner.plan_fft_forward(points_per_axis),
            inverse: planner.plan_fft_inverse(points_per_axis),
        })
    }

    /// 256 per axis for n ≤ 2, 64 for n = 3, 16 beyond.
    pub fn default_points(dim: usize) -> usize {
        match dim {
            0..=2 => 256,
            3 => 64,
            _ => 16,
        }
    }

    pub fn with_default_resolution(dim: usize) -> Result<Self, TrigPolyError> {
        Self::new(dim, Self::default_points(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    /// Number of nodes, `N^n`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Per-axis integer coordinates of node `index`.
    pub fn node_indices(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        for axis in (0..self.dim).rev() {
            out[axis] = index % self.n;
            index /= self.n;
        }
        out
    }

    pub fn node(&self, index: usize) -> Vec<Complex64> {
        self.node_indices(index)
            .into_iter()
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / self.n as f64))
            .collect()
    }

    /// Flat position of the grid cell holding exponent `k` reduced mod N.
    pub(crate) fn fold_index(&self, k: &[i32]) -> usize {
        let n = self.n as i64;
        k.iter()
            .fold(0usize, |acc, &e| acc * self.n + (e as i64).rem_euclid(n) as usize)
    }

    fn roots(&self) -> Vec<Complex64> {
        (0..self.n)
            .map(|t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / self.n as f64))
            .collect()
    }
}

/// Discrete L¹ (node average) and sup (node maximum) of `|p|`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GridNorms {
    pub l1: f64,
    pub sup: f64,
    pub points_per_axis: usize,
}

impl GridNorms {
    pub fn from_values(values: &[Complex64], grid: &TorusGrid) -> Self {
        let mut l1 = 0.0;
        let mut sup: f64 = 0.0;
        for v in values {
            let a = v.norm();
            l1 += a;
            sup = sup.max(a);
        }
        Self {
            l1: l1 / values.len().max(1) as f64,
            sup,
            points_per_axis: grid.n,
        }
    }
}

/// Coefficients accumulated by residue class mod N; the inverse transform of the
/// result is the exact nodal sample of the polynomial.
pub(crate) fn fold_to_grid<'a, I>(grid: &TorusGrid, terms: I) -> Vec<Complex64>
where
    I: IntoIterator<Item = (&'a [i32], Complex64)>,
{
    let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (k, c) in terms {
        buf[grid.fold_index(k)] += c;
    }
    buf
}

fn transform_axes(grid: &TorusGrid, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
    let n = grid.n;
    if n == 1 {
        return;
    }
    let total = data.len();
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    if grid.dim == 1 {
        plan.process_with_scratch(data, &mut scratch);
        return;
    }
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..grid.dim {
        let stride = n.pow((grid.dim - 1 - axis) as u32);
        let block = stride * n;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (t, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + t * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for (t, v) in line.iter().enumerate() {
                    data[base + t * stride] = *v;
                }
            }
        }
    }
}

/// `x_j ← Σ_k x_k e^{+2πi k·j/N}` (unnormalized).
pub(crate) fn inverse_dft_in_place(grid: &TorusGrid, data: &mut [Complex64]) {
    transform_axes(grid, data, &grid.inverse);
}

/// `x_k ← Σ_j x_j e^{-2πi k·j/N}` (unnormalized).
pub(crate) fn forward_dft_in_place(grid: &TorusGrid, data: &mut [Complex64]) {
    transform_axes(grid, data, &grid.forward);
}

pub(crate) fn evaluate_terms<'a, I>(grid: &TorusGrid, terms: I, count: usize) -> Vec<Complex64>
where
    I: IntoIterator<Item = (&'a [i32], Complex64)>,
{
    if count <= 4 {
        return evaluate_direct(grid, terms);
    }
    let mut buf = fold_to_grid(grid, terms);
    inverse_dft_in_place(grid, &mut buf);
    buf
}

fn evaluate_direct<'a, I>(grid: &TorusGrid, terms: I) -> Vec<Complex64>
where
    I: IntoIterator<Item = (&'a [i32], Complex64)>,
{
    let n = grid.n as i64;
    let roots = grid.roots();
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (k, c) in terms {
        let reduced: Vec<i64> = k.iter().map(|&e| (e as i64).rem_euclid(n)).collect();
        let mut phase = vec![0i64; grid.dim];
        // phase[a] tracks Σ_{b≤a} k_b j_b mod N along the row-major walk
        for (idx, slot) in out.iter_mut().enumerate() {
            if idx > 0 {
                let mut axis = grid.dim - 1;
                let mut r = idx;
                while r % grid.n == 0 {
                    r /= grid.n;
                    axis -= 1;
                }
                let prev = if axis == 0 { 0 } else { phase[axis - 1] };
                let j = (r % grid.n) as i64;
                phase[axis] = (prev + reduced[axis] * j) % n;
                for b in axis + 1..grid.dim {
                    phase[b] = phase[b - 1];
                }
            }
            *slot += c * roots[phase[grid.dim - 1] as usize];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(grid: &TorusGrid, terms: &[(Vec<i32>, Complex64)]) -> Vec<Complex64> {
        (0..grid.len())
            .map(|idx| {
                let z = grid.node(idx);
                terms
                    .iter()
                    .map(|(k, c)| {
                        let mut v = *c;
                        for (e, zi) in k.iter().zip(&z) {
                            v *= zi.powi(*e);
                        }
                        v
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn direct_and_fft_agree_with_brute_force() {
        let terms: Vec<(Vec<i32>, Complex64)> = vec![
            (vec![1, -2], Complex64::new(0.5, 0.25)),
            (vec![0, 3], Complex64::new(-1.0, 0.0)),
            (vec![-4, 1], Complex64::new(0.0, 2.0)),
            (vec![2, 2], Complex64::new(0.3, -0.7)),
            (vec![7, -7], Complex64::new(1.1, 0.1)),
            (vec![0, 0], Complex64::new(0.2, 0.0)),
        ];
        for n in [1, 3, 5, 8] {
            let grid = TorusGrid::new(2, n).unwrap();
            let oracle = brute(&grid, &terms);
            let direct = evaluate_direct(&grid, terms.iter().map(|(k, c)| (k.as_slice(), *c)));
            let fft = evaluate_terms(&grid, terms.iter().map(|(k, c)| (k.as_slice(), *c)), terms.len());
            for i in 0..grid.len() {
                assert!((oracle[i] - direct[i]).norm() < 1e-12, "direct n={n} i={i}");
                assert!((oracle[i] - fft[i]).norm() < 1e-12, "fft n={n} i={i}");
            }
        }
    }

    #[test]
    fn three_dimensional_transform_round_trip() {
        let grid = TorusGrid::new(3, 4).unwrap();
        let mut data: Vec<Complex64> = (0..grid.len())
            .map(|i| Complex64::new(i as f64 * 0.1, (i % 7) as f64))
            .collect();
        let orig = data.clone();
        forward_dft_in_place(&grid, &mut data);
        inverse_dft_in_place(&grid, &mut data);
        let scale = grid.len() as f64;
        for (a, b) in data.iter().zip(&orig) {
            assert!((a / scale - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_empty_grid() {
        assert_eq!(TorusGrid::new(2, 0).unwrap_err(), TrigPolyError::EmptyGrid);
        assert_eq!(TorusGrid::new(0, 4).unwrap_err(), TrigPolyError::ZeroDimension);
    }
}
