//! Direct search for `f` with `|∫ψ f dμ| > ‖f‖₁`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::irls::verification_grid;
use super::{LiftError, SubspaceSpec, TorusFn};
use crate::kernels::AnalyticSymbol;
use crate::tpoly::{TorusGrid, TrigPoly, TrigPolyError};

/// Search coordinates beyond the conjugated module basis.
const MAX_COORDS: usize = 48;
const RANDOM_STARTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefuteBudget {
    pub seed: u64,
    /// Coordinate-descent sweeps per start.
    pub iterations: usize,
    pub refute_margin: f64,
}

/// `f` with `|∫ψ f| / ‖f‖₁ = ratio` on the search grid and `recheck_ratio` at twice its resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refutation {
    pub f: TorusFn,
    pub functional: f64,
    pub ratio: f64,
    pub recheck_ratio: f64,
    pub grid_points: usize,
    pub recheck_points: usize,
}

/// Grid for the search: the run grid, coarsened to 64 per axis in two variables and 32 beyond.
pub(crate) fn search_grid(grid: &TorusGrid) -> Result<TorusGrid, TrigPolyError> {
    let cap = match grid.dim() {
        1 => usize::MAX,
        2 => 64,
        _ => 32,
    };
    TorusGrid::new(grid.dim(), grid.points_per_axis().min(cap))
}

struct Coord {
    f: TorusFn,
    values: Vec<Complex64>,
    functional: Complex64,
    scale: f64,
}

struct State {
    values: Vec<Complex64>,
    functional: Complex64,
    weights: Vec<Complex64>,
}

fn mean_abs(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).sum::<f64>() / values.len() as f64
}

fn ratio(functional: Complex64, l1: f64) -> f64 {
    if l1 <= 0.0 {
        0.0
    } else {
        functional.norm() / l1
    }
}

/// Seeded multi-start coordinate descent on `|∫ψ f| / ‖f‖₁` over the span of `starts` and the
/// generators of `spec` (conjugated module basis plus the lowest-degree monomials).
pub fn refute_contractivity(
    psi: &AnalyticSymbol,
    spec: &SubspaceSpec,
    starts: &[TorusFn],
    budget: &RefuteBudget,
    grid: &TorusGrid,
) -> Result<Option<Refutation>, LiftError> {
    let dim = spec.dim();
    let mut coord_fns: Vec<TorusFn> = spec.qconj_basis().to_vec();
    let mut monos = spec.monomials();
    monos.sort_by_key(|k| k.total_degree());
    coord_fns.extend(
        monos
            .into_iter()
            .take(MAX_COORDS)
            .map(|k| TorusFn::from(TrigPoly::monomial(k, Complex64::new(1.0, 0.0)))),
    );
    let coords: Vec<Coord> = coord_fns
        .into_iter()
        .map(|f| {
            let values = f.evaluate_on_grid(grid);
            let scale = mean_abs(&values);
            let functional = f.pair_symbol(psi)?;
            Ok(Coord { f, values, functional, scale })
        })
        .collect::<Result<_, LiftError>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut start_fns: Vec<TorusFn> = starts.to_vec();
    if let Some(base) = starts.first() {
        for _ in 0..RANDOM_STARTS {
            let mut f = base.clone();
            let amp = 0.2 / (coords.len().max(1) as f64).sqrt();
            for c in &coords {
                let t = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
                f = f.add(&c.f.scale(t / c.scale.max(1e-300)));
            }
            start_fns.push(f);
        }
    }

    let mut best: Option<(f64, TorusFn, Complex64)> = None;
    let threshold = 1.0 + budget.refute_margin;
    for start in start_fns.iter().filter(|s| s.dim() == dim && !s.is_zero()) {
        let values = start.evaluate_on_grid(grid);
        let functional = start.pair_symbol(psi)?;
        let mut state = State {
            values,
            functional,
            weights: vec![Complex64::new(0.0, 0.0); coords.len()],
        };
        descend(&mut state, &coords, budget.iterations);
        let r = ratio(state.functional, mean_abs(&state.values));
        if best.as_ref().is_none_or(|(b, _, _)| r > *b) {
            let f = coords
                .iter()
                .zip(&state.weights)
                .filter(|(_, w)| w.norm() > 0.0)
                .fold(start.clone(), |acc, (c, w)| acc.add(&c.f.scale(*w)));
            best = Some((r, f, state.functional));
        }
    }

    let Some((r, f, functional)) = best else {
        return Ok(None);
    };
    if r <= threshold {
        return Ok(None);
    }
    // re-measure from scratch at double resolution
    let fine = verification_grid(grid);
    let recheck_functional = f.pair_symbol(psi)?;
    let recheck = ratio(recheck_functional, f.grid_l1(&fine));
    if recheck <= 1.0 + budget.refute_margin / 2.0 {
        return Ok(None);
    }
    Ok(Some(Refutation {
        f,
        functional: functional.norm(),
        ratio: r,
        recheck_ratio: recheck,
        grid_points: grid.points_per_axis(),
        recheck_points: fine.points_per_axis(),
    }))
}

fn descend(state: &mut State, coords: &[Coord], sweeps: usize) {
    let dirs: Vec<Complex64> = (0..8)
        .map(|q| Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * q as f64))
        .collect();
    let l1 = mean_abs(&state.values);
    let mut steps: Vec<f64> = coords.iter().map(|c| 0.25 * l1 / c.scale.max(1e-300)).collect();
    let mut current = ratio(state.functional, l1);
    let mut trial = vec![Complex64::new(0.0, 0.0); state.values.len()];
    let mut idle = 0;
    for _ in 0..sweeps {
        let mut improved = false;
        for (j, c) in coords.iter().enumerate() {
            let mut best_move: Option<(f64, Complex64)> = None;
            for d in &dirs {
                let t = d * steps[j];
                for ((slot, v), cv) in trial.iter_mut().zip(&state.values).zip(&c.values) {
                    *slot = v + t * cv;
                }
                let cand_l1 = mean_abs(&trial);
                let r = ratio(state.functional + t * c.functional, cand_l1);
                if r > current && best_move.as_ref().is_none_or(|(b, _)| r > *b) {
                    best_move = Some((r, t));
                }
            }
            match best_move {
                Some((r, t)) => {
                    for (v, cv) in state.values.iter_mut().zip(&c.values) {
                        *v += t * cv;
                    }
                    state.functional += t * c.functional;
                    state.weights[j] += t;
                    current = r;
                    steps[j] *= 1.5;
                    improved = true;
                }
                None => steps[j] *= 0.5,
            }
        }
        // eight idle sweeps shrink every step by 256
        idle = if improved { 0 } else { idle + 1 };
        if idle >= 8 {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn finds_the_conjugate_witness_for_a_non_inner_symbol() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = &TrigPoly::coordinate(2, 0).scale(c(s, 0.0)) + &TrigPoly::coordinate(2, 1).scale(c(s, 0.0));
        let psi: AnalyticSymbol = p.clone().into();
        let spec = SubspaceSpec::new(2, Vec::new(), 2, 2);
        let grid = TorusGrid::new(2, 64).unwrap();
        let w = refute_contractivity(
            &psi,
            &spec,
            &[TorusFn::conj_of(&psi)],
            &RefuteBudget {
                seed: 7,
                iterations: 5,
                refute_margin: 1e-4,
            },
            &grid,
        )
        .unwrap()
        .expect("witness");
        assert!(w.ratio >= 1.0 / 0.9004);
        assert!(w.recheck_ratio > 1.0 + 0.5e-4);
    }

    #[test]
    fn monomial_symbol_has_no_witness() {
        let psi: AnalyticSymbol = TrigPoly::monomial([1, 1].into(), c(1.0, 0.0)).into();
        let spec = SubspaceSpec::new(2, Vec::new(), 4, 4);
        let grid = TorusGrid::new(2, 64).unwrap();
        let w = refute_contractivity(
            &psi,
            &spec,
            &[TorusFn::conj_of(&psi)],
            &RefuteBudget {
                seed: 1,
                iterations: 20,
                refute_margin: 1e-4,
            },
            &grid,
        )
        .unwrap();
        assert!(w.is_none());
    }
}
