//! Synthetic uncertain graphs for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Result};
use crate::graph::UncertainGraph;

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(param(format!("probability {p} must lie in (0, 1]")))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > u32::MAX as usize {
        return Err(param(format!("node count {n} out of range")));
    }
    Ok(())
}

/// `1 - 2 - ... - n`, every edge with probability `p`.
pub fn path(n: usize, p: f64) -> Result<UncertainGraph> {
    check_n(n)?;
    check_p(p)?;
    UncertainGraph::new(n, (1..n as u32).map(|u| (u, u + 1, p)))
}

/// Path plus the closing edge `(1, n)`; `n >= 3`.
pub fn cycle(n: usize, p: f64) -> Result<UncertainGraph> {
    if n < 3 {
        return Err(param("a cycle needs at least 3 nodes"));
    }
    check_p(p)?;
    UncertainGraph::new(n, (1..n as u32).map(|u| (u, u + 1, p)).chain([(1, n as u32, p)]))
}

/// `rows x cols` lattice, nodes numbered row-major from 1.
pub fn grid(rows: usize, cols: usize, p: f64) -> Result<UncertainGraph> {
    let n = rows.checked_mul(cols).ok_or_else(|| param("grid too large"))?;
    check_n(n)?;
    check_p(p)?;
    let id = |r: usize, c: usize| (r * cols + c + 1) as u32;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1), p));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c), p));
            }
        }
    }
    UncertainGraph::new(n, edges)
}

/// Each of the `n(n-1)/2` pairs becomes an edge with probability `density`;
/// edge probabilities are uniform on `[p_min, p_max]`.
pub fn erdos_renyi(n: usize, density: f64, p_min: f64, p_max: f64, seed: u64) -> Result<UncertainGraph> {
    check_n(n)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(param(format!("density {density} must lie in [0, 1]")));
    }
    check_p(p_min)?;
    check_p(p_max)?;
    if p_min > p_max {
        return Err(param("p_min exceeds p_max"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n as u32 {
        for v in u + 1..=n as u32 {
            if rng.gen::<f64>() < density {
                let p = if p_min == p_max { p_min } else { rng.gen_range(p_min..=p_max) };
                edges.push((u, v, p));
            }
        }
    }
    UncertainGraph::new(n, edges)
}
