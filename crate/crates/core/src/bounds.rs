//! Concentration bound and the closed-form sample sizes used by the
//! sampling solvers.

use std::f64::consts::{E, PI};

use crate::error::{param, Result};

/// Inputs of the upper-tail concentration bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailParams {
    /// Deviation above the mean, `> 0`.
    pub epsilon: f64,
    /// True mean of the averaged indicators, in `[0, 1]`.
    pub upsilon: f64,
    /// Number of sampled worlds, `>= 1`.
    pub samples: usize,
}

impl TailParams {
    pub fn new(epsilon: f64, upsilon: f64, samples: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(param(format!("epsilon {epsilon} must be positive")));
        }
        if !(0.0..=1.0).contains(&upsilon) {
            return Err(param(format!("mean {upsilon} outside [0, 1]")));
        }
        if samples == 0 {
            return Err(param("at least one sample is required"));
        }
        Ok(TailParams { epsilon, upsilon, samples })
    }
}

/// `exp(-3 eps^2 |R| / (2 (eps + mean)))`: bounds the probability that the
/// sample mean of connection indicators exceeds the true mean by `eps`.
pub fn tail_bound(p: &TailParams) -> f64 {
    let e = p.epsilon;
    (-3.0 * e * e * p.samples as f64 / (2.0 * (e + p.upsilon))).exp()
}

/// `ln C(n, k)` without forming the binomial.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

/// `6 delta / (pi^2 i^2)`, the confidence assigned to round `i >= 1`; the
/// shares over all rounds sum to `delta`.
pub fn round_delta(delta: f64, round: usize) -> f64 {
    6.0 * delta / (PI * PI * (round * round) as f64)
}

fn unit_open(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(param(format!("{name} = {x} must lie in (0, 1)")))
    }
}

fn unit_half_open(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(param(format!("{name} = {x} must lie in (0, 1]")))
    }
}

/// Rounds a real sample size up to a count of at least one.
pub(crate) fn to_count(x: f64) -> Result<usize> {
    if x.is_nan() || x >= 1e15 {
        return Err(param(format!("sample size {x} is not representable")));
    }
    Ok(x.ceil().max(1.0) as usize)
}

/// Worlds needed for fixed-sample greedy k-median to be
/// `(1 - 1/e - eps)`-approximate with probability `1 - delta`:
///
/// `2(2e-1)(e eps + 2e - 1) / (3 e^2 eps^2 OPT) * ln((C(n,k) + 1) / delta)`,
/// with `OPT` replaced by a lower bound.
pub fn samples_for_kmedian(n: usize, k: usize, epsilon: f64, delta: f64, opt_lower_bound: f64) -> Result<usize> {
    to_count(kmedian_sample_size(n, k, epsilon, delta, opt_lower_bound)?)
}

pub(crate) fn kmedian_sample_size(n: usize, k: usize, epsilon: f64, delta: f64, opt: f64) -> Result<f64> {
    if k == 0 || k > n {
        return Err(param(format!("k = {k} must be in 1..={n}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(param(format!("epsilon = {epsilon} must be positive")));
    }
    unit_open("delta", delta)?;
    unit_half_open("OPT lower bound", opt)?;
    let ln_c = ln_binomial(n, k);
    // ln(C + 1) = ln C + ln(1 + 1/C)
    let ln_c1 = ln_c + (-ln_c).exp().ln_1p();
    let lead = 2.0 * (2.0 * E - 1.0) * (E * epsilon + 2.0 * E - 1.0) / (3.0 * E * E * epsilon * epsilon * opt);
    Ok(lead * (ln_c1 - delta.ln()))
}

/// Worlds needed by sampled Gonzalez for `KC >= (1 - eps1 - eps2) OPT^2`:
/// `max(2(1+eps1) / (3 eps1^2 OPT^2), 2(1-eps1) / (3 eps2^2 OPT^2)) * ln(n(n-1)/delta)`.
pub fn samples_for_kcenter_simple(n: usize, epsilon1: f64, epsilon2: f64, delta: f64, opt_lower_bound: f64) -> Result<usize> {
    to_count(simple_size(n as f64 * (n as f64 - 1.0), epsilon1, epsilon2, delta, opt_lower_bound)?)
}

/// Per-round target of the OPT-guessing loop, which spends an extra factor
/// of two inside the logarithm: `... * ln(2n(n-1)/delta)` with guess `q`.
pub fn samples_for_kcenter_guess(n: usize, epsilon1: f64, epsilon2: f64, delta: f64, q: f64) -> Result<usize> {
    to_count(simple_size(2.0 * n as f64 * (n as f64 - 1.0), epsilon1, epsilon2, delta, q)?)
}

fn simple_size(pairs: f64, e1: f64, e2: f64, delta: f64, opt: f64) -> Result<f64> {
    unit_open("epsilon1", e1)?;
    unit_open("epsilon2", e2)?;
    unit_open("delta", delta)?;
    unit_half_open("OPT lower bound", opt)?;
    let o2 = opt * opt;
    let a = 2.0 * (1.0 + e1) / (3.0 * e1 * e1 * o2);
    let b = 2.0 * (1.0 - e1) / (3.0 * e2 * e2 * o2);
    Ok(a.max(b) * (pairs / delta).ln().max(0.0))
}

/// Worlds needed by the bi-criteria search:
/// `2(1+eps3) / (3 eps3^2 (1-eps) OPT) * ln((n^2 + n - 2k) / (2 delta))`.
/// The same expression with `OPT` replaced by the current threshold `q`
/// gives the per-iteration target of the adaptive search.
pub fn samples_for_kcenter_bicriteria(
    n: usize,
    k: usize,
    epsilon3: f64,
    epsilon: f64,
    delta: f64,
    opt_lower_bound: f64,
) -> Result<usize> {
    to_count(bicriteria_size(n, k, epsilon3, epsilon, delta, opt_lower_bound)?)
}

fn bicriteria_size(n: usize, k: usize, e3: f64, eps: f64, delta: f64, opt: f64) -> Result<f64> {
    if k == 0 || k > n {
        return Err(param(format!("k = {k} must be in 1..={n}")));
    }
    unit_open("epsilon3", e3)?;
    unit_open("epsilon", eps)?;
    unit_open("delta", delta)?;
    unit_half_open("OPT lower bound", opt)?;
    let nf = n as f64;
    let links = nf * nf + nf - 2.0 * k as f64;
    let lead = 2.0 * (1.0 + e3) / (3.0 * e3 * e3 * (1.0 - eps) * opt);
    Ok(lead * (links / (2.0 * delta)).ln().max(0.0))
}

/// `(1 / (eps^2 OPT)) * (ln(n / delta) + ln ln(1 / (eps OPT)))`, the growth
/// rate of the expected sample count of the adaptive bi-criteria search
/// (constants omitted). The `ln ln` term is dropped when `eps * OPT > 1/e`.
pub fn expected_samples_kcenter_plus(n: usize, epsilon: f64, delta: f64, opt: f64) -> f64 {
    let inner = (1.0 / (epsilon * opt)).ln();
    let lnln = if inner > 1.0 { inner.ln() } else { 0.0 };
    ((n as f64 / delta).ln() + lnln) / (epsilon * epsilon * opt)
}
