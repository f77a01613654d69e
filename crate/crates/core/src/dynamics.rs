//! The dynamical system governing the boundary-condition recursion.
//!
//! The level fields of a boundary condition evolve under the planar map
//!
//! ```text
//! f(x, y) = ( (2θ·x^{1/k} − 2·y^{1/k})/(θ²−1),  (−2·x^{1/k} + 2θ·y^{1/k})/(θ²−1) )
//! ```
//!
//! whose ratio `x/y` evolves under the one-dimensional map
//! `g_θ(t) = (θ·t^{1/k} − 1)/(θ − t^{1/k})` on `Δ = [0, θ^k) ∪ (θ^k, ∞)`.
//! Fixed points of `g_θ` are found through the substitution `s = t^{1/k}`,
//! which turns `g_θ(t) = t` into the polynomial
//! `s^{k+1} − θ·s^k + θ·s − 1 = 0`; the root `s = 1` is always present and
//! deflating it leaves `q(s) = s^k + (1−θ)(s^{k−1} + … + s) + 1`, bisected
//! on `(1/θ, 1)` and `(1, θ)`. Two extra fixed points exist exactly when
//! `q(1) = 2 − (θ−1)(k−1) < 0`, i.e. when `θ > (k+1)/(k−1)`.
//!
//! Each fixed point `t_i` carries the constants
//! `A_i = (2θ·t_i^{1/k} − 2)/(θ²−1)`, `B_i = (2θ − 2·t_i^{1/k})/(θ²−1)` and
//! the planar fixed point `(A_i·B_i^{1/(k−1)}, B_i·B_i^{1/(k−1)})` of `f`
//! on the invariant line `y = x/t_i`.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::math::{exp, kth_root, ln, pow, powi};
use crate::tree::TreeParams;
use crate::{Error, Result};

/// Sup-norm step difference below which a trajectory counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-12;

/// Default trajectory step cap.
pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// Numeric validity bound: `θ^k` may not exceed this. Past it the fixed
/// point `t₃` crowds the domain edge `θ^k` (the gap `θ − t₃^{1/k}`
/// collapses), and every γ-side quantity loses precision faster than the
/// stated tolerances. The bound still reaches `β·k ≈ 6.9`, deep in the
/// saturated-magnetization regime.
pub const MAX_THETA_POW_K: f64 = 1e6;

/// Model parameters: branching order `k ≥ 2` and temperature, carried both
/// as `θ = e^{2β} > 1` and as `β > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    k: u32,
    theta: f64,
    beta: f64,
}

impl ModelParams {
    pub fn from_theta(k: u32, theta: f64) -> Result<Self> {
        TreeParams::new(k)?;
        if !(theta > 1.0) || !theta.is_finite() {
            return Err(Error::Param(alloc::format!(
                "theta must be finite and > 1 (got {theta})"
            )));
        }
        if !(powi(theta, k) <= MAX_THETA_POW_K) {
            return Err(Error::Param(alloc::format!(
                "theta^k exceeds the numeric validity bound {MAX_THETA_POW_K:.0e} \
                 for theta = {theta}, k = {k}"
            )));
        }
        Ok(ModelParams {
            k,
            theta,
            beta: ln(theta) / 2.0,
        })
    }

    pub fn from_beta(k: u32, beta: f64) -> Result<Self> {
        TreeParams::new(k)?;
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Param(alloc::format!(
                "beta must be finite and > 0 (got {beta})"
            )));
        }
        let theta = exp(2.0 * beta);
        if !(powi(theta, k) <= MAX_THETA_POW_K) {
            return Err(Error::Param(alloc::format!(
                "theta^k exceeds the numeric validity bound {MAX_THETA_POW_K:.0e} \
                 for beta = {beta}, k = {k}"
            )));
        }
        Ok(ModelParams { k, theta, beta })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tree(&self) -> TreeParams {
        TreeParams::new(self.k).expect("k validated at construction")
    }

    /// `θ^k`, the right edge of the domain of `g_θ`.
    pub fn theta_pow_k(&self) -> f64 {
        powi(self.theta, self.k)
    }

    /// `θ_c = (k+1)/(k−1)`.
    pub fn theta_c(&self) -> f64 {
        (self.k as f64 + 1.0) / (self.k as f64 - 1.0)
    }

    /// True in the phase-transition regime `θ > θ_c`.
    pub fn is_transition_regime(&self) -> bool {
        self.theta > self.theta_c()
    }
}

/// The phase-transition threshold for order `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Critical {
    pub theta_c: f64,
    pub beta_c: f64,
}

/// `θ_c = (k+1)/(k−1)` together with `β_c = ln(θ_c)/2`.
pub fn critical_theta(k: u32) -> Result<Critical> {
    TreeParams::new(k)?;
    let theta_c = (k as f64 + 1.0) / (k as f64 - 1.0);
    Ok(Critical {
        theta_c,
        beta_c: ln(theta_c) / 2.0,
    })
}

/// `g_θ(t) = (θ·t^{1/k} − 1)/(θ − t^{1/k})` on `Δ = [0, θ^k) ∪ (θ^k, ∞)`.
pub fn g_eval(p: &ModelParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(alloc::format!(
            "g_theta is defined on [0, theta^k) U (theta^k, inf); got t = {t}"
        )));
    }
    let s = kth_root(t, p.k);
    if s == p.theta || t == p.theta_pow_k() {
        return Err(Error::Domain(
            "t = theta^k is the pole of g_theta".to_string(),
        ));
    }
    Ok((p.theta * s - 1.0) / (p.theta - s))
}

/// One fixed point `t_i` of `g_θ` with its k-th root, the constants
/// `A_i`, `B_i`, and the planar fixed point of `f` on the line `y = x/t_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    /// Conventional index: 1 for `t = 1`, 2 for the small root, 3 for the large.
    pub index: usize,
    pub t: f64,
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub planar: (f64, f64),
}

/// Fixed points of `g_θ`: `t_1 = 1` always, plus the reciprocal pair
/// `(t_2, t_3)` with `1/θ^k < t_2 < 1 < t_3 < θ^k` when `θ > θ_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointData {
    pub t1: FixedPoint,
    pub extra: Option<(FixedPoint, FixedPoint)>,
}

impl FixedPointData {
    /// 1 in the uniqueness regime, 3 in the transition regime.
    pub fn count(&self) -> usize {
        if self.extra.is_some() {
            3
        } else {
            1
        }
    }

    pub fn point(&self, index: usize) -> Option<&FixedPoint> {
        match index {
            1 => Some(&self.t1),
            2 => self.extra.as_ref().map(|(p2, _)| p2),
            3 => self.extra.as_ref().map(|(_, p3)| p3),
            _ => None,
        }
    }

    /// Points in index order 1, 2, 3.
    pub fn points(&self) -> Vec<&FixedPoint> {
        let mut out = alloc::vec![&self.t1];
        if let Some((p2, p3)) = &self.extra {
            out.push(p2);
            out.push(p3);
        }
        out
    }

    /// The planar fixed points `(A_i·B_i^{1/(k−1)}, B_i·B_i^{1/(k−1)})` of
    /// `f`, in index order.
    pub fn planar_points(&self) -> Vec<(f64, f64)> {
        self.points().iter().map(|fp| fp.planar).collect()
    }

    pub fn t2(&self) -> Option<f64> {
        self.extra.as_ref().map(|(p2, _)| p2.t)
    }

    pub fn t3(&self) -> Option<f64> {
        self.extra.as_ref().map(|(_, p3)| p3.t)
    }
}

/// Deflated fixed-point polynomial `q(s) = s^k + (1−θ)(s^{k−1}+…+s) + 1`.
fn deflated_poly(k: u32, theta: f64, s: f64) -> f64 {
    let c = 1.0 - theta;
    let mut acc = 1.0;
    for _ in 0..k - 1 {
        acc = acc * s + c;
    }
    acc * s + 1.0
}

/// Bisection on a bracket with `sign q(lo) = sign_lo != sign q(hi)`.
fn bisect(k: u32, theta: f64, mut lo: f64, mut hi: f64, lo_positive: bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = deflated_poly(k, theta, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn build_point(p: &ModelParams, index: usize, s: f64) -> FixedPoint {
    let t = powi(s, p.k);
    let denom = p.theta * p.theta - 1.0;
    let a = (2.0 * p.theta * s - 2.0) / denom;
    let b = (2.0 * p.theta - 2.0 * s) / denom;
    let c = kth_root(b, p.k - 1);
    FixedPoint {
        index,
        t,
        s,
        a,
        b,
        planar: (a * c, b * c),
    }
}

/// Solves `g_θ(t) = t`. Returns `t_1 = 1` alone for `θ ≤ (k+1)/(k−1)`
/// (the tangent double root at criticality counts as the unique regime) and
/// the full triple for `θ > (k+1)/(k−1)`.
pub fn find_fixed_points(p: &ModelParams) -> FixedPointData {
    let t1 = build_point(p, 1, 1.0);
    // q(1) = 2 + (1−θ)(k−1) changes sign exactly at θ_c.
    let q_at_one = deflated_poly(p.k, p.theta, 1.0);
    let extra = if q_at_one < 0.0 {
        // q(1/θ) = (1+θ)/θ^k > 0 and q(θ) = θ+1 > 0 bracket one root on
        // each side of s = 1.
        let s2 = bisect(p.k, p.theta, 1.0 / p.theta, 1.0, true);
        let s3 = bisect(p.k, p.theta, 1.0, p.theta, false);
        Some((build_point(p, 2, s2), build_point(p, 3, s3)))
    } else {
        None
    };
    FixedPointData { t1, extra }
}

/// One application of the planar map `f`; fails when the well-definedness
/// condition `y/θ^k ≤ x ≤ θ^k·y` (or positivity) does not hold.
pub fn f_step(p: &ModelParams, x: f64, y: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !(y > 0.0) {
        return Err(Error::Domain(alloc::format!(
            "f needs positive coordinates (got ({x}, {y}))"
        )));
    }
    let tk = p.theta_pow_k();
    if x * tk < y || x > y * tk {
        return Err(Error::Domain(alloc::format!(
            "ratio x/y = {} outside [theta^-k, theta^k] = [{:.6e}, {:.6e}]",
            x / y,
            1.0 / tk,
            tk
        )));
    }
    let sx = kth_root(x, p.k);
    let sy = kth_root(y, p.k);
    let denom = p.theta * p.theta - 1.0;
    Ok((
        (2.0 * p.theta * sx - 2.0 * sy) / denom,
        (-2.0 * sx + 2.0 * p.theta * sy) / denom,
    ))
}

/// One step of the level recursion read towards the root,
/// `(x, y) ↦ (((θx+y)/2)^k, ((x+θy)/2)^k)`; the exact inverse of [`f_step`]
/// on the domain of `f`. Expects `x, y > 0`.
pub fn forward_recursion_step(p: &ModelParams, x: f64, y: f64) -> (f64, f64) {
    (
        powi((p.theta * x + y) / 2.0, p.k),
        powi((x + p.theta * y) / 2.0, p.k),
    )
}

/// How a trajectory of `f` ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    /// The starting point already was a fixed point (first step moved less
    /// than the tolerance).
    AtFixedPoint,
    /// Successive points came within [`CONVERGENCE_TOL`] of each other.
    ConvergesTo((f64, f64)),
    /// The domain condition failed when attempting the given step
    /// (1-indexed); the trajectory is finite.
    ExitsDomain(usize),
    /// The step cap was reached before convergence or exit.
    StepLimit,
}

/// A computed trajectory: the visited points (starting point included;
/// every recorded point satisfies the domain condition) and the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryResult {
    pub points: Vec<(f64, f64)>,
    pub verdict: Verdict,
}

/// Iterates `f` from `(x0, y0)` until convergence, domain exit, or the step
/// cap.
pub fn iterate_trajectory(
    p: &ModelParams,
    x0: f64,
    y0: f64,
    max_steps: usize,
) -> Result<TrajectoryResult> {
    if !(x0 > 0.0) || !(y0 > 0.0) || !x0.is_finite() || !y0.is_finite() {
        return Err(Error::Param(alloc::format!(
            "trajectory start must be positive and finite (got ({x0}, {y0}))"
        )));
    }
    let mut points = alloc::vec![(x0, y0)];
    let (mut x, mut y) = (x0, y0);
    for step in 1..=max_steps {
        match f_step(p, x, y) {
            Err(_) => {
                return Ok(TrajectoryResult {
                    points,
                    verdict: Verdict::ExitsDomain(step),
                });
            }
            Ok((nx, ny)) => {
                let diff = (nx - x).abs().max((ny - y).abs());
                points.push((nx, ny));
                x = nx;
                y = ny;
                if diff < CONVERGENCE_TOL {
                    let verdict = if step == 1 {
                        Verdict::AtFixedPoint
                    } else {
                        Verdict::ConvergesTo((x, y))
                    };
                    return Ok(TrajectoryResult { points, verdict });
                }
            }
        }
    }
    Ok(TrajectoryResult {
        points,
        verdict: Verdict::StepLimit,
    })
}

/// Closed-form point of the trajectory on the invariant line `l_i` after
/// `n` steps:
/// `x^(n) = A_i·B_i^{1/(k−1)} · (x0 / (A_i·B_i^{1/(k−1)}))^{1/k^n}` and the
/// matching `y^(n)` (the start implies `y0 = x0/t_i`).
pub fn invariant_line_trajectory(
    p: &ModelParams,
    line: usize,
    x0: f64,
    n: u32,
) -> Result<(f64, f64)> {
    if !(x0 > 0.0) {
        return Err(Error::Param(alloc::format!(
            "invariant-line start must be positive (got {x0})"
        )));
    }
    let fps = find_fixed_points(p);
    let point = fps.point(line).ok_or_else(|| {
        Error::Index(alloc::format!(
            "invariant line l_{line} unavailable: theta = {} has {} fixed point(s)",
            p.theta,
            fps.count()
        ))
    })?;
    let y0 = x0 / point.t;
    let (px, py) = point.planar;
    let root_exp = pow(p.k as f64, -(n as f64));
    Ok((px * pow(x0 / px, root_exp), py * pow(y0 / py, root_exp)))
}

/// The nested-root value
/// `β_n = b_n · (b_{n−1} · ( … · b_0^{1/k} )^{1/k})^{1/k}` over the whole
/// slice; for `b_m → b∞` it approaches `b∞^{k/(k−1)}`.
pub fn nested_radical_limit(b: &[f64], k: u32) -> Result<f64> {
    TreeParams::new(k)?;
    if b.is_empty() {
        return Err(Error::Param(
            "nested radical needs at least one term".to_string(),
        ));
    }
    for &v in b {
        if !(v > 0.0) {
            return Err(Error::Param(alloc::format!(
                "nested radical terms must be positive (got {v})"
            )));
        }
    }
    let mut acc = b[0];
    for &v in &b[1..] {
        acc = v * kth_root(acc, k);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn params(k: u32, theta: f64) -> ModelParams {
        ModelParams::from_theta(k, theta).unwrap()
    }

    #[test]
    fn critical_thresholds() {
        let c2 = critical_theta(2).unwrap();
        assert_eq!(c2.theta_c, 3.0);
        assert!(close(c2.beta_c, 0.549_306_144_334_054_85, 1e-15));
        let c3 = critical_theta(3).unwrap();
        assert_eq!(c3.theta_c, 2.0);
        assert!(critical_theta(1).is_err());
    }

    #[test]
    fn theta_beta_round_trip() {
        let p = ModelParams::from_beta(2, core::f64::consts::LN_2).unwrap();
        assert!(close(p.theta(), 4.0, 1e-15));
        let q = ModelParams::from_theta(2, 4.0).unwrap();
        assert!(close(q.beta(), core::f64::consts::LN_2, 1e-15));
        assert!(ModelParams::from_theta(2, 1.0).is_err());
        assert!(ModelParams::from_theta(2, 0.5).is_err());
        assert!(ModelParams::from_beta(2, 0.0).is_err());
        assert!(ModelParams::from_beta(2, -1.0).is_err());
    }

    #[test]
    fn g_values_at_reference_points() {
        let p = params(2, 4.0);
        assert_eq!(g_eval(&p, 1.0).unwrap(), 1.0);
        assert_eq!(g_eval(&p, 0.0).unwrap(), -0.25);
        // (4·√2 − 1)/(4 − √2), frozen from exact arithmetic
        assert!(close(
            g_eval(&p, 2.0).unwrap(),
            1.800_943_102_542_601_8,
            1e-14
        ));
    }

    #[test]
    fn g_domain_errors() {
        let p = params(2, 4.0);
        assert!(matches!(g_eval(&p, -0.1), Err(Error::Domain(_))));
        assert!(matches!(g_eval(&p, 16.0), Err(Error::Domain(_))));
        assert!(g_eval(&p, 15.999).is_ok());
        assert!(g_eval(&p, 16.001).is_ok());
    }

    #[test]
    fn fixed_points_in_transition_regime() {
        let p = params(2, 4.0);
        let fps = find_fixed_points(&p);
        assert_eq!(fps.count(), 3);
        assert_eq!(fps.t1.t, 1.0);
        // s2 = (3−√5)/2, s3 = (3+√5)/2, t_i = s_i²
        let t2 = fps.t2().unwrap();
        let t3 = fps.t3().unwrap();
        assert!(close(t2, 0.145_898_033_750_315_46, 1e-13));
        assert!(close(t3, 6.854_101_966_249_684_5, 1e-11));
        assert!(close(t2 * t3, 1.0, 1e-12));
        let p2 = fps.point(2).unwrap();
        let p3 = fps.point(3).unwrap();
        assert!(close(p2.s, 0.381_966_011_250_105_15, 1e-14));
        assert!(close(p3.s, 2.618_033_988_749_894_8, 1e-13));
        // residuals under g
        for fp in fps.points() {
            let r = (g_eval(&p, fp.t).unwrap() - fp.t).abs();
            assert!(r < 1e-12, "residual {r} at t = {}", fp.t);
        }
        // ordering 1/θ^k < t2 < 1 < t3 < θ^k
        assert!(1.0 / p.theta_pow_k() < t2 && t2 < 1.0);
        assert!(1.0 < t3 && t3 < p.theta_pow_k());
    }

    #[test]
    fn unique_fixed_point_at_and_below_threshold() {
        for theta in [2.5, 3.0] {
            let fps = find_fixed_points(&params(2, theta));
            assert_eq!(fps.count(), 1, "theta = {theta}");
            assert!(fps.extra.is_none());
        }
        assert_eq!(find_fixed_points(&params(3, 2.0)).count(), 1);
        assert_eq!(find_fixed_points(&params(3, 3.0)).count(), 3);
    }

    #[test]
    fn ternary_tree_large_root() {
        // k=3, θ=3: s3 = (3+√5)/2, t3 = s3³
        let fps = find_fixed_points(&params(3, 3.0));
        assert!(close(fps.t3().unwrap(), 17.944_271_909_999_159, 1e-10));
    }

    #[test]
    fn fixed_point_constants_and_planar_points() {
        let p = params(2, 4.0);
        let fps = find_fixed_points(&p);
        // A1 = B1 = Θ = 2/(θ+1) = 0.4, planar (0.16, 0.16)
        assert!(close(fps.t1.a, 0.4, 1e-15));
        assert!(close(fps.t1.b, 0.4, 1e-15));
        assert!(close(fps.t1.planar.0, 0.16, 1e-15));
        assert!(close(fps.t1.planar.1, 0.16, 1e-15));
        // frozen from exact arithmetic at s3 = (3+√5)/2
        let p3 = fps.point(3).unwrap();
        assert!(close(p3.a, 1.262_951_460_666_610_6, 1e-12));
        assert!(close(p3.b, 0.184_262_134_833_347_35, 1e-13));
        assert!(close(p3.planar.0, 0.232_714_132_333_324, 1e-12));
        assert!(close(p3.planar.1, 0.033_952_534_333_342_68, 1e-13));
        // coordinate ratio reproduces t_i
        for fp in fps.points() {
            assert!(close(fp.planar.0 / fp.planar.1, fp.t, 1e-10));
        }
        // planar points are fixed under f
        for (x, y) in fps.planar_points() {
            let (nx, ny) = f_step(&p, x, y).unwrap();
            assert!(close(nx, x, 1e-14) && close(ny, y, 1e-14));
        }
    }

    #[test]
    fn f_step_reference_values() {
        let p = params(2, 4.0);
        assert_eq!(f_step(&p, 1.0, 1.0).unwrap(), (0.4, 0.4));
        let (x, y) = f_step(&p, 0.16, 0.16).unwrap();
        assert!(close(x, 0.16, 1e-14) && close(y, 0.16, 1e-14));
        // ratio 0.01 < 1/θ^k = 1/16: immediately outside the domain
        assert!(matches!(f_step(&p, 0.01, 1.0), Err(Error::Domain(_))));
        assert!(matches!(f_step(&p, -1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn forward_recursion_inverts_f() {
        let p = params(2, 4.0);
        assert_eq!(forward_recursion_step(&p, 0.4, 0.4), (1.0, 1.0));
        let (x, y) = forward_recursion_step(&p, 0.16, 0.16);
        assert!(close(x, 0.16, 1e-14) && close(y, 0.16, 1e-14));
        let (fx, fy) = f_step(&p, 2.0, 3.0).unwrap();
        let (bx, by) = forward_recursion_step(&p, fx, fy);
        assert!(close(bx, 2.0, 1e-12) && close(by, 3.0, 1e-12));
    }

    #[test]
    fn trajectory_from_diagonal_converges() {
        let p = params(2, 4.0);
        let tr = iterate_trajectory(&p, 1.0, 1.0, 60).unwrap();
        match tr.verdict {
            Verdict::ConvergesTo((x, y)) => {
                assert!(close(x, 0.16, 1e-10) && close(y, 0.16, 1e-10));
            }
            other => panic!("expected convergence, got {other:?}"),
        }
        // first iterates follow the closed form x^(n) = 0.16·6.25^(1/2^n)
        assert_eq!(tr.points[1], (0.4, 0.4));
        assert!(close(tr.points[2].0, 0.252_982_212_813_470_35, 1e-14));
        assert!(close(tr.points[3].0, 0.201_189_348_749_269_67, 1e-14));
    }

    #[test]
    fn trajectory_below_t2_exits_at_step_three() {
        let p = params(2, 4.0);
        let tr = iterate_trajectory(&p, 0.1, 1.0, 60).unwrap();
        assert_eq!(tr.verdict, Verdict::ExitsDomain(3));
        assert_eq!(tr.points.len(), 3);
        // g-iterates of the ratio, frozen from exact arithmetic
        let r1 = tr.points[1].0 / tr.points[1].1;
        let r2 = tr.points[2].0 / tr.points[2].1;
        assert!(close(r1, 0.071_912_986_808_337_67, 1e-13));
        assert!(close(r2, 0.019_471_357_645_272_073, 1e-13));
        assert!(r2 < 1.0 / 16.0);
    }

    #[test]
    fn trajectory_in_unique_regime_converges_on_l1() {
        let p = params(2, 2.5);
        let tr = iterate_trajectory(&p, 1.0, 1.0, 200).unwrap();
        let target = 0.326_530_612_244_897_96; // (2/3.5)²
        match tr.verdict {
            Verdict::ConvergesTo((x, y)) => {
                assert!(close(x, target, 1e-10) && close(y, target, 1e-10));
            }
            other => panic!("expected convergence, got {other:?}"),
        }
    }

    #[test]
    fn trajectory_started_at_fixed_point() {
        let p = params(2, 4.0);
        let tr = iterate_trajectory(&p, 0.16, 0.16, 10).unwrap();
        assert_eq!(tr.verdict, Verdict::AtFixedPoint);
        assert!(iterate_trajectory(&p, 0.0, 1.0, 10).is_err());
        assert!(iterate_trajectory(&p, 1.0, -2.0, 10).is_err());
    }

    #[test]
    fn invariant_line_closed_form() {
        let p = params(2, 4.0);
        let (x1, _) = invariant_line_trajectory(&p, 1, 1.0, 1).unwrap();
        assert!(close(x1, 0.4, 1e-14));
        let (x_deep, y_deep) = invariant_line_trajectory(&p, 1, 1.0, 50).unwrap();
        assert!(close(x_deep, 0.16, 1e-12) && close(y_deep, 0.16, 1e-12));
        let (xf, _) = invariant_line_trajectory(&p, 1, 0.16, 7).unwrap();
        assert!(close(xf, 0.16, 1e-14));
        // lines 2 and 3 only exist past the threshold
        assert!(invariant_line_trajectory(&p, 3, 1.0, 1).is_ok());
        let pu = params(2, 2.5);
        assert!(matches!(
            invariant_line_trajectory(&pu, 3, 1.0, 1),
            Err(Error::Index(_))
        ));
        assert!(matches!(
            invariant_line_trajectory(&p, 4, 1.0, 1),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn invariant_line_matches_iteration() {
        let p = params(2, 4.0);
        let mut x = 1.0;
        let mut y = 1.0;
        for n in 1..=20u32 {
            let (nx, ny) = f_step(&p, x, y).unwrap();
            x = nx;
            y = ny;
            let (cx, cy) = invariant_line_trajectory(&p, 1, 1.0, n).unwrap();
            assert!(close(cx, x, 1e-10) && close(cy, y, 1e-10), "n = {n}");
        }
    }

    #[test]
    fn nested_radical_values() {
        // constant c at k = 2: β_n = c^(2 − 1/2^n)
        let b = alloc::vec![1.3; 7];
        let expect = pow(1.3, 2.0 - 1.0 / 64.0);
        assert!(close(nested_radical_limit(&b, 2).unwrap(), expect, 1e-14));
        // B1(θ=4, k=2) = 0.4 → the planar coordinate 0.16
        let b = alloc::vec![0.4; 40];
        assert!(close(nested_radical_limit(&b, 2).unwrap(), 0.16, 1e-12));
        let ones = alloc::vec![1.0; 25];
        assert_eq!(nested_radical_limit(&ones, 2).unwrap(), 1.0);
        assert!(nested_radical_limit(&[], 2).is_err());
        assert!(nested_radical_limit(&[1.0, -0.5], 2).is_err());
        assert!(nested_radical_limit(&[1.0], 1).is_err());
    }
}
