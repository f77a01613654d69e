//! Edge kernels, boundary conditions, finite-volume states, and the
//! exact-enumeration oracle.
//!
//! An edge carries `K_{<u,v>} = K₀·1I⊗1I + K₃·σ_z⊗σ_z` with
//! `K₀ = (e^β+1)/2`, `K₃ = (e^β−1)/2`. A boundary condition is a root
//! weight `w₀` plus one positive diagonal field per level, homogeneous
//! within a level, subject to the normalization `Tr(w₀·h₀) = 1` and to the
//! level recursion: tracing the k edge kernels and child fields below a
//! vertex back onto it must reproduce the field one level up. Four families
//! solve this:
//!
//! - `α₀`: scalar fields `h = α₀·1I` with `α₀ = Θ^{k/(k−1)}`, `Θ = 2/(θ+1)`;
//! - the `α` family: scalar fields sliding along the invariant line `l₁`,
//!   `h^(n) = α₀·(α/α₀)^{1/kⁿ}·1I` — the same state as `α₀` for every `α`;
//! - `β`, `γ` (only for `θ > θ_c`): constant diagonal fields sitting at the
//!   planar fixed points associated with `t₂` and `t₃`.
//!
//! Because every factor is diagonal and all factors commute, the density of
//! the level-`n` state is the diagonal weight vector
//! `weight(σ) = w₀(σ_root) · ∏_edges (K₀ + K₃·σ_x·σ_y)² · ∏_{x∈W_n} h_n(σ_x)`
//! over spin configurations on `Λ_n`, and expectation values are normalized
//! traces against it. The oracle enumerates all `2^{|Λ_n|}` configurations
//! (capped at [`ENUMERATION_CAP`] sites) and reduces with a fixed pairwise
//! tree, so results are bit-stable.

use alloc::vec::Vec;

use crate::algebra::{diagonal_part, product_diagonal_part, DiagOp, ProductObservable};
use crate::dynamics::{find_fixed_points, ModelParams};
use crate::math::{exp, mat_vec, pairwise_sum, Mat2};
use crate::tree::{volume_size, VertexCoord};
use crate::{Error, Result};

/// Largest volume (site count) the enumeration oracle accepts.
pub const ENUMERATION_CAP: usize = 22;

/// Ising edge kernel coefficients at inverse temperature `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeKernel {
    pub beta: f64,
    pub theta: f64,
    pub k0: f64,
    pub k3: f64,
}

impl EdgeKernel {
    /// Kernel for validated model parameters.
    pub fn from_params(p: &ModelParams) -> Self {
        let e = exp(p.beta());
        EdgeKernel {
            beta: p.beta(),
            theta: p.theta(),
            k0: (e + 1.0) / 2.0,
            k3: (e - 1.0) / 2.0,
        }
    }

    /// Diagonal value of `K_{<u,v>}` on a pair of spins.
    pub fn edge_value(&self, su: i8, sv: i8) -> f64 {
        self.k0 + self.k3 * (su as f64) * (sv as f64)
    }
}

/// `K₀ = (e^β+1)/2`, `K₃ = (e^β−1)/2` for `β > 0`.
pub fn kernel(beta: f64) -> Result<EdgeKernel> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Param(alloc::format!(
            "kernel needs finite beta > 0 (got {beta})"
        )));
    }
    let e = exp(beta);
    Ok(EdgeKernel {
        beta,
        theta: exp(2.0 * beta),
        k0: (e + 1.0) / 2.0,
        k3: (e - 1.0) / 2.0,
    })
}

/// The named boundary-condition families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcKind {
    Alpha0,
    AlphaFamily(f64),
    Beta,
    Gamma,
}

impl BcKind {
    pub fn label(&self) -> &'static str {
        match self {
            BcKind::Alpha0 => "alpha0",
            BcKind::AlphaFamily(_) => "alpha",
            BcKind::Beta => "beta",
            BcKind::Gamma => "gamma",
        }
    }
}

/// Per-level diagonal field.
#[derive(Debug, Clone, PartialEq)]
enum LevelField {
    /// Same field on every level.
    Constant(DiagOp),
    /// The sliding α family along `l₁`: `h^(n) = base·(alpha/base)^{1/kⁿ}`.
    AlphaLine { base: f64, alpha: f64, k: u32 },
    /// Explicit per-level values; levels past the end reuse the last entry.
    /// Used to build deliberately broken fields in tests.
    #[allow(dead_code)]
    Table(Vec<DiagOp>),
}

/// A root weight plus the level-indexed diagonal field.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    kind: BcKind,
    w0: DiagOp,
    field: LevelField,
}

impl BoundaryCondition {
    pub fn kind(&self) -> BcKind {
        self.kind
    }

    pub fn w0(&self) -> DiagOp {
        self.w0
    }

    /// The field at tree level `n` (homogeneous within the level).
    pub fn h(&self, n: usize) -> DiagOp {
        match &self.field {
            LevelField::Constant(d) => *d,
            LevelField::AlphaLine { base, alpha, k } => {
                let root_exp = crate::math::pow(*k as f64, -(n as f64));
                DiagOp::scalar(base * crate::math::pow(alpha / base, root_exp))
            }
            LevelField::Table(levels) => levels[n.min(levels.len() - 1)],
        }
    }
}

/// Builds one of the solution families of the normalization and recursion
/// equations. `Beta` and `Gamma` exist only for `θ > θ_c`.
pub fn boundary_condition(p: &ModelParams, kind: BcKind) -> Result<BoundaryCondition> {
    let cap_theta = 2.0 / (p.theta() + 1.0); // Θ = A₁ = B₁
    let alpha0 = crate::math::pow(cap_theta, p.k() as f64 / (p.k() as f64 - 1.0));
    match kind {
        BcKind::Alpha0 => Ok(BoundaryCondition {
            kind,
            w0: DiagOp::scalar(1.0 / alpha0),
            field: LevelField::Constant(DiagOp::scalar(alpha0)),
        }),
        BcKind::AlphaFamily(alpha) => {
            if !(alpha > 0.0) || !alpha.is_finite() {
                return Err(Error::Param(alloc::format!(
                    "alpha family needs alpha > 0 (got {alpha})"
                )));
            }
            Ok(BoundaryCondition {
                kind,
                w0: DiagOp::scalar(1.0 / alpha),
                field: LevelField::AlphaLine {
                    base: alpha0,
                    alpha,
                    k: p.k(),
                },
            })
        }
        BcKind::Beta | BcKind::Gamma => {
            if !p.is_transition_regime() {
                return Err(Error::Regime(alloc::format!(
                    "{} boundary condition needs theta > theta_c = {} (got theta = {})",
                    kind.label(),
                    p.theta_c(),
                    p.theta()
                )));
            }
            let fps = find_fixed_points(p);
            let (p2, p3) = fps
                .extra
                .as_ref()
                .expect("transition regime has three fixed points");
            // h = c₀·1I + c₃·σ_z has eigenvalues equal to the planar fixed
            // point coordinates: (c₀+c₃, c₀−c₃) = (A_i·C, B_i·C).
            let (x, y) = if kind == BcKind::Gamma {
                p3.planar
            } else {
                p2.planar
            };
            let h = DiagOp::new(x, y);
            let c0 = h.pauli_coeffs().0;
            Ok(BoundaryCondition {
                kind,
                w0: DiagOp::scalar(1.0 / c0),
                field: LevelField::Constant(h),
            })
        }
    }
}

/// The 2×2 matrix that advances `(g₀, g₃)` when one more child with field
/// `h = h₀·1I + h₃·σ_z` is traced out across its edge:
/// `[[ (K₀²+K₃²)h₀, 2K₀K₃h₃ ], [ 2K₀K₃h₃, (K₀²+K₃²)h₀ ]]`.
pub fn a_h_matrix(h: &DiagOp, kern: &EdgeKernel) -> Mat2 {
    let (h0, h3) = h.pauli_coeffs();
    let d = (kern.k0 * kern.k0 + kern.k3 * kern.k3) * h0;
    let o = 2.0 * kern.k0 * kern.k3 * h3;
    [[d, o], [o, d]]
}

/// Max-abs deviation of the level recursion at level `n`: the k-fold
/// `A_h`-product applied to `e₁ = (1, 0)` with the level-`(n+1)` field must
/// reproduce the level-`n` field.
pub fn recursion_residual(bc: &BoundaryCondition, p: &ModelParams, n: usize) -> f64 {
    let kern = EdgeKernel::from_params(p);
    let a = a_h_matrix(&bc.h(n + 1), &kern);
    let mut v = [1.0, 0.0];
    for _ in 0..p.k() {
        v = mat_vec(&a, v);
    }
    let (h0, h3) = bc.h(n).pauli_coeffs();
    (v[0] - h0).abs().max((v[1] - h3).abs())
}

/// The level-`n` state as its diagonal weight vector over all spin
/// configurations on `Λ_n`.
///
/// Site order is the concatenation of the level enumerations; one bit per
/// site, bit 0 meaning spin +1.
#[derive(Debug, Clone)]
pub struct FiniteVolumeState {
    n: usize,
    k: u32,
    site_count: usize,
    bc: BoundaryCondition,
    weights: Vec<f64>,
}

impl FiniteVolumeState {
    pub fn level(&self) -> usize {
        self.n
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn boundary(&self) -> &BoundaryCondition {
        &self.bc
    }

    /// One nonnegative weight per configuration index.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Flat site index of a vertex in this volume (levels concatenated,
    /// lexicographic within each level); `None` outside the volume.
    pub fn site_index(&self, v: &VertexCoord) -> Option<usize> {
        if v.level() > self.n {
            return None;
        }
        let k = self.k as usize;
        let mut offset = 0usize; // start of the vertex's level
        for lev in 0..v.level() {
            offset += k.pow(lev as u32);
        }
        let mut rank = 0usize;
        for &i in v.path() {
            if i < 1 || i as usize > k {
                return None;
            }
            rank = rank * k + (i as usize - 1);
        }
        Some(offset + rank)
    }
}

/// Enumerates the `2^{|Λ_n|}` configuration weights of the level-`n` state
/// for a boundary condition. Fails with a capacity error above
/// [`ENUMERATION_CAP`] sites.
pub fn oracle_weights(
    p: &ModelParams,
    bc: &BoundaryCondition,
    n: usize,
) -> Result<FiniteVolumeState> {
    let tree = p.tree();
    let (wn, lam) = volume_size(&tree, n);
    let site_count = lam as usize;
    if site_count > ENUMERATION_CAP {
        return Err(Error::Capacity {
            sites: site_count,
            cap: ENUMERATION_CAP,
        });
    }
    let k = p.k() as usize;
    // parent flat index per non-root site
    let mut parents = Vec::with_capacity(site_count - 1);
    let mut level_base = 0usize;
    let mut level_size = 1usize;
    for _lev in 1..=n {
        let parent_base = level_base;
        level_base += level_size;
        level_size *= k;
        for r in 0..level_size {
            parents.push(parent_base + r / k);
        }
    }
    let kern = EdgeKernel::from_params(p);
    let w0 = bc.w0();
    let h_leaf = bc.h(n);
    let leaf_start = site_count - wn as usize;
    let nconf = 1usize << site_count;
    let mut weights = Vec::with_capacity(nconf);
    for conf in 0..nconf {
        let mut w = if conf & 1 == 0 { w0.dp } else { w0.dm };
        for (child_minus_one, &par) in parents.iter().enumerate() {
            let child = child_minus_one + 1;
            let same = ((conf >> child) ^ (conf >> par)) & 1 == 0;
            let factor = if same {
                kern.k0 + kern.k3
            } else {
                kern.k0 - kern.k3
            };
            w *= factor * factor;
        }
        for site in leaf_start..site_count {
            w *= if (conf >> site) & 1 == 0 {
                h_leaf.dp
            } else {
                h_leaf.dm
            };
        }
        weights.push(w);
    }
    Ok(FiniteVolumeState {
        n,
        k: p.k(),
        site_count,
        bc: bc.clone(),
        weights,
    })
}

/// Normalized-trace pairing of the state with a product observable:
/// `2^{-|Λ_n|} · Σ_σ weight(σ) · ∏_site a_site(σ_site)`, with the
/// conditional expectation applied sitewise first (the xy-parts of the
/// observable contribute nothing).
pub fn evaluate_state(st: &FiniteVolumeState, a: &ProductObservable) -> Result<f64> {
    let reduced = product_diagonal_part(a);
    let mut probes: Vec<(usize, f64, f64)> = Vec::new();
    for (v, op) in reduced.sites() {
        let idx = st.site_index(v).ok_or_else(|| {
            Error::Support(alloc::format!(
                "observable site {v} lies outside the level-{} volume",
                st.n
            ))
        })?;
        let d = diagonal_part(op);
        probes.push((idx, d.dp, d.dm));
    }
    let scale = 1.0 / (1u64 << st.site_count) as f64;
    let sum = pairwise_sum((0..st.weights.len()).map(|conf| {
        let mut v = st.weights[conf];
        for &(idx, dp, dm) in &probes {
            v *= if (conf >> idx) & 1 == 0 { dp } else { dm };
        }
        v
    }));
    Ok(sum * scale)
}

/// Max over probes of `|φ^(n+1)(a) − φ^(n)(a)|`, both sides evaluated by
/// the enumeration oracle. Probes must be supported in `Λ_n`.
pub fn compatibility_residual(
    p: &ModelParams,
    bc: &BoundaryCondition,
    n: usize,
    probes: &[ProductObservable],
) -> Result<f64> {
    let smaller = oracle_weights(p, bc, n)?;
    let larger = oracle_weights(p, bc, n + 1)?;
    let mut worst = 0.0f64;
    for a in probes {
        let d = (evaluate_state(&larger, a)? - evaluate_state(&smaller, a)?).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Max over probes of `|φ^(n)_α(a) − φ^(n)_{α₀}(a)|`; the states coincide
/// for every `α > 0`, which is the uniqueness mechanism of the regime
/// `θ ≤ θ_c` (the only one where the identity is claimed).
pub fn uniqueness_identity(
    p: &ModelParams,
    alpha: f64,
    n: usize,
    probes: &[ProductObservable],
) -> Result<f64> {
    if p.is_transition_regime() {
        return Err(Error::Regime(alloc::format!(
            "uniqueness identity is stated for theta <= theta_c = {} (got theta = {})",
            p.theta_c(),
            p.theta()
        )));
    }
    let bc_alpha = boundary_condition(p, BcKind::AlphaFamily(alpha))?;
    let bc_alpha0 = boundary_condition(p, BcKind::Alpha0)?;
    let st_alpha = oracle_weights(p, &bc_alpha, n)?;
    let st_alpha0 = oracle_weights(p, &bc_alpha0, n)?;
    let mut worst = 0.0f64;
    for a in probes {
        let d = (evaluate_state(&st_alpha, a)? - evaluate_state(&st_alpha0, a)?).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}
