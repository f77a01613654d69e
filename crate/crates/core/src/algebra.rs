//! The 2×2 Pauli operator algebra, its diagonal subalgebra, and the
//! conditional expectation onto the diagonal part.
//!
//! A single-site operator is stored by its coefficients in the basis
//! `{1I, σ_x, σ_y, σ_z}`. The conditional expectation
//! `E(a) = e₁₁ a e₁₁ + e₂₂ a e₂₂` keeps the `1I`/`σ_z` part and kills the
//! `σ_x`/`σ_y` part; sitewise application extends it to product observables.
//! Diagonal operators are kept as the eigenvalue pair `(dp, dm)` on spin
//! ±1 — the edge kernels and the enumeration oracle are multiplicative in
//! these eigenvalues — with conversion to and from the `(a₀, a₃)` Pauli
//! coefficients where the recursion formulas want them.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Mul;

use num_complex::Complex64 as C64;

use crate::tree::{TreeParams, VertexCoord};
use crate::{Error, Result};

/// An element of `M_2(ℂ)` by its Pauli coefficients
/// `a = a0·1I + a1·σ_x + a2·σ_y + a3·σ_z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliOp {
    pub a0: C64,
    pub a1: C64,
    pub a2: C64,
    pub a3: C64,
}

impl PauliOp {
    pub fn new(a0: C64, a1: C64, a2: C64, a3: C64) -> Self {
        PauliOp { a0, a1, a2, a3 }
    }

    /// Operator with real coefficients (self-adjoint by construction).
    pub fn from_real(a0: f64, a1: f64, a2: f64, a3: f64) -> Self {
        PauliOp {
            a0: C64::new(a0, 0.0),
            a1: C64::new(a1, 0.0),
            a2: C64::new(a2, 0.0),
            a3: C64::new(a3, 0.0),
        }
    }

    pub fn identity() -> Self {
        Self::from_real(1.0, 0.0, 0.0, 0.0)
    }

    pub fn sigma_x() -> Self {
        Self::from_real(0.0, 1.0, 0.0, 0.0)
    }

    pub fn sigma_y() -> Self {
        Self::from_real(0.0, 0.0, 1.0, 0.0)
    }

    pub fn sigma_z() -> Self {
        Self::from_real(0.0, 0.0, 0.0, 1.0)
    }

    /// The 2×2 matrix `[[a0+a3, a1-i·a2], [a1+i·a2, a0-a3]]`.
    pub fn to_matrix(&self) -> [[C64; 2]; 2] {
        let i = C64::new(0.0, 1.0);
        [
            [self.a0 + self.a3, self.a1 - i * self.a2],
            [self.a1 + i * self.a2, self.a0 - self.a3],
        ]
    }

    /// Inverse of [`to_matrix`](Self::to_matrix); the halvings are exact,
    /// so the pair round-trips exactly whenever the coefficient sums are
    /// (dyadic coefficients), and to a rounding unit otherwise.
    pub fn from_matrix(m: [[C64; 2]; 2]) -> Self {
        let i = C64::new(0.0, 1.0);
        PauliOp {
            a0: (m[0][0] + m[1][1]) / 2.0,
            a1: (m[0][1] + m[1][0]) / 2.0,
            a2: i * (m[0][1] - m[1][0]) / 2.0,
            a3: (m[0][0] - m[1][1]) / 2.0,
        }
    }

    /// The expectation `E` inside the Pauli algebra: zeroes the xy-part,
    /// keeps `(a0, a3)`. Complex-linear and idempotent.
    pub fn diagonal_projection(&self) -> PauliOp {
        PauliOp {
            a0: self.a0,
            a1: C64::new(0.0, 0.0),
            a2: C64::new(0.0, 0.0),
            a3: self.a3,
        }
    }

    /// Normalized trace `Tr(a) = a0` (so `Tr(1I) = 1`).
    pub fn normalized_trace(&self) -> C64 {
        self.a0
    }

    pub fn is_diagonal(&self) -> bool {
        self.a1 == C64::new(0.0, 0.0) && self.a2 == C64::new(0.0, 0.0)
    }
}

/// A diagonal operator by its eigenvalues on spin +1 and spin −1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagOp {
    pub dp: f64,
    pub dm: f64,
}

impl DiagOp {
    pub fn new(dp: f64, dm: f64) -> Self {
        DiagOp { dp, dm }
    }

    pub fn identity() -> Self {
        DiagOp { dp: 1.0, dm: 1.0 }
    }

    /// Scalar multiple of the identity.
    pub fn scalar(c: f64) -> Self {
        DiagOp { dp: c, dm: c }
    }

    /// From Pauli coefficients `h0·1I + h3·σ_z`.
    pub fn from_pauli_coeffs(h0: f64, h3: f64) -> Self {
        DiagOp {
            dp: h0 + h3,
            dm: h0 - h3,
        }
    }

    /// Back to `(h0, h3)` with `h0 = (dp+dm)/2`, `h3 = (dp-dm)/2`.
    pub fn pauli_coeffs(&self) -> (f64, f64) {
        ((self.dp + self.dm) / 2.0, (self.dp - self.dm) / 2.0)
    }

    /// Strict positivity, required of boundary fields.
    pub fn is_positive(&self) -> bool {
        self.dp > 0.0 && self.dm > 0.0
    }

    /// Eigenvalue on a spin value ±1.
    pub fn value(&self, spin: i8) -> f64 {
        if spin > 0 {
            self.dp
        } else {
            self.dm
        }
    }

    /// Componentwise square root (valid for positive operators).
    pub fn sqrt(&self) -> DiagOp {
        DiagOp {
            dp: crate::math::sqrt(self.dp),
            dm: crate::math::sqrt(self.dm),
        }
    }

    pub fn normalized_trace(&self) -> f64 {
        (self.dp + self.dm) / 2.0
    }
}

impl Mul for DiagOp {
    type Output = DiagOp;

    /// Diagonal operators multiply componentwise (and commute).
    fn mul(self, rhs: DiagOp) -> DiagOp {
        DiagOp {
            dp: self.dp * rhs.dp,
            dm: self.dm * rhs.dm,
        }
    }
}

/// `E(a)` as a diagonal operator: eigenvalues `(a0+a3, a0-a3)`.
///
/// Observables are self-adjoint, so the diagonal coefficients are real;
/// only the real parts are kept.
pub fn diagonal_part(a: &PauliOp) -> DiagOp {
    DiagOp {
        dp: (a.a0 + a.a3).re,
        dm: (a.a0 - a.a3).re,
    }
}

/// Normalized trace of a diagonal operator, `(dp + dm)/2`; multiplicative
/// over tensor factors.
pub fn normalized_trace(a: &DiagOp) -> f64 {
    a.normalized_trace()
}

/// One of the four Pauli letters of the observable text form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn op(&self) -> PauliOp {
        match self {
            PauliLetter::I => PauliOp::identity(),
            PauliLetter::X => PauliOp::sigma_x(),
            PauliLetter::Y => PauliOp::sigma_y(),
            PauliLetter::Z => PauliOp::sigma_z(),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(PauliLetter::I),
            "X" => Ok(PauliLetter::X),
            "Y" => Ok(PauliLetter::Y),
            "Z" => Ok(PauliLetter::Z),
            other => Err(Error::Parse(alloc::format!(
                "unknown Pauli letter '{other}' (expected I, X, Y or Z)"
            ))),
        }
    }
}

/// A product observable `⊗_x a_x` on the volume `Λ_n`; unlisted sites carry
/// the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductObservable {
    sites: BTreeMap<VertexCoord, PauliOp>,
    volume: usize,
}

impl ProductObservable {
    /// Builds an observable on `Λ_volume`, checking every listed site
    /// against the volume and branching order.
    pub fn new<I>(volume: usize, sites: I, params: &TreeParams) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexCoord, PauliOp)>,
    {
        let mut map = BTreeMap::new();
        for (v, op) in sites {
            if v.level() > volume {
                return Err(Error::Support(alloc::format!(
                    "site {v} at level {} lies outside the volume of level {volume}",
                    v.level()
                )));
            }
            for &i in v.path() {
                if i < 1 || i > params.k() {
                    return Err(Error::Support(alloc::format!(
                        "site {v} has branch index {i} outside 1..={}",
                        params.k()
                    )));
                }
            }
            map.insert(v, op);
        }
        Ok(ProductObservable { sites: map, volume })
    }

    /// The identity observable on `Λ_volume`.
    pub fn identity(volume: usize) -> Self {
        ProductObservable {
            sites: BTreeMap::new(),
            volume,
        }
    }

    pub fn volume(&self) -> usize {
        self.volume
    }

    pub fn sites(&self) -> impl Iterator<Item = (&VertexCoord, &PauliOp)> {
        self.sites.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Parses the text form `site:P,site:P` with dotted site coordinates
    /// and `P ∈ {I, X, Y, Z}`, e.g. `1.1:Z,2:I`. An empty string is the
    /// identity observable.
    pub fn parse(s: &str, volume: usize, params: &TreeParams) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::identity(volume));
        }
        let mut entries = Vec::new();
        for item in s.split(',') {
            let item = item.trim();
            let (site, letter) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(alloc::format!("expected 'site:P' in '{item}'")))?;
            let v: VertexCoord = site.trim().parse()?;
            let p = PauliLetter::parse(letter.trim())?;
            entries.push((v, p.op()));
        }
        Self::new(volume, entries, params)
    }
}

/// Sitewise conditional expectation `𝓔(⊗ a_x) = ⊗ E(a_x)`; identity sites
/// stay identity.
pub fn product_diagonal_part(a: &ProductObservable) -> ProductObservable {
    ProductObservable {
        sites: a
            .sites
            .iter()
            .map(|(v, op)| (v.clone(), op.diagonal_projection()))
            .collect(),
        volume: a.volume,
    }
}
