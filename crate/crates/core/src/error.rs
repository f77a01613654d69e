use alloc::string::String;
use core::fmt;

/// Errors raised by the library.
///
/// Variants mirror the failure classes of the operations: domain violations
/// of the maps `g_θ` and `f`, invalid model parameters, requests that are
/// only meaningful in one temperature regime, oversized enumeration volumes,
/// observables escaping their volume, and text-form parse failures.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the domain of a map (e.g. `t < 0`, `t = θ^k`, or the
    /// planar ratio condition `y/θ^k ≤ x ≤ θ^k y` failing).
    Domain(String),
    /// Invalid model or operation parameter (`k < 2`, `θ ≤ 1`, `β ≤ 0`,
    /// nonpositive trajectory inputs, a value that is not a fixed point, ...).
    Param(String),
    /// Operation requested in the wrong temperature regime relative to
    /// `θ_c = (k+1)/(k-1)`.
    Regime(String),
    /// Enumeration volume exceeds the configuration cap.
    Capacity { sites: usize, cap: usize },
    /// Observable touches sites outside the volume it is evaluated on.
    Support(String),
    /// Requested invariant line or fixed-point index is unavailable.
    Index(String),
    /// Malformed vertex or observable text form.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Param(msg) => write!(f, "parameter error: {msg}"),
            Error::Regime(msg) => write!(f, "regime error: {msg}"),
            Error::Capacity { sites, cap } => write!(
                f,
                "capacity error: volume has {sites} sites, enumeration cap is {cap}"
            ),
            Error::Support(msg) => write!(f, "support error: {msg}"),
            Error::Index(msg) => write!(f, "index error: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
