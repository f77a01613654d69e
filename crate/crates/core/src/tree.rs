//! Coordinates and combinatorics of the semi-infinite Cayley tree `Γ^k`.
//!
//! Every vertex except the root is addressed by its branch path
//! `(i_1, …, i_n)` with `i_m ∈ {1, …, k}`; the root carries the empty path
//! and sits at level 0. Level `n` holds `k^n` vertices and is always
//! enumerated lexicographically, `(1,…,1,1), (1,…,1,2), …, (k,…,k,k)`; the
//! reversed enumeration is obtained by reversing the list.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// Branching order of the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    k: u32,
}

impl TreeParams {
    /// A tree of order `k ≥ 2`.
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Param(
                "branching order k must be at least 2".to_string(),
            ));
        }
        Ok(TreeParams { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// A vertex as its branch-index path from the root; the root is the empty
/// path. Ordering is lexicographic on the path, which within one level is
/// exactly the enumeration order of that level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexCoord {
    path: Vec<u32>,
}

impl VertexCoord {
    pub fn root() -> Self {
        VertexCoord { path: Vec::new() }
    }

    /// Builds a vertex from a path, checking every index against `1..=k`.
    pub fn from_path(path: Vec<u32>, params: &TreeParams) -> Result<Self> {
        for &i in &path {
            if i < 1 || i > params.k {
                return Err(Error::Param(alloc::format!(
                    "branch index {i} outside 1..={}",
                    params.k
                )));
            }
        }
        Ok(VertexCoord { path })
    }

    pub fn level(&self) -> usize {
        self.path.len()
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    /// The unique neighbor one level closer to the root; `None` at the root.
    pub fn parent(&self) -> Option<VertexCoord> {
        if self.path.is_empty() {
            return None;
        }
        let mut path = self.path.clone();
        path.pop();
        Some(VertexCoord { path })
    }

    fn child(&self, i: u32) -> VertexCoord {
        let mut path = self.path.clone();
        path.push(i);
        VertexCoord { path }
    }
}

impl fmt::Display for VertexCoord {
    /// Dot-separated indices, e.g. `1.2.1`; the root prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return write!(f, "0");
        }
        for (pos, i) in self.path.iter().enumerate() {
            if pos > 0 {
                write!(f, ".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromStr for VertexCoord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(VertexCoord::root());
        }
        if s.is_empty() {
            return Err(Error::Parse("empty vertex coordinate".to_string()));
        }
        let mut path = Vec::new();
        for part in s.split('.') {
            let i: u32 = part
                .parse()
                .map_err(|_| Error::Parse(alloc::format!("bad branch index '{part}' in '{s}'")))?;
            if i == 0 {
                return Err(Error::Parse(alloc::format!(
                    "branch index 0 only valid as the bare root '0' (got '{s}')"
                )));
            }
            path.push(i);
        }
        Ok(VertexCoord { path })
    }
}

/// All `k^n` vertices of level `n` in enumeration order; `n = 0` is the
/// singleton root.
pub fn level_vertices(params: &TreeParams, n: usize) -> Vec<VertexCoord> {
    let k = params.k;
    let mut out = Vec::new();
    let mut path = alloc::vec![1u32; n];
    loop {
        out.push(VertexCoord { path: path.clone() });
        // lexicographic odometer
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if path[pos] < k {
                path[pos] += 1;
                for p in path.iter_mut().skip(pos + 1) {
                    *p = 1;
                }
                break;
            }
        }
    }
}

/// Direct successors `((v,1), …, (v,k))` in forward order.
pub fn successors(v: &VertexCoord, params: &TreeParams) -> Vec<VertexCoord> {
    (1..=params.k).map(|i| v.child(i)).collect()
}

/// `(|W_n|, |Λ_n|) = (k^n, (k^{n+1} - 1)/(k - 1))`.
///
/// Desk-scale levels only; the counts saturate at `u64::MAX` instead of
/// overflowing.
pub fn volume_size(params: &TreeParams, n: usize) -> (u64, u64) {
    let k = params.k as u64;
    let mut wn: u64 = 1;
    let mut lam: u64 = 1;
    for _ in 0..n {
        wn = wn.saturating_mul(k);
        lam = lam.saturating_add(wn);
    }
    (wn, lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tp(k: u32) -> TreeParams {
        TreeParams::new(k).unwrap()
    }

    fn vx(path: &[u32]) -> VertexCoord {
        VertexCoord {
            path: path.to_vec(),
        }
    }

    #[test]
    fn rejects_order_below_two() {
        assert!(matches!(TreeParams::new(1), Err(Error::Param(_))));
        assert!(matches!(TreeParams::new(0), Err(Error::Param(_))));
    }

    #[test]
    fn level_two_of_binary_tree() {
        let got = level_vertices(&tp(2), 2);
        assert_eq!(
            got,
            vec![vx(&[1, 1]), vx(&[1, 2]), vx(&[2, 1]), vx(&[2, 2])]
        );
    }

    #[test]
    fn level_zero_is_the_root() {
        assert_eq!(level_vertices(&tp(3), 0), vec![VertexCoord::root()]);
    }

    #[test]
    fn level_two_of_ternary_tree_extremes() {
        let got = level_vertices(&tp(3), 2);
        assert_eq!(got.len(), 9);
        assert_eq!(got[0], vx(&[1, 1]));
        assert_eq!(got[8], vx(&[3, 3]));
    }

    #[test]
    fn successors_in_forward_order() {
        assert_eq!(
            successors(&vx(&[1, 2]), &tp(2)),
            vec![vx(&[1, 2, 1]), vx(&[1, 2, 2])]
        );
        assert_eq!(
            successors(&VertexCoord::root(), &tp(3)),
            vec![vx(&[1]), vx(&[2]), vx(&[3])]
        );
        assert_eq!(
            successors(&vx(&[2]), &tp(2)),
            vec![vx(&[2, 1]), vx(&[2, 2])]
        );
    }

    #[test]
    fn volume_sizes() {
        assert_eq!(volume_size(&tp(2), 3), (8, 15));
        assert_eq!(volume_size(&tp(3), 2), (9, 13));
        assert_eq!(volume_size(&tp(2), 0), (1, 1));
    }

    #[test]
    fn levels_compose_through_successors() {
        for k in [2u32, 3] {
            let params = tp(k);
            for n in 0..4 {
                let mut built = Vec::new();
                for v in level_vertices(&params, n) {
                    built.extend(successors(&v, &params));
                }
                assert_eq!(built, level_vertices(&params, n + 1));
            }
        }
    }

    #[test]
    fn volume_recurrence() {
        let params = tp(3);
        for n in 0..8 {
            let (_, lam_n) = volume_size(&params, n);
            let (w_next, lam_next) = volume_size(&params, n + 1);
            assert_eq!(lam_next, lam_n + w_next);
        }
    }

    #[test]
    fn text_form_round_trips() {
        let params = tp(3);
        let v = VertexCoord::from_path(vec![1, 2, 1], &params).unwrap();
        assert_eq!(v.to_string(), "1.2.1");
        assert_eq!("1.2.1".parse::<VertexCoord>().unwrap(), v);
        assert_eq!("0".parse::<VertexCoord>().unwrap(), VertexCoord::root());
        assert_eq!(VertexCoord::root().to_string(), "0");
        assert!("".parse::<VertexCoord>().is_err());
        assert!("1.x".parse::<VertexCoord>().is_err());
        assert!("1.0.2".parse::<VertexCoord>().is_err());
    }

    #[test]
    fn path_validation_against_order() {
        let params = tp(2);
        assert!(VertexCoord::from_path(vec![1, 2], &params).is_ok());
        assert!(VertexCoord::from_path(vec![3], &params).is_err());
        assert!(VertexCoord::from_path(vec![0], &params).is_err());
    }
}
