//! Small numeric helpers shared across modules: `no_std` float functions,
//! integer powers, and the deterministic pairwise reduction used by the
//! enumeration oracle.

pub(crate) use libm::{exp, log as ln, pow, sqrt};

/// `x^n` by binary exponentiation; exact operation order for fixed `n`.
pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut base = x;
    let mut e = n;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Real k-th root of a nonnegative number.
pub(crate) fn kth_root(x: f64, k: u32) -> f64 {
    match k {
        1 => x,
        2 => sqrt(x),
        _ => pow(x, 1.0 / k as f64),
    }
}

/// Sum with a fixed binary-counter reduction tree.
///
/// The tree shape depends only on the element order, never on chunking, so
/// the result is bit-stable and a partitioned (parallel) evaluation that
/// merges subtrees at power-of-two boundaries reproduces it exactly.
pub(crate) fn pairwise_sum<I: IntoIterator<Item = f64>>(items: I) -> f64 {
    let mut stack = [0.0f64; 64];
    let mut count: u64 = 0;
    for x in items {
        let mut acc = x;
        let mut level = 0usize;
        let mut c = count;
        while c & 1 == 1 {
            acc = stack[level] + acc;
            c >>= 1;
            level += 1;
        }
        stack[level] = acc;
        count += 1;
    }
    let mut total = 0.0;
    let mut level = 0usize;
    while count != 0 {
        if count & 1 == 1 {
            total += stack[level];
        }
        count >>= 1;
        level += 1;
    }
    total
}

pub(crate) type Mat2 = [[f64; 2]; 2];

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub(crate) fn mat_vec(a: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}
