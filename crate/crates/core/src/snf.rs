//! Integer Smith normal form and abelian invariant factors.
//!
//! Arithmetic is arbitrary precision throughout, so overflow cannot occur.
//! The right transform is tracked so quotient images (needed for commutator
//! membership tests) come out of the same computation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Invariant factors `d_1 | d_2 | ... | d_n` of a finitely generated abelian
/// group, one entry per generator; `0` denotes an infinite cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    factors: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Factors with the trivial `1`s dropped: the shape `Z_{d} x ... x Z^r`.
    pub fn normalized(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|d| **d != BigInt::from(1))
            .cloned()
            .collect()
    }

    pub fn from_u64(factors: &[u64]) -> Self {
        AbelianInvariants {
            factors: factors.iter().map(|&d| BigInt::from(d)).collect(),
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .normalized()
            .iter()
            .map(|d| {
                if d.is_zero() {
                    "Z".to_string()
                } else {
                    format!("Z{d}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Diagonalized relation lattice: invariant factors plus the right transform
/// `V` with `U * R * V = D`, used to map vectors into quotient coordinates.
#[derive(Debug, Clone)]
pub struct SmithForm {
    factors: Vec<BigInt>,
    right: Vec<BigInt>, // n x n, row major
    n: usize,
}

impl SmithForm {
    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants {
            factors: self.factors.clone(),
        }
    }

    pub fn columns(&self) -> usize {
        self.n
    }

    /// Image of an integer vector in the quotient `Z^n / rowspan(R)`,
    /// written in invariant-factor coordinates (entry `j` reduced mod `d_j`
    /// when `d_j > 0`, left exact for infinite factors).
    pub fn image(&self, x: &[i64]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.n, "vector length must match column count");
        let mut out = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut y = BigInt::zero();
            for (i, &xi) in x.iter().enumerate() {
                if xi != 0 {
                    y += BigInt::from(xi) * &self.right[i * self.n + j];
                }
            }
            let d = &self.factors[j];
            if !d.is_zero() {
                y = ((y % d) + d) % d;
            }
            out.push(y);
        }
        out
    }

    /// Whether `x` lies in the relation lattice (i.e. maps to zero).
    pub fn is_zero_image(&self, x: &[i64]) -> bool {
        self.image(x).iter().all(Zero::is_zero)
    }
}

/// Invariant factors of `Z^n / rowspan(rel)`.
pub fn smith_invariants(rel: &[Vec<i64>], n: usize) -> AbelianInvariants {
    smith_normal_form(rel, n).invariants()
}

/// Exact Smith normal form of an integer relation matrix with `n` columns.
pub fn smith_normal_form(rel: &[Vec<i64>], n: usize) -> SmithForm {
    let m = rel.len();
    let mut a: Vec<BigInt> = Vec::with_capacity(m * n);
    for row in rel {
        assert_eq!(row.len(), n, "relation rows must have {n} entries");
        a.extend(row.iter().map(|&v| BigInt::from(v)));
    }
    let mut v: Vec<BigInt> = vec![BigInt::zero(); n * n];
    for j in 0..n {
        v[j * n + j] = BigInt::from(1);
    }

    let idx = |i: usize, j: usize| i * n + j;
    let mut t = 0usize;
    while t < m.min(n) {
        // Pivot: smallest nonzero magnitude in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[idx(i, j)].is_zero()
                    && pivot
                        .map(|(pi, pj)| a[idx(i, j)].abs() < a[idx(pi, pj)].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, n, t, pi);
        swap_cols(&mut a, &mut v, m, n, t, pj);

        'reduce: loop {
            // Clear column t with row operations.
            let mut dirty = false;
            for i in t + 1..m {
                if a[idx(i, t)].is_zero() {
                    continue;
                }
                let q = &a[idx(i, t)] / &a[idx(t, t)];
                if !q.is_zero() {
                    for j in t..n {
                        let delta = &q * &a[idx(t, j)];
                        a[idx(i, j)] -= delta;
                    }
                }
                if !a[idx(i, t)].is_zero() {
                    // Remainder is strictly smaller; promote it to the pivot.
                    swap_rows(&mut a, n, t, i);
                    dirty = true;
                }
            }
            if dirty {
                continue 'reduce;
            }
            // Clear row t with column operations.
            for j in t + 1..n {
                if a[idx(t, j)].is_zero() {
                    continue;
                }
                let q = &a[idx(t, j)] / &a[idx(t, t)];
                if !q.is_zero() {
                    for i in 0..m {
                        let delta = &q * &a[idx(i, t)];
                        a[idx(i, j)] -= delta;
                    }
                    for i in 0..n {
                        let delta = &q * &v[i * n + t];
                        v[i * n + j] -= delta;
                    }
                }
                if !a[idx(t, j)].is_zero() {
                    swap_cols(&mut a, &mut v, m, n, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue 'reduce;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let mut fixed = true;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&a[idx(i, j)] % &a[idx(t, t)]).is_zero() {
                        for jj in t..n {
                            let add = a[idx(i, jj)].clone();
                            a[idx(t, jj)] += add;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break 'reduce;
            }
        }
        if a[idx(t, t)].is_negative() {
            for j in t..n {
                let neg = -a[idx(t, j)].clone();
                a[idx(t, j)] = neg;
            }
        }
        t += 1;
    }

    let mut factors = vec![BigInt::zero(); n];
    for j in 0..t.min(n) {
        factors[j] = a[idx(j, j)].clone();
    }
    SmithForm {
        factors,
        right: v,
        n,
    }
}

fn swap_rows(a: &mut [BigInt], n: usize, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    for j in 0..n {
        a.swap(r1 * n + j, r2 * n + j);
    }
}

fn swap_cols(a: &mut [BigInt], v: &mut [BigInt], m: usize, n: usize, c1: usize, c2: usize) {
    if c1 == c2 {
        return;
    }
    for i in 0..m {
        a.swap(i * n + c1, i * n + c2);
    }
    for i in 0..n {
        v.swap(i * n + c1, i * n + c2);
    }
}
