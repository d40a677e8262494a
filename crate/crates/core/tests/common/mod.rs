//! Dense exact linear algebra used as an independent oracle.
#![allow(dead_code)]

use hpt_core::map::GradedMap;
use hpt_core::scalar::Scalar;
use hpt_core::space::{Basis, SpaceRef};
use hpt_core::vector::Vector;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<Scalar>>;

/// The block of `f` from degree `k` of the source, rows indexed by the target
/// basis of degree `k + |f|`.
pub fn block(f: &GradedMap, k: i32) -> Matrix {
    let rows = f.target().dim(k + f.degree());
    let cols = f.source().dim(k);
    let mut m = vec![vec![Scalar::zero(); cols]; rows];
    for j in 0..cols {
        for (b, c) in f.image(Basis::new(k, j)).iter() {
            m[b.index][j] = c.clone();
        }
    }
    m
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Solves `A X = B` for square invertible `A` by Gauss–Jordan elimination.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let k = b.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a.iter().zip(b).map(|(ra, rb)| ra.iter().chain(rb).cloned().collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, p);
        let inv = Scalar::one() / &aug[c][c];
        for x in aug[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..n + k {
                    let t = &aug[c][j] * &f;
                    aug[i][j] -= t;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

pub fn sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

/// Betti numbers of `(space, d)` from ranks of the dense blocks.
pub fn betti(space: &SpaceRef, d: &GradedMap) -> Vec<(i32, usize)> {
    space
        .degrees()
        .map(|k| {
            let out = rank(&block(d, k));
            let inc = if space.dim(k - 1) > 0 { rank(&block(d, k - 1)) } else { 0 };
            (k, space.dim(k) - out - inc)
        })
        .collect()
}

pub fn column(m: &Matrix, j: usize, degree: i32) -> Vector {
    m.iter()
        .enumerate()
        .filter(|(_, r)| !r[j].is_zero())
        .map(|(i, r)| (Basis::new(degree, i), r[j].clone()))
        .collect()
}
