//! Small fixed-size linear algebra used by the surface and symmetry code.

use crate::error::{Error, Result};
use crate::real::{cst, Real};

pub(crate) fn det3<T: Real>(m: &[[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub(crate) fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot3<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm3<T: Real>(a: [T; 3]) -> T {
    dot3(a, a).sqrt()
}

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
pub(crate) fn solve3<T: Real>(m: &[[T; 3]; 3], rhs: [T; 3]) -> Result<[T; 3]> {
    let mut aug = [[T::zero(); 4]; 3];
    for i in 0..3 {
        aug[i][..3].copy_from_slice(&m[i]);
        aug[i][3] = rhs[i];
    }
    for col in 0..3 {
        let mut pivot = col;
        for row in col + 1..3 {
            if aug[row][col].abs() > aug[pivot][col].abs() {
                pivot = row;
            }
        }
        aug.swap(col, pivot);
        if aug[col][col] == T::zero() {
            return Err(Error::DivisionByZero);
        }
        for row in col + 1..3 {
            let factor = aug[row][col] / aug[col][col];
            for k in col..4 {
                let delta = factor * aug[col][k];
                aug[row][k] -= delta;
            }
        }
    }
    let mut x = [T::zero(); 3];
    for col in (0..3).rev() {
        let mut acc = aug[col][3];
        for k in col + 1..3 {
            acc -= aug[col][k] * x[k];
        }
        x[col] = acc / aug[col][col];
    }
    Ok(x)
}

pub(crate) fn mat_mul<T: Real>(a: &[[T; 3]; 3], b: &[[T; 3]; 3]) -> [[T; 3]; 3] {
    let mut out = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub(crate) fn mat_vec<T: Real>(a: &[[T; 3]; 3], x: [T; 3]) -> [T; 3] {
    let mut out = [T::zero(); 3];
    for i in 0..3 {
        out[i] = dot3(a[i], x);
    }
    out
}

fn identity3<T: Real>() -> [[T; 3]; 3] {
    let mut m = [[T::zero(); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

fn max_abs<T: Real>(m: &[[T; 3]; 3]) -> T {
    let mut best = T::zero();
    for row in m {
        for &x in row {
            best = best.max(x.abs());
        }
    }
    best
}

/// Matrix exponential by scaling and squaring with a Taylor series on the
/// scaled matrix.
pub(crate) fn expm3<T: Real>(m: &[[T; 3]; 3]) -> [[T; 3]; 3] {
    let mut scalings = 0u32;
    let mut norm = max_abs(m);
    let half = cst::<T>(0.5);
    while norm > half && scalings < 60 {
        norm = norm * half;
        scalings += 1;
    }
    let scale = half.powi(scalings as i32);
    let mut scaled = *m;
    for row in &mut scaled {
        for x in row {
            *x *= scale;
        }
    }
    let mut result = identity3::<T>();
    let mut term = identity3::<T>();
    for n in 1..=24 {
        term = mat_mul(&term, &scaled);
        let inv_n = T::one() / cst::<T>(n as f64);
        for row in &mut term {
            for x in row {
                *x *= inv_n;
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                result[i][j] += term[i][j];
            }
        }
        if max_abs(&term) < cst::<T>(1e-18) {
            break;
        }
    }
    for _ in 0..scalings {
        result = mat_mul(&result, &result);
    }
    result
}
