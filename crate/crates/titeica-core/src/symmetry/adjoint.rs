//! Structure constants and adjoint action of a three-dimensional algebra
//! of vector fields, recovered numerically from bracket evaluations.

use super::{lie_bracket, VectorField3};
use crate::error::{Error, Result};
use crate::linalg;
use crate::real::{cst, Real};
use crate::to_display;

/// Points at which bracket fields are sampled when expanding them in the
/// basis. Three distinct points give nine scalar equations per expansion,
/// enough to reject coefficient functions that merely interpolate the
/// basis at a smaller sample.
const SAMPLE_POINTS: [[f64; 3]; 3] = [
    [0.7, 1.3, 0.4],
    [-1.1, 0.5, -0.2],
    [0.3, -0.8, 1.1],
];

const CLOSURE_TOL: f64 = 1e-9;
const MAX_TERMS: usize = 60;

fn expand_in_basis<T: Real>(
    basis: &[VectorField3<T>; 3],
    field: &VectorField3<T>,
) -> Result<[T; 3]> {
    // Least squares over all sampled coefficient values; an exact fit is
    // required, the solve only collapses the overdetermined system.
    let mut ata = [[T::zero(); 3]; 3];
    let mut atb = [T::zero(); 3];
    let mut rows: Vec<([T; 3], T)> = Vec::with_capacity(9);
    for p in SAMPLE_POINTS {
        let (u, v, w) = (cst::<T>(p[0]), cst::<T>(p[1]), cst::<T>(p[2]));
        let target = field.coefficients_at(u, v, w)?;
        let basis_vals = [
            basis[0].coefficients_at(u, v, w)?,
            basis[1].coefficients_at(u, v, w)?,
            basis[2].coefficients_at(u, v, w)?,
        ];
        for slot in 0..3 {
            let row = [
                basis_vals[0][slot],
                basis_vals[1][slot],
                basis_vals[2][slot],
            ];
            for i in 0..3 {
                for j in 0..3 {
                    ata[i][j] += row[i] * row[j];
                }
                atb[i] += row[i] * target[slot];
            }
            rows.push((row, target[slot]));
        }
    }
    // Regularize the normal matrix so a basis whose sampled coefficients
    // are rank deficient still solves; the residual check below catches
    // any genuine misfit.
    let ridge = cst::<T>(1e-13);
    for (i, row) in ata.iter_mut().enumerate() {
        row[i] += ridge;
    }
    let coeffs = linalg::solve3(&ata, atb)?;
    let mut defect = T::zero();
    for (row, target) in &rows {
        let fit = row[0] * coeffs[0] + row[1] * coeffs[1] + row[2] * coeffs[2];
        defect = defect.max((fit - *target).abs());
    }
    if defect > cst::<T>(CLOSURE_TOL) {
        return Err(Error::BasisNotClosed {
            defect: to_display(defect),
        });
    }
    Ok(coeffs)
}

/// Structure constants `c[i][j][k]` of the basis, defined by
/// `[X_i, X_j] = sum_k c[i][j][k] X_k`. Every bracket is evaluated
/// pointwise and expanded in the basis by sampling; a bracket that leaves
/// the span fails with a closure defect.
pub fn structure_constants<T: Real>(
    basis: &[VectorField3<T>; 3],
) -> Result<[[[T; 3]; 3]; 3]> {
    let mut c = [[[T::zero(); 3]; 3]; 3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let bracket = lie_bracket(&basis[i], &basis[j]);
            let coeffs = expand_in_basis(basis, &bracket)?;
            c[i][j] = coeffs;
            for k in 0..3 {
                c[j][i][k] = -coeffs[k];
            }
        }
    }
    Ok(c)
}

/// Adjoint action `Ad(exp(eps X_i)) X_j` expanded in the basis.
///
/// The convention is the exponential of minus the adjoint operator:
/// `Ad(exp(eps X)) Y = Y - eps [X, Y] + eps^2/2 [X, [X, Y]] - ...`,
/// matching flow conjugation pulled back through the group element. The
/// series is summed to machine precision and fails if it has not settled
/// after an internal term cap.
pub fn adjoint<T: Real>(
    basis: &[VectorField3<T>; 3],
    i: usize,
    epsilon: T,
    j: usize,
) -> Result<[T; 3]> {
    if i >= 3 || j >= 3 {
        return Err(Error::Domain {
            func: "adjoint generator index",
            value: i.max(j) as f64,
        });
    }
    let c = structure_constants(basis)?;
    let mut ad = [[T::zero(); 3]; 3];
    for (k, row) in c[i].iter().enumerate() {
        for l in 0..3 {
            ad[l][k] = row[l];
        }
    }
    let mut acc = [T::zero(); 3];
    acc[j] = T::one();
    let mut term = acc;
    let mut settled = 0usize;
    for n in 1..=MAX_TERMS {
        term = linalg::mat_vec(&ad, term);
        let factor = -epsilon / cst::<T>(n as f64);
        for x in &mut term {
            *x *= factor;
        }
        for (a, t) in acc.iter_mut().zip(term.iter()) {
            *a += *t;
        }
        let tnorm = term.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        let anorm = acc
            .iter()
            .fold(T::one(), |m, x| m.max(x.abs()));
        if tnorm <= cst::<T>(1e-15) * anorm {
            settled += 1;
            if settled == 3 {
                return Ok(acc);
            }
        } else {
            settled = 0;
        }
    }
    Err(Error::AdjointSeries {
        max_terms: MAX_TERMS,
    })
}
