//! Exact Gaussian elimination over Q, enough for kernel bases and one
//! particular solution. Matrices are dense row-major Vec<Vec<Rat>>.

use num_traits::Zero;

use crate::arith::{rat_int, Rat};

/// Reduce in place to reduced row echelon form; returns the pivot column of
/// each pivot row.
fn rref(mat: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = rat_int(1) / &mat[r][c];
        for v in &mut mat[r] {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &mat[r][j];
                    mat[i][j] = &mat[i][j] - &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Basis of { v : M v = 0 }, one vector per free column.
pub fn kernel_basis(mat: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let cols = if mat.is_empty() { 0 } else { mat[0].len() };
    let mut m = mat.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![rat_int(0); cols];
        v[free] = rat_int(1);
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// One solution of M v = rhs (free variables set to zero), or None when the
/// system is inconsistent.
pub fn solve_linear(mat: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let rows = mat.len();
    assert_eq!(rows, rhs.len(), "matrix and right-hand side disagree");
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut aug: Vec<Vec<Rat>> = mat
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // a pivot in the augmented column: 0 = 1
    }
    let mut v = vec![rat_int(0); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = aug[row][cols].clone();
    }
    Some(v)
}
