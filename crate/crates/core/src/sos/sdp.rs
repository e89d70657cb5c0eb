//! Dense semidefinite feasibility by alternating projections.
//!
//! Iterates between the PSD cone (eigenvalue clipping) and the affine set
//! of Gram constraints, with Dykstra's correction on the cone step. Work
//! happens in face coordinates `Q = W S W^T` with `W` orthonormal, so the
//! Frobenius geometry of `S` matches that of `Q`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_traits::ToPrimitive;

use super::gram::GramProblem;
use crate::algebra::{Monomial, Rational};
use crate::error::{usage, Result};

pub const MAX_BASIS: usize = 150;

#[derive(Clone, Copy, Debug)]
pub struct SdpOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            tol: 1e-8,
            max_iter: 50_000,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SdpStatus {
    /// `gram` is `N x N` over the full monomial basis.
    Feasible {
        gram: DMatrix<f64>,
        residual: f64,
        min_eig: f64,
        iterations: usize,
    },
    /// A functional on degree-2d coefficients, nonnegative on every square
    /// of a face element and negative on the target.
    Infeasible {
        functional: Vec<(Monomial, f64)>,
        margin: f64,
        iterations: usize,
    },
    Undecided {
        reason: String,
        iterations: usize,
    },
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Orthonormal float basis (columns) of the face, or `None` for the full
/// space.
pub fn face_basis_f64(prob: &GramProblem) -> Option<DMatrix<f64>> {
    let face = prob.face.as_ref()?;
    let n = prob.size();
    let k = face.dim();
    if k == 0 {
        return Some(DMatrix::zeros(n, 0));
    }
    let raw = DMatrix::from_fn(n, k, |i, j| {
        let v = &face.vectors[j];
        let scale = v.iter().map(|x| to_f64(x).abs()).fold(0.0, f64::max);
        to_f64(&v[i]) / scale
    });
    Some(raw.qr().q())
}

/// Dense matrix of the linear map `svec(S) -> coefficients of m^T B S B^T m`,
/// where `svec` stores `S_aa` and `sqrt(2) S_ab` for `a < b`.
fn dense_operator(prob: &GramProblem, b: &DMatrix<f64>) -> DMatrix<f64> {
    let k = b.ncols();
    let cols: Vec<(usize, usize)> = (0..k).flat_map(|a| (a..k).map(move |c| (a, c))).collect();
    let mut op = DMatrix::zeros(prob.constraints.len(), cols.len());
    for (row, c) in prob.constraints.iter().enumerate() {
        for (col, &(a, e)) in cols.iter().enumerate() {
            let mut s = 0.0;
            for &(i, j) in &c.pairs {
                s += if i == j {
                    b[(i, a)] * b[(i, e)]
                } else {
                    b[(i, a)] * b[(j, e)] + b[(j, a)] * b[(i, e)]
                };
            }
            op[(row, col)] = if a == e {
                s
            } else {
                s * std::f64::consts::SQRT_2
            };
        }
    }
    op
}

fn svec(s: &DMatrix<f64>) -> DVector<f64> {
    let k = s.nrows();
    let mut v = Vec::with_capacity(k * (k + 1) / 2);
    for a in 0..k {
        for b in a..k {
            v.push(if a == b {
                s[(a, a)]
            } else {
                s[(a, b)] * std::f64::consts::SQRT_2
            });
        }
    }
    DVector::from_vec(v)
}

fn smat(v: &DVector<f64>, k: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(k, k);
    let mut idx = 0;
    for a in 0..k {
        for b in a..k {
            let x = if a == b {
                v[idx]
            } else {
                v[idx] / std::f64::consts::SQRT_2
            };
            s[(a, b)] = x;
            s[(b, a)] = x;
            idx += 1;
        }
    }
    s
}

fn psd_project(s: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(s.clone());
    let vals = eig.eigenvalues.map(|l| l.max(0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose()
}

fn min_eigenvalue(s: &DMatrix<f64>) -> f64 {
    if s.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(s.clone()).eigenvalues.min()
}

/// Projection onto `{x : A x = b}` and the adjoint least-squares solve.
enum Affine {
    /// Full face: constraint rows have disjoint support in svec coordinates.
    Disjoint {
        rows: Vec<Vec<(usize, f64)>>,
        norms: Vec<f64>,
        b: Vec<f64>,
    },
    Dense {
        op: DMatrix<f64>,
        pinv: DMatrix<f64>,
        b: DVector<f64>,
    },
}

impl Affine {
    fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            Affine::Disjoint { rows, norms, b } => {
                let mut y = x.clone();
                for ((row, n2), bi) in rows.iter().zip(norms).zip(b) {
                    let r: f64 = row.iter().map(|&(i, a)| a * x[i]).sum::<f64>() - bi;
                    for &(i, a) in row {
                        y[i] -= a * r / n2;
                    }
                }
                y
            }
            Affine::Dense { op, pinv, b } => x - pinv * (op * x - b),
        }
    }

    /// Least-squares `ell` with `A^T ell ~ v`.
    fn adjoint_solve(&self, v: &DVector<f64>) -> Vec<f64> {
        match self {
            Affine::Disjoint { rows, norms, .. } => rows
                .iter()
                .zip(norms)
                .map(|(row, n2)| row.iter().map(|&(i, a)| a * v[i]).sum::<f64>() / n2)
                .collect(),
            Affine::Dense { pinv, .. } => (pinv.transpose() * v).iter().copied().collect(),
        }
    }
}

fn pinv(op: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = op.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cut = smax * 1e-12 * (op.nrows().max(op.ncols()) as f64);
    svd.pseudo_inverse(cut)
        .expect("thin SVD computed with U and V")
}

/// `ell` evaluated on every pair `(a, b)` of basis monomials, restricted to
/// the face.
fn moment_matrix(prob: &GramProblem, ell: &[f64], w: Option<&DMatrix<f64>>) -> DMatrix<f64> {
    let n = prob.size();
    let mut m = DMatrix::zeros(n, n);
    for (c, &l) in prob.constraints.iter().zip(ell) {
        for &(a, b) in &c.pairs {
            m[(a, b)] = l;
            m[(b, a)] = l;
        }
    }
    match w {
        Some(w) => w.transpose() * m * w,
        None => m,
    }
}

/// Moments of the standard Gaussian, whose moment matrix is positive
/// definite on every face.
fn gaussian_moments(prob: &GramProblem) -> Vec<f64> {
    prob.constraints
        .iter()
        .map(|c| {
            c.gamma.exponents().iter().fold(1.0, |acc, &e| {
                if e % 2 == 1 {
                    0.0
                } else {
                    acc * (1..e).step_by(2).map(|k| k as f64).product::<f64>()
                }
            })
        })
        .collect()
}

/// Independent check of a dual functional: returns the smallest eigenvalue
/// of its moment matrix on the face and its value on the target.
pub fn check_functional(prob: &GramProblem, ell: &[(Monomial, f64)]) -> (f64, f64) {
    let w = face_basis_f64(prob);
    let lookup: std::collections::HashMap<&Monomial, f64> =
        ell.iter().map(|(m, v)| (m, *v)).collect();
    let dense: Vec<f64> = prob
        .constraints
        .iter()
        .map(|c| lookup.get(&c.gamma).copied().unwrap_or(0.0))
        .collect();
    let m = moment_matrix(prob, &dense, w.as_ref());
    let value = prob
        .constraints
        .iter()
        .zip(&dense)
        .map(|(c, l)| to_f64(&c.target) * l)
        .sum();
    (min_eigenvalue(&m), value)
}

struct Setup {
    k: usize,
    w: Option<DMatrix<f64>>,
    affine: Affine,
    scale: f64,
}

fn setup(prob: &GramProblem) -> Setup {
    let scale = prob.target.max_abs_coefficient().max(f64::MIN_POSITIVE);
    let b: Vec<f64> = prob
        .constraints
        .iter()
        .map(|c| to_f64(&c.target) / scale)
        .collect();
    match face_basis_f64(prob) {
        None => {
            let n = prob.size();
            let offset = |a: usize, c: usize| a * n - a * (a + 1) / 2 + c;
            let rows: Vec<Vec<(usize, f64)>> = prob
                .constraints
                .iter()
                .map(|c| {
                    c.pairs
                        .iter()
                        .map(|&(a, e)| {
                            (
                                offset(a, e),
                                if a == e {
                                    1.0
                                } else {
                                    std::f64::consts::SQRT_2
                                },
                            )
                        })
                        .collect()
                })
                .collect();
            let norms = rows
                .iter()
                .map(|r| r.iter().map(|(_, a)| a * a).sum())
                .collect();
            Setup {
                k: n,
                w: None,
                affine: Affine::Disjoint { rows, norms, b },
                scale,
            }
        }
        Some(w) => {
            let op = dense_operator(prob, &w);
            let pinv = pinv(&op);
            Setup {
                k: w.ncols(),
                w: Some(w),
                affine: Affine::Dense {
                    op,
                    pinv,
                    b: DVector::from_vec(b),
                },
                scale,
            }
        }
    }
}

fn lift(w: Option<&DMatrix<f64>>, s: &DMatrix<f64>) -> DMatrix<f64> {
    match w {
        Some(w) => w * s * w.transpose(),
        None => s.clone(),
    }
}

/// Tries to finish from an approximate solution by solving the constraints
/// exactly (in least squares) on the span of its dominant eigenvectors.
fn polish(
    prob: &GramProblem,
    st: &Setup,
    s: &DMatrix<f64>,
    tol: f64,
) -> Option<(DMatrix<f64>, f64, f64)> {
    let eig = SymmetricEigen::new(s.clone());
    let lmax = eig.eigenvalues.max();
    if lmax <= 0.0 {
        return None;
    }
    let keep: Vec<usize> = (0..s.nrows())
        .filter(|&i| eig.eigenvalues[i] > 1e-6 * lmax)
        .collect();
    if keep.len() == s.nrows() {
        return None;
    }
    let v = eig.eigenvectors.select_columns(&keep);
    let basis = match &st.w {
        Some(w) => w * &v,
        None => v,
    };
    let op = dense_operator(prob, &basis);
    let b = DVector::from_iterator(
        prob.constraints.len(),
        prob.constraints.iter().map(|c| to_f64(&c.target)),
    );
    let t = smat(&(pinv(&op) * &b), basis.ncols());
    let t = psd_project(&t);
    let q = &basis * t * basis.transpose();
    let residual = prob.residual_f64(&q);
    let min_eig = min_eigenvalue(&q);
    (residual <= tol && min_eig >= -tol).then_some((q, residual, min_eig))
}

/// Builds and verifies a separating functional from the gap between the
/// affine point `x` and the cone.
fn dual_certificate(
    prob: &GramProblem,
    st: &Setup,
    x: &DVector<f64>,
    tol: f64,
) -> Option<(Vec<(Monomial, f64)>, f64)> {
    let sx = smat(x, st.k);
    let y = psd_project(&sx);
    let gap = &y - &sx;
    if gap.norm() == 0.0 {
        return None;
    }
    let mut ell = st.affine.adjoint_solve(&svec(&gap));
    let n = ell.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n == 0.0 {
        return None;
    }
    ell.iter_mut().for_each(|v| *v /= n);
    let m = moment_matrix(prob, &ell, st.w.as_ref());
    let mu = min_eigenvalue(&m);
    if mu < 0.0 {
        let g = gaussian_moments(prob);
        let mu_g = min_eigenvalue(&moment_matrix(prob, &g, st.w.as_ref()));
        if mu_g <= 0.0 {
            return None;
        }
        let t = -mu / mu_g * (1.0 + 1e-6) + 1e-14;
        for (l, gi) in ell.iter_mut().zip(&g) {
            *l += t * gi;
        }
    }
    let functional: Vec<(Monomial, f64)> = prob
        .constraints
        .iter()
        .map(|c| c.gamma.clone())
        .zip(ell.iter().copied())
        .filter(|(_, v)| *v != 0.0)
        .collect();
    let (mu, value) = check_functional(prob, &functional);
    let norm = ell.iter().map(|v| v * v).sum::<f64>().sqrt();
    let margin = -value / (st.scale * norm);
    (mu >= 0.0 && margin >= 10.0 * tol).then_some((functional, margin))
}

pub fn sdp_feasible(prob: &GramProblem, opts: SdpOptions) -> Result<SdpStatus> {
    let n = prob.size();
    if n > MAX_BASIS {
        return usage(format!("SDP basis size {n} exceeds the limit {MAX_BASIS}"));
    }
    let tol = opts.tol;
    let st = setup(prob);
    if st.k == 0 {
        return Ok(if prob.target.is_zero() {
            SdpStatus::Feasible {
                gram: DMatrix::zeros(n, n),
                residual: 0.0,
                min_eig: 0.0,
                iterations: 0,
            }
        } else {
            SdpStatus::Undecided {
                reason: "face is trivial; use the exact span check".into(),
                iterations: 0,
            }
        });
    }
    let dim = st.k * (st.k + 1) / 2;
    let mut x = st.affine.project(&DVector::zeros(dim));
    // an inconsistent affine system is separated by its residual alone
    if let Affine::Dense { op, b, .. } = &st.affine {
        let r = op * &x - b;
        if r.amax() > tol {
            if let Some((functional, margin)) = dual_certificate(prob, &st, &x, tol) {
                return Ok(SdpStatus::Infeasible {
                    functional,
                    margin,
                    iterations: 0,
                });
            }
        }
    }
    let mut p = DVector::zeros(dim);
    let mut last_gap = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let sy = psd_project(&smat(&(&x + &p), st.k));
        let y = svec(&sy);
        p = &x + &p - &y;
        x = st.affine.project(&y);
        if it % 25 == 0 || it == opts.max_iter {
            let q = lift(st.w.as_ref(), &sy) * st.scale;
            let residual = prob.residual_f64(&q);
            if residual <= tol {
                let min_eig = min_eigenvalue(&q);
                return Ok(SdpStatus::Feasible {
                    gram: q,
                    residual,
                    min_eig,
                    iterations: it,
                });
            }
        }
        if it % 200 == 0 {
            if let Some((gram, residual, min_eig)) =
                polish(prob, &st, &(smat(&y, st.k) * st.scale), tol)
            {
                return Ok(SdpStatus::Feasible {
                    gram,
                    residual,
                    min_eig,
                    iterations: it,
                });
            }
            let gap = (&x - &y).norm();
            if gap > 1e3 * tol && (last_gap - gap).abs() <= 1e-4 * gap {
                if let Some((functional, margin)) = dual_certificate(prob, &st, &x, tol) {
                    return Ok(SdpStatus::Infeasible {
                        functional,
                        margin,
                        iterations: it,
                    });
                }
            }
            last_gap = gap;
        }
    }
    Ok(SdpStatus::Undecided {
        reason: format!(
            "iteration cap {} reached with gap {:.3e}",
            opts.max_iter, last_gap
        ),
        iterations: opts.max_iter,
    })
}
