//! The certification pipeline and independent verification of its output.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use super::facial::{facial_reduce_batched, BatchTrace};
use super::gram::{gram_system, GramProblem};
use super::modular::{self, ModEchelon};
use super::sdp::{check_functional, sdp_feasible, SdpOptions, SdpStatus};
use super::span::{exact_span_check, ExactWitness, SpanOutcome};
use super::MonomialBasis;
use crate::algebra::{integer_kernel, ExactMatrix, Monomial, MultiPoly, Rational};
use crate::error::{usage, Error, Result};
use crate::sampling::nonnegativity_sweep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertifyMode {
    Auto,
    ExactOnly,
    SdpOnly,
}

impl FromStr for CertifyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(CertifyMode::Auto),
            "exact-only" => Ok(CertifyMode::ExactOnly),
            "sdp-only" => Ok(CertifyMode::SdpOnly),
            other => usage(format!(
                "unknown mode '{other}' (expected auto, exact-only or sdp-only)"
            )),
        }
    }
}

impl fmt::Display for CertifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertifyMode::Auto => "auto",
            CertifyMode::ExactOnly => "exact-only",
            CertifyMode::SdpOnly => "sdp-only",
        })
    }
}

/// `weight * poly^2`.
#[derive(Clone, Debug)]
pub struct WeightedSquare {
    pub weight: Rational,
    pub poly: MultiPoly,
}

#[derive(Clone, Debug)]
pub enum Certificate {
    SosWitness {
        squares: Vec<WeightedSquare>,
        /// max absolute coefficient of `sum w q^2 - p`
        residual: f64,
        exact: bool,
    },
    NonSosExact {
        zero_count: usize,
        face_dim: usize,
        witness: ExactWitness,
    },
    NonSosNumeric {
        zero_count: usize,
        face_dim: usize,
        margin: f64,
        functional: Vec<(Monomial, f64)>,
    },
    Undecided {
        reason: String,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::SosWitness { .. } => "SOSWitness",
            Certificate::NonSosExact { .. } => "NonSOSExact",
            Certificate::NonSosNumeric { .. } => "NonSOSNumeric",
            Certificate::Undecided { .. } => "Undecided",
        }
    }
}

/// Which stage produced the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    ExactSpan,
    SdpPrimal,
    SdpDual,
    None,
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub sdp: SdpOptions,
    pub seed: u64,
    pub sanity_samples: usize,
    pub batch_size: usize,
    pub stable_after: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            sdp: SdpOptions::default(),
            seed: 0,
            sanity_samples: 10_000,
            batch_size: 20,
            stable_after: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertifyReport {
    pub certificate: Certificate,
    pub branch: Branch,
    pub mode: CertifyMode,
    pub basis_size: usize,
    pub face_dim: usize,
    pub zero_count: usize,
    pub trace: Option<BatchTrace>,
    /// notes from stages that ran without deciding
    pub notes: Vec<String>,
}

fn rational_from_f64(x: f64) -> Rational {
    Rational::from_f64(x).unwrap_or_else(Rational::zero)
}

/// Squares from the spectral decomposition of a floating Gram matrix.
/// Coefficients are the exact binary values of the floats.
pub fn extract_squares(
    q: &DMatrix<f64>,
    basis: &MonomialBasis,
    tol: f64,
) -> Result<Vec<MultiPoly>> {
    if q.nrows() != basis.len() || q.ncols() != basis.len() {
        return usage(format!(
            "Gram matrix is {}x{}, basis has {} elements",
            q.nrows(),
            q.ncols(),
            basis.len()
        ));
    }
    let sym = (q + q.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let scale = eig.eigenvalues.amax().max(1.0);
    if eig.eigenvalues.min() < -tol * scale {
        return usage(format!(
            "Gram matrix is indefinite (minimum eigenvalue {:.3e})",
            eig.eigenvalues.min()
        ));
    }
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    Ok(order
        .into_iter()
        .filter(|&i| eig.eigenvalues[i] > tol * scale * 1e-3)
        .map(|i| {
            let r = eig.eigenvalues[i].sqrt();
            let coeffs: Vec<Rational> = eig
                .eigenvectors
                .column(i)
                .iter()
                .map(|&v| rational_from_f64(v * r))
                .collect();
            basis.combine(&coeffs)
        })
        .filter(|q| !q.is_zero())
        .collect())
}

/// Max absolute coefficient of `sum w_i q_i^2 - p`, computed exactly and
/// rounded at the end.
pub fn recomposition_residual(p: &MultiPoly, squares: &[WeightedSquare]) -> f64 {
    let mut acc = p.scale(&Rational::from_integer((-1).into()));
    for s in squares {
        acc = &acc + &(&s.poly * &s.poly).scale(&s.weight);
    }
    acc.max_abs_coefficient()
}

fn exact_squares(prob: &GramProblem, s: &ExactMatrix<Rational>) -> Vec<WeightedSquare> {
    let face = prob.face.as_ref().expect("exact span check ran on a face");
    let factor = s.psd_factor().expect("unique Gram matrix is PSD");
    factor
        .weights
        .iter()
        .zip(&factor.vectors)
        .map(|(w, v)| {
            let mut coeffs = vec![Rational::zero(); prob.size()];
            for (vj, fj) in v.iter().zip(&face.vectors) {
                if vj.is_zero() {
                    continue;
                }
                for (c, f) in coeffs.iter_mut().zip(fj) {
                    *c += vj * f;
                }
            }
            WeightedSquare {
                weight: w.clone(),
                poly: prob.basis.combine(&coeffs),
            }
        })
        .collect()
}

/// Rounds a floating Gram matrix to rationals with a small common
/// denominator and keeps the result if it satisfies the Gram system exactly
/// and is PSD.
pub fn round_gram(prob: &GramProblem, q: &DMatrix<f64>) -> Option<ExactMatrix<Rational>> {
    let n = prob.size();
    let denominators = [1i64, 2, 3, 4, 6, 8, 12, 16, 24, 32, 64, 128, 256, 1024];
    denominators.iter().find_map(|&d| {
        let df = d as f64;
        let r = ExactMatrix::from_fn(n, n, |i, j| {
            let x = 0.5 * (q[(i, j)] + q[(j, i)]);
            Rational::new(((x * df).round() as i64).into(), d.into())
        });
        (prob.satisfied_by(&r) && r.is_psd()).then_some(r)
    })
}

fn squares_of_gram(prob: &GramProblem, q: &ExactMatrix<Rational>) -> Vec<WeightedSquare> {
    let factor = q.psd_factor().expect("rounded Gram matrix is PSD");
    factor
        .weights
        .iter()
        .zip(&factor.vectors)
        .map(|(w, v)| WeightedSquare {
            weight: w.clone(),
            poly: prob.basis.combine(v),
        })
        .collect()
}

/// Runs the pipeline: Gram system, facial reduction on the supplied zeros,
/// exact span check, then SDP on the reduced face.
pub fn certify(
    p: &MultiPoly,
    mode: CertifyMode,
    zeros: &[Vec<Rational>],
    opts: &CertifyOptions,
) -> Result<CertifyReport> {
    let prob = gram_system(p)?;
    let basis_size = prob.size();
    let (mut prob, trace) = if zeros.is_empty() {
        (prob, None)
    } else {
        let (p, t) = facial_reduce_batched(&prob, zeros, opts.batch_size, opts.stable_after)?;
        (p, Some(t))
    };
    let face_dim = prob.face.as_ref().map_or(basis_size, |f| f.dim());
    if prob.face.is_none() {
        prob.face = Some(super::facial::Face::full(basis_size));
    }
    let mut report = CertifyReport {
        certificate: Certificate::Undecided {
            reason: String::new(),
        },
        branch: Branch::None,
        mode,
        basis_size,
        face_dim,
        zero_count: zeros.len(),
        trace,
        notes: Vec::new(),
    };

    if mode != CertifyMode::SdpOnly {
        match exact_span_check(&prob) {
            SpanOutcome::Outside(witness) => {
                report.branch = Branch::ExactSpan;
                report.certificate = Certificate::NonSosExact {
                    zero_count: zeros.len(),
                    face_dim,
                    witness,
                };
                return Ok(report);
            }
            SpanOutcome::UniquePsd(s) => {
                let squares = exact_squares(&prob, &s);
                let residual = recomposition_residual(p, &squares);
                report.branch = Branch::ExactSpan;
                report.certificate = Certificate::SosWitness {
                    squares,
                    residual,
                    exact: residual == 0.0,
                };
                return Ok(report);
            }
            SpanOutcome::Inconclusive(reason) => {
                report
                    .notes
                    .push(format!("exact span check inconclusive: {reason}"));
                if mode == CertifyMode::ExactOnly {
                    report.certificate = Certificate::Undecided { reason };
                    return Ok(report);
                }
            }
        }
    }

    // the full face is implicit for the SDP
    if zeros.is_empty() {
        prob.face = None;
    }
    match sdp_feasible(&prob, opts.sdp)? {
        SdpStatus::Feasible {
            gram, iterations, ..
        } => {
            report
                .notes
                .push(format!("SDP converged after {iterations} iterations"));
            let squares: Vec<WeightedSquare> = match round_gram(&prob, &gram) {
                Some(exact) => {
                    report
                        .notes
                        .push("SDP solution rounded to an exact rational Gram matrix".into());
                    squares_of_gram(&prob, &exact)
                }
                None => extract_squares(&gram, &prob.basis, opts.sdp.tol.max(1e-12))?
                    .into_iter()
                    .map(|poly| WeightedSquare {
                        weight: Rational::from_integer(1.into()),
                        poly,
                    })
                    .collect(),
            };
            let residual = recomposition_residual(p, &squares);
            let sweep = nonnegativity_sweep(p, opts.sanity_samples, opts.seed)?;
            if !sweep.passed {
                report.certificate = Certificate::Undecided {
                    reason: format!(
                        "SDP reported feasible but the target is negative at {} of {} samples",
                        sweep.negative_count, sweep.samples
                    ),
                };
                return Ok(report);
            }
            report.branch = Branch::SdpPrimal;
            report.certificate = Certificate::SosWitness {
                squares,
                residual,
                exact: residual == 0.0,
            };
        }
        SdpStatus::Infeasible {
            functional,
            margin,
            iterations,
        } => {
            report
                .notes
                .push(format!("SDP separated after {iterations} iterations"));
            report.branch = Branch::SdpDual;
            report.certificate = Certificate::NonSosNumeric {
                zero_count: zeros.len(),
                face_dim,
                margin,
                functional,
            };
        }
        SdpStatus::Undecided { reason, .. } => {
            report.certificate = Certificate::Undecided { reason };
        }
    }
    Ok(report)
}

/// Outcome of re-checking a certificate from scratch.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Verification {
    pub valid: bool,
    pub detail: String,
    /// recomputed recomposition residual, for SOS witnesses
    pub residual: Option<f64>,
}

fn ok(valid: bool, detail: impl Into<String>) -> Verification {
    Verification {
        valid,
        detail: detail.into(),
        residual: None,
    }
}

fn integer_rows(basis: &MonomialBasis, zeros: &[Vec<Rational>]) -> Vec<Vec<num_bigint::BigInt>> {
    use num_integer::Integer;
    zeros
        .iter()
        .map(|z| {
            let v = basis.evaluate(z);
            let l = v
                .iter()
                .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Re-checks a certificate for `p` without trusting any solver output
/// besides the certificate itself. `zeros` must be the list used to
/// produce it.
pub fn verify_certificate(
    p: &MultiPoly,
    zeros: &[Vec<Rational>],
    cert: &Certificate,
    tol: f64,
) -> Result<Verification> {
    let prob = gram_system(p)?;
    for (i, z) in zeros.iter().enumerate() {
        if !p.evaluate(z)?.is_zero() {
            return Ok(ok(false, format!("point #{i} is not a zero of the target")));
        }
    }
    let tgt = prob.target_vector();
    match cert {
        Certificate::SosWitness { squares, exact, .. } => {
            if squares.iter().any(|s| s.weight.is_negative()) {
                return Ok(ok(false, "negative weight"));
            }
            let residual = recomposition_residual(p, squares);
            let scale = p.max_abs_coefficient().max(1.0);
            let valid = if *exact {
                residual == 0.0
            } else {
                residual <= tol.max(1e-6) * scale
            };
            Ok(Verification {
                valid,
                detail: format!("recomposition residual {residual:.3e}"),
                residual: Some(residual),
            })
        }
        Certificate::NonSosExact { witness, .. } => match witness {
            ExactWitness::TrivialFace => {
                let kernel = integer_kernel(&integer_rows(&prob.basis, zeros), prob.size());
                Ok(ok(
                    kernel.is_empty() && !p.is_zero(),
                    format!("face dimension {} recomputed exactly", kernel.len()),
                ))
            }
            ExactWitness::Functional(ell) => {
                let face: Vec<Vec<Rational>> =
                    integer_kernel(&integer_rows(&prob.basis, zeros), prob.size())
                        .into_iter()
                        .map(|v| v.into_iter().map(Rational::from_integer).collect())
                        .collect();
                let lookup: std::collections::HashMap<&Monomial, &Rational> =
                    ell.iter().map(|(m, v)| (m, v)).collect();
                let dense: Vec<Rational> = prob
                    .constraints
                    .iter()
                    .map(|c| {
                        lookup
                            .get(&c.gamma)
                            .map_or_else(Rational::zero, |v| (*v).clone())
                    })
                    .collect();
                let dot = |a: &[Rational]| {
                    a.iter()
                        .zip(&dense)
                        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
                };
                for a in 0..face.len() {
                    for b in a..face.len() {
                        if !dot(&prob.product(&face[a], &face[b])).is_zero() {
                            return Ok(ok(
                                false,
                                format!("functional does not vanish on product ({a},{b})"),
                            ));
                        }
                    }
                }
                let value = dot(&tgt);
                Ok(ok(
                    !value.is_zero(),
                    format!("functional value on target {value}"),
                ))
            }
            ExactWitness::ModularFunctional {
                prime,
                functional,
                product_rank,
            } => {
                if *prime != modular::PRIME {
                    return Ok(ok(false, "unsupported prime"));
                }
                let mut ech = ModEchelon::new(prob.size());
                for row in integer_rows(&prob.basis, zeros) {
                    ech.insert(row.iter().map(modular::reduce_int).collect());
                }
                let w = ech.kernel();
                let lookup: std::collections::HashMap<&Monomial, u64> =
                    functional.iter().map(|(m, v)| (m, *v)).collect();
                let dense: Vec<u64> = prob
                    .constraints
                    .iter()
                    .map(|c| lookup.get(&c.gamma).copied().unwrap_or(0))
                    .collect();
                let mut products = ModEchelon::new(prob.constraints.len());
                for a in 0..w.len() {
                    for b in a..w.len() {
                        let prod = prob.product_mod(&w[a], &w[b]);
                        if modular::dot(&prod, &dense) != 0 {
                            return Ok(ok(
                                false,
                                format!("functional does not vanish on product ({a},{b}) mod p"),
                            ));
                        }
                        products.insert(prod);
                    }
                }
                let k = w.len();
                if products.rank() != k * (k + 1) / 2 || products.rank() != *product_rank {
                    return Ok(ok(
                        false,
                        format!("products have rank {} mod p", products.rank()),
                    ));
                }
                let target: Option<Vec<u64>> = tgt.iter().map(modular::reduce).collect();
                let Some(target) = target else {
                    return Ok(ok(false, "target not reducible mod p"));
                };
                let value = modular::dot(&target, &dense);
                Ok(ok(
                    value != 0,
                    format!("face dimension {k} mod p, functional value on target {value} mod p"),
                ))
            }
            ExactWitness::IndefiniteGram {
                face,
                gram,
                direction,
            } => {
                let k = face.len();
                let expected = integer_kernel(&integer_rows(&prob.basis, zeros), prob.size()).len();
                let evaluated: Vec<Vec<Rational>> =
                    zeros.iter().map(|z| prob.basis.evaluate(z)).collect();
                let annihilates = face.iter().all(|w| {
                    evaluated.iter().all(|m| {
                        m.iter()
                            .zip(w)
                            .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
                            .is_zero()
                    })
                });
                let spans = ExactMatrix::from_rows(face.clone())
                    .map(|m| m.rank())
                    .unwrap_or(0)
                    == k;
                if !(annihilates && spans && k == expected) {
                    return Ok(ok(false, "supplied face basis is not a basis of the face"));
                }
                if gram.rows() != k || gram.cols() != k {
                    return Ok(ok(false, "Gram matrix size does not match the face"));
                }
                let mut rows = Vec::new();
                let mut sum = vec![Rational::zero(); tgt.len()];
                for a in 0..k {
                    for b in a..k {
                        let prod = prob.product(&face[a], &face[b]);
                        let c = if a == b {
                            gram.get(a, a).clone()
                        } else {
                            gram.get(a, b) * Rational::from_integer(2.into())
                        };
                        for (s, x) in sum.iter_mut().zip(&prod) {
                            *s += &c * x;
                        }
                        rows.push(prod);
                    }
                }
                let independent =
                    ExactMatrix::from_rows(rows).map(|m| m.rank()).unwrap_or(0) == k * (k + 1) / 2;
                let symmetric = (0..k).all(|a| (0..a).all(|b| gram.get(a, b) == gram.get(b, a)));
                let sv = gram.mul_vec(direction)?;
                let quad = direction
                    .iter()
                    .zip(&sv)
                    .fold(Rational::zero(), |acc, (x, y)| acc + x * y);
                Ok(ok(
                    independent && symmetric && sum == tgt && quad.is_negative(),
                    format!("unique Gram matrix on a face of dimension {k}, v^T S v = {quad}"),
                ))
            }
        },
        Certificate::NonSosNumeric { functional, .. } => {
            let mut prob = prob;
            if !zeros.is_empty() {
                let (reduced, _) = facial_reduce_batched(&prob, zeros, zeros.len(), 1)?;
                prob = reduced;
            }
            let (mu, value) = check_functional(&prob, functional);
            Ok(ok(
                mu >= 0.0 && value < 0.0,
                format!("moment matrix minimum eigenvalue {mu:.3e}, value on target {value:.3e}"),
            ))
        }
        Certificate::Undecided { .. } => Ok(ok(false, "nothing to verify")),
    }
}

pub fn weight_f64(w: &Rational) -> f64 {
    w.to_f64().unwrap_or(f64::NAN)
}
