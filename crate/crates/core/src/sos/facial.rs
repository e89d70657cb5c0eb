//! Facial reduction driven by exact zeros of the target.
//!
//! If `p = m^T Q m` with `Q` PSD and `p(z) = 0`, then `Q m(z) = 0`. The
//! column space of every PSD Gram matrix therefore lies in the orthogonal
//! complement of `span{m(z)}`, which is the face computed here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::gram::GramProblem;
use super::modular::{self, ModEchelon};
use crate::algebra::{integer_kernel, MultiPoly, Rational};
use crate::error::{Error, Result};

/// Exact basis (as coefficient vectors over the monomial basis) of the
/// admissible column space, together with its reduction mod the working
/// prime.
#[derive(Clone, Debug)]
pub struct Face {
    pub vectors: Vec<Vec<Rational>>,
    pub zero_count: usize,
    pub ambient: usize,
    /// basis of the same face computed over `F_p` from the zeros listed in
    /// `independent`, whose monomial vectors are independent mod p
    pub modular: Vec<Vec<u64>>,
    pub independent: Vec<usize>,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn full(ambient: usize) -> Self {
        let vectors = (0..ambient)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::one();
                v
            })
            .collect();
        Face {
            vectors,
            zero_count: 0,
            ambient,
            modular: ModEchelon::new(ambient).kernel(),
            independent: Vec::new(),
        }
    }
}

fn integer_row(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Tracks `span{m(z)}` over the supplied zeros.
///
/// Ranks are maintained mod p, which is cheap and bounds the rational rank
/// from below; the exact face is produced on demand by fraction-free
/// elimination over the rows that were independent mod p, after which the
/// remaining rows are checked exactly.
#[derive(Clone, Debug)]
pub struct FaceTracker {
    ambient: usize,
    modular: ModEchelon,
    independent: Vec<(usize, Vec<BigInt>)>,
    dependent: Vec<(usize, Vec<BigInt>)>,
    zero_count: usize,
}

impl FaceTracker {
    pub fn new(ambient: usize) -> Self {
        FaceTracker {
            ambient,
            modular: ModEchelon::new(ambient),
            independent: Vec::new(),
            dependent: Vec::new(),
            zero_count: 0,
        }
    }

    /// Face dimension implied by the rank mod p (an upper bound that is
    /// exact unless p divides an unlucky minor).
    pub fn face_dim(&self) -> usize {
        self.ambient - self.modular.rank()
    }

    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    /// Adds one evaluated monomial vector; returns true if the span grew
    /// mod p.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        let index = self.zero_count;
        self.zero_count += 1;
        let row = integer_row(&v);
        let reduced = row.iter().map(modular::reduce_int).collect();
        let grew = self.modular.insert(reduced);
        if grew {
            self.independent.push((index, row));
        } else {
            self.dependent.push((index, row));
        }
        grew
    }

    /// Exact orthogonal complement of the span.
    pub fn face(&self) -> Face {
        let mut rows: Vec<Vec<BigInt>> = self.independent.iter().map(|(_, r)| r.clone()).collect();
        let mut pending: Vec<&Vec<BigInt>> = self.dependent.iter().map(|(_, r)| r).collect();
        let kernel = loop {
            let kernel = integer_kernel(&rows, self.ambient);
            let before = pending.len();
            pending.retain(|r| {
                let clean = kernel.iter().all(|k| {
                    r.iter()
                        .zip(k)
                        .map(|(a, b)| a * b)
                        .sum::<BigInt>()
                        .is_zero()
                });
                if !clean {
                    rows.push((*r).clone());
                }
                clean
            });
            if pending.len() == before {
                break kernel;
            }
        };
        Face {
            vectors: kernel
                .into_iter()
                .map(|v| v.into_iter().map(Rational::from_integer).collect())
                .collect(),
            zero_count: self.zero_count,
            ambient: self.ambient,
            modular: self.modular.kernel(),
            independent: self.independent.iter().map(|(i, _)| *i).collect(),
        }
    }
}

fn check_zero(target: &MultiPoly, z: &[Rational], index: usize) -> Result<()> {
    let v = target.evaluate(z)?;
    if !v.is_zero() {
        return Err(Error::Usage(format!(
            "supplied point #{index} is not a zero of the target (value {v})"
        )));
    }
    Ok(())
}

/// Restricts the problem to the face cut out by `zeros`. Every point is
/// checked to be an exact zero of the target first.
pub fn facial_reduce(prob: &GramProblem, zeros: &[Vec<Rational>]) -> Result<GramProblem> {
    let mut tracker = FaceTracker::new(prob.size());
    for (i, z) in zeros.iter().enumerate() {
        check_zero(&prob.target, z, i)?;
        tracker.insert(prob.basis.evaluate(z));
    }
    let mut out = prob.clone();
    out.face = Some(tracker.face());
    Ok(out)
}

/// Outcome of batched facial reduction.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BatchTrace {
    pub batch_size: usize,
    /// face dimension after each batch
    pub dims: Vec<usize>,
    pub stable: bool,
}

/// Consumes zeros in batches, recording the face dimension after each one.
/// The face is stable once `stable_after` consecutive batches leave the
/// dimension unchanged.
pub fn facial_reduce_batched(
    prob: &GramProblem,
    zeros: &[Vec<Rational>],
    batch_size: usize,
    stable_after: usize,
) -> Result<(GramProblem, BatchTrace)> {
    let mut tracker = FaceTracker::new(prob.size());
    let mut dims = Vec::new();
    let mut unchanged = 0;
    for (b, batch) in zeros.chunks(batch_size.max(1)).enumerate() {
        for (i, z) in batch.iter().enumerate() {
            check_zero(&prob.target, z, b * batch_size + i)?;
            tracker.insert(prob.basis.evaluate(z));
        }
        let dim = tracker.face_dim();
        if dims.last() == Some(&dim) {
            unchanged += 1;
        } else {
            unchanged = 0;
        }
        dims.push(dim);
    }
    let mut out = prob.clone();
    out.face = Some(tracker.face());
    // a face of dimension 0 cannot shrink further
    let stable = unchanged >= stable_after || dims.last() == Some(&0);
    Ok((
        out,
        BatchTrace {
            batch_size,
            dims,
            stable,
        },
    ))
}
