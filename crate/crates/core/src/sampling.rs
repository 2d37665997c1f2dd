//! Seeded sampling of small-height rationals.
//!
//! Every sample index gets its own ChaCha stream, so results do not depend on
//! how work is split across threads.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactpoly::{QMatrix, Rational};

pub const NUM_BOUND: i64 = 10_000;
pub const DEN_BOUND: i64 = 1_000;
pub const RETRY_CAP: usize = 100;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, stream: u64) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng }
    }

    pub fn rational(&mut self) -> Rational {
        let n = self.rng.gen_range(-NUM_BOUND..=NUM_BOUND);
        let d = self.rng.gen_range(1..=DEN_BOUND);
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn nonzero(&mut self) -> Rational {
        loop {
            let x = self.rational();
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> QMatrix {
        QMatrix::from_fn(rows, cols, |_, _| self.rational())
    }

    /// Small integer entries, handy for structured samples.
    pub fn int_matrix(&mut self, rows: usize, cols: usize, bound: i64) -> QMatrix {
        QMatrix::from_fn(rows, cols, |_, _| Rational::from_integer(self.int(-bound, bound).into()))
    }

    pub fn invertible(&mut self, n: usize) -> Result<QMatrix> {
        retry(|| {
            let m = self.matrix(n, n);
            (m.rank() == n).then_some(m)
        })
    }

    /// Random matrix of exactly the given rank (as a product of two random factors).
    pub fn matrix_of_rank(&mut self, rows: usize, cols: usize, rank: usize) -> Result<QMatrix> {
        retry(|| {
            let a = self.int_matrix(rows, rank, 5);
            let b = self.int_matrix(rank, cols, 5);
            let m = a.mul(&b).ok()?;
            (m.rank() == rank).then_some(m)
        })
    }
}

/// Rejection sampling with the global retry cap.
pub fn retry<T>(mut f: impl FnMut() -> Option<T>) -> Result<T> {
    for _ in 0..RETRY_CAP {
        if let Some(x) = f() {
            return Ok(x);
        }
    }
    Err(Error::Internal(format!("no valid sample after {RETRY_CAP} tries")))
}
