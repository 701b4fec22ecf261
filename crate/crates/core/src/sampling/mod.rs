//! Simulation through the scale mixture `X = (E_1, ..., E_d) / V` and
//! empirical tail statistics computed from the resulting batches.
//!
//! Rows are generated in fixed chunks of [`CHUNK_ROWS`]; chunk `c` draws from
//! a ChaCha20 stream seeded with the user seed and stream number `c`, so a
//! batch depends only on `(family, d, n, seed)` and not on the thread count.

mod empirical;
mod io;
mod mixing;
mod stats;

pub use empirical::{
    empirical_copula, empirical_lambda_l, empirical_lower_tail, EmpiricalEstimate, LambdaPoint,
};
pub use io::{read_batch, write_batch, BatchFormat, BINARY_MAGIC_COPULA, BINARY_MAGIC_MIXTURE};
pub use mixing::MixingLaw;
pub use stats::{kendall_tau, kendall_tau_null_sd, ks_critical_1pct, ks_uniform};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copula::MAX_DIM;
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::scalar::Real;

/// Rows generated per independent substream.
pub const CHUNK_ROWS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchKind {
    /// Draws of `X = (E_1, ..., E_d) / V`.
    Mixture,
    /// Draws of `U = (phi(X_1), ..., phi(X_d))`.
    Copula,
}

/// An immutable `n x d` matrix of draws, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch<T> {
    kind: BatchKind,
    d: usize,
    n: usize,
    data: Vec<T>,
    family: Option<String>,
    seed: Option<u64>,
}

impl<T: Real> SampleBatch<T> {
    /// Wraps row-major data, checking the support of `kind`.
    pub fn from_rows(kind: BatchKind, d: usize, data: Vec<T>) -> Result<Self> {
        if d == 0 || data.is_empty() || !data.len().is_multiple_of(d) {
            return Err(Error::Format(format!(
                "{} values do not form rows of width {d}",
                data.len()
            )));
        }
        let inside = |x: &T| match kind {
            BatchKind::Copula => *x > T::zero() && *x < T::one(),
            BatchKind::Mixture => *x > T::zero() && x.is_finite(),
        };
        if let Some(pos) = data.iter().position(|x| !inside(x)) {
            return Err(Error::Format(format!(
                "value {} at row {}, column {} is outside the support",
                data[pos],
                pos / d + 1,
                pos % d + 1
            )));
        }
        Ok(SampleBatch {
            kind,
            d,
            n: data.len() / d,
            data,
            family: None,
            seed: None,
        })
    }

    pub fn with_provenance(mut self, family: impl Into<String>, seed: u64) -> Self {
        self.family = Some(family.into());
        self.seed = Some(seed);
        self
    }

    pub fn kind(&self) -> BatchKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn family(&self) -> Option<&str> {
        self.family.as_deref()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, T> {
        self.data.chunks_exact(self.d)
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.rows().map(|r| r[j]).collect()
    }

    /// The batch with columns reordered by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.d];
        if perm.len() != self.d
            || perm
                .iter()
                .any(|&j| j >= self.d || std::mem::replace(&mut seen[j], true))
        {
            return Err(Error::domain("not a permutation of the columns"));
        }
        let data = self
            .rows()
            .flat_map(|r| perm.iter().map(move |&j| r[j]))
            .collect();
        Ok(SampleBatch {
            data,
            ..self.clone()
        })
    }
}

fn check_request(d: usize, n: usize) -> Result<()> {
    if !(1..=MAX_DIM).contains(&d) {
        return Err(Error::domain(format!(
            "dimension must be in 1..={MAX_DIM}, got {d}"
        )));
    }
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    Ok(())
}

/// Runs `fill` on every chunk in parallel, each with its own substream, and
/// concatenates the chunks in order.
fn chunked<T: Send + Copy>(
    n: usize,
    seed: u64,
    width: usize,
    fill: impl Fn(&mut ChaCha20Rng, usize, &mut Vec<T>) + Sync,
) -> Vec<T> {
    let chunks = n.div_ceil(CHUNK_ROWS);
    let parts: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let rows = CHUNK_ROWS.min(n - c * CHUNK_ROWS);
            let mut out = Vec::with_capacity(rows * width);
            fill(&mut rng, rows, &mut out);
            out
        })
        .collect();
    parts.concat()
}

/// `n` draws of the mixing variable `V`.
pub fn sample_mixing<T: Real>(g: &Generator<T>, n: usize, seed: u64) -> Result<Vec<T>> {
    let law = MixingLaw::for_generator(g)?;
    check_request(1, n)?;
    Ok(chunked(n, seed, 1, |rng, rows, out| {
        out.extend((0..rows).map(|_| T::lit(law.sample(rng))));
    }))
}

/// Draws `(ln V, ln E_1, ..., ln E_d)` row by row and maps each to an output row.
fn sample_rows<T: Real>(
    g: &Generator<T>,
    d: usize,
    n: usize,
    seed: u64,
    map: impl Fn(f64) -> T + Sync,
) -> Result<Vec<T>> {
    let law = MixingLaw::for_generator(g)?;
    check_request(d, n)?;
    Ok(chunked(n, seed, d, |rng, rows, out| {
        for _ in 0..rows {
            let ln_v = law.sample(rng).ln();
            for _ in 0..d {
                let e: f64 = rand::Rng::sample(rng, Exp1);
                out.push(map(e.ln() - ln_v));
            }
        }
    }))
}

/// `n` draws of `X = (E_1, ..., E_d) / V`.
pub fn sample_mixture<T: Real>(
    g: &Generator<T>,
    d: usize,
    n: usize,
    seed: u64,
) -> Result<SampleBatch<T>> {
    let data = sample_rows(g, d, n, seed, |ln_x| {
        let x = T::from_f64(ln_x.exp()).unwrap_or(T::max_value());
        x.max(T::min_positive_value()).min(T::max_value())
    })?;
    Ok(SampleBatch::from_rows(BatchKind::Mixture, d, data)?.with_provenance(g.to_string(), seed))
}

/// `n` draws of `U_i = phi(E_i / V)`, evaluated from `ln(E_i / V)` so that
/// uniforms deep in the lower tail keep their magnitude.
pub fn sample_copula<T: Real>(
    g: &Generator<T>,
    d: usize,
    n: usize,
    seed: u64,
) -> Result<SampleBatch<T>> {
    if d < 2 {
        return Err(Error::domain(format!(
            "copula samples need d >= 2, got {d}"
        )));
    }
    let below_one = T::one() - T::epsilon() / T::lit(2.0);
    let data = sample_rows(g, d, n, seed, |ln_x| {
        let u = g.log_psi_at_log_raw(T::lit(ln_x)).exp();
        u.max(T::min_positive_value()).min(below_one)
    })?;
    Ok(SampleBatch::from_rows(BatchKind::Copula, d, data)?.with_provenance(g.to_string(), seed))
}

#[cfg(test)]
mod tests;
