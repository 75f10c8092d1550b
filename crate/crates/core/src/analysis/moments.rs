//! Mergeable central-moment accumulator (orders 1-4).
//!
//! Updates follow the pairwise formulas of Pébay (2008); merging two
//! accumulators is exact up to rounding, so a signal can be split into
//! fixed chunks, reduced in parallel and combined in chunk order.

use crate::par::{self, Execution};

/// Chunk length used by [`Moments::of`]. Fixed so that parallel and
/// sequential reductions round identically.
pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    pub fn merge(&self, other: &Moments) -> Moments {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let d = other.mean - self.mean;
        let d2 = d * d;
        let d3 = d2 * d;
        let d4 = d2 * d2;

        let mean = self.mean + d * nb / n;
        let m2 = self.m2 + other.m2 + d2 * na * nb / n;
        let m3 = self.m3
            + other.m3
            + d3 * na * nb * (na - nb) / (n * n)
            + 3.0 * d * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * d * (na * other.m3 - nb * self.m3) / n;
        Moments {
            n: self.n + other.n,
            mean,
            m2,
            m3,
            m4,
        }
    }

    /// Accumulates `xs` in fixed chunks, reducing chunks in parallel when the
    /// `parallel` feature is on.
    pub fn of(xs: &[f64]) -> Moments {
        Self::of_with(xs, Execution::Parallel)
    }

    /// As [`Moments::of`]; the result is bit-identical for either `exec`.
    pub fn of_with(xs: &[f64], exec: Execution) -> Moments {
        let partials: Vec<Moments> = par::map_chunks(xs, CHUNK, exec, |chunk| {
            let mut m = Moments::default();
            chunk.iter().for_each(|&x| m.push(x));
            m
        });
        partials
            .iter()
            .fold(Moments::default(), |acc, m| acc.merge(m))
    }

    /// Population variance.
    pub fn variance(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.m2 / self.n as f64).max(0.0)
        }
    }

    pub fn std(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Fisher-Pearson skewness `g1 = m3 / m2^1.5`.
    pub fn skewness(&self) -> f64 {
        let n = self.n as f64;
        n.sqrt() * self.m3 / self.m2.powf(1.5)
    }

    /// Excess kurtosis `g2 = m4 / m2² − 3`.
    pub fn excess_kurtosis(&self) -> f64 {
        let n = self.n as f64;
        n * self.m4 / (self.m2 * self.m2) - 3.0
    }
}
