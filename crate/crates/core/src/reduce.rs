//! Compensated summation and reproducible parallel reduction.
//!
//! Parallel sums split the input into fixed-size chunks, sum each chunk sequentially and
//! combine the chunk totals with a pairwise tree. The chunking never depends on the
//! number of workers, so results are bit-identical for any pool size.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Neumaier summation on both components.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

#[inline]
fn two_sum(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: Complex64) {
        two_sum(&mut self.sum.re, &mut self.comp.re, x.re);
        two_sum(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Pairwise sum in a fixed tree shape.
pub fn tree_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n => {
            let h = n / 2;
            tree_sum(&v[..h]) + tree_sum(&v[h..])
        }
    }
}

/// Items per chunk in [`parallel_sum`].
pub const CHUNK: usize = 1024;

/// `Σ f(item)` over `items` on a pool of `workers` threads.
pub fn parallel_sum<T, F>(items: &[T], workers: usize, f: F) -> Result<Complex64>
where
    T: Sync,
    F: Fn(&T) -> Result<Complex64> + Sync,
{
    let chunk_sum = |c: &[T]| -> Result<Complex64> {
        let mut acc = CompensatedSum::new();
        for it in c {
            acc.add(f(it)?);
        }
        Ok(acc.value())
    };
    let partials: Vec<Complex64> = if workers <= 1 {
        items.chunks(CHUNK).map(chunk_sum).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        pool.install(|| items.par_chunks(CHUNK).map(chunk_sum).collect::<Result<_>>())?
    };
    Ok(tree_sum(&partials))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(Complex64::new(1.0, 0.0));
        for _ in 0..1000 {
            acc.add(Complex64::new(1e-17, 0.0));
        }
        assert!((acc.value().re - (1.0 + 1e-14)).abs() < 1e-18);
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let items: Vec<u64> = (1..20_000).collect();
        let f = |n: &u64| Ok(Complex64::new(1.0 / *n as f64, (*n as f64).sin()));
        let a = parallel_sum(&items, 1, f).unwrap();
        let b = parallel_sum(&items, 3, f).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}
