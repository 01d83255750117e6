use super::Word;
use crate::error::{Error, Result};

/// Abelianization of a substitution: `M[i][j]` counts letter `i` in the
/// image of letter `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstMatrix {
    dim: usize,
    entries: Vec<u64>,
}

impl SubstMatrix {
    pub fn from_images(dim: usize, images: &[Word]) -> Self {
        let mut entries = vec![0u64; dim * dim];
        for (j, image) in images.iter().enumerate() {
            for id in image {
                entries[id.index() * dim + j] += 1;
            }
        }
        SubstMatrix { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("matrix must be square and non-empty"));
        }
        Ok(SubstMatrix {
            dim,
            entries: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim).map(<[u64]>::to_vec).collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// `M·v`, exact.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub(crate) fn apply_saturating(&self, v: &[u64]) -> Vec<u64> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(0u64, |acc, j| {
                    acc.saturating_add(self.get(i, j).saturating_mul(v[j]))
                })
            })
            .collect()
    }

    /// True iff some power `M^p`, `p ≤ dim²`, is entrywise positive.
    pub fn is_primitive(&self) -> bool {
        let n = self.dim;
        let base: Vec<bool> = self.entries.iter().map(|&e| e > 0).collect();
        let mut pow = base.clone();
        for _ in 0..n * n {
            if pow.iter().all(|&x| x) {
                return true;
            }
            let mut next = vec![false; n * n];
            for i in 0..n {
                for j in 0..n {
                    next[i * n + j] = (0..n).any(|k| pow[i * n + k] && base[k * n + j]);
                }
            }
            pow = next;
        }
        false
    }

    /// Perron–Frobenius eigenvalue and the normalized left/right eigenvectors.
    pub fn pf_data(&self) -> Result<PfData> {
        if !self.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        match self.dim {
            1 => Ok(PfData {
                eigenvalue: self.get(0, 0) as f64,
                frequencies: vec![1.0],
                lengths: vec![1.0],
            }),
            2 => Ok(self.pf_2x2()),
            _ => self.pf_power_iteration(),
        }
    }

    fn pf_2x2(&self) -> PfData {
        let (a, b, c, d) = (
            self.get(0, 0) as f64,
            self.get(0, 1) as f64,
            self.get(1, 0) as f64,
            self.get(1, 1) as f64,
        );
        let trace = a + d;
        let disc = (a - d) * (a - d) + 4.0 * b * c;
        let lambda = 0.5 * (trace + disc.sqrt());
        // Primitive 2x2 matrices have b, c > 0. λ - a = ((d - a) + √disc)/2
        // is formed that way to avoid cancellation.
        let shifted = 0.5 * ((d - a) + disc.sqrt());
        PfData {
            eigenvalue: lambda,
            frequencies: normalize_sum(vec![b, shifted]),
            lengths: normalize_min(vec![c, shifted]),
        }
    }

    fn pf_power_iteration(&self) -> Result<PfData> {
        let n = self.dim;
        let m: Vec<f64> = self.entries.iter().map(|&e| e as f64).collect();
        let right = |v: &[f64]| -> Vec<f64> {
            (0..n).map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum()).collect()
        };
        let left = |v: &[f64]| -> Vec<f64> {
            (0..n).map(|j| (0..n).map(|i| v[i] * m[i * n + j]).sum()).collect()
        };
        let (lambda, freq) = power_iterate(n, right)?;
        let (_, lens) = power_iterate(n, left)?;
        Ok(PfData {
            eigenvalue: lambda,
            frequencies: normalize_sum(freq),
            lengths: normalize_min(lens),
        })
    }
}

fn power_iterate(n: usize, step: impl Fn(&[f64]) -> Vec<f64>) -> Result<(f64, Vec<f64>)> {
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let w = step(&v);
        let norm: f64 = w.iter().sum();
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let delta = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let converged = delta <= 1e-15 && (norm - lambda).abs() <= 1e-14 * norm;
        lambda = norm;
        v = next;
        if converged {
            return Ok((lambda, v));
        }
    }
    Err(Error::Resource("power iteration did not converge".into()))
}

fn normalize_sum(v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

fn normalize_min(v: Vec<f64>) -> Vec<f64> {
    let m = v.iter().copied().fold(f64::INFINITY, f64::min);
    v.into_iter().map(|x| x / m).collect()
}

/// Perron–Frobenius data of a primitive substitution matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PfData {
    /// Inflation factor λ.
    pub eigenvalue: f64,
    /// Right eigenvector, summing to 1: asymptotic letter frequencies.
    pub frequencies: Vec<f64>,
    /// Left eigenvector with minimum entry 1: natural tile lengths.
    pub lengths: Vec<f64>,
}
