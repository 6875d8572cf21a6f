use std::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HypergroupError, Result};
use crate::function::HFunction;
use crate::table::HypergroupTable;

pub const DEFAULT_SEED: u64 = 0x5eed_2016;

const ATTEMPTS: usize = 5;
const GAP_THRESHOLD: f64 = 1e-8;
const MULTIPLICATIVITY_TOL: f64 = 1e-9;

/// Characters of a finite commutative hypergroup.
///
/// Row `i` holds `chi_i(x)` for every element `x` in table order. Every
/// character of a finite table lies in the support of the Plancherel measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    pub values: Vec<Vec<Complex64>>,
    pub plancherel: Vec<f64>,
    pub positive: Vec<bool>,
    pub in_support: Vec<bool>,
    pub generator: usize,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.values[i]
    }

    /// Index of the constant character 1, if present.
    pub fn trivial(&self) -> Option<usize> {
        self.values.iter().position(|row| {
            row.iter()
                .all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-9)
        })
    }

    /// Finds the row matching `target` within `tol` (sup norm).
    pub fn find(&self, target: &[Complex64], tol: f64) -> Option<usize> {
        self.values
            .iter()
            .position(|row| row.iter().zip(target).all(|(a, b)| (a - b).norm() <= tol))
    }
}

pub fn characters(h: &HypergroupTable<f64>) -> Result<CharacterTable> {
    characters_seeded(h, DEFAULT_SEED)
}

/// Joint eigenvectors of the commuting translation matrices
/// `(A_x)_{y,z} = c^z_{x,y}`.
///
/// The matrices are normal in `l^2(lambda)`, so after the similarity
/// `D^{1/2} A_x D^{-1/2}` a random real combination of their Hermitian and
/// skew-Hermitian parts is a Hermitian matrix whose eigenvectors are the
/// joint eigenvectors whenever its spectrum is simple.
pub fn characters_seeded(h: &HypergroupTable<f64>, seed: u64) -> Result<CharacterTable> {
    if h.is_truncated() {
        return Err(HypergroupError::NotFinite);
    }
    if !h.is_commutative() {
        return Err(HypergroupError::InvalidTable(
            "characters need a commutative table".into(),
        ));
    }
    let n = h.size();
    let sqrt_haar: Vec<f64> = h.haar().iter().map(|l| l.sqrt()).collect();
    let mats: Vec<DMatrix<f64>> = (0..n)
        .map(|x| {
            let mut m = DMatrix::zeros(n, n);
            for y in 0..n {
                for (z, c) in h.product(x, y).expect("complete table") {
                    m[(y, *z)] = c * sqrt_haar[y] / sqrt_haar[*z];
                }
            }
            m
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_reason = String::new();
    for _ in 0..ATTEMPTS {
        let mut k = DMatrix::<Complex64>::zeros(n, n);
        for m in &mats {
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(-1.0..1.0);
            for i in 0..n {
                for j in 0..n {
                    let sym = m[(i, j)] + m[(j, i)];
                    let skew = m[(i, j)] - m[(j, i)];
                    k[(i, j)] += Complex64::new(a * sym, b * skew);
                }
            }
        }
        let eig = SymmetricEigen::new(k);
        let mut evals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        evals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let spread = (evals[n - 1] - evals[0]).abs().max(1.0);
        let min_gap = evals
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if n > 1 && min_gap < GAP_THRESHOLD * spread {
            last_reason = format!("eigenvalue gap {min_gap:e} below threshold");
            continue;
        }
        match extract(h, &eig.eigenvectors, &sqrt_haar) {
            Ok(rows) => return Ok(finish(h, rows)),
            Err(reason) => last_reason = reason,
        }
    }
    Err(HypergroupError::DegenerateSpectrum {
        attempts: ATTEMPTS,
        reason: last_reason,
    })
}

fn extract(
    h: &HypergroupTable<f64>,
    vecs: &DMatrix<Complex64>,
    sqrt_haar: &[f64],
) -> std::result::Result<Vec<Vec<Complex64>>, String> {
    let n = h.size();
    let e = h.identity();
    let haar = h.haar();
    let mut rows = Vec::with_capacity(n);
    for col in 0..n {
        let mut chi: Vec<Complex64> = (0..n).map(|z| vecs[(z, col)] / sqrt_haar[z]).collect();
        let at_e = chi[e];
        if at_e.norm() < 1e-12 {
            return Err("eigenvector vanishes at the identity".into());
        }
        for v in chi.iter_mut() {
            *v /= at_e;
        }
        // One Rayleigh pass: chi(x) = <A_x chi, chi>_lambda / <chi, chi>_lambda.
        let norm2: f64 = (0..n).map(|y| haar[y] * chi[y].norm_sqr()).sum();
        let refined: Vec<Complex64> = (0..n)
            .map(|x| {
                let mut acc = Complex64::new(0.0, 0.0);
                for y in 0..n {
                    let mut ax = Complex64::new(0.0, 0.0);
                    for (z, c) in h.product(x, y).expect("complete") {
                        ax += chi[*z] * *c;
                    }
                    acc += ax * chi[y].conj() * haar[y];
                }
                acc / norm2
            })
            .collect();
        chi = refined;
        chi[e] = Complex64::new(1.0, 0.0);
        for v in chi.iter_mut() {
            if v.im.abs() < 1e-13 {
                v.im = 0.0;
            }
            if v.re.abs() < 1e-14 {
                v.re = 0.0;
            }
        }
        let residual = multiplicativity_residual(h, &chi);
        if residual > MULTIPLICATIVITY_TOL {
            return Err(format!("multiplicativity residual {residual:e}"));
        }
        rows.push(chi);
    }
    for i in 0..n {
        for j in 0..i {
            let d = rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if d < 1e-6 {
                return Err("two eigenvectors gave the same character".into());
            }
        }
    }
    Ok(rows)
}

/// `max_{x,y} |chi(x) chi(y) - sum_z c^z_{x,y} chi(z)|` over available pairs.
pub fn multiplicativity_residual(h: &HypergroupTable<f64>, chi: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    for (x, y) in h.available_pairs() {
        let mut s = Complex64::new(0.0, 0.0);
        for (z, c) in h.product(x, y).expect("available") {
            s += chi[*z] * *c;
        }
        worst = worst.max((chi[x] * chi[y] - s).norm());
    }
    worst
}

fn finish(h: &HypergroupTable<f64>, mut rows: Vec<Vec<Complex64>>) -> CharacterTable {
    let generator = h.generator().unwrap_or(h.identity());
    rows.sort_by(|a, b| order_rows(a, b, generator));
    let plancherel = rows.iter().map(|r| plancherel(h, r)).collect();
    let positive = rows
        .iter()
        .map(|r| r.iter().all(|v| v.im == 0.0 && v.re > 0.0))
        .collect();
    let n = rows.len();
    CharacterTable {
        values: rows,
        plancherel,
        positive,
        in_support: vec![true; n],
        generator,
    }
}

/// Descending by real part at the generator; ties broken lexicographically
/// (descending) on real parts, then imaginary parts.
fn order_rows(a: &[Complex64], b: &[Complex64], g: usize) -> Ordering {
    let key = |r: &[Complex64]| -> Vec<f64> {
        std::iter::once(r[g].re)
            .chain(r.iter().map(|v| v.re))
            .chain(r.iter().map(|v| v.im))
            .collect()
    };
    for (x, y) in key(a).into_iter().zip(key(b)) {
        if (x - y).abs() > 1e-9 {
            return y.partial_cmp(&x).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

/// `varpi(chi) = (sum_x lambda(x) |chi(x)|^2)^{-1}`.
pub fn plancherel(h: &HypergroupTable<f64>, chi: &[Complex64]) -> f64 {
    let s: f64 = chi
        .iter()
        .zip(h.haar())
        .map(|(v, l)| l * v.norm_sqr())
        .sum();
    1.0 / s
}

/// `u^(chi) = sum_x lambda(x) u(x) conj(chi(x))` for each character row.
pub fn fourier(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    u: &HFunction<Complex64>,
) -> Vec<Complex64> {
    table
        .values
        .iter()
        .map(|chi| u.iter().map(|(x, v)| v * chi[x].conj() * h.haar()[x]).sum())
        .collect()
}

/// `u(x) = sum_chi varpi(chi) u^(chi) chi(x)`.
pub fn inverse_fourier(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    coeffs: &[Complex64],
) -> HFunction<Complex64> {
    let n = h.size();
    let vals: Vec<Complex64> = (0..n)
        .map(|x| {
            table
                .values
                .iter()
                .zip(&table.plancherel)
                .zip(coeffs)
                .map(|((chi, w), c)| c * chi[x] * *w)
                .sum()
        })
        .collect();
    HFunction::from_pairs(vals.into_iter().enumerate().filter(|(_, v)| v.norm() > 0.0))
}
