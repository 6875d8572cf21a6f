//! Finitely supported functions on a hypergroup and the convolution calculus.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{Num, Zero};

use crate::error::{HypergroupError, Result};
use crate::scalar::Scalar;
use crate::table::HypergroupTable;

/// Values a function may take on a table with constants in `T`.
pub trait Amplitude<T: Scalar>: Clone + std::fmt::Debug + Num + Send + Sync {
    fn scale(&self, t: &T) -> Self;
    fn conj(&self) -> Self;
    fn magnitude(&self) -> f64;
}

impl<T: Scalar> Amplitude<T> for T {
    fn scale(&self, t: &T) -> Self {
        self.clone() * t.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64_lossy()
    }
}

impl Amplitude<f64> for Complex64 {
    fn scale(&self, t: &f64) -> Self {
        self * *t
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// A finitely supported function, stored as sorted `(index, value)` pairs
/// with zero values dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct HFunction<S> {
    entries: Vec<(usize, S)>,
}

impl<S: Clone + Zero> HFunction<S> {
    pub fn zero() -> Self {
        HFunction {
            entries: Vec::new(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut map: BTreeMap<usize, S> = BTreeMap::new();
        for (i, v) in pairs {
            let slot = map.entry(i).or_insert_with(S::zero);
            *slot = slot.clone() + v;
        }
        HFunction {
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[S]) -> Self {
        Self::from_pairs(values.iter().cloned().enumerate())
    }

    pub fn delta(x: usize, value: S) -> Self {
        Self::from_pairs([(x, value)])
    }

    pub fn get(&self, x: usize) -> S {
        self.entries
            .binary_search_by_key(&x, |(i, _)| *i)
            .map(|k| self.entries[k].1.clone())
            .unwrap_or_else(|_| S::zero())
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn dense(&self, n: usize) -> Vec<S> {
        let mut out = vec![S::zero(); n];
        for (i, v) in &self.entries {
            if *i < n {
                out[*i] = v.clone();
            }
        }
        out
    }

    pub fn map<R: Clone + Zero>(&self, f: impl Fn(usize, &S) -> R) -> HFunction<R> {
        HFunction::from_pairs(self.entries.iter().map(|(i, v)| (*i, f(*i, v))))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<S: Clone + Zero + std::ops::Sub<Output = S>> HFunction<S> {
    pub fn sub(&self, other: &Self) -> Self {
        let neg = other
            .entries
            .iter()
            .map(|(i, v)| (*i, S::zero() - v.clone()));
        Self::from_pairs(self.entries.iter().cloned().chain(neg))
    }
}

impl<S: Clone + Zero + std::ops::Mul<Output = S>> HFunction<S> {
    /// Pointwise product.
    pub fn pointwise(&self, other: &Self) -> Self {
        Self::from_pairs(
            self.entries
                .iter()
                .map(|(i, v)| (*i, v.clone() * other.get(*i))),
        )
    }
}

impl From<HFunction<f64>> for HFunction<Complex64> {
    fn from(f: HFunction<f64>) -> Self {
        f.map(|_, v| Complex64::new(*v, 0.0))
    }
}

/// The probability measure `x * y` as a function `z -> c^z_{x,y}`.
pub fn convolve_point<T: Scalar>(
    h: &HypergroupTable<T>,
    x: usize,
    y: usize,
) -> Result<HFunction<T>> {
    Ok(HFunction::from_pairs(h.product(x, y)?.iter().cloned()))
}

/// Product of two finitely supported measures, given as sparse coefficient maps.
pub fn convolve_measures<T: Scalar, S: Amplitude<T>>(
    h: &HypergroupTable<T>,
    mu: &HFunction<S>,
    nu: &HFunction<S>,
) -> Result<HFunction<S>> {
    let mut acc = Vec::new();
    for (x, a) in mu.iter() {
        for (y, b) in nu.iter() {
            let ab = a.clone() * b.clone();
            for (z, c) in h.product(x, y)? {
                acc.push((*z, ab.scale(c)));
            }
        }
    }
    Ok(HFunction::from_pairs(acc))
}

/// `f ._lambda g (x) = sum_y f(y) g(y~ . x) lambda(y)`.
///
/// Evaluated through forward products only: for a hypergroup with Haar
/// weights, `lambda(x) c^z_{y~,x} = lambda(z) c^x_{y,z}`, so the result is the
/// density of the measure `(f lambda) * (g lambda)` with respect to `lambda`.
/// This never consults products outside `supp f * supp g`.
pub fn convolve_functions<T: Scalar, S: Amplitude<T>>(
    h: &HypergroupTable<T>,
    f: &HFunction<S>,
    g: &HFunction<S>,
) -> Result<HFunction<S>> {
    validate(h, f)?;
    validate(h, g)?;
    let haar = h.haar();
    let fm = f.map(|i, v| v.scale(&haar[i]));
    let gm = g.map(|i, v| v.scale(&haar[i]));
    let m = convolve_measures(h, &fm, &gm)?;
    Ok(m.map(|i, v| v.scale(&(T::one() / haar[i].clone()))))
}

/// Left translation `L_x f (y) = f(x~ . y) = sum_z c^z_{x~,y} f(z)`,
/// evaluated as `sum_z f(z) lambda(z) c^y_{x,z} / lambda(y)`.
pub fn translate<T: Scalar, S: Amplitude<T>>(
    h: &HypergroupTable<T>,
    x: usize,
    f: &HFunction<S>,
) -> Result<HFunction<S>> {
    h.check_index(x)?;
    validate(h, f)?;
    let haar = h.haar();
    let mut acc = Vec::new();
    for (z, v) in f.iter() {
        let w = v.scale(&haar[z]);
        for (y, c) in h.product(x, z)? {
            acc.push((*y, w.scale(&(c.clone() / haar[*y].clone()))));
        }
    }
    Ok(HFunction::from_pairs(acc))
}

/// Direct evaluation of `L_x f` from the defining formula, one output point at a time.
/// Requires the products `(x~, y)` for every `y` in the table.
pub fn translate_direct<T: Scalar, S: Amplitude<T>>(
    h: &HypergroupTable<T>,
    x: usize,
    f: &HFunction<S>,
) -> Result<HFunction<S>> {
    let xt = h.inv(x);
    let mut out = Vec::new();
    for y in 0..h.size() {
        let mut acc = S::zero();
        for (z, c) in h.product(xt, y)? {
            acc = acc + f.get(*z).scale(c);
        }
        out.push((y, acc));
    }
    Ok(HFunction::from_pairs(out))
}

/// `f~(x) = conj f(x~)`; with a trivial modular function this is also `f*`.
pub fn involute<T: Scalar, S: Amplitude<T>>(
    h: &HypergroupTable<T>,
    f: &HFunction<S>,
) -> HFunction<S> {
    HFunction::from_pairs(f.iter().map(|(x, v)| (h.inv(x), Amplitude::<T>::conj(v))))
}

/// `sum_x lambda(x) |f(x)|`.
pub fn l1_norm<T: Scalar, S: Amplitude<T>>(h: &HypergroupTable<T>, f: &HFunction<S>) -> f64 {
    f.iter()
        .map(|(x, v)| h.haar()[x].to_f64_lossy() * v.magnitude())
        .sum()
}

/// `(sum_x lambda(x) |f(x)|^2)^(1/2)`.
pub fn l2_norm<T: Scalar, S: Amplitude<T>>(h: &HypergroupTable<T>, f: &HFunction<S>) -> f64 {
    f.iter()
        .map(|(x, v)| h.haar()[x].to_f64_lossy() * v.magnitude().powi(2))
        .sum::<f64>()
        .sqrt()
}

fn validate<T: Scalar, S>(h: &HypergroupTable<T>, f: &HFunction<S>) -> Result<()>
where
    S: Clone + Zero,
{
    match f.max_index() {
        Some(i) if i >= h.size() => Err(HypergroupError::IndexOutOfRange {
            index: i,
            size: h.size(),
        }),
        _ => Ok(()),
    }
}

/// Haar weights `lambda(x) = 1 / c^e_{x,x~}`, checked against the invariance
/// identity `lambda(y) c^z_{x,y} = lambda(z) c^y_{x~,z}` on every available
/// triple. Truncated tables fall back to the stored weight where the product
/// `(x, x~)` leaves the section.
pub fn haar_weights<T: Scalar>(h: &HypergroupTable<T>, tol: f64) -> Result<Vec<T>> {
    let e = h.identity();
    let mut weights = Vec::with_capacity(h.size());
    for x in 0..h.size() {
        let xt = h.inv(x);
        match h.product(x, xt) {
            Ok(row) => {
                let c = row
                    .iter()
                    .find(|(z, _)| *z == e)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_else(T::zero);
                if c.is_zero() {
                    return Err(HypergroupError::ZeroDiagonal(x));
                }
                weights.push(T::one() / c);
            }
            Err(HypergroupError::TruncationOverflow { .. }) => weights.push(h.haar()[x].clone()),
            Err(err) => return Err(err),
        }
    }
    let violation = haar_invariance_violation(h, &weights);
    if violation > tol {
        return Err(HypergroupError::InvalidTable(format!(
            "Haar invariance identity violated by {violation:e}"
        )));
    }
    Ok(weights)
}

/// Largest `|lambda(y) c^z_{x,y} - lambda(z) c^y_{x~,z}|` over available triples.
pub fn haar_invariance_violation<T: Scalar>(h: &HypergroupTable<T>, weights: &[T]) -> f64 {
    let mut worst = 0.0f64;
    for (x, y) in h.available_pairs() {
        let row = h.product(x, y).expect("available pair");
        for (z, c) in row {
            let lhs = weights[y].clone() * c.clone();
            let rhs = match h.coeff(h.inv(x), *z, y) {
                Ok(v) => weights[*z].clone() * v,
                Err(_) => continue,
            };
            worst = worst.max((lhs - rhs).abs().to_f64_lossy());
        }
    }
    worst
}
