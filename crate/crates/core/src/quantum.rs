//! Fusion rings of compact (quantum) groups, their two hypergroups, and the
//! Fourier isomorphism between central functions on a finite group and the
//! Fourier algebra of its dual hypergroup.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::builders::{q_integer, GroupCharacters};
use crate::error::{HypergroupError, Result};
use crate::function::HFunction;
use crate::group::FiniteGroup;
use crate::scalar::Scalar;
use crate::table::{HypergroupTable, TableSpec};

/// Raw data of a fusion ring.
#[derive(Debug, Clone)]
pub struct FusionData {
    pub name: String,
    pub labels: Vec<String>,
    pub conj: Vec<usize>,
    /// `(alpha, beta, gamma) -> N^gamma_{alpha beta}`; zero entries omitted.
    pub mult: BTreeMap<(usize, usize, usize), u64>,
    pub ndims: Vec<u64>,
    /// Quantum dimensions; equal to `ndims` when absent.
    pub ddims: Option<Vec<f64>>,
    /// Deformation parameter of `SU_q(2)`; quantum dimensions become `[n]_q`.
    pub q: Option<f64>,
    /// When set, only rows `alpha x beta` with at least one entry are known.
    pub truncated: bool,
}

/// Labels with conjugation, multiplicities, classical and quantum dimensions.
/// The trivial label is index 0.
#[derive(Debug, Clone)]
pub struct FusionRing {
    data: FusionData,
    rows: BTreeSet<(usize, usize)>,
    ddims: Vec<f64>,
}

impl FusionRing {
    pub fn new(data: FusionData) -> Result<Self> {
        let k = data.labels.len();
        if k == 0 {
            return Err(HypergroupError::InvalidTable(
                "fusion ring without labels".into(),
            ));
        }
        if data.conj.len() != k || data.ndims.len() != k {
            return Err(HypergroupError::InvalidTable(
                "conj/ndims length does not match labels".into(),
            ));
        }
        for &c in &data.conj {
            if c >= k {
                return Err(HypergroupError::IndexOutOfRange { index: c, size: k });
            }
        }
        for (i, &c) in data.conj.iter().enumerate() {
            if data.conj[c] != i {
                return Err(HypergroupError::InvalidTable(format!(
                    "conjugation is not an involution at {i}"
                )));
            }
        }
        for &(a, b, c) in data.mult.keys() {
            for i in [a, b, c] {
                if i >= k {
                    return Err(HypergroupError::IndexOutOfRange { index: i, size: k });
                }
            }
        }
        let ddims = match (&data.ddims, data.q) {
            (Some(d), _) => {
                if d.len() != k {
                    return Err(HypergroupError::InvalidTable(
                        "ddims length does not match labels".into(),
                    ));
                }
                d.clone()
            }
            (None, Some(q)) => data
                .ndims
                .iter()
                .map(|&n| q_integer(&q, n as usize))
                .collect(),
            (None, None) => data.ndims.iter().map(|&n| n as f64).collect(),
        };
        let rows: BTreeSet<(usize, usize)> = if data.truncated {
            data.mult.keys().map(|&(a, b, _)| (a, b)).collect()
        } else {
            (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).collect()
        };
        let ring = FusionRing { data, rows, ddims };
        ring.validate()?;
        Ok(ring)
    }

    fn validate(&self) -> Result<()> {
        let k = self.len();
        let bar = |a: usize| self.data.conj[a];
        if self.data.conj[0] != 0 {
            return Err(HypergroupError::Reciprocity(
                "trivial label is not self-conjugate".into(),
            ));
        }
        for &(a, b) in &self.rows {
            for c in 0..k {
                let n = self.n(a, b, c);
                if self.rows.contains(&(bar(a), c)) && self.n(bar(a), c, b) != n {
                    return Err(HypergroupError::Reciprocity(format!(
                        "N^{c}_({a},{b}) = {n} but N^{b}_({},{c}) = {}",
                        bar(a),
                        self.n(bar(a), c, b)
                    )));
                }
                if self.rows.contains(&(c, bar(b))) && self.n(c, bar(b), a) != n {
                    return Err(HypergroupError::Reciprocity(format!(
                        "N^{c}_({a},{b}) = {n} but N^{a}_({c},{}) = {}",
                        bar(b),
                        self.n(c, bar(b), a)
                    )));
                }
            }
            let expect = u64::from(b == bar(a));
            if self.n(a, b, 0) != expect {
                return Err(HypergroupError::Reciprocity(format!(
                    "trivial multiplicity in ({a},{b}) is {}, expected {expect}",
                    self.n(a, b, 0)
                )));
            }
            let row = self.decomposition(a, b);
            if row.is_empty() {
                return Err(HypergroupError::InvalidTable(format!(
                    "empty fusion row ({a},{b})"
                )));
            }
            let nsum: u64 = row.iter().map(|(c, m)| m * self.data.ndims[*c]).sum();
            if nsum != self.data.ndims[a] * self.data.ndims[b] {
                return Err(HypergroupError::InvalidTable(format!(
                    "classical dimensions are not multiplicative on ({a},{b})"
                )));
            }
            let dsum: f64 = row.iter().map(|(c, m)| *m as f64 * self.ddims[*c]).sum();
            let dprod = self.ddims[a] * self.ddims[b];
            if (dsum - dprod).abs() > 1e-9 * dprod.max(1.0) {
                return Err(HypergroupError::InvalidTable(format!(
                    "quantum dimensions are not multiplicative on ({a},{b})"
                )));
            }
        }
        Ok(())
    }

    /// Fusion rules of `SU_q(2)` on the labels of dimension `1..=radius + 1`.
    /// `q = 1` gives `SU(2)`.
    pub fn su_q2(q: f64, radius: usize) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(HypergroupError::InvalidParameters(format!(
                "q = {q} outside (0, 1]"
            )));
        }
        let mut mult = BTreeMap::new();
        for a in 0..=radius {
            for b in 0..=radius - a {
                let lo = a.abs_diff(b);
                for c in (lo..=a + b).step_by(2) {
                    mult.insert((a, b, c), 1);
                }
            }
        }
        FusionRing::new(FusionData {
            name: format!("su_q2(q={q})"),
            labels: (1..=radius + 1).map(|d| d.to_string()).collect(),
            conj: (0..=radius).collect(),
            mult,
            ndims: (1..=radius as u64 + 1).collect(),
            ddims: None,
            q: Some(q),
            truncated: true,
        })
    }

    pub fn name(&self) -> &str {
        &self.data.name
    }

    pub fn len(&self) -> usize {
        self.data.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.data.labels
    }

    pub fn conj(&self) -> &[usize] {
        &self.data.conj
    }

    pub fn ndims(&self) -> &[u64] {
        &self.data.ndims
    }

    pub fn ddims(&self) -> &[f64] {
        &self.ddims
    }

    pub fn q(&self) -> Option<f64> {
        self.data.q
    }

    pub fn explicit_ddims(&self) -> Option<&[f64]> {
        self.data.ddims.as_deref()
    }

    pub fn is_truncated(&self) -> bool {
        self.data.truncated
    }

    pub fn multiplicities(&self) -> &BTreeMap<(usize, usize, usize), u64> {
        &self.data.mult
    }

    pub fn has_row(&self, a: usize, b: usize) -> bool {
        self.rows.contains(&(a, b))
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u64 {
        self.data.mult.get(&(a, b, c)).copied().unwrap_or(0)
    }

    /// `alpha (x) beta = sum_gamma N^gamma_{alpha beta} gamma`, as `(gamma, N)` pairs.
    pub fn decomposition(&self, a: usize, b: usize) -> Vec<(usize, u64)> {
        self.data
            .mult
            .range((a, b, 0)..=(a, b, usize::MAX))
            .map(|(&(_, _, c), &m)| (c, m))
            .collect()
    }

    /// `max_alpha |n_alpha - d_alpha| < tol`.
    pub fn is_kac(&self, tol: f64) -> bool {
        self.data
            .ndims
            .iter()
            .zip(&self.ddims)
            .all(|(n, d)| (*n as f64 - d).abs() < tol)
    }

    /// `(Irr, n)`: `alpha . beta = sum_gamma (n_gamma / n_alpha n_beta) N^gamma_{alpha beta} gamma`.
    pub fn hypergroup_n<T: Scalar>(&self) -> Result<HypergroupTable<T>> {
        let dims: Vec<T> = self
            .data
            .ndims
            .iter()
            .map(|&n| T::from_u64(n).expect("integer"))
            .collect();
        self.hypergroup_with(dims, format!("({}, n)", self.name()))
    }

    /// `(Irr, d)` with the quantum dimensions. For `SU_q(2)` the dimensions are
    /// computed as q-integers in `T`, so rational `q` gives an exact table.
    pub fn hypergroup_d<T: Scalar>(&self) -> Result<HypergroupTable<T>> {
        let dims: Vec<T> = match (self.data.q, &self.data.ddims) {
            (Some(q), None) => {
                let q =
                    T::from_f64(q).ok_or_else(|| HypergroupError::InvalidParameters("q".into()))?;
                self.data
                    .ndims
                    .iter()
                    .map(|&n| q_integer(&q, n as usize))
                    .collect()
            }
            _ => self
                .ddims
                .iter()
                .map(|&d| {
                    T::from_f64(d)
                        .ok_or_else(|| HypergroupError::InvalidParameters("dimension".into()))
                })
                .collect::<Result<_>>()?,
        };
        self.hypergroup_with(dims, format!("({}, d)", self.name()))
    }

    fn hypergroup_with<T: Scalar>(&self, dims: Vec<T>, name: String) -> Result<HypergroupTable<T>> {
        let k = self.len();
        let mut entries = Vec::new();
        for &(a, b) in &self.rows {
            let den = dims[a].clone() * dims[b].clone();
            for (c, m) in self.decomposition(a, b) {
                let v = dims[c].clone() * T::from_u64(m).expect("integer") / den.clone();
                entries.push((a, b, c, v));
            }
        }
        let squares: Vec<T> = dims.iter().map(|d| d.clone() * d.clone()).collect();
        let table = HypergroupTable::new(TableSpec {
            name,
            labels: self.data.labels.clone(),
            identity: 0,
            involution: self.data.conj.clone(),
            entries,
            haar: if self.data.truncated {
                Some(squares.clone())
            } else {
                None
            },
            truncation: if self.data.truncated {
                Some(k - 1)
            } else {
                None
            },
        })?;
        // Haar weights must be the squared dimensions.
        for (x, (l, s)) in table.haar().iter().zip(&squares).enumerate() {
            let gap = (l.clone() - s.clone()).abs().to_f64_lossy();
            if gap > 1e-9 * s.to_f64_lossy().max(1.0) {
                return Err(HypergroupError::InvalidTable(format!(
                    "Haar weight of {x} differs from its squared dimension"
                )));
            }
        }
        Ok(table.with_generator(if k > 1 { Some(1) } else { None }))
    }
}

/// A class function on a finite group, one value per conjugacy class
/// (classes in the order of [`FiniteGroup::conjugacy_classes`]).
#[derive(Debug, Clone, PartialEq)]
pub struct CentralFunction {
    pub group: String,
    pub values: Vec<Complex64>,
}

impl CentralFunction {
    pub fn new(g: &FiniteGroup, values: Vec<Complex64>) -> Result<Self> {
        let k = g.conjugacy_classes().len();
        if values.len() != k {
            return Err(HypergroupError::InvalidTable(format!(
                "{} class values, expected {k}",
                values.len()
            )));
        }
        Ok(CentralFunction {
            group: g.name().to_string(),
            values,
        })
    }

    /// `||f||_1 = (1/|G|) sum_g |f(g)|`, Haar probability on `G`.
    pub fn l1_norm(&self, chars: &GroupCharacters) -> f64 {
        let total: f64 = chars
            .classes
            .iter()
            .zip(&self.values)
            .map(|(c, v)| c.len() as f64 * v.norm())
            .sum();
        total / chars.order() as f64
    }

    /// `(f * g)(x) = (1/|G|) sum_y f(y) g(y^-1 x)`.
    pub fn convolve(&self, other: &CentralFunction, g: &FiniteGroup) -> CentralFunction {
        let classes = g.conjugacy_classes();
        let fe = expand(&self.values, &classes, g.order());
        let ge = expand(&other.values, &classes, g.order());
        let order = g.order();
        let values = classes
            .iter()
            .map(|c| {
                let x = c[0];
                let s: Complex64 = (0..order).map(|y| fe[y] * ge[g.mul(g.inv(y), x)]).sum();
                s / order as f64
            })
            .collect();
        CentralFunction {
            group: self.group.clone(),
            values,
        }
    }
}

fn expand(values: &[Complex64], classes: &[Vec<usize>], order: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); order];
    for (c, v) in classes.iter().zip(values) {
        for &x in c {
            out[x] = *v;
        }
    }
    out
}

/// `f^(alpha) = (1/n_alpha) <f, chi_alpha>`, which equals
/// `(1/n_alpha)(1/|G|) sum_g f(g) chi_{conj alpha}(g)`.
pub fn hat_map(chars: &GroupCharacters, f: &CentralFunction) -> HFunction<Complex64> {
    HFunction::from_pairs(
        chars
            .values
            .iter()
            .zip(&chars.dims)
            .enumerate()
            .map(|(a, (chi, d))| (a, chars.inner(&f.values, chi) / *d as f64)),
    )
}

/// Inverse of [`hat_map`]: `f = sum_alpha n_alpha f^(alpha) chi_alpha`.
pub fn inverse_hat_map(
    chars: &GroupCharacters,
    group: &str,
    fhat: &HFunction<Complex64>,
) -> CentralFunction {
    let k = chars.classes.len();
    let values = (0..k)
        .map(|c| {
            fhat.iter()
                .map(|(a, v)| v * chars.values[a][c] * chars.dims[a] as f64)
                .sum()
        })
        .collect();
    CentralFunction {
        group: group.to_string(),
        values,
    }
}

/// `T*(mu)(pi) = (1/d_pi) sum_g chi_pi(g) mu(g)` for a central measure given by
/// its mass at each group element (constant on classes).
pub fn zm_to_b(chars: &GroupCharacters, mu: &CentralFunction) -> HFunction<Complex64> {
    HFunction::from_pairs(
        chars
            .values
            .iter()
            .zip(&chars.dims)
            .enumerate()
            .map(|(a, (chi, d))| {
                let s: Complex64 = chars
                    .classes
                    .iter()
                    .zip(chi.iter().zip(&mu.values))
                    .map(|(c, (x, m))| x * m * c.len() as f64)
                    .sum();
                (a, s / *d as f64)
            }),
    )
}

/// Convolution of central measures given by point masses: `(mu * nu)(x) = sum_y mu(y) nu(y^-1 x)`.
pub fn convolve_measures(
    g: &FiniteGroup,
    mu: &CentralFunction,
    nu: &CentralFunction,
) -> CentralFunction {
    let mut out = mu.convolve(nu, g);
    for v in out.values.iter_mut() {
        *v *= g.order() as f64;
    }
    out
}

/// Total variation `sum_g |mu(g)|` of a central measure.
pub fn total_variation(chars: &GroupCharacters, mu: &CentralFunction) -> f64 {
    chars
        .classes
        .iter()
        .zip(&mu.values)
        .map(|(c, v)| c.len() as f64 * v.norm())
        .sum()
}

/// The class function `chi_pi`.
pub fn character_function(chars: &GroupCharacters, group: &str, pi: usize) -> CentralFunction {
    CentralFunction {
        group: group.to_string(),
        values: chars.values[pi].clone(),
    }
}
