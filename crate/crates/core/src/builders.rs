//! Constructors: hypergroups from finite groups, built-in families and products.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{HypergroupError, Result};
use crate::group::FiniteGroup;
use crate::quantum::{FusionData, FusionRing};
use crate::scalar::{Rational, Scalar};
use crate::spectral::characters;
use crate::table::{HypergroupTable, TableSpec};

/// Default cap on the number of elements of a product table.
pub const PRODUCT_SIZE_CAP: usize = 10_000;

/// A named family of hypergroups with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Cyclic {
        n: usize,
    },
    GroupFromCayley {
        name: String,
        table: Vec<Vec<usize>>,
    },
    Conj {
        group: String,
    },
    Irr {
        group: String,
    },
    /// Fusion rules of SU(2); element `a` is the irreducible of dimension `a + 1`.
    Su2Fusion {
        radius: usize,
    },
    Suq2Fusion {
        q: f64,
        radius: usize,
    },
    /// Radial functions on the homogeneous tree with `q + 1` neighbours.
    TreeRadial {
        q: u32,
        radius: usize,
    },
    Chebyshev {
        radius: usize,
    },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Cyclic { .. } => "cyclic",
            FamilySpec::GroupFromCayley { .. } => "group_from_cayley",
            FamilySpec::Conj { .. } => "conj",
            FamilySpec::Irr { .. } => "irr",
            FamilySpec::Su2Fusion { .. } => "su2_fusion",
            FamilySpec::Suq2Fusion { .. } => "suq2_fusion",
            FamilySpec::TreeRadial { .. } => "tree_radial",
            FamilySpec::Chebyshev { .. } => "chebyshev",
        }
    }

    pub fn radius(&self) -> Option<usize> {
        match self {
            FamilySpec::Su2Fusion { radius }
            | FamilySpec::Suq2Fusion { radius, .. }
            | FamilySpec::TreeRadial { radius, .. }
            | FamilySpec::Chebyshev { radius } => Some(*radius),
            _ => None,
        }
    }

    /// `true` for families indexed by the non-negative integers and generated
    /// by element 1 through a three-term recurrence.
    pub fn is_polynomial(&self) -> bool {
        self.radius().is_some()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HypergroupError::InvalidParameters(m));
        match self {
            FamilySpec::Cyclic { n } if *n == 0 => bad("cyclic order must be at least 1".into()),
            FamilySpec::Suq2Fusion { q, .. } if !(*q > 0.0 && *q <= 1.0) => {
                bad(format!("q = {q} outside (0, 1]"))
            }
            FamilySpec::TreeRadial { q, .. } if *q < 2 => {
                bad(format!("tree branching q = {q} must be at least 2"))
            }
            _ => match self.radius() {
                Some(0) => bad("truncation radius must be at least 1".into()),
                _ => Ok(()),
            },
        }
    }

    /// Coefficients `(p_n, b_n, r_n)` of `delta_1 * delta_n = p_n delta_{n-1} +
    /// b_n delta_n + r_n delta_{n+1}` for polynomial families.
    pub fn recurrence<T: Scalar>(&self, n: usize) -> Option<(T, T, T)> {
        let z = T::zero;
        match self {
            FamilySpec::Su2Fusion { .. } | FamilySpec::Chebyshev { .. } => {
                let den = 2 * (n as i64 + 1);
                Some((T::ratio(n as i64, den), z(), T::ratio(n as i64 + 2, den)))
            }
            FamilySpec::Suq2Fusion { q, .. } => {
                let q: T = T::from_f64(*q)?;
                let qi = |c: usize| q_integer(&q, c);
                let den = qi(2) * qi(n + 1);
                Some((qi(n) / den.clone(), z(), qi(n + 2) / den))
            }
            FamilySpec::TreeRadial { q, .. } => {
                if n == 0 {
                    return Some((z(), z(), T::one()));
                }
                let q = *q as i64;
                Some((T::ratio(1, q + 1), z(), T::ratio(q, q + 1)))
            }
            _ => None,
        }
    }

    /// Index from which the recurrence coefficients are constant, if any.
    pub fn homogeneous_from(&self) -> Option<usize> {
        match self {
            FamilySpec::TreeRadial { .. } => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cyclic { n } => write!(f, "cyclic(n={n})"),
            FamilySpec::GroupFromCayley { name, .. } => write!(f, "group_from_cayley({name})"),
            FamilySpec::Conj { group } => write!(f, "conj({group})"),
            FamilySpec::Irr { group } => write!(f, "irr({group})"),
            FamilySpec::Su2Fusion { radius } => write!(f, "su2_fusion(R={radius})"),
            FamilySpec::Suq2Fusion { q, radius } => write!(f, "suq2_fusion(q={q},R={radius})"),
            FamilySpec::TreeRadial { q, radius } => write!(f, "tree_radial(q={q},R={radius})"),
            FamilySpec::Chebyshev { radius } => write!(f, "chebyshev(R={radius})"),
        }
    }
}

impl std::str::FromStr for FamilySpec {
    type Err = HypergroupError;

    /// Parses the [`fmt::Display`] form, e.g. `tree_radial(q=2,R=40)` or `conj(S3)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || HypergroupError::InvalidParameters(format!("unrecognized family `{s}`"));
        let (name, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let params: BTreeMap<&str, &str> = args
            .split(',')
            .filter_map(|kv| kv.split_once('='))
            .collect();
        let num = |k: &str| -> Result<usize> {
            params.get(k).and_then(|v| v.parse().ok()).ok_or_else(bad)
        };
        let spec = match name {
            "cyclic" => FamilySpec::Cyclic { n: num("n")? },
            "conj" => FamilySpec::Conj {
                group: args.to_string(),
            },
            "irr" => FamilySpec::Irr {
                group: args.to_string(),
            },
            "su2_fusion" => FamilySpec::Su2Fusion { radius: num("R")? },
            "suq2_fusion" => FamilySpec::Suq2Fusion {
                q: params
                    .get("q")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(bad)?,
                radius: num("R")?,
            },
            "tree_radial" => FamilySpec::TreeRadial {
                q: num("q")? as u32,
                radius: num("R")?,
            },
            "chebyshev" => FamilySpec::Chebyshev { radius: num("R")? },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// `[c]_q = (q^c - q^-c) / (q - q^-1)`, with `[c]_1 = c`.
pub fn q_integer<T: Scalar>(q: &T, c: usize) -> T {
    if *q == T::one() {
        return T::from_usize(c).expect("small integer");
    }
    // [c]_q = q^{-(c-1)} (1 + q^2 + ... + q^{2(c-1)}), which stays exact for rational q.
    let q2 = q.clone() * q.clone();
    let mut sum = T::zero();
    let mut pow = T::one();
    for _ in 0..c {
        sum = sum + pow.clone();
        pow = pow * q2.clone();
    }
    let mut scale = T::one();
    for _ in 1..c {
        scale = scale * q.clone();
    }
    if c == 0 {
        return T::zero();
    }
    sum / scale
}

/// Builds the hypergroup of a family.
pub fn family<T: Scalar>(spec: &FamilySpec) -> Result<HypergroupTable<T>> {
    spec.validate()?;
    let table = match spec {
        FamilySpec::Cyclic { n } => crate::group::cyclic(*n)?.as_hypergroup(),
        FamilySpec::GroupFromCayley { name, table } => {
            FiniteGroup::from_cayley_table(name.clone(), table.clone())?.as_hypergroup()
        }
        FamilySpec::Conj { group } => conjugacy_hypergroup(&crate::group::by_name(group)?),
        FamilySpec::Irr { group } => irr_hypergroup::<T>(&crate::group::by_name(group)?)?,
        FamilySpec::Su2Fusion { radius } | FamilySpec::Chebyshev { radius } => {
            polynomial_family(spec, *radius, |n| format!("{}", n + 1))?
        }
        FamilySpec::Suq2Fusion { radius, .. } => {
            polynomial_family(spec, *radius, |n| format!("{}", n + 1))?
        }
        FamilySpec::TreeRadial { radius, .. } => {
            polynomial_family(spec, *radius, |n| n.to_string())?
        }
    };
    Ok(table.with_family(Some(spec.clone())))
}

/// Section `{0..=radius}` of a polynomial hypergroup generated by element 1.
///
/// Products are generated from the recurrence by
/// `delta_m = (delta_1 * delta_{m-1} - b_{m-1} delta_{m-1} - p_{m-1} delta_{m-2}) / r_{m-1}`.
/// Only products whose support fits in the section are stored. Haar weights
/// come from `1 / c^0_{n,n}`, computed on the larger working range `2 radius`.
fn polynomial_family<T: Scalar>(
    spec: &FamilySpec,
    radius: usize,
    label: impl Fn(usize) -> String,
) -> Result<HypergroupTable<T>> {
    let coeffs: Vec<(T, T, T)> = (0..=2 * radius)
        .map(|n| spec.recurrence::<T>(n))
        .collect::<Option<_>>()
        .ok_or_else(|| HypergroupError::InvalidParameters(format!("{spec} has no recurrence")))?;
    if coeffs.iter().any(|(_, _, r)| r.is_zero()) {
        return Err(HypergroupError::InvalidParameters(
            "zero forward coefficient".into(),
        ));
    }

    let gen_row = |k: usize| -> Vec<(usize, T)> {
        let (p, b, r) = coeffs[k].clone();
        let mut row = Vec::new();
        if k > 0 && !p.is_zero() {
            row.push((k - 1, p));
        }
        if !b.is_zero() {
            row.push((k, b));
        }
        row.push((k + 1, r));
        row
    };

    // rows[n][m] = delta_m * delta_n for m <= n, m + n <= 2 radius, n <= radius.
    let mut rows: Vec<Vec<BTreeMap<usize, T>>> = Vec::with_capacity(radius + 1);
    for n in 0..=radius {
        let mut by_m: Vec<BTreeMap<usize, T>> = Vec::new();
        by_m.push(BTreeMap::from([(n, T::one())]));
        for m in 1..=n {
            let prev = &by_m[m - 1];
            let mut next: BTreeMap<usize, T> = BTreeMap::new();
            for (k, a) in prev {
                for (z, c) in gen_row(*k) {
                    let slot = next.entry(z).or_insert_with(T::zero);
                    *slot = slot.clone() + a.clone() * c;
                }
            }
            if m >= 2 {
                let (p, b, r) = coeffs[m - 1].clone();
                for (k, a) in prev {
                    let slot = next.entry(*k).or_insert_with(T::zero);
                    *slot = slot.clone() - b.clone() * a.clone();
                }
                for (k, a) in &by_m[m - 2] {
                    let slot = next.entry(*k).or_insert_with(T::zero);
                    *slot = slot.clone() - p.clone() * a.clone();
                }
                for v in next.values_mut() {
                    *v = v.clone() / r.clone();
                }
            }
            next.retain(|_, v| !v.is_zero());
            by_m.push(next);
        }
        rows.push(by_m);
    }

    let haar: Vec<T> = (0..=radius)
        .map(|n| {
            let c = rows[n][n].get(&0).cloned().unwrap_or_else(T::zero);
            if c.is_zero() {
                Err(HypergroupError::ZeroDiagonal(n))
            } else {
                Ok(T::one() / c)
            }
        })
        .collect::<Result<_>>()?;

    let mut entries = Vec::new();
    for (n, by_m) in rows.iter().enumerate() {
        for (m, row) in by_m.iter().enumerate() {
            if m + n <= radius {
                for (z, v) in row {
                    entries.push((m, n, *z, v.clone()));
                }
            }
        }
    }
    let table = HypergroupTable::new(TableSpec {
        name: spec.to_string(),
        labels: (0..=radius).map(label).collect(),
        identity: 0,
        involution: (0..=radius).collect(),
        entries,
        haar: Some(haar),
        truncation: Some(radius),
    })?;
    Ok(table.with_generator(Some(1)))
}

/// `Conj(G)`: conjugacy classes with `c^{C_k}_{C_i,C_j} = #{(a,b) in C_i x C_j :
/// ab = g_k} |C_k| / (|C_i| |C_j|)` for a fixed representative `g_k`.
pub fn conjugacy_hypergroup<T: Scalar>(g: &FiniteGroup) -> HypergroupTable<T> {
    let classes = g.conjugacy_classes();
    let mut class_of = vec![0usize; g.order()];
    for (k, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = k;
        }
    }
    let m = classes.len();
    let mut entries = Vec::new();
    for i in 0..m {
        for j in i..m {
            let mut counts = vec![0i64; m];
            for &a in &classes[i] {
                for &b in &classes[j] {
                    let ab = g.mul(a, b);
                    let k = class_of[ab];
                    if classes[k][0] == ab {
                        counts[k] += 1;
                    }
                }
            }
            let denom = (classes[i].len() * classes[j].len()) as i64;
            for (k, &cnt) in counts.iter().enumerate() {
                if cnt > 0 {
                    entries.push((i, j, k, T::ratio(cnt * classes[k].len() as i64, denom)));
                }
            }
        }
    }
    let involution = classes.iter().map(|c| class_of[g.inv(c[0])]).collect();
    let labels = classes
        .iter()
        .enumerate()
        .map(|(k, c)| format!("C{k}[{}]", g.labels()[c[0]]))
        .collect();
    HypergroupTable::new(TableSpec {
        name: format!("conj({})", g.name()),
        labels,
        identity: 0,
        involution,
        entries,
        haar: None,
        truncation: None,
    })
    .expect("class algebra of a group is a hypergroup")
}

/// Irreducible characters of a finite group, recovered from the characters
/// of `Conj(G)`.
#[derive(Debug, Clone)]
pub struct GroupCharacters {
    pub classes: Vec<Vec<usize>>,
    /// Character degrees, ascending.
    pub dims: Vec<usize>,
    /// `values[pi][k] = chi_pi(C_k)` (unnormalized traces).
    pub values: Vec<Vec<Complex64>>,
    /// Index of the contragredient representation.
    pub dual: Vec<usize>,
}

impl GroupCharacters {
    pub fn order(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// `<f, g> = (1/|G|) sum_C |C| f(C) conj(g(C))`.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        let total: Complex64 = self
            .classes
            .iter()
            .zip(f.iter().zip(g))
            .map(|(c, (a, b))| a * b.conj() * c.len() as f64)
            .sum();
        total / self.order() as f64
    }
}

/// Characters of `G` through the spectral engine on `Conj(G)`.
///
/// A character `chi^` of `Conj(G)` equals `chi_pi(C) / d_pi`; orthogonality
/// gives `d_pi^2 = |G| / sum_C |C| |chi^(C)|^2`.
pub fn group_characters(g: &FiniteGroup) -> Result<GroupCharacters> {
    let conj = conjugacy_hypergroup::<f64>(g);
    let table = characters(&conj)?;
    let classes = g.conjugacy_classes();
    let order = g.order() as f64;
    let mut irreps: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for row in &table.values {
        let s: f64 = row
            .iter()
            .zip(&classes)
            .map(|(v, c)| v.norm_sqr() * c.len() as f64)
            .sum();
        let d = (order / s).sqrt();
        let rounded = d.round();
        if (d - rounded).abs() > 1e-6 || rounded < 1.0 {
            return Err(HypergroupError::NonIntegerDimension { value: d });
        }
        let dim = rounded as usize;
        irreps.push((dim, row.iter().map(|v| v * rounded).collect()));
    }
    // Stable: equal degrees keep the spectral order.
    irreps.sort_by_key(|(d, _)| *d);
    let values: Vec<Vec<Complex64>> = irreps.iter().map(|(_, v)| v.clone()).collect();
    let dual = values
        .iter()
        .map(|v| {
            let conj: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
            values
                .iter()
                .position(|w| w.iter().zip(&conj).all(|(a, b)| (a - b).norm() < 1e-6))
                .ok_or_else(|| {
                    HypergroupError::InvalidTable(
                        "character set not closed under conjugation".into(),
                    )
                })
        })
        .collect::<Result<_>>()?;
    Ok(GroupCharacters {
        classes,
        dims: irreps.iter().map(|(d, _)| *d).collect(),
        values,
        dual,
    })
}

/// Representation ring of a finite group: `N^gamma_{alpha beta} = <chi_alpha chi_beta, chi_gamma>`.
pub fn group_fusion_ring(g: &FiniteGroup) -> Result<FusionRing> {
    let gc = group_characters(g)?;
    let k = gc.dims.len();
    let mut mult = BTreeMap::new();
    for a in 0..k {
        for b in 0..k {
            let prod: Vec<Complex64> = gc.values[a]
                .iter()
                .zip(&gc.values[b])
                .map(|(x, y)| x * y)
                .collect();
            for c in 0..k {
                let n = gc.inner(&prod, &gc.values[c]);
                let r = n.re.round();
                if (n.re - r).abs() > 1e-6 || n.im.abs() > 1e-6 || r < 0.0 {
                    return Err(HypergroupError::NonIntegerDimension { value: n.re });
                }
                if r > 0.0 {
                    mult.insert((a, b, c), r as u64);
                }
            }
        }
    }
    let labels = (0..k)
        .map(|i| {
            if i == 0 {
                "triv".to_string()
            } else {
                format!("pi{i}")
            }
        })
        .collect();
    FusionRing::new(FusionData {
        name: format!("rep({})", g.name()),
        labels,
        conj: gc.dual.clone(),
        mult,
        ndims: gc.dims.iter().map(|d| *d as u64).collect(),
        ddims: None,
        q: None,
        truncated: false,
    })
}

/// `Irr(G)` with the convolution `alpha . beta = sum_gamma (d_gamma / d_alpha d_beta) N^gamma_{alpha beta} gamma`.
pub fn irr_hypergroup<T: Scalar>(g: &FiniteGroup) -> Result<HypergroupTable<T>> {
    let ring = group_fusion_ring(g)?;
    Ok(ring
        .hypergroup_n::<T>()?
        .with_name(format!("irr({})", g.name())))
}

/// `H1 x H2` with `c^{(z,w)}_{(x,u),(y,v)} = c^z_{x,y} c^w_{u,v}`; element
/// `(x, u)` has index `x * |H2| + u`.
pub fn product<T: Scalar>(
    h1: &HypergroupTable<T>,
    h2: &HypergroupTable<T>,
) -> Result<HypergroupTable<T>> {
    product_capped(h1, h2, PRODUCT_SIZE_CAP)
}

pub fn product_capped<T: Scalar>(
    h1: &HypergroupTable<T>,
    h2: &HypergroupTable<T>,
    cap: usize,
) -> Result<HypergroupTable<T>> {
    let (n1, n2) = (h1.size(), h2.size());
    let size = n1.saturating_mul(n2);
    if size > cap {
        return Err(HypergroupError::SizeOverflow { size, cap });
    }
    let idx = |a: usize, b: usize| a * n2 + b;
    let mut entries = Vec::new();
    let p1 = h1.available_pairs();
    let p2 = h2.available_pairs();
    for &(x, y) in &p1 {
        let r1 = h1.product(x, y)?;
        for &(u, v) in &p2 {
            let (a, b) = (idx(x, u), idx(y, v));
            for (z, c1) in r1 {
                for (w, c2) in h2.product(u, v)? {
                    entries.push((a, b, idx(*z, *w), c1.clone() * c2.clone()));
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(size);
    let mut involution = Vec::with_capacity(size);
    let mut haar = Vec::with_capacity(size);
    for x in 0..n1 {
        for u in 0..n2 {
            labels.push(format!("({},{})", h1.label(x), h2.label(u)));
            involution.push(idx(h1.inv(x), h2.inv(u)));
            haar.push(h1.haar()[x].clone() * h2.haar()[u].clone());
        }
    }
    let truncation = match (h1.truncation(), h2.truncation()) {
        (None, None) => None,
        (a, b) => Some(a.unwrap_or(0).max(b.unwrap_or(0))),
    };
    HypergroupTable::new(TableSpec {
        name: format!("{} x {}", h1.name(), h2.name()),
        labels,
        identity: idx(h1.identity(), h2.identity()),
        involution,
        entries,
        haar: Some(haar),
        truncation,
    })
}

/// Exact `Conj(G)` tables of the built-in groups used throughout the tests.
pub fn builtin_groups() -> Vec<FiniteGroup> {
    let mut out = vec![
        crate::group::cyclic(2).expect("valid"),
        crate::group::cyclic(4).expect("valid"),
    ];
    out.extend([
        crate::group::symmetric3(),
        crate::group::dihedral4(),
        crate::group::quaternion8(),
        crate::group::alternating4(),
    ]);
    out
}

/// Exact Irr table.
pub fn irr_exact(g: &FiniteGroup) -> Result<HypergroupTable<Rational>> {
    irr_hypergroup(g)
}
