//! Fourier algebra, reduced Fourier-Stieltjes and multiplier norms.
//!
//! On finite commutative tables every norm is computed in character space.
//! On truncated sections only certified intervals are reported.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::builders::product;
use crate::error::{HypergroupError, Result};
use crate::function::{convolve_functions, involute, l2_norm, HFunction};
use crate::group::FiniteGroup;
use crate::spectral::{fourier, inverse_fourier, CharacterTable};
use crate::table::HypergroupTable;

type C = Complex64;

fn c0() -> C {
    C::new(0.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, other: &Interval, tol: f64) -> bool {
        self.lower <= other.lower + tol && other.upper <= self.upper + tol
    }

    pub fn contains_value(&self, v: f64, tol: f64) -> bool {
        self.lower - tol <= v && v <= self.upper + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormValue {
    Exact(f64),
    Bounds(Interval),
}

impl NormValue {
    pub fn upper(&self) -> f64 {
        match self {
            NormValue::Exact(v) => *v,
            NormValue::Bounds(i) => i.upper,
        }
    }

    pub fn lower(&self) -> f64 {
        match self {
            NormValue::Exact(v) => *v,
            NormValue::Bounds(i) => i.lower,
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Exact(v) => write!(f, "{v:.12}"),
            NormValue::Bounds(i) => write!(f, "[{:.12}, {:.12}]", i.lower, i.upper),
        }
    }
}

/// `u = xi ._lambda eta~` with `||xi||_2 ||eta||_2` equal to the norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub xi: HFunction<C>,
    pub eta: HFunction<C>,
    /// `max_x |(xi ._lambda eta~)(x) - u(x)|`.
    pub residual: f64,
    pub norm_product: f64,
}

/// Extremal test function for the reduced Fourier-Stieltjes norm.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWitness {
    pub f: HFunction<C>,
    /// `|sum_x lambda(x) u(x) f(x)|`.
    pub pairing: f64,
    /// `||lambda(f)||` on `l^2(lambda)`, from singular values.
    pub operator_norm: f64,
}

fn as_complex(u: &HFunction<f64>) -> HFunction<C> {
    u.clone().into()
}

fn phase(z: C) -> C {
    if z.norm() == 0.0 {
        c0()
    } else {
        z / z.norm()
    }
}

/// `||u||_A = sum_chi varpi(chi) |u^(chi)|`, with the optimal factorization
/// `xi = F^-1(|u^|^{1/2} phase(u^))`, `eta = F^-1(|u^|^{1/2})`.
pub fn norm_a(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    u: &HFunction<C>,
) -> Result<(f64, Factorization)> {
    require_finite(h)?;
    let uhat = fourier(h, table, u);
    let value: f64 = uhat
        .iter()
        .zip(&table.plancherel)
        .map(|(v, w)| w * v.norm())
        .sum();
    let root: Vec<C> = uhat.iter().map(|v| C::new(v.norm().sqrt(), 0.0)).collect();
    let xi_hat: Vec<C> = uhat.iter().zip(&root).map(|(v, r)| r * phase(*v)).collect();
    let xi = inverse_fourier(h, table, &xi_hat);
    let eta = inverse_fourier(h, table, &root);
    let recon = convolve_functions(h, &xi, &involute(h, &eta))?;
    let residual = (0..h.size())
        .map(|x| (recon.get(x) - u.get(x)).norm())
        .fold(0.0, f64::max);
    let norm_product = l2_norm(h, &xi) * l2_norm(h, &eta);
    Ok((
        value,
        Factorization {
            xi,
            eta,
            residual,
            norm_product,
        },
    ))
}

/// `||u||_{B_lambda} = sup { |sum lambda u f| : ||lambda(f)|| <= 1 }`, attained
/// at `f = conj(F^-1(phase(u^)))`. The pairing is evaluated directly in
/// function space and the constraint by singular values.
pub fn norm_blambda(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    u: &HFunction<C>,
) -> Result<(f64, DualWitness)> {
    require_finite(h)?;
    let uhat = fourier(h, table, u);
    let g = inverse_fourier(
        h,
        table,
        &uhat.iter().map(|v| phase(*v)).collect::<Vec<_>>(),
    );
    let f = g.map(|_, v| v.conj());
    let pairing: C = f.iter().map(|(x, v)| v * u.get(x) * h.haar()[x]).sum();
    let operator_norm = convolution_operator_norm(h, &f)?;
    let value = if operator_norm > 0.0 {
        pairing.norm() / operator_norm
    } else {
        0.0
    };
    Ok((
        value,
        DualWitness {
            f,
            pairing: pairing.norm(),
            operator_norm,
        },
    ))
}

/// Finite tables: the full Fourier-Stieltjes norm under the convention
/// `C*(H) = C*_lambda(H)`.
pub fn norm_b_finite(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    u: &HFunction<C>,
) -> Result<f64> {
    Ok(norm_blambda(h, table, u)?.0)
}

/// Matrix of `f -> f ._lambda g` in the orthonormal basis `delta_x / sqrt(lambda(x))`.
pub fn convolution_matrix(h: &HypergroupTable<f64>, f: &HFunction<C>) -> Result<DMatrix<C>> {
    let n = h.size();
    let mut m = DMatrix::<C>::zeros(n, n);
    for z in 0..n {
        let col = convolve_functions(h, f, &HFunction::delta(z, C::new(1.0, 0.0)))?;
        for (x, v) in col.iter() {
            m[(x, z)] = v * (h.haar()[x] / h.haar()[z]).sqrt();
        }
    }
    Ok(m)
}

/// `||lambda(f)||` as the largest singular value of [`convolution_matrix`].
pub fn convolution_operator_norm(h: &HypergroupTable<f64>, f: &HFunction<C>) -> Result<f64> {
    let m = convolution_matrix(h, f)?;
    Ok(m.singular_values().iter().copied().fold(0.0, f64::max))
}

/// Coefficients `m(chi', chi'')` of `u chi' = sum m(chi', chi'') chi''`; column
/// `j` holds the expansion of `u chi_j`.
pub fn multiplier_matrix(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    u: &HFunction<C>,
) -> Result<DMatrix<C>> {
    require_finite(h)?;
    let n = h.size();
    if table.len() != n {
        return Err(HypergroupError::SingularCharacterBasis);
    }
    let basis = DMatrix::from_fn(n, n, |x, i| table.values[i][x]);
    let lu = basis.lu();
    let mut out = DMatrix::<C>::zeros(n, n);
    for j in 0..n {
        let rhs = DVector::from_fn(n, |x, _| u.get(x) * table.values[j][x]);
        let sol = lu
            .solve(&rhs)
            .ok_or(HypergroupError::SingularCharacterBasis)?;
        out.set_column(j, &sol);
    }
    Ok(out)
}

/// Operator norm of multiplication by `u` on `A(H)`: since
/// `||sum b_chi chi||_A = sum |b_chi|`, this is the largest column l^1 sum of
/// [`multiplier_matrix`].
pub fn norm_ma(h: &HypergroupTable<f64>, table: &CharacterTable, u: &HFunction<C>) -> Result<f64> {
    let m = multiplier_matrix(h, table, u)?;
    Ok((0..m.ncols())
        .map(|j| m.column(j).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max))
}

fn require_finite(h: &HypergroupTable<f64>) -> Result<()> {
    if h.is_truncated() {
        Err(HypergroupError::NotFinite)
    } else {
        Ok(())
    }
}

/// Characters of `H1 x H2` as products `chi_i (x) chi_j`, row `i * |H2^| + j`.
pub fn product_characters(t1: &CharacterTable, t2: &CharacterTable) -> CharacterTable {
    let n2 = t2.values.first().map_or(0, Vec::len);
    let mut values = Vec::with_capacity(t1.len() * t2.len());
    let mut plancherel = Vec::new();
    let mut positive = Vec::new();
    for (a, ra) in t1.values.iter().enumerate() {
        for (b, rb) in t2.values.iter().enumerate() {
            values.push(
                ra.iter()
                    .flat_map(|x| rb.iter().map(move |y| x * y))
                    .collect::<Vec<_>>(),
            );
            plancherel.push(t1.plancherel[a] * t2.plancherel[b]);
            positive.push(t1.positive[a] && t2.positive[b]);
        }
    }
    let n = values.len();
    CharacterTable {
        values,
        plancherel,
        positive,
        in_support: vec![true; n],
        generator: t1.generator * n2 + t2.generator,
    }
}

/// Fourier algebra norms on a finite, possibly non-commutative, table through
/// the trace-class picture: the functional `f -> sum lambda u f` is
/// `f -> Tr(rho lambda(f))` for a unique `rho` in the von Neumann algebra, and
/// `||u||_A = ||rho||_1`.
pub struct TraceNormContext {
    n: usize,
    ops: Vec<DMatrix<C>>,
    gram: nalgebra::LU<C, nalgebra::Dyn, nalgebra::Dyn>,
    haar: Vec<f64>,
}

impl TraceNormContext {
    pub fn new(h: &HypergroupTable<f64>) -> Result<Self> {
        require_finite(h)?;
        let n = h.size();
        let haar = h.haar().to_vec();
        // S_k = matrix of lambda(delta_k): entry [x][z] = lambda(k) sqrt(lambda(x)/lambda(z)) c^z_{k~,x}.
        let ops: Vec<DMatrix<C>> = (0..n)
            .map(|k| {
                let mut m = DMatrix::<C>::zeros(n, n);
                for x in 0..n {
                    for (z, c) in h.product(h.inv(k), x)? {
                        m[(x, *z)] = C::new(haar[k] * (haar[x] / haar[*z]).sqrt() * c, 0.0);
                    }
                }
                Ok(m)
            })
            .collect::<Result<_>>()?;
        let gram = DMatrix::from_fn(n, n, |j, k| (&ops[k] * &ops[j]).trace());
        Ok(TraceNormContext {
            n,
            ops,
            gram: gram.lu(),
            haar,
        })
    }

    pub fn norm_a(&self, u: &[C]) -> Result<f64> {
        let rhs = DVector::from_fn(self.n, |j, _| u[j] * self.haar[j]);
        let coef = self
            .gram
            .solve(&rhs)
            .ok_or(HypergroupError::SingularCharacterBasis)?;
        let mut rho = DMatrix::<C>::zeros(self.n, self.n);
        for (k, a) in coef.iter().enumerate() {
            rho += &self.ops[k] * *a;
        }
        Ok(rho.singular_values().iter().sum())
    }
}

/// Result of the completely bounded multiplier approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct McbApprox {
    pub value: f64,
    pub per_group: Vec<(String, f64)>,
}

/// `max_G ||u (x) 1_G||_{MA(H x G)}` over the given groups, each evaluated
/// as the largest ratio `||(u (x) 1) w||_A / ||w||_A` over the test vectors
/// `w = chi (x) w_G` (`chi` a character of `H`; `w_G` the constant 1, the
/// point mass at the identity and a seeded random function). For commutative
/// `H` these test vectors attain the multiplier norm on `H x G`.
pub fn norm_mcb_approx(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    u: &HFunction<C>,
    groups: &[FiniteGroup],
    seed: u64,
) -> Result<McbApprox> {
    let contexts = mcb_contexts(h, groups)?;
    mcb_with_contexts(h, table, u, &contexts, seed)
}

/// Precomputed product tables for repeated [`norm_mcb_approx`] calls.
pub type McbContexts = Vec<(String, usize, TraceNormContext)>;

pub fn mcb_contexts(h: &HypergroupTable<f64>, groups: &[FiniteGroup]) -> Result<McbContexts> {
    groups
        .iter()
        .map(|g| {
            let gh: HypergroupTable<f64> = g.as_hypergroup();
            Ok((
                g.name().to_string(),
                g.order(),
                TraceNormContext::new(&product(h, &gh)?)?,
            ))
        })
        .collect()
}

pub fn mcb_with_contexts(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    u: &HFunction<C>,
    contexts: &[(String, usize, TraceNormContext)],
    seed: u64,
) -> Result<McbApprox> {
    let n = h.size();
    let mut per_group = Vec::new();
    for (name, order, ctx) in contexts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random: Vec<C> = (0..*order)
            .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut point = vec![c0(); *order];
        point[0] = C::new(1.0, 0.0);
        let tests = [vec![C::new(1.0, 0.0); *order], point, random];
        let mut best = 0.0f64;
        for chi in &table.values {
            for wg in &tests {
                let w: Vec<C> = (0..n * order)
                    .map(|i| chi[i / order] * wg[i % order])
                    .collect();
                let uw: Vec<C> = w
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * u.get(i / order))
                    .collect();
                let denom = ctx.norm_a(&w)?;
                if denom > 1e-14 {
                    best = best.max(ctx.norm_a(&uw)? / denom);
                }
            }
        }
        per_group.push((name.clone(), best));
    }
    let value = per_group.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    Ok(McbApprox { value, per_group })
}

/// Certified interval for `||u||_A` and `||u||_{B_lambda}` on a section.
///
/// Upper: the factorization `u = u ._lambda delta_e` gives `||u||_{l^2(lambda)}`.
/// Lower: `||lambda(f)|| <= sum lambda |f| chi0`, so pairing with point
/// masses gives `max_x |u(x)| / chi0(x)`.
pub fn section_interval(
    h: &HypergroupTable<f64>,
    u: &HFunction<C>,
    chi0: &[f64],
) -> Result<Interval> {
    if let Some(x) = u.max_index() {
        h.check_index(x)?;
    }
    let upper = l2_norm(h, u);
    let lower = u
        .iter()
        .map(|(x, v)| v.norm() / chi0[x])
        .fold(0.0, f64::max);
    Ok(Interval { lower, upper })
}

/// Interval for `||u||_{MA(H)}` on a section, using
/// `||u||_{MA(H)} = ||u||_{B_lambda(H_0)}` for the deformed table `H_0`.
pub fn section_ma_interval(deformed: &HypergroupTable<f64>, u: &HFunction<C>) -> Result<Interval> {
    section_interval(deformed, u, &vec![1.0; deformed.size()])
}

/// All norms of one function.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub table: String,
    pub norm_a: NormValue,
    pub norm_blambda: NormValue,
    pub norm_ma: NormValue,
    pub norm_b: Option<f64>,
    pub norm_mcb_approx: Option<McbApprox>,
    pub factorization: Option<Factorization>,
    pub dual_witness: Option<DualWitness>,
    /// Finite tables use `C*(H) = C*_lambda(H)`, so `B(H) = B_lambda(H)`.
    pub b_convention: bool,
}

/// Every finite-table norm of `u`, with witnesses.
pub fn finite_report(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    u: &HFunction<C>,
    groups: &[FiniteGroup],
    seed: u64,
) -> Result<NormReport> {
    let (a, fact) = norm_a(h, table, u)?;
    let (b, dual) = norm_blambda(h, table, u)?;
    let ma = norm_ma(h, table, u)?;
    let mcb = if groups.is_empty() {
        None
    } else {
        Some(norm_mcb_approx(h, table, u, groups, seed)?)
    };
    Ok(NormReport {
        table: h.name().to_string(),
        norm_a: NormValue::Exact(a),
        norm_blambda: NormValue::Exact(b),
        norm_ma: NormValue::Exact(ma),
        norm_b: Some(b),
        norm_mcb_approx: mcb,
        factorization: Some(fact),
        dual_witness: Some(dual),
        b_convention: true,
    })
}

/// Intervals on a section, given `chi0` and the deformed table.
pub fn section_report(
    h: &HypergroupTable<f64>,
    chi0: &[f64],
    deformed: &HypergroupTable<f64>,
    u: &HFunction<C>,
) -> Result<NormReport> {
    let a = section_interval(h, u, chi0)?;
    let ma = section_ma_interval(deformed, u)?;
    Ok(NormReport {
        table: h.name().to_string(),
        norm_a: NormValue::Bounds(a),
        norm_blambda: NormValue::Bounds(a),
        norm_ma: NormValue::Bounds(ma),
        norm_b: None,
        norm_mcb_approx: None,
        factorization: None,
        dual_witness: None,
        b_convention: false,
    })
}

/// Seeded random complex functions with entries in the unit square.
pub fn random_functions(n: usize, count: usize, seed: u64) -> Vec<HFunction<C>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            HFunction::from_dense(
                &(0..n)
                    .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

/// Largest `|norm_MA - norm_Blambda|` and `|norm_Blambda - norm_A|` over a batch.
pub fn equality_gaps(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    us: &[HFunction<C>],
) -> Result<(f64, f64)> {
    let gaps = us
        .par_iter()
        .map(|u| {
            let a = norm_a(h, table, u)?.0;
            let b = norm_blambda(h, table, u)?.0;
            let m = norm_ma(h, table, u)?;
            Ok(((m - b).abs(), (b - a).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(gaps
        .into_iter()
        .fold((0.0f64, 0.0f64), |(x, y), (a, b)| (x.max(a), y.max(b))))
}

/// Real-valued convenience wrapper.
pub fn norm_a_real(
    h: &HypergroupTable<f64>,
    table: &CharacterTable,
    u: &HFunction<f64>,
) -> Result<f64> {
    Ok(norm_a(h, table, &as_complex(u))?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::conjugacy_hypergroup;
    use crate::group;
    use crate::spectral::characters;

    fn conj_s3() -> (HypergroupTable<f64>, CharacterTable) {
        let h = conjugacy_hypergroup::<f64>(&group::symmetric3());
        let t = characters(&h).unwrap();
        (h, t)
    }

    #[test]
    fn character_and_delta_e_have_norm_one() {
        let (h, t) = conj_s3();
        for row in &t.values {
            let u = HFunction::from_dense(row);
            let (a, f) = norm_a(&h, &t, &u).unwrap();
            assert!((a - 1.0).abs() < 1e-12);
            assert!(f.residual < 1e-10 && (f.norm_product - a).abs() < 1e-9);
            assert!((norm_blambda(&h, &t, &u).unwrap().0 - 1.0).abs() < 1e-10);
            assert!((norm_ma(&h, &t, &u).unwrap() - 1.0).abs() < 1e-10);
        }
        let de = HFunction::delta(0, C::new(1.0, 0.0));
        assert!((norm_a(&h, &t, &de).unwrap().0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn z2_multiplier_norm_is_l1_of_coefficients() {
        let h: HypergroupTable<f64> = group::cyclic(2).unwrap().as_hypergroup();
        let t = characters(&h).unwrap();
        let (a, b) = (0.7, -1.9);
        // a * triv + b * sgn
        let u = HFunction::from_dense(&[C::new(a + b, 0.0), C::new(a - b, 0.0)]);
        assert!((norm_ma(&h, &t, &u).unwrap() - (a.abs() + b.abs())).abs() < 1e-12);
    }

    #[test]
    fn trace_route_matches_character_route() {
        let (h, t) = conj_s3();
        let ctx = TraceNormContext::new(&h).unwrap();
        for u in random_functions(3, 10, 7) {
            let a = norm_a(&h, &t, &u).unwrap().0;
            assert!((ctx.norm_a(&u.dense(3)).unwrap() - a).abs() < 1e-9);
        }
    }

    #[test]
    fn mcb_equals_ma_on_conj_s3() {
        let (h, t) = conj_s3();
        let u = HFunction::from_dense(&t.values[2]);
        let groups = [group::cyclic(2).unwrap(), group::symmetric3()];
        let r = norm_mcb_approx(&h, &t, &u, &groups, 1).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{r:?}");
    }
}
