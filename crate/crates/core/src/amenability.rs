//! Diagonal multipliers, approximate diagonals and weak-amenability nets.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::builders::product;
use crate::error::{HypergroupError, Result};
use crate::function::{convolve_functions, involute, l2_norm, HFunction};
use crate::norms::{
    norm_a, norm_blambda, norm_ma, product_characters, section_ma_interval, Interval,
};
use crate::scalar::Scalar;
use crate::spectral::{
    characters, check_p2, chi0, jacobi_operator, voit_deform, CharacterTable, P2Options, P2Status,
};
use crate::table::HypergroupTable;

type C = Complex64;

fn complex<T: Scalar>(u: &HFunction<T>) -> HFunction<C> {
    u.map(|_, v| C::new(v.to_f64_lossy(), 0.0))
}

/// `(u (x) v)(x, y) = u(x) v(y)`, indexed `x * n + y`.
pub fn tensor<S: Clone + num_traits::Zero + std::ops::Mul<Output = S>>(
    u: &HFunction<S>,
    v: &HFunction<S>,
    n: usize,
) -> HFunction<S> {
    HFunction::from_pairs(u.iter().flat_map(|(x, a)| {
        v.iter()
            .map(move |(y, b)| (x * n + y, a.clone() * b.clone()))
    }))
}

/// `psi(x, x) = 1 / lambda(x)`, zero off the diagonal.
pub fn diagonal_psi<T: Scalar>(h: &HypergroupTable<T>) -> HFunction<T> {
    let n = h.size();
    HFunction::from_pairs(
        h.haar()
            .iter()
            .enumerate()
            .map(|(x, l)| (x * n + x, T::one() / l.clone())),
    )
}

/// `x -> rho(x, x)`.
pub fn restrict_to_diagonal<S: Clone + num_traits::Zero>(
    n: usize,
    rho: &HFunction<S>,
) -> HFunction<S> {
    HFunction::from_pairs(
        rho.iter()
            .filter(|(i, _)| i / n == i % n)
            .map(|(i, v)| (i / n, v.clone())),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvertedMultiplier<T> {
    pub inverse: HFunction<T>,
    pub value_set_size: usize,
    /// `||phi^-1||_{MA(H)}` on finite tables.
    pub ma_norm: Option<f64>,
}

fn value_set<T: Scalar>(values: impl Iterator<Item = T>) -> usize {
    values
        .map(|v| v.format_value())
        .collect::<BTreeSet<_>>()
        .len()
}

/// Pointwise reciprocal of a nowhere-vanishing multiplier. On sections the
/// value set is compared between the inner half and the whole section; growth
/// means the finite value set hypothesis fails.
pub fn invert_multiplier<T: Scalar>(
    h: &HypergroupTable<T>,
    phi: &HFunction<T>,
) -> Result<InvertedMultiplier<T>> {
    let n = h.size();
    let dense = phi.dense(n);
    if let Some(x) = dense.iter().position(|v| v.is_zero()) {
        return Err(HypergroupError::ZeroValue(x));
    }
    let value_set_size = value_set(dense.iter().cloned());
    if h.is_truncated() {
        let small = value_set(dense[..n.div_ceil(2)].iter().cloned());
        if small < value_set_size {
            return Err(HypergroupError::UnboundedValueSet {
                small,
                large: value_set_size,
            });
        }
    }
    let inverse = HFunction::from_dense(
        &dense
            .iter()
            .map(|v| T::one() / v.clone())
            .collect::<Vec<_>>(),
    );
    let ma_norm = if h.is_truncated() {
        None
    } else {
        let hf = h.to_f64();
        Some(norm_ma(&hf, &characters(&hf)?, &complex(&inverse))?)
    };
    Ok(InvertedMultiplier {
        inverse,
        value_set_size,
        ma_norm,
    })
}

/// `1_Delta = (phi^-1 (x) 1) psi` on `H x H`.
#[derive(Debug, Clone)]
pub struct IndicatorDiagonal<T> {
    pub indicator: HFunction<T>,
    pub psi: HFunction<T>,
    pub phi: HFunction<T>,
    pub phi_inverse: InvertedMultiplier<T>,
    /// `true` when the constructed function equals the diagonal indicator
    /// exactly (bit for bit in floating point).
    pub exact: bool,
    /// Largest pointwise deviation from the indicator.
    pub deviation: f64,
    pub ma_norm: f64,
    pub a_norm: f64,
    pub psi_blambda_norm: f64,
}

/// Square table together with its product characters.
pub struct SquareTable {
    pub table: HypergroupTable<f64>,
    pub characters: CharacterTable,
}

pub fn square_table(h: &HypergroupTable<f64>) -> Result<SquareTable> {
    let t = characters(h)?;
    let table = product(h, h)?;
    let characters = product_characters(&t, &t);
    Ok(SquareTable { table, characters })
}

pub fn indicator_diagonal<T: Scalar>(h: &HypergroupTable<T>) -> Result<IndicatorDiagonal<T>> {
    if h.is_truncated() {
        return Err(HypergroupError::NotFinite);
    }
    let n = h.size();
    let psi = diagonal_psi(h);
    let phi = restrict_to_diagonal(n, &psi);
    let phi_inverse = invert_multiplier(h, &phi)?;
    let ones = HFunction::from_dense(&vec![T::one(); n]);
    let indicator = tensor(&phi_inverse.inverse, &ones, n).pointwise(&psi);
    let target = HFunction::from_pairs((0..n).map(|x| (x * n + x, T::one())));
    let diff = indicator.sub(&target);
    let exact = diff.is_zero();
    let deviation = diff
        .iter()
        .map(|(_, v)| v.to_f64_lossy().abs())
        .fold(0.0, f64::max);
    let square = square_table(&h.to_f64())?;
    let ind = complex(&indicator);
    let ma_norm = norm_ma(&square.table, &square.characters, &ind)?;
    let a_norm = norm_a(&square.table, &square.characters, &ind)?.0;
    let psi_blambda_norm = norm_blambda(&square.table, &square.characters, &complex(&psi))?.0;
    Ok(IndicatorDiagonal {
        indicator,
        psi,
        phi,
        phi_inverse,
        exact,
        deviation,
        ma_norm,
        a_norm,
        psi_blambda_norm,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximateDiagonal {
    /// `sup ||m_e||_{A(H x H)}` over the supplied net.
    pub bound: f64,
    /// Largest `||u . m - m . u||_{A(H x H)}`; the differences are formed in
    /// the table's scalar type.
    pub commutator: f64,
    pub commutator_exactly_zero: bool,
    /// `max_u ||u e^2 - u||_{A(H)}` for each element of the net.
    pub identity_residuals: Vec<f64>,
}

/// `m_e = (e (x) e) 1_Delta` for each `e` in the net, checked against the
/// approximate diagonal conditions on the test functions.
pub fn approximate_diagonal<T: Scalar>(
    h: &HypergroupTable<T>,
    e_net: &[HFunction<T>],
    tests: &[HFunction<T>],
) -> Result<ApproximateDiagonal> {
    let n = h.size();
    let diag = indicator_diagonal(h)?;
    let hf = h.to_f64();
    let chars = characters(&hf)?;
    let square = square_table(&hf)?;
    let ones = HFunction::from_dense(&vec![T::one(); n]);
    let mut bound = 0.0f64;
    let mut commutator = 0.0f64;
    let mut exactly_zero = true;
    let mut identity_residuals = Vec::with_capacity(e_net.len());
    for e in e_net {
        let m = tensor(e, e, n).pointwise(&diag.indicator);
        bound = bound.max(norm_a(&square.table, &square.characters, &complex(&m))?.0);
        let e2 = restrict_to_diagonal(n, &m);
        let mut worst = 0.0f64;
        for u in tests {
            let left = tensor(u, &ones, n).pointwise(&m);
            let right = tensor(&ones, u, n).pointwise(&m);
            let diff = left.sub(&right);
            if !diff.is_zero() {
                exactly_zero = false;
                commutator =
                    commutator.max(norm_a(&square.table, &square.characters, &complex(&diff))?.0);
            }
            let res = u.pointwise(&e2).sub(u);
            worst = worst.max(norm_a(&hf, &chars, &complex(&res))?.0);
        }
        identity_residuals.push(worst);
    }
    Ok(ApproximateDiagonal {
        bound,
        commutator,
        commutator_exactly_zero: exactly_zero,
        identity_residuals,
    })
}

/// Top eigenvector of the generator's symmetrized convolution operator on the
/// ball of the given radius, as a function normalized in `l^2(lambda)`.
pub fn reiter_vector(h: &HypergroupTable<f64>, radius: usize) -> Result<HFunction<f64>> {
    let rows = jacobi_operator(h)?;
    let size = radius + 1;
    if size > rows.len() {
        return Err(HypergroupError::TruncationOverflow {
            x: radius,
            y: 1,
            radius: rows.len().saturating_sub(1),
        });
    }
    let mut m = DMatrix::<f64>::zeros(size, size);
    for (i, row) in rows.iter().take(size).enumerate() {
        for (j, c) in row {
            if *j < size {
                m[(i, *j)] = *c;
            }
        }
    }
    let m = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(m);
    let top = eig.eigenvalues.imax();
    let mut w: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
    if w.iter().sum::<f64>() < 0.0 {
        w.iter_mut().for_each(|v| *v = -*v);
    }
    let w: Vec<f64> = w.into_iter().map(|v| v.max(0.0)).collect();
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    let haar = h.haar();
    Ok(HFunction::from_dense(
        &w.iter()
            .enumerate()
            .map(|(n, v)| v / norm / haar[n].sqrt())
            .collect::<Vec<_>>(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessEntry {
    pub radius: usize,
    pub e: HFunction<f64>,
    /// Interval for `||e||_{MA(H)}`: the lower end is `max |e|`, the upper end
    /// comes from the factorization `e = xi o xi~` in `A(H_0)`.
    pub ma_bound: Interval,
    /// Upper bounds on `||e delta_x - delta_x||_{A(H)}` for each test point `x`.
    pub residuals: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakAmenabilityWitness {
    pub entries: Vec<WitnessEntry>,
    pub constant_bound: f64,
}

/// Points at which the approximate identity residuals are reported.
pub const WITNESS_TEST_POINTS: [usize; 2] = [0, 1];

/// Finite tables: `e = 1`. Sections: `e = xi o xi~` computed on the deformed
/// table for the Reiter vectors `xi` of balls of the given radii.
pub fn weak_amenability_witness(
    h: &HypergroupTable<f64>,
    radii: &[usize],
) -> Result<WeakAmenabilityWitness> {
    if !h.is_commutative() {
        return Err(HypergroupError::InvalidTable(
            "weak amenability witness needs a commutative table".into(),
        ));
    }
    let n = h.size();
    if !h.is_truncated() {
        let one = HFunction::from_dense(&vec![1.0; n]);
        let computed = norm_ma(h, &characters(h)?, &complex(&one))?;
        let entry = WitnessEntry {
            radius: n,
            e: one,
            ma_bound: Interval {
                lower: 1.0,
                upper: computed.max(1.0),
            },
            residuals: WITNESS_TEST_POINTS
                .iter()
                .filter(|x| **x < n)
                .map(|x| (*x, 0.0))
                .collect(),
        };
        return Ok(WeakAmenabilityWitness {
            entries: vec![entry],
            constant_bound: 1.0,
        });
    }
    let c = chi0(h)?;
    let pair = voit_deform(h, &c.values)?;
    let deformed = &pair.deformed;
    let mut entries = Vec::with_capacity(radii.len());
    for &r in radii {
        let xi = reiter_vector(deformed, r)?;
        let e = convolve_functions(deformed, &xi, &involute(deformed, &xi))?;
        let factor = l2_norm(deformed, &xi).powi(2);
        let section = section_ma_interval(deformed, &complex(&e))?;
        let ma_bound = Interval {
            lower: section.lower,
            upper: factor.min(section.upper),
        };
        let residuals = WITNESS_TEST_POINTS
            .iter()
            .map(|&x| (x, (e.get(x) - 1.0).abs() * h.haar()[x].sqrt()))
            .collect();
        entries.push(WitnessEntry {
            radius: r,
            e,
            ma_bound,
            residuals,
        });
    }
    let constant_bound = entries.iter().map(|e| e.ma_bound.upper).fold(0.0, f64::max);
    Ok(WeakAmenabilityWitness {
        entries,
        constant_bound,
    })
}

/// A bounded approximate identity element built from a Reiter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BaiElement {
    pub u: HFunction<f64>,
    pub radius: Option<usize>,
    /// `||xi||_2^2`, an upper bound for `||u||_A`.
    pub norm_bound: f64,
    pub max_error: f64,
}

/// `u = xi ._lambda xi~` with `|u(x) - 1| < eps` on `points`.
pub fn bai_from_p2(h: &HypergroupTable<f64>, points: &[usize], eps: f64) -> Result<BaiElement> {
    let n = h.size();
    if !h.is_truncated() {
        return Ok(BaiElement {
            u: HFunction::from_dense(&vec![1.0; n]),
            radius: None,
            norm_bound: 1.0,
            max_error: 0.0,
        });
    }
    if check_p2(h, P2Options::default())?.status == P2Status::Fails {
        return Err(HypergroupError::P2Failure);
    }
    let limit = jacobi_operator(h)?.len().saturating_sub(1) / 2;
    let start = points.iter().copied().max().unwrap_or(0).max(1);
    for r in start..=limit {
        let xi = reiter_vector(h, r)?;
        let u = convolve_functions(h, &xi, &involute(h, &xi))?;
        let max_error = points
            .iter()
            .map(|x| (u.get(*x) - 1.0).abs())
            .fold(0.0, f64::max);
        if max_error < eps {
            return Ok(BaiElement {
                u,
                radius: Some(r),
                norm_bound: l2_norm(h, &xi).powi(2),
                max_error,
            });
        }
    }
    Err(HypergroupError::NoConvergence(format!(
        "no ball up to radius {limit} reaches {eps}"
    )))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmenabilityReport {
    pub table: String,
    pub p2: P2Status,
    pub diagonal_psi_norm: Option<f64>,
    pub phi_values: Vec<f64>,
    pub phi_inverse_ma_norm: Option<f64>,
    pub one_delta_ma_norm: Option<f64>,
    pub one_delta_exact: Option<bool>,
    pub approx_diagonal_bound: Option<f64>,
    pub commutator_exactly_zero: Option<bool>,
    pub weak_amenability_constant_bound: f64,
    pub value_set_size: Option<usize>,
    pub notes: Vec<String>,
}

impl AmenabilityReport {
    /// `||1_Delta||_MA <= ||phi^-1||_MA ||psi||_{B_lambda}` up to `tol`.
    pub fn submultiplicative(&self, tol: f64) -> bool {
        match (
            self.one_delta_ma_norm,
            self.phi_inverse_ma_norm,
            self.diagonal_psi_norm,
        ) {
            (Some(d), Some(p), Some(s)) => d <= p * s + tol,
            _ => true,
        }
    }
}

/// Default radii of the weak-amenability net on sections.
pub const DEFAULT_RADII: [usize; 3] = [5, 10, 20];

pub fn amenability_report<T: Scalar>(h: &HypergroupTable<T>) -> Result<AmenabilityReport> {
    let hf = h.to_f64();
    let p2 = check_p2(&hf, P2Options::default())?.status;
    let phi_values: Vec<f64> = hf.haar().iter().map(|l| 1.0 / l).collect();
    let mut notes = Vec::new();
    if h.is_truncated() {
        let limit = hf.complete_ball();
        let radii: Vec<usize> = DEFAULT_RADII
            .iter()
            .copied()
            .filter(|r| *r <= limit)
            .collect();
        let wa = weak_amenability_witness(&hf, &radii)?;
        let value_set_size =
            match invert_multiplier(h, &restrict_to_diagonal(h.size(), &diagonal_psi(h))) {
                Ok(inv) => Some(inv.value_set_size),
                Err(HypergroupError::UnboundedValueSet { small, large }) => {
                    notes.push(format!(
                        "value set of 1/lambda grows with the radius ({small} -> {large})"
                    ));
                    None
                }
                Err(e) => return Err(e),
            };
        return Ok(AmenabilityReport {
            table: h.name().to_string(),
            p2,
            diagonal_psi_norm: None,
            phi_values,
            phi_inverse_ma_norm: None,
            one_delta_ma_norm: None,
            one_delta_exact: None,
            approx_diagonal_bound: None,
            commutator_exactly_zero: None,
            weak_amenability_constant_bound: wa.constant_bound,
            value_set_size,
            notes,
        });
    }
    let diag = indicator_diagonal(h)?;
    let tests: Vec<HFunction<T>> = (0..h.size())
        .map(|x| HFunction::delta(x, T::one()))
        .collect();
    let e = HFunction::from_dense(&vec![T::one(); h.size()]);
    let approx = approximate_diagonal(h, &[e], &tests)?;
    let wa = weak_amenability_witness(&hf, &[])?;
    Ok(AmenabilityReport {
        table: h.name().to_string(),
        p2,
        diagonal_psi_norm: Some(diag.psi_blambda_norm),
        phi_values,
        phi_inverse_ma_norm: diag.phi_inverse.ma_norm,
        one_delta_ma_norm: Some(diag.ma_norm),
        one_delta_exact: Some(diag.exact),
        approx_diagonal_bound: Some(approx.bound),
        commutator_exactly_zero: Some(approx.commutator_exactly_zero),
        weak_amenability_constant_bound: wa.constant_bound,
        value_set_size: Some(diag.phi_inverse.value_set_size),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{conjugacy_hypergroup, family, irr_hypergroup, FamilySpec};
    use crate::group;
    use crate::scalar::Rational;

    #[test]
    fn psi_on_conj_s3() {
        let h = conjugacy_hypergroup::<Rational>(&group::symmetric3());
        let phi = restrict_to_diagonal(3, &diagonal_psi(&h));
        assert_eq!(
            phi.dense(3),
            vec![
                Rational::ratio(1, 1),
                Rational::ratio(1, 3),
                Rational::ratio(1, 2)
            ]
        );
        let inv = invert_multiplier(&h, &phi).unwrap();
        assert_eq!(
            inv.inverse.dense(3),
            vec![
                Rational::ratio(1, 1),
                Rational::ratio(3, 1),
                Rational::ratio(2, 1)
            ]
        );
    }

    #[test]
    fn indicator_is_exact_on_irr_q8() {
        let h = irr_hypergroup::<Rational>(&group::quaternion8()).unwrap();
        let d = indicator_diagonal(&h).unwrap();
        assert!(d.exact);
        assert!(d.ma_norm.is_finite() && d.ma_norm > 0.0);
    }

    #[test]
    fn cyclic_diagonal_bound_is_one() {
        let h: HypergroupTable<Rational> = group::cyclic(4).unwrap().as_hypergroup();
        let r = amenability_report(&h).unwrap();
        assert!((r.approx_diagonal_bound.unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(r.commutator_exactly_zero, Some(true));
        assert!(r.submultiplicative(1e-9));
    }

    #[test]
    fn zero_value_rejected() {
        let h: HypergroupTable<f64> = group::cyclic(2).unwrap().as_hypergroup();
        let phi = HFunction::from_pairs([(0, 1.0)]);
        assert!(matches!(
            invert_multiplier(&h, &phi),
            Err(HypergroupError::ZeroValue(1))
        ));
    }

    #[test]
    fn su2_value_set_grows() {
        let h: HypergroupTable<f64> = family(&FamilySpec::Su2Fusion { radius: 10 }).unwrap();
        let phi = restrict_to_diagonal(h.size(), &diagonal_psi(&h));
        assert!(matches!(
            invert_multiplier(&h, &phi),
            Err(HypergroupError::UnboundedValueSet { .. })
        ));
    }

    #[test]
    fn tree_witness() {
        let h: HypergroupTable<f64> = family(&FamilySpec::TreeRadial { q: 2, radius: 60 }).unwrap();
        let w = weak_amenability_witness(&h, &DEFAULT_RADII).unwrap();
        assert!(w.constant_bound <= 1.0 + 1e-6, "{}", w.constant_bound);
        let r1: Vec<f64> = w.entries.iter().map(|e| e.residuals[1].1).collect();
        assert!(r1.windows(2).all(|p| p[1] < p[0]), "{r1:?}");
    }

    #[test]
    fn tree_has_no_bai() {
        let h: HypergroupTable<f64> = family(&FamilySpec::TreeRadial { q: 2, radius: 40 }).unwrap();
        assert!(matches!(
            bai_from_p2(&h, &[0, 1], 0.1),
            Err(HypergroupError::P2Failure)
        ));
    }

    #[test]
    fn su2_bai() {
        let h: HypergroupTable<f64> = family(&FamilySpec::Su2Fusion { radius: 80 }).unwrap();
        let b = bai_from_p2(&h, &[0, 1, 2, 3], 0.1).unwrap();
        assert!(b.max_error < 0.1 && b.norm_bound <= 1.0 + 1e-9);
    }
}
