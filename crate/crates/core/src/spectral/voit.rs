use crate::error::{HypergroupError, Result};
use crate::table::{HypergroupTable, TableSpec};

use super::characters::{characters, multiplicativity_residual};
use super::p2::{check_p2, P2Options};

/// The dominating positive character.
#[derive(Debug, Clone, PartialEq)]
pub struct Chi0 {
    pub values: Vec<f64>,
    /// Value at the generator (1 on finite tables).
    pub top: f64,
    pub multiplicativity_residual: f64,
    /// Number of characters `|chi| <= chi0` was checked against.
    pub dominated: usize,
}

/// A hypergroup together with its deformation by `chi0`.
#[derive(Debug, Clone)]
pub struct DeformedPair {
    pub original: HypergroupTable<f64>,
    pub chi0: Vec<f64>,
    pub deformed: HypergroupTable<f64>,
    pub haar: Vec<f64>,
    /// Largest multiplicativity defect of `chi / chi0` on the deformed table
    /// over the checked characters.
    pub dual_residual: f64,
}

/// Recurrence coefficients `(p_n, b_n, r_n)` of `g * n` read off a table
/// whose generator `g` has tridiagonal products.
pub fn table_recurrence(h: &HypergroupTable<f64>) -> Result<Vec<(f64, f64, f64)>> {
    let g = h.generator().ok_or(HypergroupError::NoGenerator)?;
    let mut out = Vec::new();
    for n in 0..h.size() {
        let Ok(row) = h.product(g, n) else { break };
        let mut coef = (0.0, 0.0, 0.0);
        for (z, c) in row {
            match *z {
                z if z + 1 == n => coef.0 = *c,
                z if z == n => coef.1 = *c,
                z if z == n + 1 => coef.2 = *c,
                _ => {
                    return Err(HypergroupError::InvalidTable(format!(
                        "generator product with {n} is not tridiagonal"
                    )))
                }
            }
        }
        out.push(coef);
    }
    Ok(out)
}

/// Character of a polynomial hypergroup at spectral parameter `t`:
/// `P_0 = 1`, `t P_n = p_n P_{n-1} + b_n P_n + r_n P_{n+1}`.
pub fn recurrence_character(coef: &[(f64, f64, f64)], t: f64, len: usize) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(len);
    out.push(1.0);
    let mut prev = 0.0;
    for n in 0..len.saturating_sub(1) {
        let (p, b, r) = *coef.get(n)?;
        let next = ((t - b) * out[n] - p * prev) / r;
        prev = out[n];
        out.push(next);
    }
    Some(out)
}

const SAMPLES: usize = 201;

/// `chi0`: the constant 1 on finite tables (after checking that every
/// character is bounded by 1); for truncated polynomial families, the
/// recurrence character at the certified top of the spectrum, checked for
/// positivity, multiplicativity and domination over characters sampled in
/// `[-s, s]`.
pub fn chi0(h: &HypergroupTable<f64>) -> Result<Chi0> {
    let n = h.size();
    if !h.is_truncated() {
        let table = characters(h)?;
        for (i, row) in table.values.iter().enumerate() {
            if let Some(x) = row.iter().position(|v| v.norm() > 1.0 + 1e-9) {
                return Err(HypergroupError::DominationFailure(format!(
                    "character {i} has modulus {} > 1 at element {x}",
                    row[x].norm()
                )));
            }
        }
        return Ok(Chi0 {
            values: vec![1.0; n],
            top: 1.0,
            multiplicativity_residual: 0.0,
            dominated: table.len(),
        });
    }
    let coef = table_recurrence(h)?;
    let bounds = check_p2(h, P2Options::default())?
        .bounds
        .expect("truncated tables carry bounds");
    let s = bounds.upper;
    let values = recurrence_character(&coef, s, n).ok_or(HypergroupError::NoGenerator)?;
    if let Some(x) = values.iter().position(|v| *v <= 0.0) {
        return Err(HypergroupError::DominationFailure(format!(
            "candidate is not positive at {x}"
        )));
    }
    let residual = relative_residual(h, &values);
    if residual > 1e-9 {
        return Err(HypergroupError::DominationFailure(format!(
            "candidate multiplicativity residual {residual:e}"
        )));
    }
    for k in 0..SAMPLES {
        let t = -s + 2.0 * s * k as f64 / (SAMPLES - 1) as f64;
        let chi = recurrence_character(&coef, t, n).expect("recurrence");
        for (x, (a, b)) in chi.iter().zip(&values).enumerate() {
            if a.abs() > b * (1.0 + 1e-9) + 1e-12 {
                return Err(HypergroupError::DominationFailure(format!(
                    "character at t = {t} exceeds the candidate at {x}"
                )));
            }
        }
    }
    Ok(Chi0 {
        values,
        top: s,
        multiplicativity_residual: residual,
        dominated: SAMPLES,
    })
}

fn relative_residual(h: &HypergroupTable<f64>, chi: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (x, y) in h.available_pairs() {
        let s: f64 = h
            .product(x, y)
            .expect("available")
            .iter()
            .map(|(z, c)| c * chi[*z])
            .sum();
        let p = chi[x] * chi[y];
        worst = worst.max((p - s).abs() / p.abs().max(1.0));
    }
    worst
}

/// `x o y = sum_z (chi0(z) / (chi0(x) chi0(y))) c^z_{x,y} z` with Haar weights
/// `chi0^2 lambda`.
pub fn voit_deform(h: &HypergroupTable<f64>, chi0: &[f64]) -> Result<DeformedPair> {
    if chi0.len() != h.size() {
        return Err(HypergroupError::InvalidTable(
            "chi0 length does not match the table".into(),
        ));
    }
    if let Some(x) = chi0.iter().position(|v| *v <= 0.0) {
        return Err(HypergroupError::DominationFailure(format!(
            "chi0 is not positive at {x}"
        )));
    }
    let mut spec: TableSpec<f64> = h.to_spec();
    for (x, y, z, v) in spec.entries.iter_mut() {
        *v *= chi0[*z] / (chi0[*x] * chi0[*y]);
    }
    let haar: Vec<f64> = h.haar().iter().zip(chi0).map(|(l, c)| l * c * c).collect();
    spec.haar = Some(haar.clone());
    spec.name = format!("{} deformed", h.name());
    let deformed = HypergroupTable::new(spec)?.with_generator(h.generator());

    let mut dual_residual = 0.0f64;
    if h.is_truncated() {
        if let Ok(coef) = table_recurrence(h) {
            let s = chi0.get(1).copied().unwrap_or(1.0);
            for k in 0..SAMPLES {
                let t = -s + 2.0 * s * k as f64 / (SAMPLES - 1) as f64;
                if let Some(chi) = recurrence_character(&coef, t, h.size()) {
                    let ratio: Vec<f64> = chi.iter().zip(chi0).map(|(a, b)| a / b).collect();
                    dual_residual = dual_residual.max(relative_residual(&deformed, &ratio));
                }
            }
        }
    } else if let Ok(table) = characters(h) {
        for row in &table.values {
            let ratio: Vec<_> = row.iter().zip(chi0).map(|(a, b)| a / *b).collect();
            dual_residual = dual_residual.max(multiplicativity_residual(&deformed, &ratio));
        }
    }
    Ok(DeformedPair {
        original: h.clone(),
        chi0: chi0.to_vec(),
        deformed,
        haar,
        dual_residual,
    })
}
