use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::builders::FamilySpec;
use crate::error::{HypergroupError, Result};
use crate::table::HypergroupTable;

use super::characters::characters;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P2Status {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for P2Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            P2Status::Holds => "holds",
            P2Status::Fails => "fails",
            P2Status::Inconclusive => "inconclusive",
        })
    }
}

/// Bounds on the top of the spectrum of the generator's convolution operator
/// on `l^2(lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBounds {
    /// Rayleigh quotient on the largest section; a certified lower bound.
    pub lower: f64,
    /// Extrapolated limit of the section eigenvalues.
    pub lower_extrapolated: f64,
    /// Certified upper bound.
    pub upper: f64,
    pub section: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct P2Result {
    pub status: P2Status,
    pub bounds: Option<SpectralBounds>,
    pub certificate: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P2Options {
    /// `fails` is reported when the certified upper bound is below `1 - tol`.
    pub tol: f64,
    /// `holds` needs the extrapolated lower bound within `accept` of 1.
    pub accept: f64,
}

impl Default for P2Options {
    fn default() -> Self {
        P2Options {
            tol: 1e-6,
            accept: 1e-3,
        }
    }
}

/// Symmetrized generator `S_{n,m} = sqrt(lambda(n)/lambda(m)) c^m_{g,n}`,
/// restricted to the indices `n` whose product with `g` is stored.
/// Returned as sparse rows.
pub fn jacobi_operator(h: &HypergroupTable<f64>) -> Result<Vec<Vec<(usize, f64)>>> {
    let g = h.generator().ok_or(HypergroupError::NoGenerator)?;
    if h.inv(g) != g {
        return Err(HypergroupError::InvalidTable(
            "spectral test needs a self-adjoint generator".into(),
        ));
    }
    let haar = h.haar();
    let mut idx = Vec::new();
    for n in 0..h.size() {
        if h.has_product(g, n) {
            idx.push(n);
        } else {
            break;
        }
    }
    let size = idx.len();
    let rows = idx
        .iter()
        .map(|&n| {
            h.product(g, n)
                .expect("available")
                .iter()
                .filter(|(m, _)| *m < size)
                .map(|(m, c)| (*m, (haar[n] / haar[*m]).sqrt() * c))
                .collect()
        })
        .collect();
    Ok(rows)
}

/// Largest eigenvalue of the leading `size x size` block of a symmetric
/// sparse matrix with spectrum in `[-1, 1]`, by power iteration on `S + I`.
/// The returned Rayleigh quotient is a lower bound for the true value.
pub fn section_top_eigenvalue(rows: &[Vec<(usize, f64)>], size: usize) -> f64 {
    let apply = |v: &[f64]| -> Vec<f64> {
        (0..size)
            .map(|n| {
                v[n] + rows[n]
                    .iter()
                    .filter(|(m, _)| *m < size)
                    .map(|(m, c)| c * v[*m])
                    .sum::<f64>()
            })
            .collect()
    };
    let mut v = vec![1.0 / (size as f64).sqrt(); size];
    let mut rho = 0.0;
    for it in 0..400_000 {
        let w = apply(&v);
        let new_rho: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let residual = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - new_rho * b).powi(2))
            .sum::<f64>()
            .sqrt();
        v = w.into_iter().map(|x| x / norm).collect();
        rho = new_rho;
        if residual < 1e-10 && it > 10 {
            break;
        }
    }
    rho - 1.0
}

/// Certified upper bound on the norm of an infinite Jacobi matrix whose
/// coefficients are constant from index `k` on, by a Schur test with a
/// positive vector equal to 1 on the tail.
fn schur_bound(spec: &FamilySpec, k: usize) -> Option<f64> {
    let coef = |n: usize| spec.recurrence::<f64>(n);
    let off = |n: usize| -> Option<f64> {
        let (_, _, r) = coef(n)?;
        let (p, _, _) = coef(n + 1)?;
        Some((r * p).sqrt())
    };
    let diag = |n: usize| coef(n).map(|(_, b, _)| b.abs());
    let a_inf = off(k)?;
    let b_inf = diag(k)?;
    let feasible = |s: f64| -> Option<bool> {
        // v_n = 1 for n >= k; solve rows k, k-1, ..., 1 for v_{n-1}.
        let mut v = vec![1.0; k + 2];
        for n in (1..=k).rev() {
            let next = ((s - diag(n)?) * v[n] - off(n)? * v[n + 1]) / off(n - 1)?;
            if next <= 0.0 {
                return Some(false);
            }
            v[n - 1] = next;
        }
        Some(diag(0)? * v[0] + off(0)? * v[1] <= s * v[0])
    };
    let start = 2.0 * a_inf + b_inf;
    if feasible(start)? {
        return Some(start);
    }
    let (mut lo, mut hi) = (start, start);
    while !feasible(hi)? {
        lo = hi;
        hi = hi * 2.0 + 1e-3;
        if hi > 1e6 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Limit of the section eigenvalues, fitted as `L + a/n^2 + b/n^3` through
/// the sections of size `n`, `n/2` and `n/4` (or `L + a/n^2` on two
/// sections when `n < 8`).
fn extrapolate(rows: &[Vec<(usize, f64)>], size: usize, top: f64) -> f64 {
    let sizes: Vec<usize> = if size >= 8 {
        vec![size, size / 2, size / 4]
    } else {
        vec![size, size / 2]
    };
    let values: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            if n == size {
                top
            } else {
                section_top_eigenvalue(rows, n)
            }
        })
        .collect();
    let k = sizes.len();
    let m = DMatrix::from_fn(k, k, |i, j| (sizes[i] as f64).powi(-[0, 2, 3][j]));
    match m.lu().solve(&DVector::from_vec(values)) {
        Some(sol) => sol[0],
        None => top,
    }
}

/// (P2) holds iff the constant character 1 is in the support of the
/// Plancherel measure, i.e. iff 1 is in the spectrum of convolution by the
/// generator.
///
/// Finite tables always satisfy (P2). For truncated families the upper end of
/// the spectrum is bounded above by 1 (convolution by a probability measure is
/// a contraction) or, for eventually homogeneous recurrences, by a Schur test;
/// and bounded below by section eigenvalues, extrapolated in the section size.
pub fn check_p2(h: &HypergroupTable<f64>, opts: P2Options) -> Result<P2Result> {
    if !h.is_truncated() {
        let certificate = match characters(h) {
            Ok(t) => match t.trivial() {
                Some(i) => format!("constant character is row {i} of the character table"),
                None => {
                    return Err(HypergroupError::InvalidTable(
                        "no constant character found".into(),
                    ))
                }
            },
            Err(_) => "finite table: the constant function is in l^2(lambda)".to_string(),
        };
        return Ok(P2Result {
            status: P2Status::Holds,
            bounds: None,
            certificate,
        });
    }
    let rows = jacobi_operator(h)?;
    let size = rows.len();
    if size < 4 {
        return Err(HypergroupError::InvalidParameters(
            "section too small for the spectral test".into(),
        ));
    }
    let lower = section_top_eigenvalue(&rows, size);
    let lower_extrapolated = extrapolate(&rows, size, lower);

    let schur = h
        .family()
        .and_then(|f| f.homogeneous_from().and_then(|k| schur_bound(f, k)));
    let (upper, upper_how) = match schur {
        Some(s) if s < 1.0 => (s, "Schur test with a tail-constant positive vector"),
        _ => (1.0, "contraction bound for a probability measure"),
    };
    let bounds = SpectralBounds {
        lower,
        lower_extrapolated,
        upper,
        section: size,
    };
    let status = if upper < 1.0 - opts.tol {
        P2Status::Fails
    } else if lower_extrapolated >= 1.0 - opts.accept {
        P2Status::Holds
    } else {
        P2Status::Inconclusive
    };
    let certificate = format!(
        "upper {upper:.12} ({upper_how}); section lower {lower:.12}, extrapolated {lower_extrapolated:.12} on {size} points"
    );
    Ok(P2Result {
        status,
        bounds: Some(bounds),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::family;

    #[test]
    fn tree_fails_with_exact_bound() {
        let h: HypergroupTable<f64> = family(&FamilySpec::TreeRadial { q: 2, radius: 40 }).unwrap();
        let r = check_p2(&h, P2Options::default()).unwrap();
        assert_eq!(r.status, P2Status::Fails);
        let b = r.bounds.unwrap();
        assert!((b.upper - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
        assert!(b.lower <= b.upper);
    }

    #[test]
    fn su2_holds() {
        let h: HypergroupTable<f64> = family(&FamilySpec::Su2Fusion { radius: 40 }).unwrap();
        let r = check_p2(&h, P2Options::default()).unwrap();
        assert_eq!(r.status, P2Status::Holds, "{}", r.certificate);
    }

    #[test]
    fn tree_q3_schur_bound() {
        let spec = FamilySpec::TreeRadial { q: 3, radius: 10 };
        let s = schur_bound(&spec, 1).unwrap();
        assert!((s - 2.0 * 3f64.sqrt() / 4.0).abs() < 1e-12);
    }
}
