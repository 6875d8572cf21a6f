//! Axiom verification for structure tables.
//!
//! Failures are report entries, not errors. Each check records the largest
//! violation it saw and how many instances it examined. On a truncated table
//! only instances whose products all lie inside the section are examined.

use std::fmt;

use crate::function::haar_invariance_violation;
use crate::scalar::Scalar;
use crate::table::{HypergroupTable, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    Probability,
    Commutativity,
    Associativity,
    Identity,
    Involution,
    Support,
    Haar,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Probability => "probability",
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::Identity => "identity",
            Axiom::Involution => "involution",
            Axiom::Support => "support",
            Axiom::Haar => "haar",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    pub max_violation: f64,
    pub checked: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub table: String,
    pub tolerance: f64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is checked")
    }

    pub fn max_violation(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.max_violation)
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "axioms for {} (tol {:e})", self.table, self.tolerance)?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<14} {}  max violation {:.3e} over {} checks",
                c.axiom.name(),
                if c.passed { "pass" } else { "FAIL" },
                c.max_violation,
                c.checked
            )?;
        }
        Ok(())
    }
}

struct Tally {
    worst: f64,
    count: usize,
}

impl Tally {
    fn new() -> Self {
        Tally {
            worst: 0.0,
            count: 0,
        }
    }
    fn see<T: Scalar>(&mut self, v: T) {
        self.count += 1;
        self.worst = self.worst.max(v.abs().to_f64_lossy());
    }
    fn see_f64(&mut self, v: f64) {
        self.count += 1;
        self.worst = self.worst.max(v.abs());
    }
    fn finish(self, axiom: Axiom, tol: f64) -> AxiomCheck {
        AxiomCheck {
            axiom,
            passed: self.worst <= tol,
            max_violation: self.worst,
            checked: self.count,
        }
    }
}

fn row_get<T: Scalar>(row: &Row<T>, z: usize) -> T {
    row.iter()
        .find(|(w, _)| *w == z)
        .map(|(_, v)| v.clone())
        .unwrap_or_else(T::zero)
}

fn row_diff<T: Scalar>(a: &Row<T>, b: &Row<T>) -> T {
    let mut worst = T::zero();
    for (z, v) in a.iter().chain(b.iter()) {
        let d = (row_get(a, *z) - row_get(b, *z)).abs();
        if d > worst {
            worst = d;
        }
        let _ = v;
    }
    worst
}

/// Checks axioms 1-3 of a discrete hypergroup plus Haar consistency.
pub fn verify_axioms<T: Scalar>(h: &HypergroupTable<T>, tol: f64) -> AxiomReport {
    let n = h.size();
    let e = h.identity();
    let pairs = h.available_pairs();

    let mut prob = Tally::new();
    for &(x, y) in &pairs {
        let row = h.product(x, y).expect("available");
        let mut sum = T::zero();
        for (_, v) in row {
            if *v < T::zero() {
                prob.see(v.clone());
            }
            sum = sum + v.clone();
        }
        prob.see(sum - T::one());
    }

    let mut comm = Tally::new();
    for &(x, y) in &pairs {
        if x < y && h.has_product(y, x) {
            comm.see(row_diff(h.product(x, y).unwrap(), h.product(y, x).unwrap()));
        }
    }

    let mut ident = Tally::new();
    for x in 0..n {
        for (a, b) in [(e, x), (x, e)] {
            if let Ok(row) = h.product(a, b) {
                let delta: Row<T> = vec![(x, T::one())];
                ident.see(row_diff(row, &delta));
            }
        }
    }

    let mut invol = Tally::new();
    for x in 0..n {
        // x~~ = x
        invol.see_f64(if h.inv(h.inv(x)) == x { 0.0 } else { 1.0 });
    }
    invol.see_f64(if h.inv(e) == e { 0.0 } else { 1.0 });
    for &(x, y) in &pairs {
        let (yt, xt) = (h.inv(y), h.inv(x));
        let Ok(rev) = h.product(yt, xt) else { continue };
        let row = h.product(x, y).unwrap();
        let mapped: Row<T> = {
            let mut r: Row<T> = row.iter().map(|(z, v)| (h.inv(*z), v.clone())).collect();
            r.sort_by_key(|(z, _)| *z);
            r
        };
        invol.see(row_diff(&mapped, rev));
    }

    let mut support = Tally::new();
    for &(x, y) in &pairs {
        let c = row_get(h.product(x, y).unwrap(), e);
        if y == h.inv(x) {
            support.see_f64(if c > T::zero() { 0.0 } else { 1.0 });
        } else {
            support.see(c);
        }
    }

    let mut assoc = Tally::new();
    for x in 0..n {
        for y in 0..n {
            let Ok(xy) = h.product(x, y) else { continue };
            for z in 0..n {
                let Ok(yz) = h.product(y, z) else { continue };
                let Some(left) = combine(h, xy, z, true) else {
                    continue;
                };
                let Some(right) = combine(h, yz, x, false) else {
                    continue;
                };
                assoc.see(row_diff(&left, &right));
            }
        }
    }

    let mut haar = Tally::new();
    haar.see(h.haar()[e].clone() - T::one());
    for x in 0..n {
        if let Ok(c) = h.coeff(x, h.inv(x), e) {
            if !c.is_zero() {
                haar.see(h.haar()[x].clone() - T::one() / c);
            } else {
                haar.see_f64(1.0);
            }
        }
    }
    haar.see_f64(haar_invariance_violation(h, h.haar()));

    let checks = vec![
        prob.finish(Axiom::Probability, tol),
        comm.finish(Axiom::Commutativity, tol),
        assoc.finish(Axiom::Associativity, tol),
        ident.finish(Axiom::Identity, tol),
        invol.finish(Axiom::Involution, tol),
        support.finish(Axiom::Support, tol),
        haar.finish(Axiom::Haar, tol),
    ];
    AxiomReport {
        table: h.name().to_string(),
        tolerance: tol,
        checks,
    }
}

/// `(sum_w m_w w) * z` when `right` is true, else `x * (sum_w m_w w)`.
fn combine<T: Scalar>(
    h: &HypergroupTable<T>,
    m: &Row<T>,
    other: usize,
    right: bool,
) -> Option<Row<T>> {
    let mut acc: std::collections::BTreeMap<usize, T> = std::collections::BTreeMap::new();
    for (w, a) in m {
        let row = if right {
            h.product(*w, other)
        } else {
            h.product(other, *w)
        };
        for (z, c) in row.ok()? {
            let slot = acc.entry(*z).or_insert_with(T::zero);
            *slot = slot.clone() + a.clone() * c.clone();
        }
    }
    Some(acc.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::table::TableSpec;

    #[test]
    fn row_summing_to_point_nine_fails_probability() {
        let r = |n, d| Rational::ratio(n, d);
        let h = HypergroupTable::new(TableSpec {
            name: "short".into(),
            labels: vec!["e".into(), "a".into()],
            identity: 0,
            involution: vec![0, 1],
            entries: vec![
                (0, 0, 0, r(1, 1)),
                (0, 1, 1, r(1, 1)),
                (1, 1, 0, r(1, 2)),
                (1, 1, 1, r(2, 5)),
            ],
            haar: None,
            truncation: None,
        })
        .unwrap();
        let rep = verify_axioms(&h, 1e-9);
        let p = rep.get(Axiom::Probability);
        assert!(!p.passed);
        assert!((p.max_violation - 0.1).abs() < 1e-15);
        assert!(rep.get(Axiom::Identity).passed);
        assert!(!rep.all_passed());
    }
}
