//! Structure tables of discrete hypergroups.

use std::collections::BTreeMap;

use crate::builders::FamilySpec;
use crate::error::{HypergroupError, Result};
use crate::scalar::{convert, Scalar};

/// A sparse probability vector `z -> c^z_{x,y}`, sorted by `z`, zeros dropped.
pub type Row<T> = Vec<(usize, T)>;

/// A discrete hypergroup given by its structure constants.
///
/// Element 0 is not required to be the identity, but every builder in this
/// crate places the identity first. Products are stored for `x <= y`; a
/// product `(x, y)` with `x > y` is stored separately only when it differs
/// from `(y, x)`, which happens for non-commutative tables such as non-abelian
/// groups.
///
/// Truncated tables are finite sections (balls of radius `R`) of infinite
/// hypergroups. They store only the products whose support fits in the
/// section; asking for any other product yields
/// [`HypergroupError::TruncationOverflow`].
#[derive(Debug, Clone, PartialEq)]
pub struct HypergroupTable<T> {
    name: String,
    labels: Vec<String>,
    identity: usize,
    involution: Vec<usize>,
    products: BTreeMap<(usize, usize), Row<T>>,
    noncommuting: BTreeMap<(usize, usize), Row<T>>,
    haar: Vec<T>,
    truncation: Option<usize>,
    generator: Option<usize>,
    family: Option<FamilySpec>,
}

/// Raw ingredients of a table before validation.
#[derive(Debug, Clone)]
pub struct TableSpec<T> {
    pub name: String,
    pub labels: Vec<String>,
    pub identity: usize,
    pub involution: Vec<usize>,
    /// `(x, y, z, c^z_{x,y})` entries. Repeated entries are summed.
    pub entries: Vec<(usize, usize, usize, T)>,
    /// Explicit Haar weights; computed from `1 / c^e_{x,x~}` when absent.
    pub haar: Option<Vec<T>>,
    pub truncation: Option<usize>,
}

impl<T: Scalar> HypergroupTable<T> {
    pub fn new(spec: TableSpec<T>) -> Result<Self> {
        let n = spec.labels.len();
        if n == 0 {
            return Err(HypergroupError::InvalidTable("empty table".into()));
        }
        check_index(spec.identity, n)?;
        if spec.involution.len() != n {
            return Err(HypergroupError::InvalidTable(format!(
                "involution has {} entries, expected {n}",
                spec.involution.len()
            )));
        }
        for &x in &spec.involution {
            check_index(x, n)?;
        }

        let mut raw: BTreeMap<(usize, usize), BTreeMap<usize, T>> = BTreeMap::new();
        for (x, y, z, v) in spec.entries {
            check_index(x, n)?;
            check_index(y, n)?;
            check_index(z, n)?;
            let slot = raw
                .entry((x, y))
                .or_default()
                .entry(z)
                .or_insert_with(T::zero);
            *slot = slot.clone() + v;
        }
        let raw: BTreeMap<(usize, usize), Row<T>> = raw
            .into_iter()
            .map(|(k, row)| (k, row.into_iter().filter(|(_, v)| !v.is_zero()).collect()))
            .collect();

        let mut products = BTreeMap::new();
        let mut noncommuting = BTreeMap::new();
        for (&(x, y), row) in &raw {
            if x <= y {
                products.insert((x, y), row.clone());
            } else if !raw.contains_key(&(y, x)) {
                products.insert((y, x), row.clone());
            }
        }
        for (&(x, y), row) in &raw {
            if x > y {
                if let Some(primary) = products.get(&(y, x)) {
                    if primary != row {
                        noncommuting.insert((x, y), row.clone());
                    }
                }
            }
        }

        if spec.truncation.is_none() {
            for x in 0..n {
                for y in x..n {
                    if !products.contains_key(&(x, y)) {
                        return Err(HypergroupError::InvalidTable(format!(
                            "complete table is missing the product ({x}, {y})"
                        )));
                    }
                }
            }
        }

        let mut table = HypergroupTable {
            name: spec.name,
            labels: spec.labels,
            identity: spec.identity,
            involution: spec.involution,
            products,
            noncommuting,
            haar: Vec::new(),
            truncation: spec.truncation,
            generator: if n > 1 {
                Some((spec.identity + 1) % n)
            } else {
                None
            },
            family: None,
        };
        table.haar = match spec.haar {
            Some(h) => {
                if h.len() != n {
                    return Err(HypergroupError::InvalidTable(format!(
                        "haar line has {} weights, expected {n}",
                        h.len()
                    )));
                }
                h
            }
            None => (0..n)
                .map(|x| table.haar_from_identity_coefficient(x))
                .collect::<Result<_>>()?,
        };
        Ok(table)
    }

    pub fn with_generator(mut self, generator: Option<usize>) -> Self {
        self.generator = generator;
        self
    }

    pub fn with_family(mut self, family: Option<FamilySpec>) -> Self {
        self.family = family;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn inv(&self, x: usize) -> usize {
        self.involution[x]
    }

    /// Haar weights as stored (normalized so that the identity has weight 1).
    pub fn haar(&self) -> &[T] {
        &self.haar
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn is_truncated(&self) -> bool {
        self.truncation.is_some()
    }

    pub fn generator(&self) -> Option<usize> {
        self.generator
    }

    pub fn family(&self) -> Option<&FamilySpec> {
        self.family.as_ref()
    }

    pub fn is_commutative(&self) -> bool {
        self.noncommuting.is_empty()
    }

    pub fn check_index(&self, x: usize) -> Result<()> {
        check_index(x, self.size())
    }

    /// The measure `x * y` as a sparse row, or an overflow error on a truncated section.
    pub fn product(&self, x: usize, y: usize) -> Result<&Row<T>> {
        self.check_index(x)?;
        self.check_index(y)?;
        if x > y {
            if let Some(row) = self.noncommuting.get(&(x, y)) {
                return Ok(row);
            }
        }
        let key = (x.min(y), x.max(y));
        self.products
            .get(&key)
            .ok_or(HypergroupError::TruncationOverflow {
                x,
                y,
                radius: self.truncation.unwrap_or(0),
            })
    }

    pub fn has_product(&self, x: usize, y: usize) -> bool {
        self.product(x, y).is_ok()
    }

    /// `c^z_{x,y}`.
    pub fn coeff(&self, x: usize, y: usize, z: usize) -> Result<T> {
        self.check_index(z)?;
        Ok(self
            .product(x, y)?
            .iter()
            .find(|(w, _)| *w == z)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(T::zero))
    }

    /// All stored products as `(x, y, row)` in canonical order, including
    /// non-commuting overrides.
    pub fn stored_products(&self) -> impl Iterator<Item = (usize, usize, &Row<T>)> {
        self.products
            .iter()
            .map(|(&(x, y), r)| (x, y, r))
            .chain(self.noncommuting.iter().map(|(&(x, y), r)| (x, y, r)))
    }

    /// Ordered pairs `(x, y)` for which the product is available.
    pub fn available_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.has_product(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn haar_from_identity_coefficient(&self, x: usize) -> Result<T> {
        let xt = self.inv(x);
        let c = match self.coeff(x, xt, self.identity) {
            Ok(c) => c,
            Err(HypergroupError::TruncationOverflow { .. }) => {
                return Err(HypergroupError::InvalidTable(format!(
                    "product ({x}, {xt}) unavailable; truncated tables need explicit haar weights"
                )))
            }
            Err(e) => return Err(e),
        };
        if c.is_zero() {
            return Err(HypergroupError::ZeroDiagonal(x));
        }
        Ok(T::one() / c)
    }

    /// Converts every constant to another scalar type.
    pub fn map_scalar<U: Scalar>(&self) -> HypergroupTable<U> {
        let conv_row =
            |r: &Row<T>| -> Row<U> { r.iter().map(|(z, v)| (*z, convert::<T, U>(v))).collect() };
        HypergroupTable {
            name: self.name.clone(),
            labels: self.labels.clone(),
            identity: self.identity,
            involution: self.involution.clone(),
            products: self
                .products
                .iter()
                .map(|(k, r)| (*k, conv_row(r)))
                .collect(),
            noncommuting: self
                .noncommuting
                .iter()
                .map(|(k, r)| (*k, conv_row(r)))
                .collect(),
            haar: self.haar.iter().map(convert::<T, U>).collect(),
            truncation: self.truncation,
            generator: self.generator,
            family: self.family.clone(),
        }
    }

    pub fn to_f64(&self) -> HypergroupTable<f64> {
        self.map_scalar()
    }

    /// Rebuilds the table from transformed raw parts; used by constructions
    /// (deformations, relabelings) that keep the element set.
    pub fn to_spec(&self) -> TableSpec<T> {
        let mut entries = Vec::new();
        for (x, y, row) in self.stored_products() {
            for (z, v) in row {
                entries.push((x, y, *z, v.clone()));
            }
        }
        TableSpec {
            name: self.name.clone(),
            labels: self.labels.clone(),
            identity: self.identity,
            involution: self.involution.clone(),
            entries,
            haar: Some(self.haar.clone()),
            truncation: self.truncation,
        }
    }

    /// Largest index `r` such that every pair `x, y <= r` has a stored product.
    /// For complete tables this is `size - 1`.
    pub fn complete_ball(&self) -> usize {
        let n = self.size();
        if !self.is_truncated() {
            return n - 1;
        }
        let mut r = 0;
        while r + 1 < n && (0..=r + 1).all(|x| self.has_product(x, r + 1)) {
            r += 1;
        }
        r
    }
}

fn check_index(x: usize, size: usize) -> Result<()> {
    if x < size {
        Ok(())
    } else {
        Err(HypergroupError::IndexOutOfRange { index: x, size })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn z2() -> HypergroupTable<Rational> {
        let one = Rational::ratio(1, 1);
        HypergroupTable::new(TableSpec {
            name: "Z2".into(),
            labels: vec!["e".into(), "a".into()],
            identity: 0,
            involution: vec![0, 1],
            entries: vec![
                (0, 0, 0, one.clone()),
                (0, 1, 1, one.clone()),
                (1, 1, 0, one),
            ],
            haar: None,
            truncation: None,
        })
        .unwrap()
    }

    #[test]
    fn commutativity_fills_missing_orders() {
        let t = z2();
        assert_eq!(t.coeff(1, 0, 1).unwrap(), Rational::ratio(1, 1));
        assert!(t.is_commutative());
        assert_eq!(t.haar(), &[Rational::ratio(1, 1), Rational::ratio(1, 1)]);
    }

    #[test]
    fn out_of_range_index_is_an_error() {
        let t = z2();
        assert_eq!(
            t.product(0, 5).unwrap_err(),
            HypergroupError::IndexOutOfRange { index: 5, size: 2 }
        );
    }

    #[test]
    fn complete_table_must_have_every_product() {
        let one = Rational::ratio(1, 1);
        let err = HypergroupTable::new(TableSpec {
            name: "broken".into(),
            labels: vec!["e".into(), "a".into()],
            identity: 0,
            involution: vec![0, 1],
            entries: vec![(0, 0, 0, one.clone()), (0, 1, 1, one)],
            haar: Some(vec![Rational::ratio(1, 1); 2]),
            truncation: None,
        })
        .unwrap_err();
        assert!(matches!(err, HypergroupError::InvalidTable(_)));
    }

    #[test]
    fn zero_identity_coefficient_is_reported() {
        let one = Rational::ratio(1, 1);
        let err = HypergroupTable::new(TableSpec {
            name: "bad".into(),
            labels: vec!["e".into(), "a".into()],
            identity: 0,
            involution: vec![0, 1],
            entries: vec![
                (0, 0, 0, one.clone()),
                (0, 1, 1, one.clone()),
                (1, 1, 1, one),
            ],
            haar: None,
            truncation: None,
        })
        .unwrap_err();
        assert_eq!(err, HypergroupError::ZeroDiagonal(1));
    }
}
