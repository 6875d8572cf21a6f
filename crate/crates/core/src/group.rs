//! Finite groups given by Cayley tables.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{HypergroupError, Result};
use crate::scalar::Scalar;
use crate::table::{HypergroupTable, TableSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    abelian: bool,
}

impl FiniteGroup {
    /// Validates a Cayley table: Latin square, two-sided identity, associativity.
    pub fn from_cayley_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(HypergroupError::NotLatinSquare("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(HypergroupError::NotLatinSquare(format!(
                    "row {i} has {} entries",
                    row.len()
                )));
            }
            let mut seen = vec![false; n];
            for &v in row {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(HypergroupError::NotLatinSquare(format!(
                        "row {i} repeats or exceeds {v}"
                    )));
                }
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut seen[row[j]], true) {
                    return Err(HypergroupError::NotLatinSquare(format!(
                        "column {j} repeats {}",
                        row[j]
                    )));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(HypergroupError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(HypergroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity)
                    .expect("latin square has inverses")
            })
            .collect();
        let abelian = (0..n).all(|a| (0..n).all(|b| table[a][b] == table[b][a]));
        Ok(FiniteGroup {
            name: name.into(),
            labels: (0..n).map(|i| format!("g{i}")).collect(),
            table,
            identity,
            inverse,
            abelian,
        })
    }

    fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Order of an element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Conjugacy classes: identity class first, then by element order, size
    /// and smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n)
                .map(|g| self.mul(self.mul(g, x), self.inv(g)))
                .collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members);
        }
        let e = self.identity;
        classes.sort_by_key(|c| (!c.contains(&e), self.element_order(c[0]), c.len(), c[0]));
        classes
    }

    /// The derived subgroup, generated by all commutators.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let n = self.order();
        let mut members = vec![false; n];
        members[self.identity] = true;
        let gens: Vec<usize> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
            .collect();
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !members[y] {
                    members[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..n).filter(|&i| members[i]).collect()
    }

    /// The group itself as a (possibly non-commutative) hypergroup with point-mass products.
    pub fn as_hypergroup<T: Scalar>(&self) -> HypergroupTable<T> {
        let n = self.order();
        let mut order: Vec<usize> = vec![self.identity];
        order.extend((0..n).filter(|&g| g != self.identity));
        let pos: Vec<usize> = {
            let mut p = vec![0; n];
            for (i, &g) in order.iter().enumerate() {
                p[g] = i;
            }
            p
        };
        let mut entries = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                entries.push((pos[a], pos[b], pos[self.mul(a, b)], T::one()));
            }
        }
        HypergroupTable::new(TableSpec {
            name: self.name.clone(),
            labels: order.iter().map(|&g| self.labels[g].clone()).collect(),
            identity: 0,
            involution: order.iter().map(|&g| pos[self.inv(g)]).collect(),
            entries,
            haar: None,
            truncation: None,
        })
        .expect("a group is a hypergroup")
    }
}

type Perm = Vec<usize>;

fn compose(p: &Perm, q: &Perm) -> Perm {
    // (p q)(i) = p(q(i))
    q.iter().map(|&i| p[i]).collect()
}

fn permutation_group(name: &str, degree: usize, generators: &[Perm]) -> FiniteGroup {
    let id: Perm = (0..degree).collect();
    let mut elems: Vec<Perm> = vec![id.clone()];
    let mut index: BTreeMap<Perm, usize> = BTreeMap::from([(id, 0)]);
    let mut k = 0;
    while k < elems.len() {
        for g in generators {
            let p = compose(&elems[k], g);
            if !index.contains_key(&p) {
                index.insert(p.clone(), elems.len());
                elems.push(p);
            }
        }
        k += 1;
    }
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
        .collect();
    let labels = elems.iter().map(cycle_notation).collect();
    FiniteGroup::from_cayley_table(name, table)
        .expect("closed permutation set")
        .with_labels(labels)
}

fn cycle_notation(p: &Perm) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            continue;
        }
        out.push('(');
        let mut i = s;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&i.to_string());
            first = false;
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(HypergroupError::InvalidParameters(
            "cyclic group needs n >= 1".into(),
        ));
    }
    let table = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    Ok(FiniteGroup::from_cayley_table(format!("Z{n}"), table)?
        .with_labels((0..n).map(|i| i.to_string()).collect()))
}

pub fn symmetric3() -> FiniteGroup {
    permutation_group("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]])
}

pub fn dihedral4() -> FiniteGroup {
    permutation_group("D4", 4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
}

pub fn alternating4() -> FiniteGroup {
    permutation_group("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
}

pub fn klein4() -> FiniteGroup {
    permutation_group("V4", 4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
}

/// Quaternion group, elements ordered 1, -1, i, -i, j, -j, k, -k.
pub fn quaternion8() -> FiniteGroup {
    // unit index 0..4 = 1, i, j, k; product table of units with signs.
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let decode = |g: usize| (g % 2 == 1, g / 2);
    let encode = |neg: bool, u: usize| 2 * u + usize::from(neg);
    let table = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (sa, ua) = decode(a);
                    let (sb, ub) = decode(b);
                    let (s, u) = UNIT[ua][ub];
                    encode(sa ^ sb ^ s, u)
                })
                .collect()
        })
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .map(String::from)
        .to_vec();
    FiniteGroup::from_cayley_table("Q8", table)
        .expect("quaternion table")
        .with_labels(labels)
}

/// Built-in group by name: `z<n>`, `s3`, `d4`, `q8`, `a4`, `v4`/`klein`.
pub fn by_name(name: &str) -> Result<FiniteGroup> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "s3" => Ok(symmetric3()),
        "d4" => Ok(dihedral4()),
        "q8" => Ok(quaternion8()),
        "a4" => Ok(alternating4()),
        "v4" | "klein" => Ok(klein4()),
        _ => match lower
            .strip_prefix('z')
            .and_then(|s| s.parse::<usize>().ok())
        {
            Some(n) => cyclic(n),
            None => Err(HypergroupError::InvalidParameters(format!(
                "unknown group {name}"
            ))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_valid_and_nonabelian() {
        let g = symmetric3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        let sizes: Vec<usize> = g.conjugacy_classes().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
    }

    #[test]
    fn z4_is_abelian() {
        let g = cyclic(4).unwrap();
        assert!(g.is_abelian());
        assert_eq!(g.conjugacy_classes().len(), 4);
    }

    #[test]
    fn repeated_row_entry_is_not_latin() {
        let t = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(
            FiniteGroup::from_cayley_table("bad", t),
            Err(HypergroupError::NotLatinSquare(_))
        ));
    }

    #[test]
    fn latin_square_without_identity() {
        let t = vec![vec![1, 0], vec![0, 1]];
        // row 0 is not the identity row, row 1 is: this is Z2 with identity 1.
        assert_eq!(
            FiniteGroup::from_cayley_table("z2", t).unwrap().identity(),
            1
        );
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 2, 1]];
        assert!(FiniteGroup::from_cayley_table("x", t).is_err());
        let t = vec![vec![1, 0, 2], vec![2, 1, 0], vec![0, 2, 1]];
        assert_eq!(
            FiniteGroup::from_cayley_table("x", t),
            Err(HypergroupError::NoIdentity)
        );
    }

    #[test]
    fn non_associative_latin_square_with_identity() {
        // A loop of order 5 that is not a group.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_cayley_table("loop", t),
            Err(HypergroupError::NotAssociative(..))
        ));
    }

    #[test]
    fn class_sizes_of_builtins() {
        let sizes = |g: FiniteGroup| {
            g.conjugacy_classes()
                .iter()
                .map(Vec::len)
                .collect::<Vec<_>>()
        };
        assert_eq!(sizes(quaternion8()), vec![1, 1, 2, 2, 2]);
        assert_eq!(sizes(dihedral4()), vec![1, 1, 2, 2, 2]);
        assert_eq!(sizes(alternating4()), vec![1, 3, 4, 4]);
        assert_eq!(alternating4().order(), 12);
    }

    #[test]
    fn derived_subgroups() {
        assert_eq!(symmetric3().derived_subgroup().len(), 3);
        assert_eq!(quaternion8().derived_subgroup().len(), 2);
        assert_eq!(alternating4().derived_subgroup().len(), 4);
        assert_eq!(cyclic(5).unwrap().derived_subgroup().len(), 1);
    }
}
