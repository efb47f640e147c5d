//! Finite groups given by element labels and an optional Cayley table.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

pub const IDENTITY: &str = "id";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    mul: Option<Vec<Vec<usize>>>,
    abelian: bool,
}

impl GroupTable {
    /// `mul[i][j]` is the label of `elements[i] · elements[j]`.
    pub fn new(elements: Vec<String>, mul: Option<Vec<Vec<String>>>, abelian: bool) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidGroup(format!("duplicate element `{e}`")));
            }
        }
        let Some(&id) = index.get(IDENTITY) else {
            return Err(Error::InvalidGroup("no identity element `id`".into()));
        };
        let n = elements.len();
        let mul = match mul {
            None => None,
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidGroup(format!("table must be {n}×{n}")));
                }
                let table = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|l| index.get(l).copied().ok_or_else(|| Error::UnknownElement(l.clone())))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                validate_table(&table, id)?;
                Some(table)
            }
        };
        let abelian = match &mul {
            Some(t) => (0..n).all(|i| (0..n).all(|j| t[i][j] == t[j][i])),
            None => abelian,
        };
        Ok(GroupTable {
            elements,
            index,
            mul,
            abelian,
        })
    }

    /// `Z/n` with elements `id, g, g^2, …`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let elements: Vec<String> = (0..n).map(cyclic_label).collect();
        let mul = (0..n)
            .map(|i| (0..n).map(|j| elements[(i + j) % n].clone()).collect())
            .collect();
        Self::new(elements, Some(mul), true)
    }

    /// `G × H` with labels `a*b`; `id*id` is relabelled `id`.
    pub fn product(a: &GroupTable, b: &GroupTable) -> Result<Self> {
        let elements: Vec<String> = a
            .elements
            .iter()
            .flat_map(|x| b.elements.iter().map(move |y| product_label(x, y)))
            .collect();
        let mul = match (&a.mul, &b.mul) {
            (Some(ta), Some(tb)) => {
                let nb = b.elements.len();
                let rows = (0..elements.len())
                    .map(|i| {
                        (0..elements.len())
                            .map(|j| elements[ta[i / nb][j / nb] * nb + tb[i % nb][j % nb]].clone())
                            .collect()
                    })
                    .collect();
                Some(rows)
            }
            _ => None,
        };
        Self::new(elements, mul, a.abelian && b.abelian)
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn has_table(&self) -> bool {
        self.mul.is_some()
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    /// The Cayley table as labels, if present.
    pub fn table_labels(&self) -> Option<Vec<Vec<String>>> {
        self.mul.as_ref().map(|t| {
            t.iter()
                .map(|r| r.iter().map(|&k| self.elements[k].clone()).collect())
                .collect()
        })
    }

    pub fn multiply(&self, a: &str, b: &str) -> Result<&str> {
        let t = self.mul.as_ref().ok_or(Error::MissingTable)?;
        Ok(&self.elements[t[self.index_of(a)?][self.index_of(b)?]])
    }

    pub fn inverse(&self, a: &str) -> Result<&str> {
        let t = self.mul.as_ref().ok_or(Error::MissingTable)?;
        let i = self.index_of(a)?;
        let id = self.index[IDENTITY];
        let j = (0..self.order()).find(|&j| t[i][j] == id).expect("validated table");
        Ok(&self.elements[j])
    }

    /// `h g h^{-1}`. Abelian groups need no table.
    pub fn conjugate(&self, h: &str, g: &str) -> Result<&str> {
        if self.abelian {
            self.index_of(h)?;
            return Ok(&self.elements[self.index_of(g)?]);
        }
        let hg = self.multiply(h, g)?;
        self.multiply(hg, self.inverse(h)?)
    }

    /// Conjugacy classes in order of first appearance.
    pub fn conjugacy_classes(&self) -> Result<Vec<Vec<String>>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for g in &self.elements {
            if seen.contains(g) {
                continue;
            }
            let mut class = Vec::new();
            for h in &self.elements {
                let c = self.conjugate(h, g)?.to_string();
                if seen.insert(c.clone()) {
                    class.push(c);
                }
            }
            out.push(class);
        }
        Ok(out)
    }
}

pub fn cyclic_label(k: usize) -> String {
    match k {
        0 => IDENTITY.to_string(),
        1 => "g".to_string(),
        _ => format!("g^{k}"),
    }
}

pub fn product_label(a: &str, b: &str) -> String {
    if a == IDENTITY && b == IDENTITY {
        IDENTITY.to_string()
    } else {
        format!("{a}*{b}")
    }
}

fn validate_table(t: &[Vec<usize>], id: usize) -> Result<()> {
    let n = t.len();
    for i in 0..n {
        if t[id][i] != i || t[i][id] != i {
            return Err(Error::InvalidGroup("`id` is not a two-sided identity".into()));
        }
        let row: BTreeSet<_> = t[i].iter().collect();
        let col: BTreeSet<_> = t.iter().map(|r| &r[i]).collect();
        if row.len() != n || col.len() != n {
            return Err(Error::InvalidGroup("table is not a Latin square".into()));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if t[t[a][b]][c] != t[a][t[b][c]] {
                    return Err(Error::InvalidGroup("multiplication is not associative".into()));
                }
            }
        }
    }
    Ok(())
}
