use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// A permutation (0-based image list) or a vector of residues.
pub type Elem = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Perm { points: usize },
    Abelian { orders: Vec<i64> },
}

impl GroupSpec {
    pub fn identity(&self) -> Elem {
        match self {
            GroupSpec::Perm { points } => (0..*points as i64).collect(),
            GroupSpec::Abelian { orders } => vec![0; orders.len()],
        }
    }

    /// `x` then `y`.
    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        match self {
            GroupSpec::Perm { .. } => x.iter().map(|&i| y[i as usize]).collect(),
            GroupSpec::Abelian { orders } => x
                .iter()
                .zip(y)
                .zip(orders)
                .map(|((a, b), m)| (a + b).rem_euclid(*m))
                .collect(),
        }
    }

    pub fn inv(&self, x: &Elem) -> Elem {
        match self {
            GroupSpec::Perm { .. } => {
                let mut out = vec![0; x.len()];
                for (i, &j) in x.iter().enumerate() {
                    out[j as usize] = i as i64;
                }
                out
            }
            GroupSpec::Abelian { orders } => x
                .iter()
                .zip(orders)
                .map(|(a, m)| (-a).rem_euclid(*m))
                .collect(),
        }
    }

    /// Order of the declared group (`0` if unknown, for permutation groups).
    pub fn order(&self) -> u128 {
        match self {
            GroupSpec::Perm { .. } => 0,
            GroupSpec::Abelian { orders } => orders.iter().map(|&m| m as u128).product(),
        }
    }

    pub fn parse_elem(&self, v: &[i64]) -> Result<Elem> {
        match self {
            GroupSpec::Perm { points } => {
                let mut seen = vec![false; *points];
                if v.len() != *points {
                    return Err(Error::Parse(format!("permutation must have {points} entries")));
                }
                for &i in v {
                    if i < 0 || i as usize >= *points || seen[i as usize] {
                        return Err(Error::Parse(format!("not a permutation: {v:?}")));
                    }
                    seen[i as usize] = true;
                }
                Ok(v.to_vec())
            }
            GroupSpec::Abelian { orders } => {
                if orders.iter().any(|&m| m < 1) {
                    return Err(Error::Parse("abelian factor orders must be positive".into()));
                }
                if v.len() != orders.len() {
                    return Err(Error::Parse(format!(
                        "abelian element must have {} entries",
                        orders.len()
                    )));
                }
                Ok(v.iter().zip(orders).map(|(a, m)| a.rem_euclid(*m)).collect())
            }
        }
    }
}

/// Enumerated subgroup generated by a set of elements; index 0 is the identity
/// and elements are sorted.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub spec: GroupSpec,
    pub elements: Vec<Elem>,
    index: HashMap<Elem, usize>,
}

impl FiniteGroup {
    pub fn generate(spec: &GroupSpec, gens: &[Elem], limits: &Limits) -> Result<FiniteGroup> {
        let id = spec.identity();
        let mut seen: HashMap<Elem, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = spec.mul(&x, g);
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), ());
                    limits.check_degree("group order", seen.len())?;
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Elem> = seen.into_keys().collect();
        elements.sort();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ok(FiniteGroup {
            spec: spec.clone(),
            elements,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index(&self, e: &Elem) -> usize {
        self.index[e]
    }

    pub fn mul_idx(&self, x: usize, y: usize) -> usize {
        self.index(&self.spec.mul(&self.elements[x], &self.elements[y]))
    }

    pub fn inv_idx(&self, x: usize) -> usize {
        self.index(&self.spec.inv(&self.elements[x]))
    }

    pub fn order_of(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul_idx(y, x);
            k += 1;
        }
        k
    }
}
