//! Local monodromy kernels at boundary strata of abelian and Looijenga
//! levels, the cut-pair smoothness predicate and boundary descriptors.

use serde::{Deserialize, Serialize};

use crate::arith::{hermite_normal_form, invariant_factors, Mat};
use crate::covers::{Cover, CoverSpec};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::surface::catalog::standard_multicurve;
use crate::surface::graph::{all_stable_graphs, EdgeKind, StableGraph};

/// Sublattice of `Z^{edges}` in Hermite form, with the invariants of the
/// quotient (`0` for a free summand, units dropped).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelLattice {
    pub edges: Vec<String>,
    pub generators: Mat<i64>,
    pub quotient: Vec<i128>,
}

impl KernelLattice {
    pub fn from_generators(edges: usize, gens: &[Vec<i64>]) -> KernelLattice {
        let generators = if gens.is_empty() {
            vec![]
        } else {
            hermite_normal_form(&gens.to_vec(), edges)
        };
        let d: Vec<i128> = if generators.is_empty() {
            vec![]
        } else {
            invariant_factors(&generators, edges).into_iter().filter(|&x| x != 0).collect()
        };
        let mut quotient = vec![0; edges - d.len()];
        quotient.extend(d.into_iter().filter(|&x| x != 1));
        quotient.sort_unstable_by_key(|&x| (x == 0, x));
        KernelLattice {
            edges: (0..edges).map(|e| format!("e{e}")).collect(),
            generators,
            quotient,
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Order of `E / kernel`, `None` when infinite.
    pub fn index(&self) -> Option<i128> {
        if self.quotient.contains(&0) {
            None
        } else {
            Some(self.quotient.iter().product())
        }
    }
}

fn unit(n: usize, e: usize, k: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[e] = k;
    v
}

/// `m·N + P + S`: multiples of non-bridges, cut-pair differences and bridges.
pub fn abelian_local_kernel(t: &StableGraph, m: i64) -> Result<KernelLattice> {
    if m < 2 {
        return Err(Error::Argument(format!("modulus must be at least 2, got {m}")));
    }
    t.validate()?;
    let ne = t.edges.len();
    let cls = t.edge_cut_classification();
    let mut gens = Vec::new();
    for (e, k) in cls.kinds.iter().enumerate() {
        gens.push(unit(ne, e, if *k == EdgeKind::Bridge { 1 } else { m }));
    }
    for [a, b] in &cls.cuts {
        let mut v = vec![0; ne];
        v[*a] = 1;
        v[*b] = -1;
        gens.push(v);
    }
    Ok(KernelLattice::from_generators(ne, &gens))
}

/// `Σ m·c_e·e` where `c_e` is the order of the deck image of curve `e`.
/// Requires the preimage of the standard multicurve of `t` to have no cut
/// pairs.
pub fn looijenga_local_kernel(t: &StableGraph, spec: &CoverSpec, m: i64, limits: &Limits) -> Result<KernelLattice> {
    if m < 2 {
        return Err(Error::Argument(format!("modulus must be at least 2, got {m}")));
    }
    t.validate()?;
    let cover = Cover::new(spec, limits)?;
    if (t.g, t.n) != (spec.base.g, spec.base.n) {
        return Err(Error::Argument("graph and cover have different bases".into()));
    }
    let ne = t.edges.len();
    if ne == 0 {
        return Ok(KernelLattice::from_generators(0, &[]));
    }
    let (_, cs) = standard_multicurve(t)?;
    let lift = cover.lift(&cs, m)?;
    if lift.has_cut_pair {
        return Err(Error::Precondition(format!("preimage of type {} contains a cut pair", describe(t))));
    }
    let gens: Vec<Vec<i64>> = (0..ne)
        .map(|e| unit(ne, e, m * lift.curves[e].cycle_length as i64))
        .collect();
    Ok(KernelLattice::from_generators(ne, &gens))
}

/// Per-type lift flags behind the smoothness predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeFlags {
    pub graph: StableGraph,
    pub has_cut_pair: bool,
    pub has_separating_component: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    /// No preimage of an admissible multicurve contains a cut pair.
    pub holds: bool,
    /// Neither cut pairs nor separating components anywhere.
    pub no_separating: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<StableGraph>,
    /// The cover ramifies over every puncture (vacuous for closed bases).
    pub ramified_over_punctures: bool,
    pub types: Vec<TypeFlags>,
}

/// Cut-pair freeness of the preimages of every admissible type.
pub fn smoothness_hypothesis(spec: &CoverSpec, limits: &Limits) -> Result<SmoothnessReport> {
    let cover = Cover::new(spec, limits)?;
    let (g, n) = (spec.base.g, spec.base.n);
    let ramified = cover.analysis().ramification.iter().all(|&r| r > 1);
    let mut types = Vec::new();
    for ts in all_stable_graphs(g, n)?.into_values() {
        for t in ts {
            let (cut, sep) = if t.edges.is_empty() {
                (false, false)
            } else {
                let (_, cs) = standard_multicurve(&t)?;
                let lift = cover.lift(&cs, 2)?;
                (lift.has_cut_pair, lift.has_separating_component)
            };
            types.push(TypeFlags {
                graph: t,
                has_cut_pair: cut,
                has_separating_component: sep,
            });
        }
    }
    let counterexample = types.iter().find(|f| f.has_cut_pair).map(|f| f.graph.clone());
    Ok(SmoothnessReport {
        holds: counterexample.is_none(),
        no_separating: types.iter().all(|f| !f.has_cut_pair && !f.has_separating_component),
        counterexample,
        ramified_over_punctures: ramified,
        types,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelKind {
    Abelian,
    Looijenga,
}

impl std::str::FromStr for LevelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abelian" => Ok(LevelKind::Abelian),
            "looijenga" => Ok(LevelKind::Looijenga),
            _ => Err(Error::Argument(format!("unknown level kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    Smooth,
    PossiblySingular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Embedding {
    Embedding,
    SelfIntersecting,
    /// Non-separating curve on genus `<= 2`: not classified.
    Undetermined,
    /// Only codimension-one strata carry an embedding verdict.
    NotApplicable,
}

/// Symbolic boundary level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum LevelDescriptor {
    Abelian { m: i64, g: usize, n: usize },
    Product { factors: Vec<LevelDescriptor> },
    /// The level `(m)_0` on `M̄_{g,n}`.
    LevelZero { m: i64, g: usize, n: usize },
    Looijenga { m: i64, g: usize, n: usize },
}

impl std::fmt::Display for LevelDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LevelDescriptor::Abelian { m, g, n } => write!(f, "M({m})_{{{g},{n}}}"),
            LevelDescriptor::LevelZero { m, g, n } => write!(f, "M({m})_0_{{{g},{n}}}"),
            LevelDescriptor::Looijenga { m, g, n } => write!(f, "M(K,{m})_{{{g},{n}}}"),
            LevelDescriptor::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub smoothness: Smoothness,
    pub embedding: Embedding,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<LevelDescriptor>,
}

fn describe(t: &StableGraph) -> String {
    let vs: Vec<String> = t
        .vertices
        .iter()
        .map(|v| format!("({},{:?})", v.genus, v.marks))
        .collect();
    format!("[{}; {:?}]", vs.join(" "), t.edges)
}

/// Smoothness, embedding and descriptor verdicts for the stratum of type `t`
/// in the abelian level of modulus `m`.
pub fn stratum_report(t: &StableGraph, m: i64, kind: LevelKind) -> Result<StratumReport> {
    if kind != LevelKind::Abelian {
        return Err(Error::Argument("stratum reports cover abelian levels only".into()));
    }
    if m < 2 {
        return Err(Error::Argument(format!("modulus must be at least 2, got {m}")));
    }
    t.validate()?;
    let cls = t.edge_cut_classification();
    let smoothness = if cls.cuts.is_empty() {
        Smoothness::Smooth
    } else {
        Smoothness::PossiblySingular
    };
    let (embedding, descriptor) = if t.edges.len() != 1 {
        (Embedding::NotApplicable, None)
    } else if cls.kinds[0] == EdgeKind::Bridge {
        let side = |v: usize| LevelDescriptor::Abelian {
            m,
            g: t.vertices[v].genus,
            n: t.vertices[v].marks.len() + 1,
        };
        (
            Embedding::Embedding,
            Some(LevelDescriptor::Product {
                factors: vec![side(0), side(1)],
            }),
        )
    } else {
        let e = if t.g > 2 {
            Embedding::SelfIntersecting
        } else {
            Embedding::Undetermined
        };
        (e, Some(LevelDescriptor::LevelZero { m, g: t.g - 1, n: t.n + 2 }))
    };
    Ok(StratumReport {
        smoothness,
        embedding,
        descriptor,
    })
}

#[cfg(test)]
mod tests;
